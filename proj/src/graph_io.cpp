#include "pathex/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "pathex/errors.hpp"

namespace pathex {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool skip_line(std::string_view line) {
  return line.empty() || line.front() == '#';
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

[[noreturn]] void fail(std::string_view file, std::size_t line_no, const std::string& what) {
  throw DataError(std::string(file) + " line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string format_features(std::span<const double> f) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ';';
    out += format_double(f[i]);
  }
  return out;
}

std::vector<double> parse_features(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (std::string_view tok : split(text, ';')) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw DataError("bad feature value '" + std::string(tok) + "'");
    }
    out.push_back(x);
  }
  return out;
}

HetGraph load_graph(std::istream& nodes, std::istream& edges) {
  HetGraph::Builder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(nodes, line)) {
    ++line_no;
    const std::string_view text = strip_cr(line);
    if (skip_line(text)) continue;
    const auto cols = split(text, '\t');
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty()) {
      fail("node file", line_no, "expected node_id<TAB>type[<TAB>features]");
    }
    try {
      builder.add_node(std::string(cols[0]), cols[1],
                       cols.size() == 3 ? parse_features(cols[2]) : std::vector<double>{});
    } catch (const DataError& e) {
      fail("node file", line_no, e.what());
    }
  }
  line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    const std::string_view text = strip_cr(line);
    if (skip_line(text)) continue;
    const auto cols = split(text, '\t');
    if (cols.size() != 3 || cols[2].empty()) {
      fail("edge file", line_no, "expected src_id<TAB>dst_id<TAB>edge_type");
    }
    try {
      builder.add_edge(cols[0], cols[1], cols[2]);
    } catch (const DataError& e) {
      fail("edge file", line_no, e.what());
    }
  }
  return std::move(builder).build();
}

HetGraph load_graph(const std::filesystem::path& node_file,
                    const std::filesystem::path& edge_file) {
  std::ifstream nodes(node_file);
  if (!nodes) throw DataError("cannot read node file " + node_file.string());
  std::ifstream edges(edge_file);
  if (!edges) throw DataError("cannot read edge file " + edge_file.string());
  return load_graph(nodes, edges);
}

void write_graph(const GraphView& g, std::ostream& nodes, std::ostream& edges) {
  const HetGraph& base = g.base();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    nodes << g.node_name(v) << '\t' << base.node_type_names()[g.node_type(v)];
    const auto f = g.features(v);
    if (!f.empty()) nodes << '\t' << format_features(f);
    nodes << '\n';
  }
  for (const Edge& e : g.edges()) {
    edges << g.node_name(e.src) << '\t' << g.node_name(e.dst) << '\t'
          << base.edge_type_names()[e.type] << '\n';
  }
}

}  // namespace pathex
