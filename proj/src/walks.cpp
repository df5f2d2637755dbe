#include "pathex/walks.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "pathex/errors.hpp"

namespace pathex {

namespace {

template <typename Seq>
void validate_sequence(const GraphView& g, const Seq& s, const char* what) {
  if (s.nodes.size() < 2 || s.edges.size() + 1 != s.nodes.size()) {
    throw DataError(std::string(what) + " needs at least one edge and |nodes| = |edges| + 1");
  }
  for (NodeId v : s.nodes) {
    if (!g.contains(v)) throw DataError(std::string(what) + " references an unknown node");
  }
  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    if (!g.has_edge(s.edges[i])) {
      throw DataError(std::string(what) + " uses an edge that is not in the graph");
    }
    const Edge e = g.edge(s.edges[i]);
    if (e.src != s.nodes[i] || e.dst != s.nodes[i + 1]) {
      throw DataError(std::string(what) + " edge " + std::to_string(i) +
                      " does not connect consecutive nodes");
    }
  }
}

void append_raw(std::string& out, const void* data, std::size_t n) {
  out.append(static_cast<const char*>(data), n);
}

void append_entity(std::string& out, TypeId type, std::span<const double> f) {
  const auto dim = static_cast<std::uint32_t>(f.size());
  append_raw(out, &type, sizeof(type));
  append_raw(out, &dim, sizeof(dim));
  append_raw(out, f.data(), f.size() * sizeof(double));
}

}  // namespace

void validate_walk(const GraphView& g, const Walk& w) { validate_sequence(g, w, "walk"); }

void validate_path(const GraphView& g, const SimplePath& p) {
  validate_sequence(g, p, "path");
  std::unordered_set<NodeId> seen;
  for (NodeId v : p.nodes) {
    if (!seen.insert(v).second) {
      throw DataError("path repeats node '" + g.node_name(v) + "'");
    }
  }
}

SimplePath path_from_names(const HetGraph& g, const std::vector<std::string>& names) {
  SimplePath p;
  for (const auto& name : names) p.nodes.push_back(g.node(name));
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    bool found = false;
    for (EdgeId e : g.out_edges(p.nodes[i])) {
      if (g.edge(e).dst == p.nodes[i + 1]) {
        p.edges.push_back(e);
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError("no edge " + names[i] + " -> " + names[i + 1]);
    }
  }
  validate_path(g, p);
  return p;
}

WalkEnumeration enumerate_walks(const GraphView& g, NodeId target, std::size_t max_edges,
                                std::size_t limit) {
  if (!g.contains(target)) throw DataError("unknown target node");
  WalkEnumeration result;
  if (max_edges == 0) return result;

  // Backward DFS; `rev_nodes` holds the walk from the target backwards.
  std::vector<NodeId> rev_nodes{target};
  std::vector<EdgeId> rev_edges;
  struct Frame {
    std::vector<Edge> in;
    std::size_t next{0};
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{g.in_edges(target)});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.in.size()) {
      stack.pop_back();
      rev_nodes.pop_back();
      if (!rev_edges.empty()) rev_edges.pop_back();
      continue;
    }
    const Edge e = top.in[top.next++];
    rev_nodes.push_back(e.src);
    rev_edges.push_back(e.id);
    if (result.walks.size() == limit) {
      result.truncated = true;
      return result;
    }
    result.walks.push_back(Walk{{rev_nodes.rbegin(), rev_nodes.rend()},
                                {rev_edges.rbegin(), rev_edges.rend()}});
    if (rev_edges.size() < max_edges) {
      stack.push_back(Frame{g.in_edges(e.src)});
    } else {
      rev_nodes.pop_back();
      rev_edges.pop_back();
    }
  }
  return result;
}

SimplePath erase_loops(const Walk& w) {
  SimplePath p;
  if (w.nodes.empty()) return p;
  std::unordered_map<NodeId, std::size_t> position;
  p.nodes.push_back(w.nodes[0]);
  position[w.nodes[0]] = 0;
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const NodeId next = w.nodes[i + 1];
    if (auto it = position.find(next); it != position.end()) {
      const std::size_t keep = it->second;
      for (std::size_t k = keep + 1; k < p.nodes.size(); ++k) position.erase(p.nodes[k]);
      p.nodes.resize(keep + 1);
      p.edges.resize(keep);
    } else {
      position[next] = p.nodes.size();
      p.nodes.push_back(next);
      p.edges.push_back(w.edges[i]);
    }
  }
  return p;
}

bool is_associated(const Walk& w, const SimplePath& p) {
  if (w.nodes.size() < 2 || p.nodes.size() < 2) return false;
  const NodeId start = p.start();
  const NodeId target = p.target();
  const std::size_t last = w.nodes.size() - 1;
  if (w.nodes[last] != target) return false;

  std::unordered_map<NodeId, std::size_t> pos;
  for (std::size_t k = 0; k < p.nodes.size(); ++k) pos[p.nodes[k]] = k;
  const std::unordered_set<EdgeId> path_edges(p.edges.begin(), p.edges.end());

  // Step i moves along one of p's edges, against one of p's hops, or is a
  // self-loop.
  auto step_ok = [&](std::size_t i) {
    const NodeId a = w.nodes[i];
    const NodeId b = w.nodes[i + 1];
    if (a == b) return true;
    if (path_edges.contains(w.edges[i])) return true;
    auto pa = pos.find(a);
    auto pb = pos.find(b);
    return pa != pos.end() && pb != pos.end() && pb->second + 1 == pa->second;
  };

  // Scanning l downwards, `clean` tracks whether all steps from l on are
  // admissible and no node before the last equals the target.
  bool clean = true;
  for (std::size_t l = last; l-- > 0;) {
    clean = clean && w.nodes[l] != target && step_ok(l);
    if (!clean) return false;
    if (w.nodes[l] != start) continue;
    Walk suffix{{w.nodes.begin() + static_cast<std::ptrdiff_t>(l), w.nodes.end()},
                {w.edges.begin() + static_cast<std::ptrdiff_t>(l), w.edges.end()}};
    const SimplePath erased = erase_loops(suffix);
    if (erased == p) return true;
  }
  return false;
}

std::vector<Walk> associated_walks(const GraphView& g, const SimplePath& p,
                                   std::size_t max_edges) {
  validate_path(g, p);
  std::vector<Walk> out;
  auto all = enumerate_walks(g, p.target(), max_edges);
  for (auto& w : all.walks) {
    if (is_associated(w, p)) out.push_back(std::move(w));
  }
  return out;
}

bool walks_equivalent(const Walk& a, const GraphView& ga, const Walk& b, const GraphView& gb) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    if (ga.node_type(a.nodes[i]) != gb.node_type(b.nodes[i])) return false;
    if (!std::ranges::equal(ga.features(a.nodes[i]), gb.features(b.nodes[i]))) return false;
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    if (ga.edge_type(a.edges[i]) != gb.edge_type(b.edges[i])) return false;
    if (!std::ranges::equal(ga.edge_features(a.edges[i]), gb.edge_features(b.edges[i]))) {
      return false;
    }
  }
  return true;
}

std::string walk_signature(const Walk& w, const GraphView& g) {
  std::string out;
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    append_entity(out, g.node_type(w.nodes[i]), g.features(w.nodes[i]));
    if (i < w.edges.size()) {
      append_entity(out, g.edge_type(w.edges[i]), g.edge_features(w.edges[i]));
    }
  }
  return out;
}

std::string to_string(const Walk& w, const GraphView& g) {
  std::string out;
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    out += g.node_name(w.nodes[i]);
    if (i < w.edges.size()) out += " -e" + std::to_string(w.edges[i]) + "-> ";
  }
  return out;
}

std::string to_string(const SimplePath& p, const GraphView& g) {
  return to_string(p.as_walk(), g);
}

}  // namespace pathex
