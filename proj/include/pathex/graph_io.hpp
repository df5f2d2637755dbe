#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pathex/graph_view.hpp"
#include "pathex/hetgraph.hpp"

namespace pathex {

/// Reads the tab-separated node and edge tables.
///
///   node file: node_id <TAB> type_name [<TAB> f1;f2;...;fd]
///   edge file: src_id <TAB> dst_id <TAB> edge_type_name
///
/// Blank lines and lines starting with '#' are skipped. Errors carry the
/// line number.
HetGraph load_graph(std::istream& nodes, std::istream& edges);
HetGraph load_graph(const std::filesystem::path& node_file,
                    const std::filesystem::path& edge_file);

/// Writes a view in the same formats. Proxy nodes appear as
/// `origin_id#proxy`; removed edges are omitted.
void write_graph(const GraphView& g, std::ostream& nodes, std::ostream& edges);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);
std::string format_features(std::span<const double> f);
std::vector<double> parse_features(std::string_view text);

}  // namespace pathex
