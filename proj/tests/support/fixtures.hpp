#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pathex/graph_io.hpp"
#include "pathex/walks.hpp"

namespace pathex::test {

// D -> C -> B -> A with the loop C <-> B, the shortcut C -> A and E -> B.
// Every node has its own type.
inline HetGraph loop_graph() {
  std::istringstream nodes("A\ta\nB\tb\nC\tc\nD\td\nE\te\n");
  std::istringstream edges("D\tC\tx\nC\tB\tx\nB\tC\tx\nB\tA\tx\nC\tA\tx\nE\tB\tx\n");
  return load_graph(nodes, edges);
}

inline HetGraph graph_from_text(const std::string& nodes, const std::string& edges) {
  std::istringstream n(nodes);
  std::istringstream e(edges);
  return load_graph(n, e);
}

inline SimplePath path(const HetGraph& g, std::vector<std::string> names) {
  return path_from_names(g, names);
}

// Walk through the named nodes, taking the lowest-id edge for each hop.
inline Walk walk_through(const HetGraph& g, const std::vector<std::string>& nodes) {
  Walk w;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    w.nodes.push_back(g.node(nodes[i]));
    if (i == 0) continue;
    for (EdgeId e : g.out_edges(w.nodes[i - 1])) {
      if (g.edge(e).dst == w.nodes[i]) {
        w.edges.push_back(e);
        break;
      }
    }
  }
  validate_walk(g, w);
  return w;
}

// "D,C,B,A" with proxies as "C#proxy".
inline std::string names(const Walk& w, const GraphView& g) {
  std::string out;
  for (NodeId v : w.nodes) {
    if (!out.empty()) out += ',';
    out += g.node_name(v);
  }
  return out;
}

inline std::string names(const SimplePath& p, const GraphView& g) { return names(p.as_walk(), g); }

}  // namespace pathex::test
