#include "pathex/rewiring.hpp"

#include <unordered_map>
#include <unordered_set>

namespace pathex {

GraphView rewire(const HetGraph& g, const SimplePath& p, RewireRule rule) {
  validate_path(g, p);
  const bool standard = rule != RewireRule::kBoundaryUnaware;
  const std::size_t hops = p.num_edges();
  const std::size_t interior = hops - 1;
  const NodeId cause = p.start();
  const NodeId target = p.target();

  std::unordered_map<NodeId, std::size_t> pos;
  for (std::size_t k = 0; k < p.nodes.size(); ++k) pos[p.nodes[k]] = k;
  const std::unordered_set<EdgeId> path_edges(p.edges.begin(), p.edges.end());
  // P contains a hop a -> b.
  auto has_hop = [&](NodeId a, NodeId b) {
    auto pa = pos.find(a);
    auto pb = pos.find(b);
    return pa != pos.end() && pb != pos.end() && pa->second + 1 == pb->second;
  };

  const bool terminal_proxy = standard && !g.out_edges(target).empty();
  std::vector<NodeId> proxy_origins(p.nodes.begin() + 1, p.nodes.end() - 1);
  if (terminal_proxy) proxy_origins.push_back(target);

  const auto n = static_cast<NodeId>(g.num_nodes());
  std::unordered_map<NodeId, NodeId> proxy;
  for (std::size_t k = 0; k < proxy_origins.size(); ++k) {
    proxy[proxy_origins[k]] = n + static_cast<NodeId>(k);
  }
  auto lane = [&](NodeId u) {
    const bool on_lane = pos.contains(u) && u != cause && u != target;
    return on_lane ? proxy.at(u) : u;
  };

  std::vector<AddedEdge> added;
  for (std::size_t i = 1; i <= interior; ++i) {
    const NodeId vi = p.nodes[i];
    for (EdgeId id : g.in_edges(vi)) {
      const Edge& e = g.edge(id);
      const NodeId u = e.src;
      if (u == vi || path_edges.contains(id) || has_hop(vi, u)) {
        if (standard && u == target) continue;
        added.push_back({lane(u), lane(vi), id});
      }
    }
    for (EdgeId id : g.out_edges(vi)) {
      const Edge& e = g.edge(id);
      const NodeId u = e.dst;
      if (u != vi && !path_edges.contains(id) && !has_hop(u, vi)) {
        added.push_back({lane(vi), u, id});
      } else if (standard && i == 1 && u == cause && has_hop(u, vi)) {
        added.push_back({lane(vi), cause, id});
      }
    }
  }
  if (terminal_proxy) {
    const NodeId tp = proxy.at(target);
    added.push_back({lane(p.nodes[hops - 1]), tp, p.edges.back()});
    for (EdgeId id : g.out_edges(target)) added.push_back({tp, g.edge(id).dst, id});
  }

  std::vector<EdgeId> removed;
  if (rule != RewireRule::kKeepFirstEdge) removed.push_back(p.edges.front());
  return GraphView(g, std::move(proxy_origins), std::move(added), std::move(removed));
}

}  // namespace pathex
