#include "pathex/graph_view.hpp"

#include <algorithm>

#include "pathex/errors.hpp"

namespace pathex {

GraphView::GraphView(const HetGraph& base)
    : base_(&base), removed_(base.num_edges(), false) {}

GraphView::GraphView(const HetGraph& base, std::vector<NodeId> proxy_origins,
                     std::vector<AddedEdge> added, std::vector<EdgeId> removed)
    : base_(&base),
      proxy_origins_(std::move(proxy_origins)),
      added_(std::move(added)),
      removed_(base.num_edges(), false) {
  const auto n = static_cast<NodeId>(base.num_nodes());
  for (std::size_t k = 0; k < proxy_origins_.size(); ++k) {
    const NodeId o = proxy_origins_[k];
    if (o >= n) throw DataError("proxy origin is not a base node");
    if (!proxy_index_.try_emplace(o, n + static_cast<NodeId>(k)).second) {
      throw DataError("node '" + base.node_name(o) + "' has more than one proxy");
    }
  }
  for (EdgeId e : removed) {
    if (e >= base.num_edges()) throw DataError("removed edge is not a base edge");
    if (!removed_[e]) removed_list_.push_back(e);
    removed_[e] = true;
  }
  std::sort(removed_list_.begin(), removed_list_.end());
  const auto first_added = static_cast<EdgeId>(base.num_edges());
  for (std::size_t k = 0; k < added_.size(); ++k) {
    const AddedEdge& a = added_[k];
    check_node(a.src);
    check_node(a.dst);
    const Edge& o = base.edge(a.origin);
    if (origin(a.src) != o.src || origin(a.dst) != o.dst) {
      throw DataError("added edge is not consistent with its origin edge");
    }
    const EdgeId id = first_added + static_cast<EdgeId>(k);
    added_out_[a.src].push_back(id);
    added_in_[a.dst].push_back(id);
  }
}

void GraphView::check_node(NodeId v) const {
  if (!contains(v)) throw DataError("unknown node index " + std::to_string(v));
}

NodeId GraphView::origin(NodeId v) const {
  check_node(v);
  return v < base_->num_nodes() ? v : proxy_origins_[v - base_->num_nodes()];
}

std::optional<NodeId> GraphView::proxy_of(NodeId origin) const {
  if (auto it = proxy_index_.find(origin); it != proxy_index_.end()) return it->second;
  return std::nullopt;
}

std::string GraphView::node_name(NodeId v) const {
  const std::string& name = base_->node_name(origin(v));
  return is_proxy(v) ? name + "#proxy" : name;
}

bool GraphView::has_edge(EdgeId e) const noexcept {
  if (e < base_->num_edges()) return !removed_[e];
  return e < edge_id_bound();
}

Edge GraphView::added_edge(EdgeId e) const {
  const AddedEdge& a = added_[e - base_->num_edges()];
  return Edge{e, a.src, a.dst, base_->edge(a.origin).type};
}

Edge GraphView::edge(EdgeId e) const {
  if (!has_edge(e)) throw DataError("edge " + std::to_string(e) + " is not in the view");
  return e < base_->num_edges() ? base_->edge(e) : added_edge(e);
}

EdgeId GraphView::edge_origin(EdgeId e) const {
  if (e < base_->num_edges()) return e;
  if (e >= edge_id_bound()) throw DataError("unknown edge index " + std::to_string(e));
  return added_[e - base_->num_edges()].origin;
}

std::vector<Edge> GraphView::in_edges(NodeId v) const {
  check_node(v);
  std::vector<Edge> out;
  for_each_in_edge(v, [&](const Edge& e) { out.push_back(e); });
  return out;
}

std::vector<Edge> GraphView::out_edges(NodeId v) const {
  check_node(v);
  std::vector<Edge> out;
  for_each_out_edge(v, [&](const Edge& e) { out.push_back(e); });
  return out;
}

std::vector<Edge> GraphView::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (const Edge& e : base_->edges()) {
    if (!removed_[e.id]) out.push_back(e);
  }
  for (std::size_t k = 0; k < added_.size(); ++k) {
    out.push_back(added_edge(static_cast<EdgeId>(base_->num_edges() + k)));
  }
  return out;
}

}  // namespace pathex
