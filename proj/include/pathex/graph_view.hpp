#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathex/hetgraph.hpp"

namespace pathex {

/// An edge introduced by an overlay. Its type and features are copied from
/// the base edge `origin`.
struct AddedEdge {
  NodeId src{0};
  NodeId dst{0};
  EdgeId origin{0};
};

/// Read-only overlay on a HetGraph: extra proxy nodes, added edges and
/// removed base edges. A plain HetGraph converts to a view with empty deltas.
///
/// Proxy nodes get ids `base.num_nodes() + k` and copy the type and
/// features of their origin. Added edges get ids `base.num_edges() + k`.
/// Every added edge must be origin-consistent: mapping its endpoints to
/// their origins yields the endpoints of its origin edge.
///
/// The view does not own the base graph; the base must outlive it.
class GraphView {
 public:
  GraphView(const HetGraph& base);  // NOLINT(google-explicit-constructor)
  GraphView(const HetGraph& base, std::vector<NodeId> proxy_origins,
            std::vector<AddedEdge> added, std::vector<EdgeId> removed);

  const HetGraph& base() const noexcept { return *base_; }

  std::size_t num_nodes() const noexcept { return base_->num_nodes() + proxy_origins_.size(); }
  bool contains(NodeId v) const noexcept { return v < num_nodes(); }
  bool is_proxy(NodeId v) const noexcept { return v >= base_->num_nodes() && v < num_nodes(); }
  /// Origin of a proxy; identity for base nodes.
  NodeId origin(NodeId v) const;
  /// Proxy node created for `origin`, if any.
  std::optional<NodeId> proxy_of(NodeId origin) const;

  TypeId node_type(NodeId v) const { return base_->node_type(origin(v)); }
  std::span<const double> features(NodeId v) const { return base_->features(origin(v)); }
  /// Base nodes keep their id; proxies are named `origin_id#proxy`.
  std::string node_name(NodeId v) const;

  /// One past the largest edge id in the view (removed ids included).
  std::size_t edge_id_bound() const noexcept { return base_->num_edges() + added_.size(); }
  bool has_edge(EdgeId e) const noexcept;
  bool is_added(EdgeId e) const noexcept { return e >= base_->num_edges() && e < edge_id_bound(); }
  Edge edge(EdgeId e) const;
  /// Base edge an edge was copied from; identity for base edges.
  EdgeId edge_origin(EdgeId e) const;
  TypeId edge_type(EdgeId e) const { return base_->edge(edge_origin(e)).type; }
  std::span<const double> edge_features(EdgeId e) const {
    return base_->edge_features(edge_origin(e));
  }

  std::vector<Edge> in_edges(NodeId v) const;
  std::vector<Edge> out_edges(NodeId v) const;
  /// Every live edge, base edges first, in id order.
  std::vector<Edge> edges() const;
  std::size_t num_edges() const noexcept {
    return base_->num_edges() - removed_list_.size() + added_.size();
  }

  /// Calls f(const Edge&) for each live in-edge of v without allocating.
  template <typename F>
  void for_each_in_edge(NodeId v, F&& f) const {
    if (v < base_->num_nodes()) {
      for (EdgeId e : base_->in_edges(v)) {
        if (!removed_[e]) f(base_->edge(e));
      }
    }
    if (auto it = added_in_.find(v); it != added_in_.end()) {
      for (EdgeId e : it->second) f(added_edge(e));
    }
  }

  template <typename F>
  void for_each_out_edge(NodeId v, F&& f) const {
    if (v < base_->num_nodes()) {
      for (EdgeId e : base_->out_edges(v)) {
        if (!removed_[e]) f(base_->edge(e));
      }
    }
    if (auto it = added_out_.find(v); it != added_out_.end()) {
      for (EdgeId e : it->second) f(added_edge(e));
    }
  }

  const std::vector<NodeId>& proxy_origins() const noexcept { return proxy_origins_; }
  const std::vector<AddedEdge>& added_edges() const noexcept { return added_; }
  /// Removed base edge ids, ascending.
  const std::vector<EdgeId>& removed_edges() const noexcept { return removed_list_; }
  bool is_plain() const noexcept {
    return proxy_origins_.empty() && added_.empty() && removed_list_.empty();
  }

 private:
  Edge added_edge(EdgeId e) const;
  void check_node(NodeId v) const;

  const HetGraph* base_;
  std::vector<NodeId> proxy_origins_;
  std::unordered_map<NodeId, NodeId> proxy_index_;
  std::vector<AddedEdge> added_;
  std::vector<bool> removed_;
  std::vector<EdgeId> removed_list_;
  std::unordered_map<NodeId, std::vector<EdgeId>> added_in_;
  std::unordered_map<NodeId, std::vector<EdgeId>> added_out_;
};

}  // namespace pathex
