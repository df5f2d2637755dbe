#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pathex {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using TypeId = std::uint32_t;

struct Edge {
  EdgeId id{0};
  NodeId src{0};
  NodeId dst{0};
  TypeId type{0};

  bool is_self_loop() const noexcept { return src == dst; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable typed directed multigraph with per-node feature vectors.
///
/// Nodes and edges are addressed by dense indices assigned in insertion
/// order; the external string id of a node is kept as its name. Parallel
/// edges between the same pair are allowed as long as their edge types
/// differ. Construct through HetGraph::Builder.
class HetGraph {
 public:
  class Builder;

  HetGraph() = default;

  std::size_t num_nodes() const noexcept { return node_names_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::string& node_name(NodeId v) const;
  std::optional<NodeId> find_node(std::string_view name) const;
  /// Like find_node but throws DataError for unknown ids.
  NodeId node(std::string_view name) const;

  TypeId node_type(NodeId v) const;
  std::span<const double> features(NodeId v) const;

  const Edge& edge(EdgeId e) const;
  /// Empty when the edge carries no feature vector.
  std::span<const double> edge_features(EdgeId e) const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const EdgeId> in_edges(NodeId v) const;
  std::span<const EdgeId> out_edges(NodeId v) const;

  const std::vector<std::string>& node_type_names() const noexcept { return node_type_names_; }
  const std::vector<std::string>& edge_type_names() const noexcept { return edge_type_names_; }
  std::size_t num_node_types() const noexcept { return node_type_names_.size(); }
  std::size_t num_edge_types() const noexcept { return edge_type_names_.size(); }

  /// Feature dimension shared by all nodes of type t.
  std::size_t feature_dim(TypeId t) const;

  /// |T| + |S| > 2. Graphs failing this still work; callers may warn.
  bool is_heterogeneous() const noexcept { return num_node_types() + num_edge_types() > 2; }

  std::size_t max_degree() const noexcept;

 private:
  std::vector<std::string> node_names_;
  std::vector<TypeId> node_types_;
  std::vector<std::vector<double>> node_features_;
  std::vector<Edge> edges_;
  std::vector<std::vector<double>> edge_features_;
  std::vector<std::vector<EdgeId>> in_adj_;
  std::vector<std::vector<EdgeId>> out_adj_;
  std::vector<std::string> node_type_names_;
  std::vector<std::string> edge_type_names_;
  std::vector<std::size_t> type_dims_;
  std::unordered_map<std::string, NodeId> index_;
};

class HetGraph::Builder {
 public:
  /// Interns a type name; repeated names return the same id.
  TypeId node_type(std::string_view name);
  TypeId edge_type(std::string_view name);

  /// Throws DataError on a duplicate id. An empty feature vector means
  /// "not provided"; if no node of a type provides features the whole type
  /// gets a one-hot encoding of its type id.
  NodeId add_node(std::string name, std::string_view type, std::vector<double> features = {});

  /// Throws DataError for unknown endpoints or a duplicate (src, dst, type).
  EdgeId add_edge(std::string_view src, std::string_view dst, std::string_view type,
                  std::vector<double> features = {});
  EdgeId add_edge(NodeId src, NodeId dst, TypeId type, std::vector<double> features = {});

  std::size_t num_nodes() const noexcept { return graph_.node_names_.size(); }

  /// Validates per-type feature dimensions and freezes the graph.
  HetGraph build() &&;

 private:
  HetGraph graph_;
  std::unordered_map<std::string, TypeId> node_type_index_;
  std::unordered_map<std::string, TypeId> edge_type_index_;
};

}  // namespace pathex
