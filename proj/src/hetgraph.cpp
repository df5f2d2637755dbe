#include "pathex/hetgraph.hpp"

#include <algorithm>

#include "pathex/errors.hpp"

namespace pathex {

namespace {

void check_node(const HetGraph& g, NodeId v) {
  if (v >= g.num_nodes()) {
    throw DataError("unknown node index " + std::to_string(v));
  }
}

}  // namespace

const std::string& HetGraph::node_name(NodeId v) const {
  check_node(*this, v);
  return node_names_[v];
}

std::optional<NodeId> HetGraph::find_node(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId HetGraph::node(std::string_view name) const {
  if (auto v = find_node(name)) return *v;
  throw DataError("unknown node id '" + std::string(name) + "'");
}

TypeId HetGraph::node_type(NodeId v) const {
  check_node(*this, v);
  return node_types_[v];
}

std::span<const double> HetGraph::features(NodeId v) const {
  check_node(*this, v);
  return node_features_[v];
}

const Edge& HetGraph::edge(EdgeId e) const {
  if (e >= edges_.size()) throw DataError("unknown edge index " + std::to_string(e));
  return edges_[e];
}

std::span<const double> HetGraph::edge_features(EdgeId e) const {
  if (e >= edges_.size()) throw DataError("unknown edge index " + std::to_string(e));
  return edge_features_[e];
}

std::span<const EdgeId> HetGraph::in_edges(NodeId v) const {
  check_node(*this, v);
  return in_adj_[v];
}

std::span<const EdgeId> HetGraph::out_edges(NodeId v) const {
  check_node(*this, v);
  return out_adj_[v];
}

std::size_t HetGraph::feature_dim(TypeId t) const {
  if (t >= type_dims_.size()) throw DataError("unknown node type " + std::to_string(t));
  return type_dims_[t];
}

std::size_t HetGraph::max_degree() const noexcept {
  std::size_t d = 0;
  for (std::size_t v = 0; v < num_nodes(); ++v) {
    d = std::max(d, in_adj_[v].size() + out_adj_[v].size());
  }
  return d;
}

TypeId HetGraph::Builder::node_type(std::string_view name) {
  auto [it, inserted] = node_type_index_.try_emplace(
      std::string(name), static_cast<TypeId>(graph_.node_type_names_.size()));
  if (inserted) graph_.node_type_names_.emplace_back(name);
  return it->second;
}

TypeId HetGraph::Builder::edge_type(std::string_view name) {
  auto [it, inserted] = edge_type_index_.try_emplace(
      std::string(name), static_cast<TypeId>(graph_.edge_type_names_.size()));
  if (inserted) graph_.edge_type_names_.emplace_back(name);
  return it->second;
}

NodeId HetGraph::Builder::add_node(std::string name, std::string_view type,
                                   std::vector<double> features) {
  if (name.empty()) throw DataError("empty node id");
  const auto id = static_cast<NodeId>(graph_.node_names_.size());
  if (!graph_.index_.try_emplace(name, id).second) {
    throw DataError("duplicate node id '" + name + "'");
  }
  graph_.node_names_.push_back(std::move(name));
  graph_.node_types_.push_back(node_type(type));
  graph_.node_features_.push_back(std::move(features));
  graph_.in_adj_.emplace_back();
  graph_.out_adj_.emplace_back();
  return id;
}

EdgeId HetGraph::Builder::add_edge(std::string_view src, std::string_view dst,
                                   std::string_view type, std::vector<double> features) {
  auto s = graph_.find_node(src);
  auto d = graph_.find_node(dst);
  if (!s || !d) {
    throw DataError("unknown endpoint in edge " + std::string(src) + " -> " + std::string(dst));
  }
  return add_edge(*s, *d, edge_type(type), std::move(features));
}

EdgeId HetGraph::Builder::add_edge(NodeId src, NodeId dst, TypeId type,
                                   std::vector<double> features) {
  if (src >= num_nodes() || dst >= num_nodes()) {
    throw DataError("unknown endpoint in edge " + std::to_string(src) + " -> " +
                    std::to_string(dst));
  }
  if (type >= graph_.edge_type_names_.size()) {
    throw DataError("unknown edge type " + std::to_string(type));
  }
  for (EdgeId e : graph_.out_adj_[src]) {
    const Edge& other = graph_.edges_[e];
    if (other.dst == dst && other.type == type) {
      throw DataError("duplicate edge " + graph_.node_names_[src] + " -> " +
                      graph_.node_names_[dst] + " of type '" + graph_.edge_type_names_[type] +
                      "'");
    }
  }
  const auto id = static_cast<EdgeId>(graph_.edges_.size());
  graph_.edges_.push_back(Edge{id, src, dst, type});
  graph_.edge_features_.push_back(std::move(features));
  graph_.out_adj_[src].push_back(id);
  graph_.in_adj_[dst].push_back(id);
  return id;
}

HetGraph HetGraph::Builder::build() && {
  const std::size_t num_types = graph_.node_type_names_.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dims(num_types, kUnset);
  std::vector<bool> any_given(num_types, false);
  for (std::size_t v = 0; v < graph_.num_nodes(); ++v) {
    if (!graph_.node_features_[v].empty()) any_given[graph_.node_types_[v]] = true;
  }
  for (std::size_t v = 0; v < graph_.num_nodes(); ++v) {
    const TypeId t = graph_.node_types_[v];
    auto& f = graph_.node_features_[v];
    if (!any_given[t]) {
      f.assign(num_types, 0.0);
      f[t] = 1.0;
    }
    if (dims[t] == kUnset) {
      dims[t] = f.size();
    } else if (dims[t] != f.size()) {
      throw DataError("feature dimension mismatch for node '" + graph_.node_names_[v] +
                      "' of type '" + graph_.node_type_names_[t] + "': expected " +
                      std::to_string(dims[t]) + ", got " + std::to_string(f.size()));
    }
  }
  for (auto& d : dims) {
    if (d == kUnset) d = 0;
  }
  graph_.type_dims_ = std::move(dims);
  return std::move(graph_);
}

}  // namespace pathex
