#include "pathex/walk_sum_model.hpp"

#include "pathex/errors.hpp"

namespace pathex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1].
double hashed_weight(std::uint64_t seed, std::uint64_t tag, std::uint64_t c, std::uint64_t t) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ tag);
  h = splitmix64(h ^ c);
  h = splitmix64(h ^ t);
  return 1.0 - static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

WalkSumModel::WalkSumModel(std::size_t max_edges, std::vector<std::vector<double>> node_weights,
                           std::vector<std::vector<double>> edge_weights)
    : max_edges_(max_edges),
      node_weights_(std::move(node_weights)),
      edge_weights_(std::move(edge_weights)) {
  if (max_edges_ == 0) throw ConfigError("walk-sum model needs max_edges >= 1");
  if (node_weights_.empty() || node_weights_.size() != edge_weights_.size()) {
    throw ConfigError("walk-sum weights must cover the same non-zero number of classes");
  }
}

WalkSumModel WalkSumModel::seeded(std::size_t num_classes, std::size_t max_edges,
                                  std::size_t num_node_types, std::size_t num_edge_types,
                                  std::uint64_t seed) {
  std::vector<std::vector<double>> alpha(num_classes, std::vector<double>(num_node_types));
  std::vector<std::vector<double>> beta(num_classes, std::vector<double>(num_edge_types));
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t t = 0; t < num_node_types; ++t) alpha[c][t] = hashed_weight(seed, 1, c, t);
    for (std::size_t t = 0; t < num_edge_types; ++t) beta[c][t] = hashed_weight(seed, 2, c, t);
  }
  return WalkSumModel(max_edges, std::move(alpha), std::move(beta));
}

std::size_t WalkSumModel::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < num_classes(); ++c) {
    n += node_weights_[c].size() + edge_weights_[c].size();
  }
  return n;
}

double WalkSumModel::node_weight(std::size_t c, TypeId t) const {
  if (t >= node_weights_[c].size()) throw DataError("walk-sum model has no weight for node type");
  return node_weights_[c][t];
}

double WalkSumModel::edge_weight(std::size_t c, TypeId t) const {
  if (t >= edge_weights_[c].size()) throw DataError("walk-sum model has no weight for edge type");
  return edge_weights_[c][t];
}

std::vector<double> WalkSumModel::class_scores(const GraphView& g, NodeId target) const {
  if (!g.contains(target)) throw DataError("unknown target node");
  const std::size_t n = g.num_nodes();
  std::vector<double> scores(num_classes(), 0.0);
  for (std::size_t c = 0; c < num_classes(); ++c) {
    // weight[v] = total weight of walks with k edges that end at v.
    std::vector<double> weight(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      if (!g.is_proxy(v)) weight[v] = node_weight(c, g.node_type(v));
    }
    for (std::size_t k = 1; k <= max_edges_; ++k) {
      std::vector<double> next(n, 0.0);
      for (NodeId v = 0; v < n; ++v) {
        double sum = 0.0;
        g.for_each_in_edge(v, [&](const Edge& e) {
          sum += weight[e.src] * edge_weight(c, e.type);
        });
        next[v] = sum * node_weight(c, g.node_type(v));
      }
      weight = std::move(next);
      scores[c] += weight[target];
    }
  }
  return scores;
}

double WalkSumModel::walk_weight(const GraphView& g, const Walk& w, std::size_t c) const {
  double prod = 1.0;
  for (NodeId v : w.nodes) prod *= node_weight(c, g.node_type(v));
  for (EdgeId e : w.edges) prod *= edge_weight(c, g.edge_type(e));
  return prod;
}

std::vector<double> WalkSumModel::class_scores_by_enumeration(const GraphView& g,
                                                              NodeId target) const {
  const auto all = enumerate_walks(g, target, max_edges_);
  if (all.truncated) throw DataError("walk enumeration truncated");
  std::vector<double> scores(num_classes(), 0.0);
  for (const Walk& w : all.walks) {
    if (g.is_proxy(w.nodes.front())) continue;
    for (std::size_t c = 0; c < num_classes(); ++c) scores[c] += walk_weight(g, w, c);
  }
  return scores;
}

Prediction WalkSumModel::predict(const GraphView& g, NodeId target) const {
  return Prediction{softmax(class_scores(g, target))};
}

}  // namespace pathex
