#pragma once

#include <cstdint>
#include <vector>

#include "pathex/model.hpp"
#include "pathex/walks.hpp"

namespace pathex {

/// Analytic model whose class scores are sums over walks into the target:
///
///   score_c(vt) = sum over walks W ending at vt with 1..max_edges edges and
///                 starting at a non-proxy node of
///                 prod_{nodes in W} alpha_c(type) * prod_{edges in W} beta_c(type)
///
/// and whose prediction is softmax(score). Proxies relay but do not
/// originate walks, so the scores depend only on the multiset of walks the
/// rewiring is meant to preserve.
class WalkSumModel final : public Model {
 public:
  /// Weights indexed [class][type].
  WalkSumModel(std::size_t max_edges, std::vector<std::vector<double>> node_weights,
               std::vector<std::vector<double>> edge_weights);

  /// Weights in (0, 1] derived from (class, type, seed) by hashing.
  static WalkSumModel seeded(std::size_t num_classes, std::size_t max_edges,
                             std::size_t num_node_types, std::size_t num_edge_types,
                             std::uint64_t seed);

  Prediction predict(const GraphView& g, NodeId target) const override;
  std::size_t receptive_depth() const override { return max_edges_; }
  std::size_t num_classes() const override { return node_weights_.size(); }
  std::size_t parameter_count() const override;

  /// Dynamic program over walk length.
  std::vector<double> class_scores(const GraphView& g, NodeId target) const;
  /// Brute force over enumerate_walks; must agree with class_scores.
  std::vector<double> class_scores_by_enumeration(const GraphView& g, NodeId target) const;
  /// Product of node and edge weights along w for class c.
  double walk_weight(const GraphView& g, const Walk& w, std::size_t c) const;

  std::size_t max_edges() const noexcept { return max_edges_; }

 private:
  double node_weight(std::size_t c, TypeId t) const;
  double edge_weight(std::size_t c, TypeId t) const;

  std::size_t max_edges_;
  std::vector<std::vector<double>> node_weights_;
  std::vector<std::vector<double>> edge_weights_;
};

}  // namespace pathex
