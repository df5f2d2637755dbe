#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pathex/explain.hpp"
#include "pathex/model.hpp"
#include "pathex/walks.hpp"

namespace pathex {

/// One evaluated prediction: its target, the explanation paths (all ending
/// at the target, best first) and optionally the ground-truth label.
struct FidelitySample {
  NodeId target{0};
  std::vector<SimplePath> paths;
  std::optional<std::size_t> label;
};

struct FidelityRecord {
  NodeId target{0};
  std::size_t base_label{0};
  std::size_t induced_label{0};
  double prob_drop{0.0};
};

struct FidelityReport {
  double f_acc{0.0};
  double f_prob{0.0};
  std::vector<FidelityRecord> records;
  /// Samples dropped because the model mispredicted them.
  std::size_t excluded{0};
};

struct FidelityOptions {
  /// Drop samples whose label is known and differs from the base prediction.
  bool require_correct{true};
  /// Maximum number of nodes in the induced graph; 0 disables the cap.
  std::size_t sparsity{5};
};

/// Subgraph with exactly the nodes and edges of `paths` plus the target,
/// keeping original ids, types and features.
HetGraph induce_explanation_graph(const HetGraph& g, std::span<const SimplePath> paths,
                                  NodeId target);

/// The same subgraph expressed over g: every edge not on a path is removed,
/// nodes off the paths are left isolated. Models that pass messages only
/// along edges predict identically on both forms.
GraphView explanation_view(const HetGraph& g, std::span<const SimplePath> paths, NodeId target);

/// Takes paths in order while the union of their nodes (plus the target)
/// stays within max_nodes; stops at the first path that would exceed it.
std::vector<SimplePath> limit_sparsity(std::span<const SimplePath> ranked, NodeId target,
                                       std::size_t max_nodes);

/// Accuracy fidelity mean(1 - [y == y~]) and probability fidelity
/// mean(M_G(vt)[y] - M_G~(vt)[y]). Throws DataError if no sample remains.
FidelityReport evaluate_fidelity(const Model& model, const HetGraph& g,
                                 std::span<const FidelitySample> samples,
                                 const FidelityOptions& options = {});

struct BottomK {
  std::vector<SimplePath> paths;
  /// Fewer than k candidates were available.
  bool underfilled{false};
};

/// The k lowest-scoring distinct paths scored during a search, lowest first.
BottomK bottom_k_paths(const SearchTrace& trace, std::size_t k);

}  // namespace pathex
