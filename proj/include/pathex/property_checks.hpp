#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pathex/rewiring.hpp"
#include "pathex/walks.hpp"

namespace pathex {

struct RandomGraphOptions {
  std::size_t max_nodes{12};
  std::size_t max_edges{30};
  std::size_t min_node_types{2};
  std::size_t max_node_types{4};
  std::size_t max_edge_types{3};
  /// Every node gets a distinct continuous feature vector of this size, so
  /// two walks are equivalent only if they visit the same original nodes.
  std::size_t feature_dim{2};
  bool self_loops{true};
};

/// Random heterogeneous graph with at least two nodes and one edge between
/// distinct nodes.
HetGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& options = {});

/// All simple paths into `target` with 1..max_edges edges, shortest first,
/// then by node and edge sequence.
std::vector<SimplePath> simple_paths_to(const HetGraph& g, NodeId target, std::size_t max_edges);

/// Uniformly chosen simple path with at most max_edges edges into a random
/// node that has in-edges. The graph must have at least one edge.
SimplePath random_path(const HetGraph& g, std::mt19937_64& rng, std::size_t max_edges);

struct CheckResult {
  bool passed{true};
  /// Human-readable failure detail; empty on success.
  std::string detail;
};

/// Default walk bound: max(edges(P) + 2, 6).
std::size_t default_walk_bound(const SimplePath& p);

/// Up to walk equivalence, the walks into the target of the rewired view
/// are exactly the walks of g into the target that are not associated with
/// p (all bounded by `lambda` edges).
CheckResult check_rewiring(const HetGraph& g, const SimplePath& p, std::size_t lambda,
                           RewireRule rule = RewireRule::kStandard);

/// Distinct paths into the same target have distinct associated-walk sets,
/// witnessed by whichever path is not a suffix of the other.
CheckResult check_path_distinction(const HetGraph& g, const SimplePath& p1, const SimplePath& p2);

/// For a seeded walk-sum model, class scores on the rewired view equal the
/// base scores minus the associated walks' weights, and influence_score
/// equals the influence formula evaluated on those analytic scores, within
/// `tolerance`.
CheckResult check_walk_sum_consistency(const HetGraph& g, const SimplePath& p,
                                       std::uint64_t model_seed, std::size_t lambda,
                                       RewireRule rule = RewireRule::kStandard,
                                       double tolerance = 1e-9);

struct SuiteConfig {
  std::size_t trials{100};
  std::uint64_t seed{0};
  /// 0 takes default_walk_bound() per path.
  std::size_t lambda{0};
  std::size_t max_path_edges{4};
  RandomGraphOptions graphs{};
  RewireRule rule{RewireRule::kStandard};
};

struct SuiteReport {
  std::string name;
  std::size_t passed{0};
  std::size_t failed{0};
  /// Serialized graph, path(s) and failure detail of the first failing trial.
  std::string first_counterexample;
};

SuiteReport run_rewiring_suite(const SuiteConfig& cfg);
SuiteReport run_path_distinction_suite(const SuiteConfig& cfg);
SuiteReport run_walk_sum_suite(const SuiteConfig& cfg);

/// Text form of a graph and paths for reproducing a failure.
std::string describe_case(const HetGraph& g, const std::vector<SimplePath>& paths);

}  // namespace pathex
