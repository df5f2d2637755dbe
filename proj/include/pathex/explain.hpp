#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathex/model.hpp"
#include "pathex/rewiring.hpp"
#include "pathex/walks.hpp"

namespace pathex {

/// A cause node with its influence path to the target, scored by how much
/// blocking the path's associated walks changes the prediction.
struct Explanation {
  SimplePath path;
  /// In [-2, 0] when the label is unchanged, in [0, 2] when it flips.
  double score{0.0};
  /// score >= -1; below that, blocking the path raised the predicted
  /// class probability.
  bool valid{false};
  bool label_flipped{false};
};

/// (-1)^[y == y'] + (base[y] - perturbed[y]) with y, y' the argmax labels.
double influence(const Prediction& base, const Prediction& perturbed);

Explanation make_explanation(SimplePath path, const Prediction& base,
                             const Prediction& perturbed);

/// Rewires g around p and compares predictions at p.target().
Explanation influence_score(const Model& model, const HetGraph& g, const SimplePath& p,
                            RewireRule rule = RewireRule::kStandard);
/// Same, reusing an already computed base prediction.
Explanation influence_score(const Model& model, const HetGraph& g, const SimplePath& p,
                            const Prediction& base, RewireRule rule = RewireRule::kStandard);

/// Ranking order: higher score first, then fewer edges, then node sequence,
/// then edge sequence.
bool ranks_before(const Explanation& a, const Explanation& b);

/// Canonical key; distinct for distinct node or edge sequences and for a
/// path and its reverse.
std::string score_cache_key(const SimplePath& p);

struct SearchConfig {
  std::size_t b{5};  ///< paths kept per iteration
  std::size_t m{5};  ///< extensions sampled per kept path
  /// Maximum iterations, i.e. maximum path length in edges; 0 takes the
  /// model's receptive depth.
  std::size_t lmax{0};
  std::size_t k{5};
  std::uint64_t seed{0};
  /// Worker threads used to score one iteration's candidates.
  std::size_t jobs{1};
};

struct SearchTrace {
  std::size_t evaluated{0};
  std::size_t cache_hits{0};
  std::size_t iterations{0};
  /// b * m * lmax, saturating.
  std::size_t budget{0};
  /// Kept set after each iteration, in ranking order.
  std::vector<std::vector<SimplePath>> kept;
  /// Every distinct scored candidate, in evaluation order.
  std::vector<Explanation> scored;
  std::size_t max_path_edges{0};
  std::size_t max_degree{0};
};

struct SearchResult {
  Prediction base;
  std::vector<Explanation> explanations;
  SearchTrace trace;
};

/// Greedy top-K search over simple paths into `target`.
///
/// Starts from the zero-length anchor <target>. Iteration i extends each
/// kept path with i nodes by up to m distinct in-edges of its far end whose
/// source is not yet on the path (sampled uniformly without replacement),
/// scores the new paths, and keeps the b best of the kept and new paths.
/// Stops when the kept set does not change or after lmax iterations, and
/// returns the k best paths scored.
SearchResult search_topk(const Model& model, const HetGraph& g, NodeId target,
                         const SearchConfig& cfg);

}  // namespace pathex
