#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathex/graph_view.hpp"

namespace pathex {

/// Class-probability vector for one target node.
struct Prediction {
  std::vector<double> probs;

  /// Argmax; ties go to the lowest class id.
  std::size_t label() const;
};

/// Throws BackendError unless `probs` is a non-empty vector of values in
/// [0, 1] summing to 1 within `tolerance`.
void validate_probabilities(std::span<const double> probs, double tolerance = 1e-9);

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Black-box node classifier over a graph view.
///
/// Implementations must be deterministic, must depend on the view only
/// through node/edge types, features and directed connectivity (so a proxy
/// is indistinguishable from its origin), and must let information flow only
/// along directed edges. predict() may be called concurrently.
class Model {
 public:
  virtual ~Model() = default;

  /// Throws DataError for an unknown target and BackendError when the
  /// backend fails.
  virtual Prediction predict(const GraphView& g, NodeId target) const = 0;

  /// Number of message-passing rounds; default bound on explanation length.
  virtual std::size_t receptive_depth() const = 0;
  virtual std::size_t num_classes() const = 0;
  virtual std::size_t parameter_count() const = 0;

  std::vector<std::string> class_names() const;
};

}  // namespace pathex
