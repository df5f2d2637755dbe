#include "pathex/model.hpp"

#include <algorithm>
#include <cmath>

#include "pathex/errors.hpp"

namespace pathex {

std::size_t Prediction::label() const {
  if (probs.empty()) throw BackendError("empty prediction");
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

void validate_probabilities(std::span<const double> probs, double tolerance) {
  if (probs.empty()) throw BackendError("prediction has no classes");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw BackendError("probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw BackendError("probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& x : out) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : out) x /= sum;
  return out;
}

std::vector<std::string> Model::class_names() const {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < num_classes(); ++c) names.push_back("c" + std::to_string(c));
  return names;
}

}  // namespace pathex
