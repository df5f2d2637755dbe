#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pathex/model.hpp"

namespace pathex {

struct MessagePassingConfig {
  std::size_t num_classes{3};
  std::size_t layers{2};
  std::size_t hidden{8};
  std::uint64_t seed{0};
  /// Multiplies the standard deviation of the Gaussian initialisation.
  double weight_scale{1.0};
};

/// Weights of a typed message-passing network.
struct MessagePassingWeights {
  // Per node type: hidden x feature_dim, plus bias.
  std::vector<Eigen::MatrixXd> input;
  std::vector<Eigen::VectorXd> input_bias;
  // [layer][edge type]: hidden x hidden.
  std::vector<std::vector<Eigen::MatrixXd>> message;
  // [layer][node type]: hidden x hidden.
  std::vector<std::vector<Eigen::MatrixXd>> self;
  std::vector<Eigen::VectorXd> layer_bias;
  Eigen::MatrixXd readout;  // classes x hidden
  Eigen::VectorXd readout_bias;
};

/// L-layer heterogeneous message-passing classifier.
///
///   h0(v)   = relu(In[type(v)] x(v) + b_in[type(v)])
///   hl(v)   = relu(Self_l[type(v)] h(l-1)(v)
///                  + sum over edge types s of Msg_l[s] * mean_{u -s-> v} h(l-1)(u)
///                  + b_l)
///   logits  = R hL(vt) + b_R
///
/// Only the L-hop in-neighbourhood of the target is evaluated.
class MessagePassingModel final : public Model {
 public:
  explicit MessagePassingModel(MessagePassingWeights weights);

  /// Gaussian weights for the node/edge types and feature dimensions of g.
  static MessagePassingModel random(const HetGraph& g, const MessagePassingConfig& cfg);
  /// All-zero weights: every prediction is uniform.
  static MessagePassingModel zeros(const HetGraph& g, const MessagePassingConfig& cfg);

  Prediction predict(const GraphView& g, NodeId target) const override;
  std::size_t receptive_depth() const override { return w_.message.size(); }
  std::size_t num_classes() const override { return static_cast<std::size_t>(w_.readout.rows()); }
  std::size_t parameter_count() const override;

  std::vector<double> logits(const GraphView& g, NodeId target) const;
  const MessagePassingWeights& weights() const noexcept { return w_; }

  /// JSON sidecar with flat row-major decimal arrays.
  void save(std::ostream& out) const;
  static MessagePassingModel load(std::istream& in);

 private:
  MessagePassingWeights w_;
};

}  // namespace pathex
