#include "pathex/message_passing_model.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_map>

#include "json.hpp"
#include "pathex/errors.hpp"

namespace pathex {

namespace {

using Json = nlohmann::json;

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                         double scale) {
  const double sd = cols > 0 ? scale / std::sqrt(static_cast<double>(cols)) : 0.0;
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = sd * dist(rng);
  }
  return m;
}

Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, Eigen::Index n, double sd) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = sd * dist(rng);
  return v;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", flat}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw DataError("weight matrix size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const Json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

MessagePassingWeights make_weights(const HetGraph& g, const MessagePassingConfig& cfg,
                                   bool zero) {
  if (cfg.num_classes == 0 || cfg.layers == 0 || cfg.hidden == 0) {
    throw ConfigError("message-passing model needs classes, layers and hidden >= 1");
  }
  std::mt19937_64 rng(cfg.seed);
  const double scale = zero ? 0.0 : cfg.weight_scale;
  const auto h = static_cast<Eigen::Index>(cfg.hidden);
  MessagePassingWeights w;
  for (TypeId t = 0; t < g.num_node_types(); ++t) {
    w.input.push_back(gaussian(rng, h, static_cast<Eigen::Index>(g.feature_dim(t)), scale));
    w.input_bias.push_back(gaussian_vector(rng, h, 0.1 * scale));
  }
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    auto& msg = w.message.emplace_back();
    for (TypeId s = 0; s < g.num_edge_types(); ++s) msg.push_back(gaussian(rng, h, h, scale));
    auto& self = w.self.emplace_back();
    for (TypeId t = 0; t < g.num_node_types(); ++t) self.push_back(gaussian(rng, h, h, scale));
    w.layer_bias.push_back(gaussian_vector(rng, h, 0.1 * scale));
  }
  w.readout = gaussian(rng, static_cast<Eigen::Index>(cfg.num_classes), h, scale);
  w.readout_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.num_classes));
  return w;
}

Eigen::VectorXd relu(const Eigen::VectorXd& x) { return x.cwiseMax(0.0); }

}  // namespace

MessagePassingModel::MessagePassingModel(MessagePassingWeights weights) : w_(std::move(weights)) {
  if (w_.message.empty() || w_.message.size() != w_.self.size() ||
      w_.layer_bias.size() != w_.message.size() || w_.readout.rows() == 0) {
    throw ConfigError("inconsistent message-passing weights");
  }
}

MessagePassingModel MessagePassingModel::random(const HetGraph& g,
                                                const MessagePassingConfig& cfg) {
  return MessagePassingModel(make_weights(g, cfg, false));
}

MessagePassingModel MessagePassingModel::zeros(const HetGraph& g,
                                               const MessagePassingConfig& cfg) {
  return MessagePassingModel(make_weights(g, cfg, true));
}

std::size_t MessagePassingModel::parameter_count() const {
  std::size_t n = static_cast<std::size_t>(w_.readout.size() + w_.readout_bias.size());
  for (std::size_t t = 0; t < w_.input.size(); ++t) {
    n += static_cast<std::size_t>(w_.input[t].size() + w_.input_bias[t].size());
  }
  for (std::size_t l = 0; l < w_.message.size(); ++l) {
    for (const auto& m : w_.message[l]) n += static_cast<std::size_t>(m.size());
    for (const auto& m : w_.self[l]) n += static_cast<std::size_t>(m.size());
    n += static_cast<std::size_t>(w_.layer_bias[l].size());
  }
  return n;
}

std::vector<double> MessagePassingModel::logits(const GraphView& g, NodeId target) const {
  if (!g.contains(target)) throw DataError("unknown target node");
  const std::size_t layers = w_.message.size();

  // ring[k] = nodes first reached k in-hops from the target.
  std::unordered_map<NodeId, std::size_t> hops{{target, 0}};
  std::vector<std::vector<NodeId>> ring{{target}};
  for (std::size_t k = 1; k <= layers; ++k) {
    ring.emplace_back();
    for (NodeId v : ring[k - 1]) {
      g.for_each_in_edge(v, [&](const Edge& e) {
        if (hops.try_emplace(e.src, k).second) ring[k].push_back(e.src);
      });
    }
  }

  auto type_of = [&](NodeId v) {
    const TypeId t = g.node_type(v);
    if (t >= w_.input.size()) throw DataError("model has no weights for node type");
    return t;
  };

  std::unordered_map<NodeId, Eigen::VectorXd> h;
  for (const auto& [v, k] : hops) {
    const TypeId t = type_of(v);
    const auto f = g.features(v);
    const Eigen::Map<const Eigen::VectorXd> x(f.data(), static_cast<Eigen::Index>(f.size()));
    if (x.size() != w_.input[t].cols()) throw DataError("feature dimension does not match model");
    h.emplace(v, relu(w_.input[t] * x + w_.input_bias[t]));
  }

  const Eigen::Index hidden = w_.readout.cols();
  for (std::size_t l = 0; l < layers; ++l) {
    // Layer l + 1 is needed for nodes within layers - l - 1 hops.
    std::unordered_map<NodeId, Eigen::VectorXd> next;
    for (std::size_t k = 0; k + l + 1 <= layers; ++k) {
      for (NodeId v : ring[k]) {
        const auto& msg = w_.message[l];
        std::vector<Eigen::VectorXd> sums(msg.size(), Eigen::VectorXd::Zero(hidden));
        std::vector<std::size_t> counts(msg.size(), 0);
        g.for_each_in_edge(v, [&](const Edge& e) {
          if (e.type >= msg.size()) throw DataError("model has no weights for edge type");
          sums[e.type] += h.at(e.src);
          ++counts[e.type];
        });
        Eigen::VectorXd z = w_.self[l][type_of(v)] * h.at(v) + w_.layer_bias[l];
        for (std::size_t s = 0; s < msg.size(); ++s) {
          if (counts[s]) z += msg[s] * (sums[s] / static_cast<double>(counts[s]));
        }
        next.emplace(v, relu(z));
      }
    }
    h = std::move(next);
  }
  const Eigen::VectorXd out = w_.readout * h.at(target) + w_.readout_bias;
  return {out.data(), out.data() + out.size()};
}

Prediction MessagePassingModel::predict(const GraphView& g, NodeId target) const {
  return Prediction{softmax(logits(g, target))};
}

void MessagePassingModel::save(std::ostream& out) const {
  Json j;
  j["format"] = "typed-mean-mp/1";
  for (std::size_t t = 0; t < w_.input.size(); ++t) {
    j["input"].push_back(matrix_to_json(w_.input[t]));
    j["input_bias"].push_back(vector_to_json(w_.input_bias[t]));
  }
  for (std::size_t l = 0; l < w_.message.size(); ++l) {
    Json msg = Json::array();
    for (const auto& m : w_.message[l]) msg.push_back(matrix_to_json(m));
    Json self = Json::array();
    for (const auto& m : w_.self[l]) self.push_back(matrix_to_json(m));
    j["layers"].push_back(
        Json{{"message", msg}, {"self", self}, {"bias", vector_to_json(w_.layer_bias[l])}});
  }
  j["readout"] = matrix_to_json(w_.readout);
  j["readout_bias"] = vector_to_json(w_.readout_bias);
  out << j.dump() << '\n';
}

MessagePassingModel MessagePassingModel::load(std::istream& in) {
  try {
    const Json j = Json::parse(in);
    MessagePassingWeights w;
    for (const auto& m : j.at("input")) w.input.push_back(matrix_from_json(m));
    for (const auto& b : j.at("input_bias")) w.input_bias.push_back(vector_from_json(b));
    for (const auto& layer : j.at("layers")) {
      auto& msg = w.message.emplace_back();
      for (const auto& m : layer.at("message")) msg.push_back(matrix_from_json(m));
      auto& self = w.self.emplace_back();
      for (const auto& m : layer.at("self")) self.push_back(matrix_from_json(m));
      w.layer_bias.push_back(vector_from_json(layer.at("bias")));
    }
    w.readout = matrix_from_json(j.at("readout"));
    w.readout_bias = vector_from_json(j.at("readout_bias"));
    return MessagePassingModel(std::move(w));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad weight file: ") + e.what());
  }
}

}  // namespace pathex
