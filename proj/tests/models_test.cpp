#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pathex/errors.hpp"
#include "pathex/message_passing_model.hpp"
#include "pathex/property_checks.hpp"
#include "pathex/rewiring.hpp"
#include "pathex/walk_sum_model.hpp"
#include "support/fixtures.hpp"
#include "synthetic.hpp"

namespace pathex {
namespace {

using test::loop_graph;

void expect_uniform(const Prediction& p, std::size_t classes) {
  ASSERT_EQ(p.probs.size(), classes);
  for (double x : p.probs) EXPECT_NEAR(x, 1.0 / static_cast<double>(classes), 1e-15);
}

// Copy of g with node `moved` re-created last under a new name; all its
// edges are re-attached to the copy.
HetGraph relabelled(const HetGraph& g, NodeId moved) {
  HetGraph::Builder b;
  for (const auto& t : g.node_type_names()) b.node_type(t);
  for (const auto& t : g.edge_type_names()) b.edge_type(t);
  auto add = [&](NodeId v, std::string name) {
    const auto f = g.features(v);
    b.add_node(std::move(name), g.node_type_names()[g.node_type(v)], {f.begin(), f.end()});
  };
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (v != moved) add(v, g.node_name(v));
  }
  add(moved, g.node_name(moved) + "_copy");
  auto name = [&](NodeId v) { return v == moved ? g.node_name(v) + "_copy" : g.node_name(v); };
  for (const Edge& e : g.edges()) {
    b.add_edge(name(e.src), name(e.dst), g.edge_type_names()[e.type]);
  }
  return std::move(b).build();
}

TEST(Prediction, LabelTiesGoToLowestClass) {
  EXPECT_EQ((Prediction{{0.4, 0.4, 0.2}}).label(), 0u);
  EXPECT_EQ((Prediction{{0.2, 0.4, 0.4}}).label(), 1u);
}

TEST(Prediction, ValidationRejectsBadVectors) {
  EXPECT_NO_THROW(validate_probabilities(std::vector<double>{0.25, 0.75}));
  EXPECT_THROW(validate_probabilities(std::vector<double>{0.4, 0.4}), BackendError);
  EXPECT_THROW(validate_probabilities(std::vector<double>{1.5, -0.5}), BackendError);
  EXPECT_THROW(validate_probabilities(std::vector<double>{}), BackendError);
  EXPECT_THROW(validate_probabilities(std::vector<double>{NAN, 1.0}), BackendError);
}

TEST(WalkSumModel, EdgelessGraphIsUniform) {
  const HetGraph g = test::graph_from_text("a\tp\nb\tq\n", "");
  const WalkSumModel m(3, {{1, 1}, {1, 1}, {1, 1}}, {{}, {}, {}});
  EXPECT_EQ(m.class_scores(g, 0), (std::vector<double>{0, 0, 0}));
  expect_uniform(m.predict(g, 0), 3);
}

TEST(WalkSumModel, SingleEdge) {
  const HetGraph g = test::graph_from_text("u\tp\nt\tp\n", "u\tt\tr\n");
  const double a = 0.7;
  const double b = 0.3;
  const WalkSumModel m(4, {{a}}, {{b}});
  EXPECT_DOUBLE_EQ(m.class_scores(g, g.node("t"))[0], a * a * b);
}

TEST(WalkSumModel, LoopGraphMatchesWalkOracle) {
  const HetGraph g = loop_graph();
  const std::vector<std::vector<double>> alpha{{0.9, 0.8, 0.7, 0.6, 0.5}, {0.2, 0.4, 0.6, 0.8, 1.0}};
  const std::vector<std::vector<double>> beta{{0.5}, {0.9}};
  const WalkSumModel m(3, alpha, beta);
  const NodeId a = g.node("A");
  const auto walks = test::forward_walks(g, a, 3);
  ASSERT_EQ(walks.size(), 10u);
  std::vector<double> expected(2, 0.0);
  for (const auto& w : walks) {
    for (std::size_t c = 0; c < 2; ++c) {
      double prod = 1.0;
      for (NodeId v : w.nodes) prod *= alpha[c][g.node_type(v)];
      for (EdgeId e : w.edges) prod *= beta[c][g.edge(e).type];
      expected[c] += prod;
    }
  }
  const auto scores = m.class_scores(g, a);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(scores[c], expected[c], 1e-12);
  const Prediction p = m.predict(g, a);
  const auto want = softmax(expected);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(p.probs[c], want[c], 1e-12);
}

TEST(WalkSumModel, LoopGraphTwoEdgesDpMatchesEnumeration) {
  const HetGraph g = loop_graph();
  const auto m = WalkSumModel::seeded(3, 2, g.num_node_types(), g.num_edge_types(), 9);
  EXPECT_EQ(enumerate_walks(g, g.node("A"), 2).walks.size(), 6u);
  const auto dp = m.class_scores(g, g.node("A"));
  const auto brute = m.class_scores_by_enumeration(g, g.node("A"));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(dp[c], brute[c], 1e-12);
}

TEST(WalkSumModel, SeededWeightsArePositiveAndDeterministic) {
  const auto a = WalkSumModel::seeded(4, 3, 5, 3, 42);
  const auto b = WalkSumModel::seeded(4, 3, 5, 3, 42);
  const auto c = WalkSumModel::seeded(4, 3, 5, 3, 43);
  const HetGraph g = loop_graph();
  EXPECT_EQ(a.class_scores(g, 0), b.class_scores(g, 0));
  EXPECT_NE(a.class_scores(g, 0), c.class_scores(g, 0));
  for (double s : a.class_scores(g, 0)) EXPECT_GT(s, 0.0);
  EXPECT_EQ(a.parameter_count(), 4u * (5 + 3));
}

class RandomModels : public ::testing::TestWithParam<int> {};

TEST_P(RandomModels, DpMatchesEnumerationIncludingRewiredViews) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 500);
  const HetGraph g = random_graph(rng);
  const std::size_t lambda = 1 + rng() % 6;
  const auto m = WalkSumModel::seeded(3, lambda, g.num_node_types(), g.num_edge_types(), rng());
  const SimplePath p = random_path(g, rng, 4);
  const GraphView r = rewire(g, p);
  for (const GraphView* v : {static_cast<const GraphView*>(nullptr), &r}) {
    const GraphView view = v ? *v : GraphView(g);
    for (NodeId t = 0; t < g.num_nodes(); ++t) {
      const auto dp = m.class_scores(view, t);
      const auto brute = m.class_scores_by_enumeration(view, t);
      for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_NEAR(dp[c], brute[c], 1e-9 * std::max(1.0, brute[c]));
      }
    }
  }
}

TEST_P(RandomModels, ReplacingANodeByACopyKeepsPredictions) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 900);
  const HetGraph g = random_graph(rng);
  const auto moved = static_cast<NodeId>(rng() % g.num_nodes());
  const HetGraph h = relabelled(g, moved);
  const auto ws = WalkSumModel::seeded(3, 4, g.num_node_types(), g.num_edge_types(), 3);
  MessagePassingConfig cfg;
  cfg.seed = rng();
  const auto mp = MessagePassingModel::random(g, cfg);
  for (NodeId t = 0; t < g.num_nodes(); ++t) {
    const NodeId u = h.node(t == moved ? g.node_name(t) + "_copy" : g.node_name(t));
    const auto a = ws.predict(g, t).probs;
    const auto b = ws.predict(h, u).probs;
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a[c], b[c], 1e-12);
    const auto x = mp.predict(g, t).probs;
    const auto y = mp.predict(h, u).probs;
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(x[c], y[c], 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomModels, ::testing::Range(0, 40));

TEST(MessagePassingModel, ZeroWeightsAreUniform) {
  const HetGraph g = loop_graph();
  MessagePassingConfig cfg;
  cfg.num_classes = 4;
  const auto m = MessagePassingModel::zeros(g, cfg);
  for (NodeId v = 0; v < g.num_nodes(); ++v) expect_uniform(m.predict(g, v), 4);
}

// Full-graph forward pass with no neighbourhood pruning.
std::vector<double> dense_logits(const MessagePassingModel& m, const HetGraph& g, NodeId target) {
  const auto& w = m.weights();
  const auto n = g.num_nodes();
  std::vector<Eigen::VectorXd> h(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto f = g.features(v);
    const Eigen::Map<const Eigen::VectorXd> x(f.data(), static_cast<Eigen::Index>(f.size()));
    h[v] = (w.input[g.node_type(v)] * x + w.input_bias[g.node_type(v)]).cwiseMax(0.0);
  }
  for (std::size_t l = 0; l < w.message.size(); ++l) {
    std::vector<Eigen::VectorXd> next(n);
    for (NodeId v = 0; v < n; ++v) {
      Eigen::VectorXd z = w.self[l][g.node_type(v)] * h[v] + w.layer_bias[l];
      for (TypeId s = 0; s < g.num_edge_types(); ++s) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(h[v].size());
        int count = 0;
        for (EdgeId e : g.in_edges(v)) {
          if (g.edge(e).type != s) continue;
          sum += h[g.edge(e).src];
          ++count;
        }
        if (count) z += w.message[l][s] * (sum / count);
      }
      next[v] = z.cwiseMax(0.0);
    }
    h = std::move(next);
  }
  const Eigen::VectorXd out = w.readout * h[target] + w.readout_bias;
  return {out.data(), out.data() + out.size()};
}

TEST(MessagePassingModel, MatchesDenseForwardPass) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HetGraph g = test::synthetic_graph(seed, 25, 2.5);
    MessagePassingConfig cfg;
    cfg.layers = 1 + seed % 3;
    cfg.seed = seed;
    const auto m = MessagePassingModel::random(g, cfg);
    for (NodeId t = 0; t < g.num_nodes(); ++t) {
      const auto got = m.logits(g, t);
      const auto want = dense_logits(m, g, t);
      for (std::size_t c = 0; c < got.size(); ++c) EXPECT_NEAR(got[c], want[c], 1e-12);
    }
  }
}

TEST(MessagePassingModel, IgnoresEdgesOutsideTheInNeighbourhood) {
  const HetGraph g = test::graph_from_text("a\tp\nb\tq\nt\tp\nz\tq\n", "a\tb\tr\nb\tt\tr\n");
  const HetGraph h = test::graph_from_text("a\tp\nb\tq\nt\tp\nz\tq\n",
                                           "a\tb\tr\nb\tt\tr\nt\tz\tr\nz\ta\ts\n");
  MessagePassingConfig cfg;
  cfg.seed = 5;
  const auto m = MessagePassingModel::random(h, cfg);
  // z -> a is three hops from t, beyond two layers.
  EXPECT_EQ(m.predict(g, g.node("t")).probs, m.predict(h, h.node("t")).probs);
}

TEST(MessagePassingModel, SaveLoadRoundTrip) {
  const HetGraph g = test::synthetic_graph(3);
  MessagePassingConfig cfg;
  cfg.seed = 17;
  cfg.layers = 3;
  const auto m = MessagePassingModel::random(g, cfg);
  std::stringstream s;
  m.save(s);
  const auto back = MessagePassingModel::load(s);
  EXPECT_EQ(back.receptive_depth(), 3u);
  EXPECT_EQ(back.parameter_count(), m.parameter_count());
  for (NodeId t = 0; t < g.num_nodes(); ++t) {
    EXPECT_EQ(back.predict(g, t).probs, m.predict(g, t).probs);
  }
  std::istringstream bad("{\"input\": 3}");
  EXPECT_THROW(MessagePassingModel::load(bad), DataError);
}

TEST(MessagePassingModel, PredictionsAreValidAndDeterministic) {
  const HetGraph g = test::synthetic_graph(8);
  MessagePassingConfig cfg;
  cfg.seed = 8;
  const auto a = MessagePassingModel::random(g, cfg);
  const auto b = MessagePassingModel::random(g, cfg);
  for (NodeId t = 0; t < g.num_nodes(); ++t) {
    const auto p = a.predict(g, t);
    EXPECT_NO_THROW(validate_probabilities(p.probs));
    EXPECT_EQ(p.probs, b.predict(g, t).probs);
  }
  EXPECT_THROW(a.predict(g, 1000), DataError);
}

}  // namespace
}  // namespace pathex
