#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "pathex/bridge_protocol.hpp"
#include "pathex/cli.hpp"
#include "pathex/errors.hpp"
#include "pathex/explain.hpp"
#include "pathex/external_model.hpp"
#include "pathex/graph_io.hpp"
#include "pathex/message_passing_model.hpp"
#include "pathex/property_checks.hpp"
#include "pathex/rewiring.hpp"
#include "support/bridge_server.hpp"
#include "support/fixtures.hpp"

namespace pathex {
namespace {

using bridge::Json;
using namespace std::chrono_literals;

std::string exec_endpoint(const std::string& mode = "normal") {
  return std::string("exec:") + FAKE_BRIDGE_SERVER + " " + mode;
}

MessagePassingModel reference_model(const HetGraph& g, std::size_t classes = 3) {
  MessagePassingConfig cfg;
  cfg.num_classes = classes;
  cfg.seed = 7;
  return MessagePassingModel::random(g, cfg);
}

void expect_same(const Prediction& a, const Prediction& b) {
  ASSERT_EQ(a.probs.size(), b.probs.size());
  for (std::size_t c = 0; c < a.probs.size(); ++c) EXPECT_NEAR(a.probs[c], b.probs[c], 1e-9);
}

TEST(BridgeProtocol, InitListsNodesAndEdgesByName) {
  const HetGraph g = test::loop_graph();
  const Json j = bridge::init_message(g, 3);
  EXPECT_EQ(j["op"], "init");
  EXPECT_EQ(j["classes"], 3);
  ASSERT_EQ(j["nodes"].size(), 5u);
  EXPECT_EQ(j["nodes"][3]["id"], "D");
  EXPECT_EQ(j["nodes"][3]["type"], "d");
  EXPECT_EQ(j["nodes"][3]["feat"].size(), 5u);
  ASSERT_EQ(j["edges"].size(), 6u);
  EXPECT_EQ(j["edges"][0], (Json{{"id", "e0"}, {"src", "D"}, {"dst", "C"}, {"type", "x"}}));
}

TEST(BridgeProtocol, PredictCarriesOnlyTheDelta) {
  const HetGraph g = test::loop_graph();
  const GraphView r = rewire(g, test::path(g, {"D", "C", "B", "A"}));
  const Json j = bridge::predict_message(r, g.node("A"), 17);
  EXPECT_EQ(j["op"], "predict");
  EXPECT_EQ(j["rid"], 17);
  EXPECT_EQ(j["target"], "A");
  const Json& d = j["delta"];
  std::set<std::string> proxies;
  for (const auto& n : d["add_nodes"]) {
    proxies.insert(n["id"].get<std::string>() + "<" + n["origin"].get<std::string>());
    EXPECT_EQ(n["feat"].size(), 5u);
  }
  EXPECT_EQ(proxies, (std::set<std::string>{"C#proxy<C", "B#proxy<B"}));
  std::set<std::string> added;
  for (const auto& e : d["add_edges"]) {
    added.insert(e["src"].get<std::string>() + ">" + e["dst"].get<std::string>());
    EXPECT_EQ(e["type"], "x");
  }
  EXPECT_EQ(added, (std::set<std::string>{"D>C#proxy", "C#proxy>B#proxy", "B#proxy>C#proxy",
                                          "C#proxy>A"}));
  EXPECT_EQ(d["del_edges"], (Json{"e0"}));
}

TEST(BridgeProtocol, UnchangedViewHasEmptyDelta) {
  const HetGraph g = test::loop_graph();
  const Json d = bridge::predict_message(GraphView(g), 0, 1)["delta"];
  EXPECT_TRUE(d["add_nodes"].empty());
  EXPECT_TRUE(d["add_edges"].empty());
  EXPECT_TRUE(d["del_edges"].empty());
}

TEST(BridgeProtocol, ValidatesReplies) {
  EXPECT_NO_THROW(bridge::check_init_response(R"({"ok":true})"));
  EXPECT_THROW(bridge::check_init_response(R"({"ok":false})"), BackendError);
  EXPECT_THROW(bridge::check_init_response("nonsense"), BackendError);
  EXPECT_THROW(bridge::check_init_response(R"({"rid":0,"error":"boom"})"), BackendError);

  EXPECT_EQ(bridge::parse_predict_response(R"({"rid":4,"probs":[0.25,0.75]})", 4, 2),
            (std::vector<double>{0.25, 0.75}));
  EXPECT_THROW(bridge::parse_predict_response(R"({"rid":5,"probs":[0.25,0.75]})", 4, 2), BackendError);
  EXPECT_THROW(bridge::parse_predict_response(R"({"rid":4,"probs":[0.2,0.7]})", 4, 2), BackendError);
  EXPECT_THROW(bridge::parse_predict_response(R"({"rid":4,"probs":[1.5,-0.5]})", 4, 2), BackendError);
  EXPECT_THROW(bridge::parse_predict_response(R"({"rid":4,"probs":[1.0]})", 4, 2), BackendError);
  EXPECT_THROW(bridge::parse_predict_response(R"({"rid":4,"probs":["a","b"]})", 4, 2), BackendError);
  EXPECT_THROW(bridge::parse_predict_response(R"({"rid":4,"error":"oops"})", 4, 2), BackendError);
  EXPECT_THROW(bridge::parse_predict_response("{", 4, 2), BackendError);
}

TEST(BridgeProtocol, ServerRebuildsTheRewiredGraph) {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const HetGraph g = random_graph(rng);
    const SimplePath p = random_path(g, rng, 4);
    const GraphView r = rewire(g, p);
    const bridge::SessionGraph s = bridge::graph_from_init(bridge::init_message(g, 3));
    const HetGraph h = bridge::apply_delta(s, bridge::predict_message(r, p.target(), 1)["delta"]);
    ASSERT_EQ(h.num_nodes(), r.num_nodes());
    ASSERT_EQ(h.num_edges(), r.num_edges());
    const auto m = reference_model(g);
    expect_same(m.predict(r, p.target()), m.predict(h, p.target()));
  }
}

TEST(BridgeProtocol, ServerRejectsBadDeltas) {
  const HetGraph g = test::loop_graph();
  const bridge::SessionGraph s = bridge::graph_from_init(bridge::init_message(g, 3));
  const Json unknown_edge{{"add_nodes", Json::array()}, {"add_edges", Json::array()}, {"del_edges", {"e99"}}};
  EXPECT_THROW(bridge::apply_delta(s, unknown_edge), DataError);
  EXPECT_THROW(bridge::graph_from_init(Json{{"op", "init"}}), DataError);
}

TEST(ExternalModel, ExecServerMatchesInProcessModel) {
  const HetGraph g = test::loop_graph();
  const auto local = reference_model(g);
  ExternalModel remote(g, exec_endpoint());
  expect_same(remote.predict(g, g.node("A")), local.predict(g, g.node("A")));
  const GraphView r = rewire(g, test::path(g, {"D", "C", "B", "A"}));
  expect_same(remote.predict(r, g.node("A")), local.predict(r, g.node("A")));
  const GraphView r2 = rewire(g, test::path(g, {"E", "B", "A"}));
  expect_same(remote.predict(r2, g.node("A")), local.predict(r2, g.node("A")));
}

TEST(ExternalModel, SearchOverTheBridgeMatchesInProcessSearch) {
  const HetGraph g = test::loop_graph();
  const auto local = reference_model(g);
  ExternalModel remote(g, exec_endpoint());
  SearchConfig cfg;
  cfg.seed = 11;
  const SearchResult a = search_topk(local, g, g.node("A"), cfg);
  const SearchResult b = search_topk(remote, g, g.node("A"), cfg);
  ASSERT_EQ(a.explanations.size(), b.explanations.size());
  for (std::size_t i = 0; i < a.explanations.size(); ++i) {
    EXPECT_EQ(a.explanations[i].path, b.explanations[i].path);
    EXPECT_NEAR(a.explanations[i].score, b.explanations[i].score, 1e-9);
  }
}

TEST(ExternalModel, FaultyServersRaiseBackendErrors) {
  const HetGraph g = test::loop_graph();
  for (const char* mode : {"bad-sum", "malformed", "wrong-rid", "error"}) {
    ExternalModel remote(g, exec_endpoint(mode));
    EXPECT_THROW(remote.predict(g, 0), BackendError) << mode;
  }
}

TEST(ExternalModel, SilentServerTimesOut) {
  const HetGraph g = test::loop_graph();
  ExternalModelOptions opts;
  opts.timeout = 200ms;
  ExternalModel remote(g, exec_endpoint("hang"), opts);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(remote.predict(g, 0), BackendError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(ExternalModel, RejectsBadEndpoints) {
  const HetGraph g = test::loop_graph();
  EXPECT_THROW(ExternalModel(g, "nowhere"), ConfigError);
  EXPECT_THROW(ExternalModel(g, "exec:"), ConfigError);
  EXPECT_THROW(ExternalModel(g, "127.0.0.1:1"), BackendError);
  EXPECT_THROW(ExternalModel(g, "exec:/nonexistent/server"), BackendError);
}

TEST(ExternalModel, RejectsViewsOfAnotherGraph) {
  const HetGraph g = test::loop_graph();
  const HetGraph other = test::loop_graph();
  ExternalModel remote(g, exec_endpoint());
  EXPECT_THROW(remote.predict(other, 0), BackendError);
}

TEST(ExternalModel, TcpServerWithParallelSearch) {
  test::TcpBridgeServer server(test::ServerOptions{});
  const HetGraph g = test::loop_graph();
  const auto local = reference_model(g);
  ExternalModelOptions opts;
  opts.max_connections = 3;
  ExternalModel remote(g, "127.0.0.1:" + std::to_string(server.port()), opts);
  SearchConfig cfg;
  cfg.seed = 2;
  cfg.jobs = 3;
  const SearchResult a = search_topk(local, g, g.node("A"), cfg);
  const SearchResult b = search_topk(remote, g, g.node("A"), cfg);
  ASSERT_EQ(a.explanations.size(), b.explanations.size());
  for (std::size_t i = 0; i < a.explanations.size(); ++i) {
    EXPECT_EQ(a.explanations[i].path, b.explanations[i].path);
    EXPECT_NEAR(a.explanations[i].score, b.explanations[i].score, 1e-9);
  }
  EXPECT_GE(server.connections(), 1);
  EXPECT_LE(server.connections(), 3);
}

TEST(ExternalModel, CliExplainOverTheBridgeMatchesLocalBackend) {
  const std::string data = TEST_DATA_DIR;
  const HetGraph g = load_graph(data + "/loop_graph.nodes", data + "/loop_graph.edges");
  const std::string weights = ::testing::TempDir() + "bridge_weights.txt";
  {
    std::ofstream f(weights);
    reference_model(g).save(f);
  }
  const std::vector<std::string> common{"--nodes", data + "/loop_graph.nodes", "--edges",
                                        data + "/loop_graph.edges", "--target", "A", "--seed", "5"};
  auto run = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"explain"};
    args.insert(args.end(), common.begin(), common.end());
    args.insert(args.end(), extra.begin(), extra.end());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    EXPECT_EQ(code, 0) << err.str();
    return Json::parse(out.str());
  };
  const Json remote = run({"--backend", "external", "--endpoint", exec_endpoint()});
  const Json local = run({"--backend", "mp-hgn", "--weights", weights});
  ASSERT_EQ(remote["explanations"].size(), local["explanations"].size());
  for (std::size_t i = 0; i < local["explanations"].size(); ++i) {
    EXPECT_EQ(remote["explanations"][i]["path"], local["explanations"][i]["path"]);
  }
}

}  // namespace
}  // namespace pathex
