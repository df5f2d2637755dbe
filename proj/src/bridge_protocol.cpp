#include "pathex/bridge_protocol.hpp"

#include <cmath>
#include <unordered_set>

#include "pathex/errors.hpp"
#include "pathex/model.hpp"

namespace pathex::bridge {

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

Json node_record(const GraphView& v, NodeId n) {
  const HetGraph& g = v.base();
  return Json{{"id", v.node_name(n)},
              {"type", g.node_type_names()[v.node_type(n)]},
              {"feat", to_vector(v.features(n))}};
}

Json edge_record(const GraphView& v, const Edge& e) {
  return Json{{"id", edge_id(e.id)},
              {"src", v.node_name(e.src)},
              {"dst", v.node_name(e.dst)},
              {"type", v.base().edge_type_names()[e.type]}};
}

Json parse_reply(std::string_view line) {
  try {
    Json j = Json::parse(line);
    if (!j.is_object()) throw BackendError("bridge reply is not an object");
    return j;
  } catch (const Json::exception& e) {
    throw BackendError(std::string("malformed bridge reply: ") + e.what());
  }
}

}  // namespace

std::string edge_id(EdgeId e) { return "e" + std::to_string(e); }

Json init_message(const HetGraph& g, std::size_t classes) {
  const GraphView v(g);
  Json nodes = Json::array();
  for (NodeId n = 0; n < g.num_nodes(); ++n) nodes.push_back(node_record(v, n));
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back(edge_record(v, e));
  return Json{{"op", "init"}, {"nodes", nodes}, {"edges", edges}, {"classes", classes}};
}

Json predict_message(const GraphView& view, NodeId target, std::uint64_t rid) {
  if (!view.contains(target)) throw DataError("unknown target node");
  const HetGraph& g = view.base();
  Json add_nodes = Json::array();
  for (std::size_t k = 0; k < view.proxy_origins().size(); ++k) {
    const auto p = static_cast<NodeId>(g.num_nodes() + k);
    Json rec = node_record(view, p);
    rec["origin"] = g.node_name(view.origin(p));
    add_nodes.push_back(std::move(rec));
  }
  Json add_edges = Json::array();
  for (std::size_t k = 0; k < view.added_edges().size(); ++k) {
    add_edges.push_back(edge_record(view, view.edge(static_cast<EdgeId>(g.num_edges() + k))));
  }
  Json del_edges = Json::array();
  for (EdgeId e : view.removed_edges()) del_edges.push_back(edge_id(e));
  return Json{{"op", "predict"},
              {"rid", rid},
              {"target", view.node_name(target)},
              {"delta", {{"add_nodes", add_nodes}, {"add_edges", add_edges}, {"del_edges", del_edges}}}};
}

Json shutdown_message() { return Json{{"op", "shutdown"}}; }

void check_init_response(std::string_view line) {
  const Json j = parse_reply(line);
  if (j.contains("error")) throw BackendError("bridge init failed: " + j["error"].dump());
  if (j.value("ok", false) != true) throw BackendError("bridge init not acknowledged");
}

std::vector<double> parse_predict_response(std::string_view line, std::uint64_t rid,
                                           std::size_t classes) {
  const Json j = parse_reply(line);
  if (!j.contains("rid") || !j["rid"].is_number_unsigned() || j["rid"].get<std::uint64_t>() != rid) {
    throw BackendError("bridge reply has wrong request id");
  }
  if (j.contains("error")) throw BackendError("bridge predict failed: " + j["error"].dump());
  if (!j.contains("probs") || !j["probs"].is_array()) {
    throw BackendError("bridge reply has no probabilities");
  }
  std::vector<double> probs;
  for (const auto& p : j["probs"]) {
    if (!p.is_number()) throw BackendError("bridge probability is not a number");
    probs.push_back(p.get<double>());
  }
  if (probs.size() != classes) {
    throw BackendError("bridge returned " + std::to_string(probs.size()) + " probabilities, expected " +
                       std::to_string(classes));
  }
  validate_probabilities(probs);
  return probs;
}

SessionGraph graph_from_init(const Json& init) {
  try {
    SessionGraph s;
    HetGraph::Builder b;
    for (const auto& n : init.at("nodes")) {
      b.add_node(n.at("id").get<std::string>(), n.at("type").get<std::string>(),
                 n.at("feat").get<std::vector<double>>());
    }
    for (const auto& e : init.at("edges")) {
      const EdgeId id = b.add_edge(e.at("src").get<std::string>(), e.at("dst").get<std::string>(),
                                   e.at("type").get<std::string>());
      if (!s.edge_ids.emplace(e.at("id").get<std::string>(), id).second) {
        throw DataError("duplicate edge id in init");
      }
    }
    s.graph = std::move(b).build();
    s.classes = init.at("classes").get<std::size_t>();
    return s;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed init message: ") + e.what());
  }
}

HetGraph apply_delta(const SessionGraph& base, const Json& delta) {
  try {
    const HetGraph& g = base.graph;
    std::unordered_set<EdgeId> removed;
    for (const auto& id : delta.at("del_edges")) {
      const auto it = base.edge_ids.find(id.get<std::string>());
      if (it == base.edge_ids.end()) throw DataError("delta removes unknown edge " + id.dump());
      removed.insert(it->second);
    }
    HetGraph::Builder b;
    for (const auto& t : g.node_type_names()) b.node_type(t);
    for (const auto& t : g.edge_type_names()) b.edge_type(t);
    for (NodeId n = 0; n < g.num_nodes(); ++n) {
      b.add_node(g.node_name(n), g.node_type_names()[g.node_type(n)], to_vector(g.features(n)));
    }
    for (const auto& n : delta.at("add_nodes")) {
      const NodeId origin = g.node(n.at("origin").get<std::string>());
      b.add_node(n.at("id").get<std::string>(), g.node_type_names()[g.node_type(origin)],
                 to_vector(g.features(origin)));
    }
    for (const Edge& e : g.edges()) {
      if (!removed.contains(e.id)) b.add_edge(e.src, e.dst, e.type, to_vector(g.edge_features(e.id)));
    }
    for (const auto& e : delta.at("add_edges")) {
      b.add_edge(e.at("src").get<std::string>(), e.at("dst").get<std::string>(),
                 e.at("type").get<std::string>());
    }
    return std::move(b).build();
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed delta: ") + e.what());
  }
}

}  // namespace pathex::bridge
