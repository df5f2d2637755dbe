#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "pathex/graph_view.hpp"

// Messages of the newline-delimited JSON protocol spoken with external model
// servers. Nodes are addressed by name, edges by "e<id>", types by name.
//
//   {"op":"init","nodes":[...],"edges":[...],"classes":k}  -> {"ok":true}
//   {"op":"predict","rid":n,"target":id,"delta":{...}}      -> {"rid":n,"probs":[...]}
//   {"op":"shutdown"}
//
// A server may answer any request with {"rid":n,"error":"..."}.

namespace pathex::bridge {

using Json = nlohmann::json;

std::string edge_id(EdgeId e);

Json init_message(const HetGraph& g, std::size_t classes);

/// Carries only the view's delta: proxies (with origin, type and features),
/// added edges and removed base edges.
Json predict_message(const GraphView& view, NodeId target, std::uint64_t rid);

Json shutdown_message();

/// Throws BackendError for malformed JSON, a missing `ok`, or an error reply.
void check_init_response(std::string_view line);

/// Parses and validates a predict reply: matching rid, `classes` entries,
/// each in [0, 1], summing to 1 within 1e-9. Throws BackendError otherwise.
std::vector<double> parse_predict_response(std::string_view line, std::uint64_t rid,
                                           std::size_t classes);

// Server side.

struct SessionGraph {
  HetGraph graph;
  std::unordered_map<std::string, EdgeId> edge_ids;
  std::size_t classes{0};
};

/// Throws DataError for malformed messages.
SessionGraph graph_from_init(const Json& init);

/// Copy of the session graph with the delta applied. Base nodes keep their
/// ids and proxies follow; edge ids are renumbered.
HetGraph apply_delta(const SessionGraph& base, const Json& delta);

}  // namespace pathex::bridge
