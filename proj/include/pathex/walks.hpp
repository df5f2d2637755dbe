#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pathex/graph_view.hpp"

namespace pathex {

/// Ordered node sequence joined by directed edges; repeats allowed.
/// `edges[i]` leads from `nodes[i]` to `nodes[i + 1]`.
struct Walk {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;

  std::size_t num_edges() const noexcept { return edges.size(); }
  friend bool operator==(const Walk&, const Walk&) = default;
  friend auto operator<=>(const Walk&, const Walk&) = default;
};

/// Directed path without repeated nodes, from a cause node to a target.
struct SimplePath {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;

  NodeId start() const { return nodes.front(); }
  NodeId target() const { return nodes.back(); }
  std::size_t num_edges() const noexcept { return edges.size(); }
  Walk as_walk() const { return Walk{nodes, edges}; }

  friend bool operator==(const SimplePath&, const SimplePath&) = default;
  friend auto operator<=>(const SimplePath&, const SimplePath&) = default;
};

/// Throws DataError unless w is a walk of at least one edge in g.
void validate_walk(const GraphView& g, const Walk& w);
/// Throws DataError unless p is a simple path of at least one edge in g.
void validate_path(const GraphView& g, const SimplePath& p);

/// Builds a path from node ids, resolving each hop to the lowest-id edge
/// between the pair. Throws DataError if a hop has no edge.
SimplePath path_from_names(const HetGraph& g, const std::vector<std::string>& names);

struct WalkEnumeration {
  std::vector<Walk> walks;
  bool truncated{false};
};

inline constexpr std::size_t kDefaultWalkLimit = 1'000'000;

/// Every walk ending at `target` with 1..max_edges edges, each exactly once
/// (walks are told apart by their edge-id sequence), in backward DFS
/// preorder over in-edges. Stops at `limit` walks and sets `truncated`.
WalkEnumeration enumerate_walks(const GraphView& g, NodeId target, std::size_t max_edges,
                                std::size_t limit = kDefaultWalkLimit);

/// Forward loop erasure: scan the walk keeping a stack of visited nodes and
/// pop the cycle whenever a node already on the stack is revisited.
SimplePath erase_loops(const Walk& w);

/// True iff some suffix of w starts at p.start(), ends at p.target() with
/// no earlier visit to the target, moves only by self-loops, by p's own
/// edges or against the direction of one of p's hops, and loop-erases to p.
bool is_associated(const Walk& w, const SimplePath& p);

std::vector<Walk> associated_walks(const GraphView& g, const SimplePath& p,
                                   std::size_t max_edges);

/// Equal length, node types and features match position by position, and
/// so do edge types and edge features.
bool walks_equivalent(const Walk& a, const GraphView& ga, const Walk& b, const GraphView& gb);

/// Byte string that is equal for two walks iff they are equivalent. Used to
/// compare walk sets up to equivalence.
std::string walk_signature(const Walk& w, const GraphView& g);

/// Debug form `A -e3-> B -e7-> C`.
std::string to_string(const Walk& w, const GraphView& g);
std::string to_string(const SimplePath& p, const GraphView& g);

}  // namespace pathex
