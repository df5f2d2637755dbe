#pragma once

#include "pathex/graph_view.hpp"
#include "pathex/walks.hpp"

namespace pathex {

enum class RewireRule {
  /// Proxy construction that blocks exactly the walks associated with the
  /// path and preserves every other walk into the target.
  kStandard,
  /// The bare proxy rules without the two boundary completions (see
  /// rewire()). Fails to preserve some walks when the first hop has a
  /// reverse edge or when the target has out-edges.
  kBoundaryUnaware,
  /// Negative control: like kStandard but keeps the first path edge, so
  /// the path itself is never blocked.
  kKeepFirstEdge,
};

/// Builds the rewired view for P = <v, v1, ..., vL, vt>.
///
/// Each interior node vi gets a proxy with the same type and features.
/// With proxy(v) = v and proxy(vt) = vt:
///  - an in-edge <u, vi> that is a self-loop, one of P's edges, or the
///    reverse of one of P's hops is copied as <proxy(u), proxy(vi)>;
///  - an out-edge <vi, u> that is none of those is copied as <proxy(vi), u>;
///  - P's first edge <v, v1> is removed.
/// Copies keep the original edge's type and features.
///
/// kStandard adds two completions so that walks leaving the proxy lane
/// through a path endpoint are kept:
///  - a reverse edge <v1, v> is copied as <proxy(v1), v>, since returning to
///    the cause node restarts the walk;
///  - if vt has out-edges, vt also gets a proxy reached by a copy of P's last
///    edge, whose out-edges copy vt's and lead back to original nodes. The
///    in-edge copy <vt, proxy(vL)> is not made: walks leaving the original
///    vt are not on the lane.
///
/// Throws DataError if P is not a simple path of g with at least one edge.
GraphView rewire(const HetGraph& g, const SimplePath& p,
                 RewireRule rule = RewireRule::kStandard);

}  // namespace pathex
