#include "pathex/property_checks.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "pathex/errors.hpp"
#include "pathex/explain.hpp"
#include "pathex/graph_io.hpp"
#include "pathex/walk_sum_model.hpp"

namespace pathex {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::set<std::string> signatures(const std::vector<Walk>& walks, const GraphView& g) {
  std::set<std::string> out;
  for (const auto& w : walks) out.insert(walk_signature(w, g));
  return out;
}

const Walk* find_by_signature(const std::vector<Walk>& walks, const GraphView& g,
                              const std::string& sig) {
  for (const auto& w : walks) {
    if (walk_signature(w, g) == sig) return &w;
  }
  return nullptr;
}

bool is_suffix(const SimplePath& shorter, const SimplePath& longer) {
  if (shorter.edges.size() > longer.edges.size()) return false;
  return std::equal(shorter.edges.rbegin(), shorter.edges.rend(), longer.edges.rbegin());
}

WalkEnumeration enumerate_checked(const GraphView& g, NodeId target, std::size_t lambda) {
  WalkEnumeration e = enumerate_walks(g, target, lambda);
  if (e.truncated) throw DataError("walk enumeration truncated; lower the walk bound");
  return e;
}

// A trial returns nullopt when the graph cannot host the check; the graph
// is then redrawn so every counted trial checks something.
template <typename Trial>
SuiteReport run_suite(std::string name, const SuiteConfig& cfg, Trial trial) {
  if (cfg.trials == 0) throw ConfigError("trial count must be >= 1");
  SuiteReport report;
  report.name = std::move(name);
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::optional<CheckResult> r;
    HetGraph g;
    std::vector<SimplePath> paths;
    for (int attempt = 0; !r; ++attempt) {
      if (attempt == 1000) throw ConfigError("random graph options never yield a usable case");
      g = random_graph(rng, cfg.graphs);
      paths.clear();
      r = trial(g, rng, paths);
    }
    if (r->passed) {
      ++report.passed;
      continue;
    }
    ++report.failed;
    if (report.first_counterexample.empty()) {
      report.first_counterexample =
          "trial " + std::to_string(t) + ": " + r->detail + "\n" + describe_case(g, paths);
    }
  }
  return report;
}

}  // namespace

HetGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& options) {
  if (options.max_nodes < 2 || options.max_edges < 1 || options.min_node_types < 1 ||
      options.max_node_types < options.min_node_types || options.max_edge_types < 1) {
    throw ConfigError("invalid random graph options");
  }
  const std::size_t n = uniform(rng, std::max<std::size_t>(2, options.min_node_types), options.max_nodes);
  const std::size_t node_types =
      uniform(rng, options.min_node_types, std::min(options.max_node_types, n));
  const std::size_t edge_types = uniform(rng, 1, options.max_edge_types);

  HetGraph::Builder b;
  std::uniform_real_distribution<double> feature(-1.0, 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    // The first node_types nodes cover every type once.
    const std::size_t t = v < node_types ? v : uniform(rng, 0, node_types - 1);
    std::vector<double> f(options.feature_dim);
    for (double& x : f) x = feature(rng);
    b.add_node("n" + std::to_string(v), "T" + std::to_string(t), std::move(f));
  }

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> used;
  bool has_path = false;
  // At most three edges per node keeps bounded walk counts enumerable.
  const std::size_t target_edges = uniform(rng, 1, std::min(options.max_edges, 3 * n));
  for (std::size_t attempt = 0; used.size() < target_edges && attempt < 20 * options.max_edges;
       ++attempt) {
    const std::size_t src = uniform(rng, 0, n - 1);
    const std::size_t dst = uniform(rng, 0, n - 1);
    if (src == dst && !options.self_loops) continue;
    const std::size_t s = uniform(rng, 0, edge_types - 1);
    if (!used.emplace(src, dst, s).second) continue;
    has_path = has_path || src != dst;
    b.add_edge(static_cast<NodeId>(src), static_cast<NodeId>(dst), b.edge_type("S" + std::to_string(s)));
  }
  if (!has_path && !used.contains({0, 1, 0})) b.add_edge(NodeId{0}, NodeId{1}, b.edge_type("S0"));
  return std::move(b).build();
}

std::vector<SimplePath> simple_paths_to(const HetGraph& g, NodeId target, std::size_t max_edges) {
  std::vector<SimplePath> out;
  SimplePath cur{{target}, {}};
  std::vector<bool> on_path(g.num_nodes(), false);
  on_path[target] = true;
  auto extend = [&](auto&& self) -> void {
    if (cur.edges.size() == max_edges) return;
    for (EdgeId e : g.in_edges(cur.nodes.front())) {
      const NodeId u = g.edge(e).src;
      if (on_path[u]) continue;
      cur.nodes.insert(cur.nodes.begin(), u);
      cur.edges.insert(cur.edges.begin(), e);
      on_path[u] = true;
      out.push_back(cur);
      self(self);
      on_path[u] = false;
      cur.nodes.erase(cur.nodes.begin());
      cur.edges.erase(cur.edges.begin());
    }
  };
  extend(extend);
  std::sort(out.begin(), out.end(), [](const SimplePath& a, const SimplePath& b) {
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    return a < b;
  });
  return out;
}

SimplePath random_path(const HetGraph& g, std::mt19937_64& rng, std::size_t max_edges) {
  std::vector<NodeId> targets;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    // A self-loop alone gives no simple path.
    for (EdgeId e : g.in_edges(v)) {
      if (!g.edge(e).is_self_loop()) {
        targets.push_back(v);
        break;
      }
    }
  }
  if (targets.empty()) throw DataError("graph has no simple path");
  const NodeId t = targets[uniform(rng, 0, targets.size() - 1)];
  const auto paths = simple_paths_to(g, t, max_edges);
  return paths[uniform(rng, 0, paths.size() - 1)];
}

std::size_t default_walk_bound(const SimplePath& p) {
  return std::max<std::size_t>(p.num_edges() + 2, 6);
}

CheckResult check_rewiring(const HetGraph& g, const SimplePath& p, std::size_t lambda,
                           RewireRule rule) {
  const GraphView base(g);
  const GraphView rewired = rewire(g, p, rule);
  const auto all = enumerate_checked(base, p.target(), lambda).walks;
  std::vector<Walk> kept;
  std::vector<Walk> blocked;
  for (const auto& w : all) (is_associated(w, p) ? blocked : kept).push_back(w);
  const auto after = enumerate_checked(rewired, p.target(), lambda).walks;

  const auto want = signatures(kept, base);
  const auto blocked_sigs = signatures(blocked, base);
  const auto got = signatures(after, rewired);
  if (want == got) return {};

  CheckResult r{false, {}};
  for (const auto& sig : got) {
    if (want.contains(sig)) continue;
    const Walk* w = find_by_signature(after, rewired, sig);
    r.detail = (blocked_sigs.contains(sig) ? "associated walk not blocked: " : "spurious walk: ") +
               to_string(*w, rewired);
    return r;
  }
  for (const auto& sig : want) {
    if (got.contains(sig)) continue;
    r.detail = "walk lost: " + to_string(*find_by_signature(kept, base, sig), base);
    return r;
  }
  return r;
}

CheckResult check_path_distinction(const HetGraph& g, const SimplePath& p1, const SimplePath& p2) {
  if (p1 == p2) throw DataError("paths must differ");
  if (p1.target() != p2.target()) throw DataError("paths must end at the same node");
  const std::size_t lambda = std::max(p1.num_edges(), p2.num_edges()) + 2;
  const auto w1 = associated_walks(g, p1, lambda);
  const auto w2 = associated_walks(g, p2, lambda);
  const std::set<Walk> s1(w1.begin(), w1.end());
  const std::set<Walk> s2(w2.begin(), w2.end());
  if (s1 == s2) return {false, "associated walk sets are equal"};
  // The path that is not a suffix of the other is its own witness.
  const bool p1_witness = !is_suffix(p2, p1);
  const SimplePath& wit = p1_witness ? p1 : p2;
  const auto& own = p1_witness ? s1 : s2;
  const auto& other = p1_witness ? s2 : s1;
  if (!own.contains(wit.as_walk()) || other.contains(wit.as_walk())) {
    return {false, "path " + to_string(wit, g) + " does not separate the sets"};
  }
  return {};
}

CheckResult check_walk_sum_consistency(const HetGraph& g, const SimplePath& p,
                                       std::uint64_t model_seed, std::size_t lambda,
                                       RewireRule rule, double tolerance) {
  const std::size_t classes = 3;
  const auto model = WalkSumModel::seeded(classes, lambda, g.num_node_types(),
                                          g.num_edge_types(), model_seed);
  const GraphView base(g);
  auto expected = model.class_scores(base, p.target());
  for (const auto& w : associated_walks(base, p, lambda)) {
    for (std::size_t c = 0; c < classes; ++c) expected[c] -= model.walk_weight(base, w, c);
  }
  const auto got = model.class_scores(rewire(g, p, rule), p.target());
  for (std::size_t c = 0; c < classes; ++c) {
    if (std::abs(got[c] - expected[c]) > tolerance) {
      std::ostringstream out;
      out << "class " << c << " score " << format_double(got[c]) << " != "
          << format_double(expected[c]);
      return {false, out.str()};
    }
  }
  const Prediction before{softmax(model.class_scores(base, p.target()))};
  const std::vector<double> after = softmax(expected);
  const double measured = influence_score(model, g, p, rule).score;
  // Subtraction leaves rounding residue, so when classes tie within the
  // tolerance (e.g. every walk blocked) any tied class may be the argmax.
  const std::size_t y = before.label();
  const double top = *std::max_element(after.begin(), after.end());
  double analytic = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (top - after[c] > tolerance) continue;
    analytic = (c == y ? -1.0 : 1.0) + (before.probs[y] - after[y]);
    if (std::abs(analytic - measured) <= tolerance) return {};
  }
  return {false, "influence " + format_double(measured) + " != " + format_double(analytic)};
}

SuiteReport run_rewiring_suite(const SuiteConfig& cfg) {
  return run_suite("rewiring", cfg, [&](const HetGraph& g, std::mt19937_64& rng,
                                        std::vector<SimplePath>& paths) {
    const SimplePath p = random_path(g, rng, cfg.max_path_edges);
    paths = {p};
    return std::optional<CheckResult>{
        check_rewiring(g, p, cfg.lambda ? cfg.lambda : default_walk_bound(p), cfg.rule)};
  });
}

SuiteReport run_path_distinction_suite(const SuiteConfig& cfg) {
  return run_suite("path-distinction", cfg, [&](const HetGraph& g, std::mt19937_64& rng,
                                                std::vector<SimplePath>& paths) {
    std::vector<std::vector<SimplePath>> candidates;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      auto all = simple_paths_to(g, v, cfg.max_path_edges);
      if (all.size() >= 2) candidates.push_back(std::move(all));
    }
    if (candidates.empty()) return std::optional<CheckResult>{};
    const auto& all = candidates[uniform(rng, 0, candidates.size() - 1)];
    const std::size_t i = uniform(rng, 0, all.size() - 1);
    std::size_t j = uniform(rng, 0, all.size() - 2);
    if (j >= i) ++j;
    paths = {all[i], all[j]};
    return std::optional<CheckResult>{check_path_distinction(g, all[i], all[j])};
  });
}

SuiteReport run_walk_sum_suite(const SuiteConfig& cfg) {
  return run_suite("walk-sum", cfg, [&](const HetGraph& g, std::mt19937_64& rng,
                                        std::vector<SimplePath>& paths) {
    const SimplePath p = random_path(g, rng, cfg.max_path_edges);
    paths = {p};
    const std::uint64_t model_seed = rng();
    return std::optional<CheckResult>{check_walk_sum_consistency(
        g, p, model_seed, cfg.lambda ? cfg.lambda : default_walk_bound(p), cfg.rule)};
  });
}

std::string describe_case(const HetGraph& g, const std::vector<SimplePath>& paths) {
  std::ostringstream nodes;
  std::ostringstream edges;
  write_graph(g, nodes, edges);
  std::string out = "# nodes\n" + nodes.str() + "# edges\n" + edges.str();
  for (const auto& p : paths) out += "# path " + to_string(p, g) + "\n";
  return out;
}

}  // namespace pathex
