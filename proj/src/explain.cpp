#include "pathex/explain.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "pathex/errors.hpp"

namespace pathex {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

void score_all(const Model& model, const HetGraph& g, const Prediction& base,
               const std::vector<SimplePath>& paths, std::vector<Explanation>& out,
               std::size_t jobs) {
  out.assign(paths.size(), Explanation{});
  const std::size_t workers = std::min(jobs, paths.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      out[i] = influence_score(model, g, paths[i], base);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < paths.size(); i = next++) {
            out[i] = influence_score(model, g, paths[i], base);
          }
        } catch (...) {
          errors[w] = std::current_exception();
          next = paths.size();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

double influence(const Prediction& base, const Prediction& perturbed) {
  if (base.probs.size() != perturbed.probs.size()) {
    throw BackendError("predictions have different class counts");
  }
  const std::size_t y = base.label();
  const double sign = y == perturbed.label() ? -1.0 : 1.0;
  return sign + (base.probs[y] - perturbed.probs[y]);
}

Explanation make_explanation(SimplePath path, const Prediction& base,
                             const Prediction& perturbed) {
  Explanation x;
  x.path = std::move(path);
  x.score = influence(base, perturbed);
  x.valid = x.score >= -1.0;
  x.label_flipped = base.label() != perturbed.label();
  return x;
}

Explanation influence_score(const Model& model, const HetGraph& g, const SimplePath& p,
                            RewireRule rule) {
  validate_path(g, p);
  return influence_score(model, g, p, model.predict(g, p.target()), rule);
}

Explanation influence_score(const Model& model, const HetGraph& g, const SimplePath& p,
                            const Prediction& base, RewireRule rule) {
  const GraphView rewired = rewire(g, p, rule);
  return make_explanation(p, base, model.predict(rewired, p.target()));
}

bool ranks_before(const Explanation& a, const Explanation& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.path.num_edges() != b.path.num_edges()) return a.path.num_edges() < b.path.num_edges();
  if (a.path.nodes != b.path.nodes) return a.path.nodes < b.path.nodes;
  return a.path.edges < b.path.edges;
}

std::string score_cache_key(const SimplePath& p) {
  std::string key;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    key += std::to_string(p.nodes[i]);
    if (i < p.edges.size()) key += ">" + std::to_string(p.edges[i]) + ">";
  }
  return key;
}

SearchResult search_topk(const Model& model, const HetGraph& g, NodeId target,
                         const SearchConfig& cfg) {
  if (cfg.b == 0 || cfg.m == 0 || cfg.k == 0) throw ConfigError("b, m and k must be >= 1");
  if (target >= g.num_nodes()) throw DataError("unknown target node");
  const std::size_t lmax = cfg.lmax ? cfg.lmax : model.receptive_depth();
  if (lmax == 0) throw ConfigError("lmax must be >= 1");

  SearchResult result;
  SearchTrace& trace = result.trace;
  trace.budget = saturating_mul(saturating_mul(cfg.b, cfg.m), lmax);
  trace.max_degree = g.max_degree();
  result.base = model.predict(g, target);

  std::mt19937_64 rng(cfg.seed);
  std::unordered_map<std::string, std::size_t> cache;

  // The anchor <target> is tracked by a flag; it is never scored or returned.
  const SimplePath anchor{{target}, {}};
  std::vector<Explanation> kept;
  bool kept_anchor = true;
  std::vector<std::string> kept_keys{"anchor"};
  std::vector<std::string> prev_keys;
  std::size_t i = 0;

  while (kept_keys != prev_keys && i < lmax) {
    prev_keys = kept_keys;
    const std::vector<Explanation> frontier_src = kept;
    const bool frontier_anchor = kept_anchor;
    ++i;

    std::vector<const SimplePath*> frontier;
    if (i == 1 && frontier_anchor) frontier.push_back(&anchor);
    for (const auto& x : frontier_src) {
      if (x.path.nodes.size() == i) frontier.push_back(&x.path);
    }

    std::vector<SimplePath> fresh;
    for (const SimplePath* p : frontier) {
      const NodeId far = p->nodes.front();
      std::vector<EdgeId> eligible;
      for (EdgeId e : g.in_edges(far)) {
        const NodeId u = g.edge(e).src;
        if (std::find(p->nodes.begin(), p->nodes.end(), u) == p->nodes.end()) {
          eligible.push_back(e);
        }
      }
      const std::size_t take = std::min(cfg.m, eligible.size());
      for (std::size_t j = 0; j < take; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, eligible.size() - 1);
        std::swap(eligible[j], eligible[pick(rng)]);
      }
      eligible.resize(take);
      for (EdgeId e : eligible) {
        SimplePath ext;
        ext.nodes.reserve(p->nodes.size() + 1);
        ext.nodes.push_back(g.edge(e).src);
        ext.nodes.insert(ext.nodes.end(), p->nodes.begin(), p->nodes.end());
        ext.edges.push_back(e);
        ext.edges.insert(ext.edges.end(), p->edges.begin(), p->edges.end());
        if (cache.contains(score_cache_key(ext))) {
          ++trace.cache_hits;
          continue;
        }
        cache.emplace(score_cache_key(ext), trace.scored.size() + fresh.size());
        fresh.push_back(std::move(ext));
      }
    }

    std::vector<Explanation> scored;
    score_all(model, g, result.base, fresh, scored, cfg.jobs);
    trace.evaluated += scored.size();

    std::vector<Explanation> pool = frontier_src;
    for (auto& x : scored) {
      trace.max_path_edges = std::max(trace.max_path_edges, x.path.num_edges());
      trace.scored.push_back(x);
      pool.push_back(std::move(x));
    }
    std::sort(pool.begin(), pool.end(), ranks_before);
    if (pool.size() > cfg.b) pool.resize(cfg.b);
    kept = std::move(pool);
    kept_anchor = false;

    kept_keys.clear();
    std::vector<SimplePath> snapshot;
    for (const auto& x : kept) {
      kept_keys.push_back(score_cache_key(x.path));
      snapshot.push_back(x.path);
    }
    std::sort(kept_keys.begin(), kept_keys.end());
    trace.kept.push_back(std::move(snapshot));
  }
  trace.iterations = i;

  result.explanations = trace.scored;
  std::sort(result.explanations.begin(), result.explanations.end(), ranks_before);
  if (result.explanations.size() > cfg.k) result.explanations.resize(cfg.k);
  return result;
}

}  // namespace pathex
