#include "pathex/fidelity.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "pathex/errors.hpp"

namespace pathex {

namespace {

void check_paths(const HetGraph& g, std::span<const SimplePath> paths, NodeId target) {
  if (target >= g.num_nodes()) throw DataError("unknown target node");
  for (const auto& p : paths) {
    validate_path(g, p);
    if (p.target() != target) throw DataError("explanation path does not end at the target");
  }
}

}  // namespace

HetGraph induce_explanation_graph(const HetGraph& g, std::span<const SimplePath> paths,
                                  NodeId target) {
  check_paths(g, paths, target);
  std::set<NodeId> nodes{target};
  std::set<EdgeId> edges;
  for (const auto& p : paths) {
    nodes.insert(p.nodes.begin(), p.nodes.end());
    edges.insert(p.edges.begin(), p.edges.end());
  }
  HetGraph::Builder b;
  // Intern every type up front so type ids match the source graph.
  for (const auto& t : g.node_type_names()) b.node_type(t);
  for (const auto& t : g.edge_type_names()) b.edge_type(t);
  for (NodeId v : nodes) {
    const auto f = g.features(v);
    b.add_node(g.node_name(v), g.node_type_names()[g.node_type(v)], {f.begin(), f.end()});
  }
  for (EdgeId e : edges) {
    const Edge& edge = g.edge(e);
    const auto f = g.edge_features(e);
    b.add_edge(g.node_name(edge.src), g.node_name(edge.dst), g.edge_type_names()[edge.type],
               {f.begin(), f.end()});
  }
  return std::move(b).build();
}

GraphView explanation_view(const HetGraph& g, std::span<const SimplePath> paths, NodeId target) {
  check_paths(g, paths, target);
  std::unordered_set<EdgeId> keep;
  for (const auto& p : paths) keep.insert(p.edges.begin(), p.edges.end());
  std::vector<EdgeId> removed;
  for (const Edge& e : g.edges()) {
    if (!keep.contains(e.id)) removed.push_back(e.id);
  }
  return GraphView(g, {}, {}, std::move(removed));
}

std::vector<SimplePath> limit_sparsity(std::span<const SimplePath> ranked, NodeId target,
                                       std::size_t max_nodes) {
  if (max_nodes == 0) return {ranked.begin(), ranked.end()};
  std::vector<SimplePath> out;
  std::unordered_set<NodeId> nodes{target};
  for (const auto& p : ranked) {
    std::unordered_set<NodeId> grown = nodes;
    grown.insert(p.nodes.begin(), p.nodes.end());
    if (grown.size() > max_nodes) break;
    nodes = std::move(grown);
    out.push_back(p);
  }
  return out;
}

FidelityReport evaluate_fidelity(const Model& model, const HetGraph& g,
                                 std::span<const FidelitySample> samples,
                                 const FidelityOptions& options) {
  FidelityReport report;
  for (const auto& s : samples) {
    const Prediction base = model.predict(g, s.target);
    const std::size_t y = base.label();
    if (options.require_correct && s.label && *s.label != y) {
      ++report.excluded;
      continue;
    }
    const auto paths = limit_sparsity(s.paths, s.target, options.sparsity);
    const Prediction induced = model.predict(explanation_view(g, paths, s.target), s.target);
    report.records.push_back(
        FidelityRecord{s.target, y, induced.label(), base.probs[y] - induced.probs[y]});
  }
  if (report.records.empty()) throw DataError("no samples to evaluate");
  double acc = 0.0;
  double prob = 0.0;
  for (const auto& r : report.records) {
    acc += r.base_label == r.induced_label ? 0.0 : 1.0;
    prob += r.prob_drop;
  }
  const auto n = static_cast<double>(report.records.size());
  report.f_acc = acc / n;
  report.f_prob = prob / n;
  return report;
}

BottomK bottom_k_paths(const SearchTrace& trace, std::size_t k) {
  std::vector<const Explanation*> order;
  std::set<SimplePath> seen;
  for (const auto& x : trace.scored) {
    if (seen.insert(x.path).second) order.push_back(&x);
  }
  std::sort(order.begin(), order.end(), [](const Explanation* a, const Explanation* b) {
    return ranks_before(*b, *a);
  });
  BottomK out;
  out.underfilled = order.size() < k;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) out.paths.push_back(order[i]->path);
  return out;
}

}  // namespace pathex
