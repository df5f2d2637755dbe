#include "pathex/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathex/errors.hpp"
#include "pathex/explain.hpp"
#include "pathex/external_model.hpp"
#include "pathex/fidelity.hpp"
#include "pathex/graph_io.hpp"
#include "pathex/message_passing_model.hpp"
#include "pathex/property_checks.hpp"
#include "pathex/walk_sum_model.hpp"

namespace pathex {

namespace {

using Json = nlohmann::json;

struct GraphArgs {
  std::string nodes;
  std::string edges;
};

struct BackendArgs {
  std::string backend{"mp-hgn"};
  std::string endpoint;
  std::size_t classes{3};
  std::size_t layers{2};
  std::size_t hidden{8};
  std::string weights;
  std::string save_weights;
  long timeout_ms{10000};
};

struct CommonArgs {
  std::uint64_t seed{0};
  std::string out{"-"};
  std::size_t jobs{1};
  bool verbose{false};
};

struct ExplainArgs {
  std::string target;
  SearchConfig search;
};

struct VerifyArgs {
  std::size_t trials{100};
  std::size_t lambda{0};
  std::size_t max_nodes{12};
  std::size_t max_edges{30};
  std::size_t max_path_edges{4};
  std::string rule{"standard"};
};

struct EvaluateArgs {
  std::string samples;
  std::vector<std::string> targets;
  bool contrast{false};
  std::size_t sparsity{5};
  bool keep_incorrect{false};
  std::string records;
  SearchConfig search;
};

class Logger {
 public:
  Logger(std::ostream& err, bool verbose) : err_(err), verbose_(verbose) {}
  void info(const std::string& msg) const {
    if (verbose_) err_ << "pathex: " << msg << '\n';
  }
  void warn(const std::string& msg) const { err_ << "pathex: warning: " << msg << '\n'; }

 private:
  std::ostream& err_;
  bool verbose_;
};

void add_graph_options(CLI::App* cmd, GraphArgs& a) {
  cmd->add_option("--nodes", a.nodes, "Node table: id<TAB>type[<TAB>f1;f2;...]")->required();
  cmd->add_option("--edges", a.edges, "Edge table: src<TAB>dst<TAB>type")->required();
}

void add_backend_options(CLI::App* cmd, BackendArgs& a) {
  cmd->add_option("--backend", a.backend, "Model backend")
      ->check(CLI::IsMember({"walk-sum", "mp-hgn", "external"}))
      ->capture_default_str();
  cmd->add_option("--endpoint", a.endpoint,
                  "External model server: host:port or exec:<command>");
  cmd->add_option("--classes", a.classes, "Number of classes")->capture_default_str();
  cmd->add_option("--layers", a.layers,
                  "Message-passing layers (walk-sum: maximum walk length)")
      ->capture_default_str();
  cmd->add_option("--hidden", a.hidden, "Hidden size of the mp-hgn backend")->capture_default_str();
  cmd->add_option("--weights", a.weights, "Load mp-hgn weights from this file");
  cmd->add_option("--save-weights", a.save_weights, "Write the mp-hgn weights used to this file");
  cmd->add_option("--timeout-ms", a.timeout_ms, "External backend reply timeout")
      ->capture_default_str();
}

void add_common_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--seed", a.seed, "Seed for all randomness in the run")->capture_default_str();
  cmd->add_option("--out", a.out, "Output document path, - for standard output")
      ->capture_default_str();
  cmd->add_option("--jobs", a.jobs, "Maximum worker threads")->capture_default_str();
  cmd->add_flag("--verbose", a.verbose, "Log progress to standard error");
}

void add_search_options(CLI::App* cmd, SearchConfig& s) {
  cmd->add_option("--k", s.k, "Explanations returned per target")->capture_default_str();
  cmd->add_option("--b", s.b, "Paths kept per iteration")->capture_default_str();
  cmd->add_option("--m", s.m, "Extensions sampled per kept path")->capture_default_str();
  cmd->add_option("--lmax", s.lmax, "Maximum path length in edges (0: model depth)")
      ->capture_default_str();
}

HetGraph load(const GraphArgs& a, const Logger& log) {
  HetGraph g = load_graph(a.nodes, a.edges);
  log.info("loaded " + std::to_string(g.num_nodes()) + " nodes, " + std::to_string(g.num_edges()) +
           " edges");
  if (!g.is_heterogeneous()) {
    log.warn("graph has a single node type and a single edge type");
  }
  return g;
}

std::unique_ptr<Model> make_model(const BackendArgs& a, const HetGraph& g, std::uint64_t seed,
                                  std::size_t jobs) {
  if (a.classes == 0 || a.layers == 0) throw ConfigError("--classes and --layers must be >= 1");
  if (a.backend != "external" && !a.endpoint.empty()) {
    throw ConfigError("--endpoint requires --backend external");
  }
  if (a.backend == "walk-sum") {
    return std::make_unique<WalkSumModel>(
        WalkSumModel::seeded(a.classes, a.layers, g.num_node_types(), g.num_edge_types(), seed));
  }
  if (a.backend == "mp-hgn") {
    std::unique_ptr<MessagePassingModel> m;
    if (!a.weights.empty()) {
      std::ifstream in(a.weights);
      if (!in) throw DataError("cannot read weight file " + a.weights);
      m = std::make_unique<MessagePassingModel>(MessagePassingModel::load(in));
    } else {
      MessagePassingConfig cfg;
      cfg.num_classes = a.classes;
      cfg.layers = a.layers;
      cfg.hidden = a.hidden;
      cfg.seed = seed;
      m = std::make_unique<MessagePassingModel>(MessagePassingModel::random(g, cfg));
    }
    if (!a.save_weights.empty()) {
      std::ofstream out(a.save_weights);
      m->save(out);
      if (!out) throw DataError("cannot write weight file " + a.save_weights);
    }
    return m;
  }
  if (a.endpoint.empty()) throw ConfigError("--backend external requires --endpoint");
  ExternalModelOptions opts;
  opts.num_classes = a.classes;
  opts.receptive_depth = a.layers;
  opts.timeout = std::chrono::milliseconds(a.timeout_ms);
  opts.max_connections = std::max<std::size_t>(1, jobs);
  return std::make_unique<ExternalModel>(g, a.endpoint, opts);
}

void write_document(const std::string& path, const Json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  f << text;
  if (!f) throw DataError("cannot write " + path);
}

NodeId resolve_node(const HetGraph& g, const std::string& name) {
  if (const auto v = g.find_node(name)) return *v;
  throw DataError("unknown node '" + name + "'");
}

Json path_names(const HetGraph& g, const SimplePath& p) {
  Json names = Json::array();
  for (NodeId v : p.nodes) names.push_back(g.node_name(v));
  return names;
}

Json explanation_document(const HetGraph& g, NodeId target, const SearchResult& r) {
  Json xs = Json::array();
  for (const auto& x : r.explanations) {
    Json types = Json::array();
    for (EdgeId e : x.path.edges) types.push_back(g.edge_type_names()[g.edge(e).type]);
    xs.push_back(Json{{"path", path_names(g, x.path)},
                      {"edge_types", types},
                      {"score", x.score},
                      {"valid", x.valid},
                      {"label_flipped", x.label_flipped}});
  }
  return Json{{"target", g.node_name(target)},
              {"base_prediction", {{"label", r.base.label()}, {"probs", r.base.probs}}},
              {"explanations", xs},
              {"trace", {{"evaluated", r.trace.evaluated}, {"budget", r.trace.budget}}}};
}

Json report_document(const HetGraph& g, const FidelityReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back(Json{{"target", g.node_name(rec.target)},
                           {"label", rec.base_label},
                           {"induced_label", rec.induced_label},
                           {"prob_drop", rec.prob_drop}});
  }
  return Json{{"f_acc", r.f_acc}, {"f_prob", r.f_prob}, {"excluded", r.excluded},
              {"records", records}};
}

void write_records(const std::string& path, const HetGraph& g, const std::string& set,
                   const FidelityReport& r, bool append) {
  std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
  if (!append) f << "set\ttarget\tlabel\tinduced_label\tprob_drop\n";
  for (const auto& rec : r.records) {
    f << set << '\t' << g.node_name(rec.target) << '\t' << rec.base_label << '\t'
      << rec.induced_label << '\t' << format_double(rec.prob_drop) << '\n';
  }
  if (!f) throw DataError("cannot write " + path);
}

// Sample file: target<TAB>path[;path...][<TAB>label], each path a
// comma-separated node sequence ending at the target.
std::vector<FidelitySample> read_samples(const std::string& file, const HetGraph& g) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot read sample file " + file);
  std::vector<FidelitySample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fail = [&](const std::string& what) {
      return DataError(file + " line " + std::to_string(line_no) + ": " + what);
    };
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, '\t');) fields.push_back(f);
    if (fields.size() < 2 || fields.size() > 3) throw fail("expected 2 or 3 fields");
    FidelitySample s;
    try {
      s.target = resolve_node(g, fields[0]);
      std::istringstream ps(fields[1]);
      for (std::string path; std::getline(ps, path, ';');) {
        if (path.empty()) continue;
        std::vector<std::string> names;
        std::istringstream ns(path);
        for (std::string n; std::getline(ns, n, ',');) names.push_back(n);
        s.paths.push_back(path_from_names(g, names));
      }
      if (fields.size() == 3) {
        std::size_t label = 0;
        const auto& t = fields[2];
        const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), label);
        if (ec != std::errc{} || p != t.data() + t.size()) throw DataError("bad label '" + t + "'");
        s.label = label;
      }
    } catch (const DataError& e) {
      throw fail(e.what());
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw DataError("sample file " + file + " has no samples");
  return samples;
}

RewireRule parse_rule(const std::string& name) {
  if (name == "standard") return RewireRule::kStandard;
  if (name == "boundary-unaware") return RewireRule::kBoundaryUnaware;
  return RewireRule::kKeepFirstEdge;
}

int cmd_explain(const GraphArgs& ga, const BackendArgs& ba, const CommonArgs& ca,
                ExplainArgs ea, std::ostream& out, const Logger& log) {
  const HetGraph g = load(ga, log);
  std::mt19937_64 master(ca.seed);
  const std::uint64_t model_seed = master();
  ea.search.seed = master();
  ea.search.jobs = ca.jobs;
  const auto model = make_model(ba, g, model_seed, ca.jobs);
  const NodeId target = resolve_node(g, ea.target);
  const SearchResult r = search_topk(*model, g, target, ea.search);
  log.info("evaluated " + std::to_string(r.trace.evaluated) + " paths (budget " +
           std::to_string(r.trace.budget) + ", cache hits " + std::to_string(r.trace.cache_hits) +
           ")");
  write_document(ca.out, explanation_document(g, target, r), out);
  return kExitOk;
}

int cmd_verify(const CommonArgs& ca, const VerifyArgs& va, std::ostream& out, const Logger& log) {
  if (va.trials == 0) throw ConfigError("--trials must be >= 1");
  std::mt19937_64 master(ca.seed);
  SuiteConfig cfg;
  cfg.trials = va.trials;
  cfg.lambda = va.lambda;
  cfg.max_path_edges = va.max_path_edges;
  cfg.graphs.max_nodes = va.max_nodes;
  cfg.graphs.max_edges = va.max_edges;
  cfg.rule = parse_rule(va.rule);
  Json suites = Json::array();
  bool ok = true;
  for (auto run : {run_rewiring_suite, run_path_distinction_suite, run_walk_sum_suite}) {
    cfg.seed = master();
    const SuiteReport r = run(cfg);
    log.info(r.name + ": " + std::to_string(r.passed) + " passed, " + std::to_string(r.failed) +
             " failed");
    Json s{{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}};
    if (r.failed) {
      s["counterexample"] = r.first_counterexample;
      ok = false;
    }
    suites.push_back(std::move(s));
  }
  write_document(ca.out, Json{{"ok", ok}, {"suites", suites}}, out);
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_evaluate(const GraphArgs& ga, const BackendArgs& ba, const CommonArgs& ca,
                 EvaluateArgs ea, std::ostream& out, const Logger& log) {
  if (ea.samples.empty() == !ea.contrast) {
    throw ConfigError("give exactly one of --samples and --contrast");
  }
  const HetGraph g = load(ga, log);
  std::mt19937_64 master(ca.seed);
  const std::uint64_t model_seed = master();
  const auto model = make_model(ba, g, model_seed, ca.jobs);
  FidelityOptions opts;
  opts.sparsity = ea.sparsity;
  opts.require_correct = !ea.keep_incorrect;

  if (!ea.samples.empty()) {
    const auto samples = read_samples(ea.samples, g);
    const FidelityReport r = evaluate_fidelity(*model, g, samples, opts);
    if (!ea.records.empty()) write_records(ea.records, g, "samples", r, false);
    write_document(ca.out, report_document(g, r), out);
    return kExitOk;
  }

  std::vector<NodeId> targets;
  for (const auto& t : ea.targets) targets.push_back(resolve_node(g, t));
  if (targets.empty()) {
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (!g.in_edges(v).empty()) targets.push_back(v);
    }
  }
  ea.search.jobs = ca.jobs;
  std::vector<FidelitySample> top;
  std::vector<FidelitySample> bottom;
  std::size_t underfilled = 0;
  for (NodeId t : targets) {
    ea.search.seed = master();
    const SearchResult r = search_topk(*model, g, t, ea.search);
    if (r.explanations.empty()) continue;
    FidelitySample s{t, {}, std::nullopt};
    for (const auto& x : r.explanations) s.paths.push_back(x.path);
    top.push_back(std::move(s));
    BottomK b = bottom_k_paths(r.trace, ea.search.k);
    underfilled += b.underfilled ? 1 : 0;
    bottom.push_back(FidelitySample{t, std::move(b.paths), std::nullopt});
  }
  if (top.empty()) throw DataError("no target has an explanation");
  if (underfilled) {
    log.warn(std::to_string(underfilled) + " targets had fewer than k scored paths");
  }
  const FidelityReport rt = evaluate_fidelity(*model, g, top, opts);
  const FidelityReport rb = evaluate_fidelity(*model, g, bottom, opts);
  if (!ea.records.empty()) {
    write_records(ea.records, g, "top", rt, false);
    write_records(ea.records, g, "bottom", rb, true);
  }
  write_document(ca.out,
                 Json{{"top", report_document(g, rt)},
                      {"bottom", report_document(g, rb)},
                      {"underfilled", underfilled}},
                 out);
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explains heterogeneous graph node classifiers with influential paths"};
  app.name("pathex");
  app.require_subcommand(1);

  GraphArgs ga;
  BackendArgs ba;
  CommonArgs ca;
  ExplainArgs ea;
  VerifyArgs va;
  EvaluateArgs eva;

  auto* explain = app.add_subcommand("explain", "Top-k influential paths into a target node");
  add_graph_options(explain, ga);
  add_backend_options(explain, ba);
  add_common_options(explain, ca);
  add_search_options(explain, ea.search);
  explain->add_option("--target", ea.target, "Node to explain")->required();

  auto* verify = app.add_subcommand("verify", "Run the rewiring property suites on random graphs");
  add_common_options(verify, ca);
  verify->add_option("--trials", va.trials, "Trials per suite")->capture_default_str();
  verify->add_option("--lambda", va.lambda, "Walk length bound (0: max(path edges + 2, 6))")
      ->capture_default_str();
  verify->add_option("--max-nodes", va.max_nodes, "Node bound of random graphs")
      ->capture_default_str();
  verify->add_option("--max-edges", va.max_edges, "Edge bound of random graphs")
      ->capture_default_str();
  verify->add_option("--max-path-edges", va.max_path_edges, "Edge bound of random paths")
      ->capture_default_str();
  verify->add_option("--rule", va.rule, "Rewiring rule under test")
      ->check(CLI::IsMember({"standard", "boundary-unaware", "keep-first-edge"}))
      ->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Fidelity of explanation subgraphs");
  add_graph_options(evaluate, ga);
  add_backend_options(evaluate, ba);
  add_common_options(evaluate, ca);
  add_search_options(evaluate, eva.search);
  evaluate->add_option("--samples", eva.samples,
                       "Sample file: target<TAB>path;path[<TAB>label], paths as a,b,target");
  evaluate->add_flag("--contrast", eva.contrast,
                     "Search each target and compare top-k with bottom-k paths");
  evaluate->add_option("--target", eva.targets,
                       "Targets for --contrast (default: every node with in-edges)");
  evaluate->add_option("--sparsity", eva.sparsity, "Maximum nodes per explanation (0: no cap)")
      ->capture_default_str();
  evaluate->add_flag("--keep-incorrect", eva.keep_incorrect,
                     "Keep samples whose label differs from the prediction");
  evaluate->add_option("--records", eva.records, "Also write per-sample records as TSV");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const Logger log(err, ca.verbose);
  try {
    if (ca.jobs == 0) throw ConfigError("--jobs must be >= 1");
    if (explain->parsed()) return cmd_explain(ga, ba, ca, ea, out, log);
    if (verify->parsed()) return cmd_verify(ca, va, out, log);
    return cmd_evaluate(ga, ba, ca, eva, out, log);
  } catch (const ConfigError& e) {
    err << "pathex: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "pathex: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const BackendError& e) {
    err << "pathex: backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const Error& e) {
    err << "pathex: error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace pathex
