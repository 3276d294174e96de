/*
Copyright (c) 2026 The jwp authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Command-line front end: propagation runs, synthetic data, evaluation and
// benchmarks. Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jwp/engine.hpp"
#include "jwp/error.hpp"
#include "jwp/eval.hpp"
#include "jwp/graph.hpp"
#include "jwp/kernels.hpp"
#include "jwp/labels.hpp"
#include "jwp/synth.hpp"

namespace {

using namespace jwp;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

Method parse_method(const std::string& name, bool directed) {
  static const std::map<std::string, std::pair<Method, Method>> table = {
      {"lbp", {Method::LbpU, Method::LbpD}},
      {"lbp-jwp", {Method::LbpJwpU, Method::LbpJwpD}},
      {"rw-n", {Method::RwN, Method::RwN}},
      {"rw-p", {Method::RwP, Method::RwP}},
      {"rw-b", {Method::RwB, Method::RwB}},
      {"rw-jwp", {Method::RwJwpU, Method::RwJwpU}},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw InputError("unknown method: " + name);
  const Method m = directed ? it->second.second : it->second.first;
  if (directed && is_random_walk(m))
    throw InputError("random-walk methods run on undirected graphs only");
  return m;
}

RegularizerKind parse_reg(const std::string& name) {
  if (name == "consistency") return RegularizerKind::Consistency;
  if (name == "l1") return RegularizerKind::L1;
  if (name == "l2") return RegularizerKind::L2;
  if (name == "none") return RegularizerKind::None;
  throw InputError("unknown regularizer: " + name);
}

std::optional<double> parse_auto(const std::string& text, const char* flag) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(std::string(flag) + " expects a number or 'auto'");
}

template <typename T>
std::vector<T> parse_list(const std::vector<std::string>& items, const char* flag) {
  std::vector<T> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      std::istringstream is(part);
      T value{};
      if (!(is >> value) || !is.eof())
        throw InputError(std::string(flag) + ": cannot parse '" + part + "'");
      out.push_back(value);
    }
  }
  return out;
}

void write_log_header(std::ostream& out) {
  out << "t\tconvergence\tloss\tconsistency\tgrad_inf\tmean_homogeneous_w\t"
         "mean_heterogeneous_w\twall_ms\n";
}

void write_log_row(std::ostream& out, const AlternationDiagnostics& d) {
  out << d.t << '\t' << d.convergence << '\t' << d.loss << '\t'
      << d.consistency << '\t' << d.grad_inf << '\t' << d.mean_homogeneous_w
      << '\t' << d.mean_heterogeneous_w << '\t' << d.wall_ms << '\n';
}

struct RunArgs {
  std::string graph, format = "edgelist", train, method = "lbp-jwp",
              reg = "consistency", lambda = "auto", w0 = "auto",
              renorm = "clamp", out, log, truth, rw_norm = "receiver",
              isa = "auto";
  bool directed = false, undirected = false;
  double gamma = 1.0, theta = 1.0, clamp = 0.5, tol = 1e-3, restart = 0.15;
  std::size_t max_alt = 15, inner_iters = 1;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

int cmd_run(const RunArgs& a) {
  if (a.format != "edgelist") throw InputError("unsupported graph format: " + a.format);
  if (a.directed && a.undirected)
    throw InputError("--directed and --undirected are exclusive");
  if (a.isa == "scalar") kernels::select(kernels::Isa::Scalar);
  else if (a.isa == "avx2") kernels::select(kernels::Isa::Avx2);
  else if (a.isa != "auto") throw InputError("unknown --isa: " + a.isa);

  LoadStats stats;
  const Graph g = load_edge_list(a.graph, a.directed, &stats);
  if (stats.self_loops)
    std::cerr << "dropped " << stats.self_loops << " self-loops\n";
  const LabelSet train = read_labels(a.train);

  JwpConfig cfg;
  cfg.method = parse_method(a.method, a.directed);
  cfg.regularizer = parse_reg(a.reg);
  cfg.lambda = parse_auto(a.lambda, "--lambda");
  cfg.w0 = parse_auto(a.w0, "--w0");
  cfg.gamma = a.gamma;
  cfg.theta = a.theta;
  cfg.clamp_bound = a.clamp;
  cfg.max_alternations = a.max_alt;
  cfg.tolerance = a.tol;
  cfg.restart = a.restart;
  cfg.inner_iters = a.inner_iters;
  cfg.threads = a.threads;
  cfg.seed = a.seed;
  if (a.renorm == "clamp") cfg.renorm = Renorm::Clamp;
  else if (a.renorm == "rescale") cfg.renorm = Renorm::Rescale;
  else throw InputError("--renorm must be clamp or rescale");
  if (a.rw_norm == "receiver") cfg.rw_normalization = RwNormalization::Receiver;
  else if (a.rw_norm == "sender") cfg.rw_normalization = RwNormalization::Sender;
  else throw InputError("--rw-norm must be receiver or sender");

  std::optional<LabelSet> truth;
  if (!a.truth.empty()) truth = read_labels(a.truth);

  std::ofstream log;
  AlternationObserver observer;
  if (!a.log.empty()) {
    log.open(a.log);
    if (!log) throw InputError("cannot write log: " + a.log);
    write_log_header(log);
    cfg.diagnostics = true;
    observer = [&log](const AlternationDiagnostics& d) { write_log_row(log, d); };
  }

  const RunResult result = run(g, train, cfg, truth ? &*truth : nullptr, observer);
  if (!a.out.empty()) rank_and_write(result.posteriors, g.original_ids(), a.out);
  std::cerr << method_name(cfg.method) << ": " << result.alternations
            << " alternations, converged=" << (result.converged ? "true" : "false")
            << ", lambda=" << result.lambda << ", w0=" << result.w0
            << ", kernels=" << kernels::name(kernels::active_isa()) << '\n';
  return 0;
}

int cmd_eval(const std::string& scores_path, const std::string& truth_path,
             const std::string& exclude_path) {
  const auto rows = read_scores(scores_path);
  const LabelSet truth = read_labels(truth_path);
  LabelSet exclude;
  if (!exclude_path.empty()) exclude = read_labels(exclude_path);
  std::uint64_t max_id = 0;
  for (const auto& r : rows) max_id = std::max(max_id, r.id);
  for (NodeId u : truth.positives) max_id = std::max<std::uint64_t>(max_id, u);
  for (NodeId u : truth.negatives) max_id = std::max<std::uint64_t>(max_id, u);
  std::vector<double> scores(max_id + 1, std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : rows) scores[r.id] = r.posterior;
  const AucReport report = auc(scores, truth, exclude);
  std::printf("AUC\t%.10g\n", report.auc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective classification with joint weight learning and propagation"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Propagate reputation scores");
  run_cmd->add_option("--graph", ra.graph, "Edge list")->required();
  run_cmd->add_option("--format", ra.format, "Graph format (edgelist)");
  run_cmd->add_flag("--directed", ra.directed, "Treat edges as directed");
  run_cmd->add_flag("--undirected", ra.undirected, "Treat edges as undirected (default)");
  run_cmd->add_option("--train", ra.train, "Training labels")->required();
  run_cmd->add_option("--method", ra.method, "lbp|lbp-jwp|rw-n|rw-p|rw-b|rw-jwp");
  run_cmd->add_option("--reg", ra.reg, "consistency|l1|l2|none");
  run_cmd->add_option("--lambda", ra.lambda, "Regularization weight or 'auto'");
  run_cmd->add_option("--gamma", ra.gamma, "Learning rate");
  run_cmd->add_option("--theta", ra.theta, "Prior magnitude");
  run_cmd->add_option("--w0", ra.w0, "Initial weight or 'auto' (1/average degree)");
  run_cmd->add_option("--clamp", ra.clamp, "Weight bound");
  run_cmd->add_option("--max-alt", ra.max_alt, "Maximum alternations");
  run_cmd->add_option("--tol", ra.tol, "Relative L1 convergence tolerance");
  run_cmd->add_option("--restart", ra.restart, "Random-walk restart probability");
  run_cmd->add_option("--renorm", ra.renorm, "clamp|rescale");
  run_cmd->add_option("--rw-norm", ra.rw_norm, "RW-B normalization: receiver|sender");
  run_cmd->add_option("--inner-iters", ra.inner_iters, "Gradient steps per alternation");
  run_cmd->add_option("--threads", ra.threads, "Worker threads");
  run_cmd->add_option("--seed", ra.seed, "Seed (recorded; runs are deterministic)");
  run_cmd->add_option("--out", ra.out, "Ranked scores TSV");
  run_cmd->add_option("--log", ra.log, "Per-alternation diagnostics TSV");
  run_cmd->add_option("--truth", ra.truth, "Ground truth for homophily weight means in the log");
  run_cmd->add_option("--isa", ra.isa, "Kernel variant: auto|scalar|avx2");

  std::size_t pa_nodes = 0, pa_m = 0;
  std::uint64_t pa_seed = 0;
  double pa_keep = 0.0;
  std::string pa_out, pa_out_directed;
  auto* pa_cmd = app.add_subcommand("gen-pa", "Preferential-attachment graph");
  pa_cmd->add_option("--nodes", pa_nodes)->required();
  pa_cmd->add_option("--m", pa_m)->required();
  pa_cmd->add_option("--seed", pa_seed);
  pa_cmd->add_option("--out", pa_out)->required();
  pa_cmd->add_option("--directed-keep", pa_keep, "Fraction of ordered pairs kept");
  pa_cmd->add_option("--out-directed", pa_out_directed);

  std::string sy_graph, sy_out_graph, sy_out_truth;
  std::size_t sy_k = 0;
  std::uint64_t sy_seed = 0;
  auto* sy_cmd = app.add_subcommand("synth-sybil", "Replicate a graph as a planted Sybil region");
  sy_cmd->add_option("--graph", sy_graph)->required();
  sy_cmd->add_option("--attack-edges", sy_k)->required();
  sy_cmd->add_option("--seed", sy_seed);
  sy_cmd->add_option("--out-graph", sy_out_graph)->required();
  sy_cmd->add_option("--out-truth", sy_out_truth)->required();

  std::string st_truth, st_out;
  std::size_t st_pos = 0, st_neg = 0;
  std::uint64_t st_seed = 0;
  auto* st_cmd = app.add_subcommand("sample-train", "Sample a training set");
  st_cmd->add_option("--truth", st_truth)->required();
  st_cmd->add_option("--pos", st_pos)->required();
  st_cmd->add_option("--neg", st_neg)->required();
  st_cmd->add_option("--seed", st_seed);
  st_cmd->add_option("--out", st_out)->required();

  std::string nz_train, nz_out;
  double nz_alpha = 0.0;
  std::uint64_t nz_seed = 0;
  auto* nz_cmd = app.add_subcommand("noise", "Flip a percentage of training labels");
  nz_cmd->add_option("--train", nz_train)->required();
  nz_cmd->add_option("--alpha", nz_alpha, "Percent of each class to flip")->required();
  nz_cmd->add_option("--seed", nz_seed);
  nz_cmd->add_option("--out", nz_out)->required();

  std::string ev_scores, ev_truth, ev_exclude;
  auto* ev_cmd = app.add_subcommand("eval", "AUC of a score file");
  ev_cmd->add_option("--scores", ev_scores)->required();
  ev_cmd->add_option("--truth", ev_truth)->required();
  ev_cmd->add_option("--exclude", ev_exclude, "Nodes left out of the evaluation");

  std::vector<std::string> bn_methods, bn_edges, bn_seeds;
  std::size_t bn_alt = 10, bn_m = 10;
  double bn_min_ms = 0.0, bn_keep = 0.5;
  unsigned bn_threads = 1;
  bool bn_directed = false;
  std::string bn_out;
  auto* bn_cmd = app.add_subcommand("bench", "Time methods on preferential-attachment graphs");
  bn_cmd->add_option("--method", bn_methods, "Comma-separated methods")->required();
  bn_cmd->add_option("--edges-grid", bn_edges, "Comma-separated edge counts")->required();
  bn_cmd->add_option("--seeds", bn_seeds, "Comma-separated seeds")->required();
  bn_cmd->add_option("--alt", bn_alt, "Alternations per run");
  bn_cmd->add_option("--out", bn_out)->required();
  bn_cmd->add_option("--m", bn_m, "Attachment parameter");
  bn_cmd->add_flag("--directed", bn_directed, "Use directed methods on sampled graphs");
  bn_cmd->add_option("--directed-keep", bn_keep);
  bn_cmd->add_option("--min-cell-ms", bn_min_ms, "Repeat short runs up to this time");
  bn_cmd->add_option("--threads", bn_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*run_cmd) return cmd_run(ra);
    if (*pa_cmd) {
      const Graph g = gen_pa(pa_nodes, pa_m, pa_seed);
      write_edge_list(g, pa_out);
      if (pa_keep > 0.0) {
        if (pa_out_directed.empty()) throw InputError("--directed-keep needs --out-directed");
        write_edge_list(directed_sample(g, pa_keep, pa_seed), pa_out_directed);
      }
      return 0;
    }
    if (*sy_cmd) {
      const Graph g = load_edge_list(sy_graph, false);
      const SybilBenchmark b = synth_sybil_replicate(g, sy_k, sy_seed);
      write_edge_list(b.graph, sy_out_graph);
      write_labels(b.truth, sy_out_truth);
      return 0;
    }
    if (*st_cmd) {
      write_labels(sample_training(read_labels(st_truth), st_pos, st_neg, st_seed), st_out);
      return 0;
    }
    if (*nz_cmd) {
      write_labels(inject_noise(read_labels(nz_train), nz_alpha, nz_seed), nz_out);
      return 0;
    }
    if (*ev_cmd) return cmd_eval(ev_scores, ev_truth, ev_exclude);
    if (*bn_cmd) {
      BenchGrid grid;
      for (const auto& name : parse_list<std::string>(bn_methods, "--method"))
        grid.methods.push_back(parse_method(name, bn_directed));
      grid.edges = parse_list<std::size_t>(bn_edges, "--edges-grid");
      grid.seeds = parse_list<std::uint64_t>(bn_seeds, "--seeds");
      grid.alternations = bn_alt;
      grid.attach = bn_m;
      grid.keep_fraction = bn_keep;
      grid.min_cell_ms = bn_min_ms;
      grid.threads = bn_threads;
      const auto records = bench(grid);
      write_bench(records, bn_out);
      for (const auto& r : records)
        std::cout << r.method << '\t' << r.edges << '\t' << r.wall_ms_total << " ms\n";
      return 0;
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
