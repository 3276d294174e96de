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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "auc_oracle.hpp"
#include "gradient_check.hpp"
#include "jwp/engine.hpp"
#include "jwp/eval.hpp"
#include "jwp/synth.hpp"
#include "oracles.hpp"

using namespace jwp;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, double seconds, const std::string& detail) {
  std::printf("%s criterion %d (%.1fs): %s\n", ok ? "PASS" : "FAIL", id, seconds,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void criterion_gradients() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  const RegularizerKind regs[] = {RegularizerKind::Consistency, RegularizerKind::L1,
                                  RegularizerKind::L2, RegularizerKind::None};
  double worst = 0;
  std::size_t compared = 0, skipped = 0;
  for (int graph = 0; graph < 50; ++graph) {
    const auto c = oracle::random_case(graph % 2 == 1, rng);
    for (auto reg : regs) {
      const auto r = oracle::check_gradient(c, 0.5, reg, oracle::Step::Lbp);
      worst = std::max(worst, r.max_rel_error);
      compared += r.compared;
      skipped += r.skipped;
    }
  }
  const double secs = since(start);
  report(1, worst < 1e-5 && secs < 60, secs,
         fmt("max relative error %.3g over %.0f slot checks (%.0f kink slots skipped)", worst,
             static_cast<double>(compared), static_cast<double>(skipped)));
}

void criterion_propagation() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1, 1);
  auto vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
  };
  double worst = 0;
  bool exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 49;
    const bool directed = trial % 2 == 1;
    const auto pairs = oracle::random_edges(n, n * (1 + trial % 6), directed, rng);
    const Graph g = Graph::from_edges(n, pairs, directed);
    EdgeWeights w(g, 0.0);
    w.values = vec(g.slot_count());
    const auto q = vec(n), p = vec(n);
    const auto W = oracle::dense_weights(g, w.values);
    const auto got = directed ? lbp_step_directed(g, w, q, p) : lbp_step_undirected(g, w, q, p);
    const auto want = directed
                          ? oracle::lbp_directed(W, oracle::directed_masks(n, pairs), q, p)
                          : oracle::lbp_undirected(W, q, p);
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::fabs(got[i] - static_cast<double>(want[i])));

    // Same graph made fully bidirectional.
    const auto und = oracle::random_edges(n, n * (1 + trial % 6), false, rng);
    std::vector<Edge> both;
    for (const auto& e : und) {
      both.push_back(e);
      both.push_back({e.v, e.u});
    }
    const Graph gu = Graph::from_edges(n, und, false);
    const Graph gd = Graph::from_edges(n, both, true);
    EdgeWeights wu(gu, 0.0), wd(gd, 0.0);
    wu.values = vec(gu.slot_count());
    for (std::size_t s = 0; s < gd.slot_count(); ++s)
      wd.values[s] = wu.values[*gu.edge_slot(gd.slot_source()[s], gd.slot_target()[s])];
    exact = exact && lbp_step_directed(gd, wd, q, p) == lbp_step_undirected(gu, wu, q, p);
  }
  report(2, worst <= 1e-12 && exact, since(start),
         fmt("max |sparse - dense| %.3g; bidirectional directed == undirected: ", worst) +
             (exact ? "yes" : "no"));
}

struct SybilCase {
  SybilBenchmark bench;
  LabelSet train;
};

SybilCase sybil_case(std::uint64_t seed) {
  SybilCase c;
  c.bench = synth_sybil_replicate(gen_pa(4000, 10, seed), 10000, seed + 1000);
  c.train = sample_training(c.bench.truth, 100, 100, seed + 2000);
  return c;
}

struct Tracked {
  double auc = 0;
  RunResult result;
};

// Every benchmark run goes through here so the bookkeeping check sees it.
struct Ledger {
  std::size_t runs = 0, converged = 0, bad = 0, irreproducible = 0;
} ledger;

Tracked tracked_run(const SybilCase& c, const LabelSet& train, JwpConfig cfg) {
  Tracked t;
  t.result = run(c.bench.graph, train, cfg, &c.bench.truth);
  t.auc = auc(t.result.posteriors, c.bench.truth, train).auc;
  ++ledger.runs;
  const auto& r = t.result;
  if (r.converged) ++ledger.converged;
  const bool halted = r.alternations <= cfg.max_alternations;
  const bool flag_ok = r.converged ? r.diagnostics.back().convergence < cfg.tolerance
                                   : r.alternations == cfg.max_alternations;
  if (!halted || !flag_ok) ++ledger.bad;
  const RunResult again = run(c.bench.graph, train, cfg, &c.bench.truth);
  if (again.posteriors != r.posteriors) ++ledger.irreproducible;
  return t;
}

constexpr int kSeeds = 5;

void criteria_synthetic() {
  std::vector<SybilCase> cases;
  for (int s = 0; s < kSeeds; ++s) cases.push_back(sybil_case(100 + s));

  // 3 and 4: JWP vs plain LBP, weight trend.
  auto start = Clock::now();
  double jwp_sum = 0, lbp_sum = 0;
  bool trend = true;
  std::string trend_detail;
  for (const auto& c : cases) {
    JwpConfig cfg;
    cfg.method = Method::LbpJwpU;
    const auto j = tracked_run(c, c.train, cfg);
    cfg.method = Method::LbpU;
    const auto b = tracked_run(c, c.train, cfg);
    jwp_sum += j.auc;
    lbp_sum += b.auc;
    const auto [homo, hetero] =
        mean_weights_by_homophily(c.bench.graph, j.result.weights, c.bench.truth);
    trend = trend && hetero < j.result.w0 && hetero < homo;
    trend_detail += fmt(" (%.3g/%.3g)", hetero, homo);
  }
  const double jwp_auc = jwp_sum / kSeeds, lbp_auc = lbp_sum / kSeeds;
  const double secs3 = since(start);
  report(3, jwp_auc >= 0.95 && jwp_auc > lbp_auc && secs3 < 120, secs3,
         fmt("mean AUC LBP-JWP-U %.5f, LBP-U %.5f", jwp_auc, lbp_auc));
  report(4, trend, 0.0,
         fmt("w0 %.4g; final heterogeneous/homogeneous mean weight per seed:",
             1.0 / average_degree(cases[0].bench.graph)) + trend_detail);

  // 5: regularizer ordering.
  start = Clock::now();
  const RegularizerKind regs[] = {RegularizerKind::Consistency, RegularizerKind::None,
                                  RegularizerKind::L1, RegularizerKind::L2};
  double reg_auc[4] = {0, 0, 0, 0};
  for (const auto& c : cases)
    for (int i = 0; i < 4; ++i) {
      JwpConfig cfg;
      cfg.regularizer = regs[i];
      reg_auc[i] += tracked_run(c, c.train, cfg).auc / kSeeds;
    }
  const bool ordered = reg_auc[0] >= reg_auc[1] &&
                       reg_auc[0] >= std::max(reg_auc[2], reg_auc[3]) - 0.005;
  report(5, ordered, since(start),
         fmt("mean AUC consistency %.4f, none %.4f, L1 %.4f, L2 %.4f", reg_auc[0], reg_auc[1],
             reg_auc[2], reg_auc[3]));

  // 6: label noise.
  start = Clock::now();
  double clean = 0, noisy = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto& c = cases[s];
    JwpConfig cfg;
    clean += tracked_run(c, c.train, cfg).auc / kSeeds;
    noisy += tracked_run(c, inject_noise(c.train, 20.0, 300 + s), cfg).auc / kSeeds;
  }
  report(6, std::fabs(clean - noisy) <= 0.05, since(start),
         fmt("mean AUC at 0%% noise %.4f, at 20%% noise %.4f", clean, noisy));
}

void criterion_scaling() {
  const auto start = Clock::now();
  BenchGrid grid;
  grid.methods = {Method::LbpU, Method::LbpJwpU, Method::LbpD, Method::LbpJwpD};
  grid.edges = {10000, 31623, 100000, 316228, 1000000};
  grid.seeds = {1, 2, 3};
  grid.alternations = 10;
  grid.min_cell_ms = 300;
  const auto records = bench(grid);

  // Least-squares slope of log time vs log edges per method.
  std::string detail;
  bool slopes_ok = true;
  for (Method m : grid.methods) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& r : records)
      if (r.method == method_name(m)) {
        const double x = std::log(static_cast<double>(r.edges));
        const double y = std::log(r.wall_ms_total);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++k;
      }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    slopes_ok = slopes_ok && slope >= 0.85 && slope <= 1.15;
    detail += std::string(method_name(m)) + fmt(" slope %.3f; ", slope);
  }
  double worst_ratio = 0;
  for (std::size_t i = 0; i < records.size(); i += grid.methods.size()) {
    // Records of one size are contiguous, in grid.methods order.
    worst_ratio = std::max(worst_ratio, records[i + 1].wall_ms_total / records[i].wall_ms_total);
    worst_ratio = std::max(worst_ratio, records[i + 3].wall_ms_total / records[i + 2].wall_ms_total);
  }
  const double secs = since(start);
  detail += fmt("max JWP/LBP time ratio %.2f; largest cell LBP-U %.0f ms, LBP-JWP-U %.0f ms",
                worst_ratio, records[records.size() - 4].wall_ms_total,
                records[records.size() - 3].wall_ms_total);
  report(7, slopes_ok && worst_ratio <= 4.0 && secs < 600, secs, detail);
}

void criterion_auc_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(8);
  int mismatches = 0, sets = 0;
  while (sets < 1000) {
    const std::size_t n = 2 + rng() % 1999;
    const int levels = (sets % 3 == 0) ? 5 : (sets % 3 == 1 ? 100 : 1 << 30);
    std::uniform_int_distribution<int> d(0, levels);
    std::vector<double> s(n);
    for (auto& x : s) x = d(rng) * 0.01;
    LabelSet truth;
    const unsigned skew = 2 + rng() % 5;
    for (NodeId u = 0; u < n; ++u)
      (rng() % skew == 0 ? truth.positives : truth.negatives).push_back(u);
    if (truth.positives.empty() || truth.negatives.empty()) continue;
    ++sets;
    if (auc(s, truth).auc != oracle::brute_force_auc(s, truth)) ++mismatches;
  }
  report(8, mismatches == 0, since(start),
         fmt("%.0f mismatches over %.0f score sets", mismatches, sets));
}

void criterion_bookkeeping() {
  report(9, ledger.runs > 0 && ledger.bad == 0 && ledger.irreproducible == 0, 0.0,
         fmt("%.0f benchmark runs, %.0f converged within budget, %.0f bookkeeping errors, "
             "%.0f irreproducible",
             static_cast<double>(ledger.runs), static_cast<double>(ledger.converged),
             static_cast<double>(ledger.bad), static_cast<double>(ledger.irreproducible)));
}

}  // namespace

int main() {
  std::printf("kernels: %s\n", kernels::name(kernels::active_isa()));
  criterion_gradients();
  criterion_propagation();
  criteria_synthetic();
  criterion_scaling();
  criterion_auc_oracle();
  criterion_bookkeeping();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
