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

#include "jwp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

#include "jwp/error.hpp"
#include "jwp/synth.hpp"

namespace jwp {

AucReport auc(std::span<const double> scores, const LabelSet& truth) {
  std::vector<std::pair<double, bool>> items;
  items.reserve(truth.size());
  auto add = [&](const std::vector<NodeId>& ids, bool positive) {
    for (NodeId u : ids) {
      if (u >= scores.size() || std::isnan(scores[u]))
        throw InputError("no score for evaluated node " + std::to_string(u));
      items.emplace_back(scores[u], positive);
    }
  };
  add(truth.positives, true);
  add(truth.negatives, false);
  AucReport report;
  report.positive_count = truth.positives.size();
  report.negative_count = truth.negatives.size();
  if (report.positive_count == 0 || report.negative_count == 0)
    throw InputError("AUC needs at least one positive and one negative node");

  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Twice the Mann-Whitney count, kept integral so ties stay exact.
  std::uint64_t twice_wins = 0, ties = 0, neg_below = 0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::uint64_t pos = 0, neg = 0;
    while (j < items.size() && items[j].first == items[i].first) {
      (items[j].second ? pos : neg) += 1;
      ++j;
    }
    twice_wins += 2 * pos * neg_below + pos * neg;
    ties += pos * neg;
    neg_below += neg;
    i = j;
  }
  report.tie_pairs = ties;
  report.auc = static_cast<double>(twice_wins) /
               (2.0 * static_cast<double>(report.positive_count) *
                static_cast<double>(report.negative_count));
  return report;
}

AucReport auc(std::span<const double> scores, const LabelSet& truth,
              const LabelSet& exclude) {
  std::unordered_set<NodeId> skip(exclude.positives.begin(), exclude.positives.end());
  skip.insert(exclude.negatives.begin(), exclude.negatives.end());
  LabelSet test;
  for (NodeId u : truth.positives)
    if (!skip.count(u)) test.positives.push_back(u);
  for (NodeId u : truth.negatives)
    if (!skip.count(u)) test.negatives.push_back(u);
  return auc(scores, test);
}

std::vector<ScoreRow> rank_scores(std::span<const double> p,
                                  std::span<const std::uint64_t> ids) {
  std::vector<ScoreRow> rows(p.size());
  for (std::size_t u = 0; u < p.size(); ++u)
    rows[u] = {ids.empty() ? u : ids[u], p[u], p[u] > 0.0 ? 1 : -1};
  std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    if (a.posterior != b.posterior) return a.posterior > b.posterior;
    return a.id < b.id;
  });
  return rows;
}

void rank_and_write(std::span<const double> p,
                    std::span<const std::uint64_t> ids,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write scores: " + path.string());
  char buf[64];
  for (const ScoreRow& r : rank_scores(p, ids)) {
    std::snprintf(buf, sizeof buf, "%.17g", r.posterior);
    out << r.id << '\t' << buf << '\t' << (r.label > 0 ? "+1" : "-1") << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

std::vector<ScoreRow> read_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scores: " + path.string());
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    ScoreRow r;
    std::string label;
    if (!(fields >> r.id >> r.posterior))
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected \"node_id<TAB>posterior[<TAB>label]\"");
    if (fields >> label) r.label = (label == "-1") ? -1 : 1;
    else r.label = r.posterior > 0.0 ? 1 : -1;
    rows.push_back(r);
  }
  return rows;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

LabelSet random_labels(std::size_t n, std::uint64_t seed) {
  const std::size_t per_class = std::max<std::size_t>(1, std::min<std::size_t>(1000, n / 20));
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(ids.begin(), ids.end(), rng);
  LabelSet labels;
  labels.positives.assign(ids.begin(), ids.begin() + per_class);
  labels.negatives.assign(ids.begin() + per_class, ids.begin() + 2 * per_class);
  return labels;
}

}  // namespace

std::vector<BenchRecord> bench(const BenchGrid& grid) {
  using Clock = std::chrono::steady_clock;
  if (grid.methods.empty() || grid.edges.empty() || grid.seeds.empty())
    throw InputError("bench grid needs methods, sizes and seeds");
  const std::size_t m = grid.attach;
  std::vector<BenchRecord> records;
  for (std::size_t target : grid.edges) {
    const std::size_t clique = m * (m - 1) / 2;
    if (target <= clique) throw InputError("edge target too small for m");
    const std::size_t n = m + (target - clique + m - 1) / m;
    // times[method][seed]
    std::vector<std::vector<double>> times(grid.methods.size());
    std::vector<BenchRecord> cell(grid.methods.size());
    for (std::uint64_t seed : grid.seeds) {
      const Graph undirected = gen_pa(n, m, seed);
      Graph directed;
      const LabelSet labels = random_labels(n, seed);
      for (std::size_t i = 0; i < grid.methods.size(); ++i) {
        const Method method = grid.methods[i];
        if (needs_directed(method) && directed.node_count() == 0)
          directed = directed_sample(undirected, grid.keep_fraction, seed);
        const Graph& g = needs_directed(method) ? directed : undirected;
        JwpConfig cfg;
        cfg.method = method;
        cfg.max_alternations = grid.alternations;
        cfg.early_stop = false;
        cfg.threads = grid.threads;
        std::size_t reps = 0;
        double total = 0.0;
        do {
          const auto start = Clock::now();
          const RunResult r = run(g, labels, cfg);
          total += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
          ++reps;
          cell[i].alternations = r.alternations;
        } while (total < grid.min_cell_ms);
        times[i].push_back(total / static_cast<double>(reps));
        cell[i].method = method_name(method);
        cell[i].nodes = g.node_count();
        cell[i].edges = g.edge_count();
      }
    }
    for (std::size_t i = 0; i < grid.methods.size(); ++i) {
      cell[i].wall_ms_total = median(times[i]);
      cell[i].wall_ms_per_alt =
          cell[i].wall_ms_total / static_cast<double>(std::max<std::size_t>(1, cell[i].alternations));
      records.push_back(cell[i]);
    }
  }
  return records;
}

void write_bench(const std::vector<BenchRecord>& records,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write bench table: " + path.string());
  out << "method\tnodes\tedges\talternations\twall_ms_total\twall_ms_per_alt\n";
  for (const BenchRecord& r : records)
    out << r.method << '\t' << r.nodes << '\t' << r.edges << '\t'
        << r.alternations << '\t' << r.wall_ms_total << '\t'
        << r.wall_ms_per_alt << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace jwp
