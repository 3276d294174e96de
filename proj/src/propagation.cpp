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

#include "jwp/propagation.hpp"

#include <string>

#include "jwp/error.hpp"
#include "jwp/kernels.hpp"
#include "jwp/parallel.hpp"

namespace jwp {
namespace {

void check_sizes(const Graph& g, const EdgeWeights& w, std::size_t q,
                 std::size_t p, std::size_t out) {
  const std::size_t n = g.node_count();
  if (w.size() != g.slot_count())
    throw InputError("weight vector has " + std::to_string(w.size()) +
                     " entries, graph has " + std::to_string(g.slot_count()) +
                     " slots");
  if (q != n || p != n || out != n)
    throw InputError("score vector length does not match node count " +
                     std::to_string(n));
}

}  // namespace

std::vector<double> assign_priors(const LabelSet& labels, double theta,
                                  std::size_t n) {
  if (!(theta > 0.0)) throw InputError("theta must be positive");
  labels.validate(n);
  std::vector<double> q(n, 0.0);
  for (NodeId u : labels.positives) q[u] = theta;
  for (NodeId u : labels.negatives) q[u] = -theta;
  return q;
}

std::vector<double> half_neg(std::span<const double> p) {
  std::vector<double> out(p.size());
  kernels::active().rectify_neg(p.data(), out.data(), p.size());
  return out;
}

std::vector<double> half_pos(std::span<const double> p) {
  std::vector<double> out(p.size());
  kernels::active().rectify_pos(p.data(), out.data(), p.size());
  return out;
}

void lbp_step_undirected(const Graph& g, const EdgeWeights& w,
                         std::span<const double> q, std::span<const double> p,
                         std::span<double> out, unsigned threads) {
  if (g.directed()) throw InputError("undirected LBP step on a directed graph");
  check_sizes(g, w, q.size(), p.size(), out.size());
  const auto rows = g.rows();
  const auto& k = kernels::active();
  parallel_for(g.node_count(), threads, [&](std::size_t b, std::size_t e) {
    k.propagate_rows(rows, w.values.data(), p.data(), q.data(), out.data(), b, e);
  });
}

std::vector<double> lbp_step_undirected(const Graph& g, const EdgeWeights& w,
                                        std::span<const double> q,
                                        std::span<const double> p) {
  std::vector<double> out(g.node_count());
  lbp_step_undirected(g, w, q, p, out);
  return out;
}

void lbp_step_directed(const Graph& g, const EdgeWeights& w,
                       std::span<const double> q, std::span<const double> p,
                       std::span<double> out, unsigned threads) {
  if (!g.directed()) throw InputError("directed LBP step on an undirected graph");
  check_sizes(g, w, q.size(), p.size(), out.size());
  const auto rows = g.rows();
  const auto& k = kernels::active();
  parallel_for(g.node_count(), threads, [&](std::size_t b, std::size_t e) {
    k.propagate_rows_directed(rows, w.values.data(), p.data(), q.data(),
                              out.data(), b, e);
  });
}

std::vector<double> expand_to_entries(const Graph& g, const EdgeWeights& w) {
  if (g.directed()) throw InputError("per-entry weights need an undirected graph");
  if (w.size() != g.slot_count())
    throw InputError("weight vector does not match graph slots");
  const auto rows = g.rows();
  std::vector<double> out(rows.offsets[g.node_count()]);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = w.values[rows.slots[k]];
  return out;
}

void collapse_entries(const Graph& g, std::span<const double> entries,
                      EdgeWeights& w) {
  const auto rows = g.rows();
  if (g.directed() || entries.size() != rows.offsets[g.node_count()])
    throw InputError("per-entry weights do not match the graph");
  w.values.resize(g.slot_count());
  // Upper-triangle entries visit the slots in ascending order.
  for (std::size_t u = 0; u < g.node_count(); ++u)
    for (std::uint64_t k = rows.offsets[u]; k < rows.offsets[u + 1]; ++k)
      if (rows.cols[k] > u) w.values[rows.slots[k]] = entries[k];
}

void lbp_step_entries(const Graph& g, std::span<const double> entry_w,
                      std::span<const double> q, std::span<const double> p,
                      std::span<double> out, unsigned threads) {
  if (g.directed()) throw InputError("undirected LBP step on a directed graph");
  auto rows = g.rows();
  const std::size_t n = g.node_count();
  if (entry_w.size() != rows.offsets[n] || q.size() != n || p.size() != n ||
      out.size() != n)
    throw InputError("per-entry step operands do not match the graph");
  rows.slots = nullptr;
  const auto& k = kernels::active();
  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    k.propagate_rows(rows, entry_w.data(), p.data(), q.data(), out.data(), b, e);
  });
}

std::vector<double> lbp_step_directed(const Graph& g, const EdgeWeights& w,
                                      std::span<const double> q,
                                      std::span<const double> p) {
  std::vector<double> out(g.node_count());
  lbp_step_directed(g, w, q, p, out);
  return out;
}

std::vector<double> rw_priors(const LabelSet& labels, double theta,
                              std::size_t n, RwVariant variant) {
  LabelSet kept;
  if (variant != RwVariant::Negative) kept.positives = labels.positives;
  if (variant != RwVariant::Positive) kept.negatives = labels.negatives;
  labels.validate(n);
  return assign_priors(kept, theta, n);
}

std::vector<double> weighted_degrees(const Graph& g, const EdgeWeights& w,
                                     unsigned threads) {
  std::vector<double> d(g.node_count());
  const auto rows = g.rows();
  const auto& k = kernels::active();
  parallel_for(g.node_count(), threads, [&](std::size_t b, std::size_t e) {
    k.abs_row_sums(rows, w.values.data(), d.data(), b, e);
  });
  return d;
}

void rw_step(const Graph& g, const EdgeWeights& w, std::span<const double> q,
             std::span<const double> p, std::span<double> out,
             const RwOptions& opts, unsigned threads) {
  if (g.directed()) throw InputError("random-walk step needs an undirected graph");
  check_sizes(g, w, q.size(), p.size(), out.size());
  if (!(opts.restart >= 0.0 && opts.restart <= 1.0))
    throw InputError("restart probability must lie in [0, 1]");
  const std::size_t n = g.node_count();
  const double r = opts.restart;
  const auto d = weighted_degrees(g, w, threads);
  const auto rows = g.rows();
  const auto& k = kernels::active();

  if (opts.normalization() == RwNormalization::Sender) {
    std::vector<double> share(n);
    for (std::size_t u = 0; u < n; ++u) share[u] = d[u] > 0.0 ? p[u] / d[u] : 0.0;
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
      k.propagate_rows(rows, w.values.data(), share.data(), nullptr, out.data(), b, e);
    });
  } else {
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
      k.propagate_rows(rows, w.values.data(), p.data(), nullptr, out.data(), b, e);
    });
    for (std::size_t v = 0; v < n; ++v) out[v] = d[v] > 0.0 ? out[v] / d[v] : 0.0;
  }
  for (std::size_t v = 0; v < n; ++v) out[v] = (1.0 - r) * out[v] + r * q[v];
}

std::vector<double> rw_step(const Graph& g, const EdgeWeights& w,
                            std::span<const double> q,
                            std::span<const double> p, const RwOptions& opts) {
  std::vector<double> out(g.node_count());
  rw_step(g, w, q, p, out, opts);
  return out;
}

}  // namespace jwp
