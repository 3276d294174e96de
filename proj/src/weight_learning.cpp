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

#include "jwp/weight_learning.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "jwp/error.hpp"
#include "jwp/kernels.hpp"
#include "jwp/parallel.hpp"

namespace jwp {
namespace {

void check_shapes(const Graph& g, const EdgeWeights& w,
                  std::span<const double> p_t, std::span<const double> p_next) {
  if (w.size() != g.slot_count())
    throw InputError("weight vector does not match graph slots");
  if (p_t.size() != g.node_count() || p_next.size() != g.node_count())
    throw InputError("score vector length does not match node count");
}

void add_penalty(RegularizerKind reg, const EdgeWeights& w, double lambda,
                 GradientBuffer& out) {
  const auto& k = kernels::active();
  if (reg == RegularizerKind::L1)
    k.add_l1_penalty(w.values.data(), lambda, out.values.data(), out.size());
  else if (reg == RegularizerKind::L2)
    k.add_l2_penalty(w.values.data(), lambda, out.values.data(), out.size());
}

double consistency_weight(RegularizerKind reg, double lambda) {
  return reg == RegularizerKind::Consistency ? lambda : 0.0;
}

inline double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double GradientBuffer::abs_max() const {
  return kernels::active().abs_max(values.data(), values.size());
}

double training_loss(std::span<const double> p, const LabelSet& labels) {
  double sum = 0.0;
  for (NodeId u : labels.positives) sum += (p[u] - 1.0) * (p[u] - 1.0);
  for (NodeId u : labels.negatives) sum += (p[u] + 1.0) * (p[u] + 1.0);
  return 0.5 * sum;
}

double consistency_value(const Graph& g, const EdgeWeights& w,
                         std::span<const double> p) {
  const auto src = g.slot_source();
  const auto dst = g.slot_target();
  double sum = 0.0;
  for (std::size_t s = 0; s < g.slot_count(); ++s)
    sum += p[src[s]] * p[dst[s]] * w.values[s];
  return sum;
}

double regularizer_value(RegularizerKind kind, const Graph& g,
                         const EdgeWeights& w, std::span<const double> p) {
  double sum = 0.0;
  switch (kind) {
    case RegularizerKind::Consistency:
      return consistency_value(g, w, p);
    case RegularizerKind::L1:
      for (double x : w.values) sum -= std::fabs(x);
      return sum;
    case RegularizerKind::L2:
      for (double x : w.values) sum -= x * x;
      return sum;
    case RegularizerKind::None:
      break;
  }
  return 0.0;
}

std::vector<double> label_residuals(std::span<const double> p_next,
                                    const LabelSet& labels) {
  std::vector<double> r(p_next.size(), 0.0);
  for (NodeId u : labels.positives) r[u] = p_next[u] - 1.0;
  for (NodeId u : labels.negatives) r[u] = p_next[u] + 1.0;
  return r;
}

void grad_undirected_into(const Graph& g, const EdgeWeights& w,
                          std::span<const double> p_t,
                          std::span<const double> p_next,
                          const LabelSet& labels, double lambda,
                          RegularizerKind reg, GradientBuffer& out,
                          unsigned threads) {
  if (g.directed()) throw InputError("undirected gradient on a directed graph");
  check_shapes(g, w, p_t, p_next);
  out.values.resize(g.slot_count());
  const auto resid = label_residuals(p_next, labels);
  const auto& k = kernels::active();
  const double c = consistency_weight(reg, lambda);
  parallel_for(g.slot_count(), threads, [&](std::size_t b, std::size_t e) {
    k.gradient_symmetric(g.slot_source().data(), g.slot_target().data(),
                         p_t.data(), resid.data(), c, out.values.data(), b, e);
  });
  add_penalty(reg, w, lambda, out);
}

namespace {

// Per-entry operands: the row view with identity slots and the interleaved
// (p_t, residual) array the row kernels read.
std::vector<double> entry_operands(const Graph& g, std::size_t entries,
                                   std::span<const double> p_t,
                                   std::span<const double> p_next,
                                   const LabelSet& labels) {
  if (g.directed()) throw InputError("undirected gradient on a directed graph");
  const std::size_t n = g.node_count();
  if (entries != g.rows().offsets[n])
    throw InputError("per-entry weights do not match the graph");
  if (p_t.size() != n || p_next.size() != n)
    throw InputError("score vector length does not match node count");
  const auto resid = label_residuals(p_next, labels);
  std::vector<double> pr(2 * n);
  for (std::size_t u = 0; u < n; ++u) {
    pr[2 * u] = p_t[u];
    pr[2 * u + 1] = resid[u];
  }
  return pr;
}

}  // namespace

void grad_entries_into(const Graph& g, const EdgeWeights& entry_w,
                       std::span<const double> p_t,
                       std::span<const double> p_next, const LabelSet& labels,
                       double lambda, RegularizerKind reg, GradientBuffer& out,
                       unsigned threads) {
  const auto pr = entry_operands(g, entry_w.size(), p_t, p_next, labels);
  out.values.resize(entry_w.size());
  auto rows = g.rows();
  rows.slots = nullptr;
  const auto& k = kernels::active();
  const double c = consistency_weight(reg, lambda);
  parallel_for(g.node_count(), threads, [&](std::size_t b, std::size_t e) {
    k.gradient_rows(rows, pr.data(), c, out.values.data(), b, e);
  });
  add_penalty(reg, entry_w, lambda, out);
}

double step_entries(const Graph& g, EdgeWeights& entry_w,
                    std::span<const double> p_t, std::span<const double> p_next,
                    const LabelSet& labels, double lambda, RegularizerKind reg,
                    double gamma, Renorm mode, unsigned threads,
                    bool track_peak) {
  if (!(gamma >= 0.0)) throw InputError("learning rate must be nonnegative");
  const auto pr = entry_operands(g, entry_w.size(), p_t, p_next, labels);
  auto rows = g.rows();
  rows.slots = nullptr;
  const auto& k = kernels::active();
  const double c = consistency_weight(reg, lambda);
  const double l1 = reg == RegularizerKind::L1 ? lambda : 0.0;
  const double l2 = reg == RegularizerKind::L2 ? lambda : 0.0;
  const double bound = mode == Renorm::Clamp
                           ? entry_w.clamp_bound
                           : std::numeric_limits<double>::infinity();
  std::mutex mu;
  double peak = 0.0;
  bool finite = true;
  parallel_for(g.node_count(), threads, [&](std::size_t b, std::size_t e) {
    const double part = k.step_rows(rows, pr.data(), c, l1, l2, gamma, bound,
                                    track_peak, entry_w.values.data(), b, e);
    std::lock_guard lock(mu);
    if (std::isnan(part)) finite = false;
    else peak = std::max(peak, part);
  });
  if (!finite) throw NumericalError("non-finite gradient");
  if (mode == Renorm::Rescale) entry_w.normalize(Renorm::Rescale);
  return peak;
}

void grad_directed_into(const Graph& g, const EdgeWeights& w,
                        std::span<const double> p_t,
                        std::span<const double> p_next, const LabelSet& labels,
                        double lambda, RegularizerKind reg, GradientBuffer& out,
                        unsigned threads) {
  if (!g.directed()) throw InputError("directed gradient on an undirected graph");
  check_shapes(g, w, p_t, p_next);
  out.values.resize(g.slot_count());
  const auto resid = label_residuals(p_next, labels);
  const auto& k = kernels::active();
  const double c = consistency_weight(reg, lambda);
  parallel_for(g.slot_count(), threads, [&](std::size_t b, std::size_t e) {
    k.gradient_directed(g.slot_source().data(), g.slot_target().data(),
                        g.slot_classes().data(), p_t.data(), resid.data(), c,
                        out.values.data(), b, e);
  });
  add_penalty(reg, w, lambda, out);
}

void grad_rw_into(const Graph& g, const EdgeWeights& w,
                  std::span<const double> p_t, std::span<const double> p_next,
                  const LabelSet& labels, double lambda, RegularizerKind reg,
                  const RwOptions& opts, GradientBuffer& out, unsigned threads) {
  if (g.directed()) throw InputError("random-walk gradient on a directed graph");
  check_shapes(g, w, p_t, p_next);
  const std::size_t n = g.node_count();
  out.values.resize(g.slot_count());
  const auto resid = label_residuals(p_next, labels);
  const auto d = weighted_degrees(g, w, threads);
  const auto src = g.slot_source();
  const auto dst = g.slot_target();
  const double keep = 1.0 - opts.restart;
  const double c = consistency_weight(reg, lambda);
  const auto rows = g.rows();
  const auto& k = kernels::active();

  if (opts.normalization() == RwNormalization::Receiver) {
    // S_v = sum_u w_uv p_u, so p_next_v = keep S_v / d_v + r q_v.
    std::vector<double> sums(n);
    k.propagate_rows(rows, w.values.data(), p_t.data(), nullptr, sums.data(), 0, n);
    parallel_for(g.slot_count(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        const NodeId a = src[s], v = dst[s];
        const double sigma = sign_of(w.values[s]);
        double t = 0.0;
        if (d[a] > 0.0)
          t += resid[a] * (p_t[v] / d[a] - sums[a] * sigma / (d[a] * d[a]));
        if (d[v] > 0.0)
          t += resid[v] * (p_t[a] / d[v] - sums[v] * sigma / (d[v] * d[v]));
        out.values[s] = keep * t - c * p_t[a] * p_t[v];
      }
    });
  } else {
    // T_a = sum_{v in N(a)} resid_v w_av: the loss sensitivity to everything a
    // sends, which moves with d_a.
    std::vector<double> sent(n);
    k.propagate_rows(rows, w.values.data(), resid.data(), nullptr, sent.data(), 0, n);
    parallel_for(g.slot_count(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        const NodeId a = src[s], v = dst[s];
        const double sigma = sign_of(w.values[s]);
        double t = 0.0;
        if (d[v] > 0.0)
          t += resid[a] * p_t[v] / d[v] - sigma * p_t[v] * sent[v] / (d[v] * d[v]);
        if (d[a] > 0.0)
          t += resid[v] * p_t[a] / d[a] - sigma * p_t[a] * sent[a] / (d[a] * d[a]);
        out.values[s] = keep * t - c * p_t[a] * p_t[v];
      }
    });
  }
  add_penalty(reg, w, lambda, out);
}

GradientBuffer grad_undirected(const Graph& g, const EdgeWeights& w,
                               std::span<const double> q,
                               std::span<const double> p_t,
                               const LabelSet& labels, double lambda,
                               RegularizerKind reg) {
  const auto p_next = lbp_step_undirected(g, w, q, p_t);
  GradientBuffer out(g.slot_count());
  grad_undirected_into(g, w, p_t, p_next, labels, lambda, reg, out);
  return out;
}

GradientBuffer grad_directed(const Graph& g, const EdgeWeights& w,
                             std::span<const double> q,
                             std::span<const double> p_t,
                             const LabelSet& labels, double lambda,
                             RegularizerKind reg) {
  const auto p_next = lbp_step_directed(g, w, q, p_t);
  GradientBuffer out(g.slot_count());
  grad_directed_into(g, w, p_t, p_next, labels, lambda, reg, out);
  return out;
}

GradientBuffer grad_rw(const Graph& g, const EdgeWeights& w,
                       std::span<const double> q, std::span<const double> p_t,
                       const LabelSet& labels, double lambda,
                       RegularizerKind reg, const RwOptions& opts) {
  const auto p_next = rw_step(g, w, q, p_t, opts);
  GradientBuffer out(g.slot_count());
  grad_rw_into(g, w, p_t, p_next, labels, lambda, reg, opts, out);
  return out;
}

void apply_gradient_step(EdgeWeights& w, const GradientBuffer& grad,
                         double gamma, Renorm mode) {
  if (grad.size() != w.size())
    throw InputError("gradient and weight shapes differ");
  if (!(gamma >= 0.0)) throw InputError("learning rate must be nonnegative");
  const auto& k = kernels::active();
  if (!k.all_finite(grad.values.data(), grad.size())) {
    std::size_t bad = 0;
    while (bad < grad.size() && std::isfinite(grad.values[bad])) ++bad;
    throw NumericalError("non-finite gradient at slot " + std::to_string(bad));
  }
  if (mode == Renorm::Clamp) {
    k.descend_clamp(w.values.data(), grad.values.data(), gamma, w.clamp_bound,
                    w.size());
  } else {
    k.descend(w.values.data(), grad.values.data(), gamma, w.size());
    w.normalize(Renorm::Rescale);
  }
}

}  // namespace jwp
