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

#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "jwp/graph.hpp"
#include "jwp/labels.hpp"
#include "jwp/propagation.hpp"

namespace jwp {

// Penalty on the weights in the per-alternation objective
//   L(W) = 1/2 sum_{l in L} (p_l^{t+1} - y_l)^2 - lambda R(W)
// with R = sum p_u p_v w_uv (Consistency), -sum |w| (L1), -sum w^2 (L2), 0.
enum class RegularizerKind { Consistency, L1, L2, None };

// Per-slot gradient accumulator, same shape as EdgeWeights.
struct GradientBuffer {
  std::vector<double> values;

  GradientBuffer() = default;
  explicit GradientBuffer(std::size_t slots) : values(slots, 0.0) {}
  void zero() { std::fill(values.begin(), values.end(), 0.0); }
  std::size_t size() const { return values.size(); }
  double abs_max() const;
};

// 1/2 sum over labeled nodes of (p_l - y_l)^2.
double training_loss(std::span<const double> p, const LabelSet& labels);

// sum over slots of p_u p_v w_uv (each undirected edge once, each directed
// matrix entry once).
double consistency_value(const Graph& g, const EdgeWeights& w,
                         std::span<const double> p);

// R(W) for the given kind; p is only read by Consistency.
double regularizer_value(RegularizerKind kind, const Graph& g,
                         const EdgeWeights& w, std::span<const double> p);

// p_next - y on labeled nodes, 0 elsewhere.
std::vector<double> label_residuals(std::span<const double> p_next,
                                    const LabelSet& labels);

// Analytic gradient of the per-alternation objective for optimized LBP on an
// undirected graph. p_{t+1} = q + W p_t is computed internally.
GradientBuffer grad_undirected(const Graph& g, const EdgeWeights& w,
                               std::span<const double> q,
                               std::span<const double> p_t,
                               const LabelSet& labels, double lambda,
                               RegularizerKind reg = RegularizerKind::Consistency);

// Same for directed LBP. Only the row owner u of entry (u,v) contributes a
// loss term, filtered by the entry's pair class.
GradientBuffer grad_directed(const Graph& g, const EdgeWeights& w,
                             std::span<const double> q,
                             std::span<const double> p_t,
                             const LabelSet& labels, double lambda,
                             RegularizerKind reg = RegularizerKind::Consistency);

// Gradient for the random-walk step of rw_step, differentiating through the
// weighted-degree normalization (d |w| / dw = sign(w), 0 at w = 0).
GradientBuffer grad_rw(const Graph& g, const EdgeWeights& w,
                       std::span<const double> q, std::span<const double> p_t,
                       const LabelSet& labels, double lambda,
                       RegularizerKind reg, const RwOptions& opts);

// Variants that reuse an already computed p_{t+1} and an output buffer.
void grad_undirected_into(const Graph& g, const EdgeWeights& w,
                          std::span<const double> p_t,
                          std::span<const double> p_next,
                          const LabelSet& labels, double lambda,
                          RegularizerKind reg, GradientBuffer& out,
                          unsigned threads = 1);
void grad_directed_into(const Graph& g, const EdgeWeights& w,
                        std::span<const double> p_t,
                        std::span<const double> p_next, const LabelSet& labels,
                        double lambda, RegularizerKind reg, GradientBuffer& out,
                        unsigned threads = 1);
void grad_rw_into(const Graph& g, const EdgeWeights& w,
                  std::span<const double> p_t, std::span<const double> p_next,
                  const LabelSet& labels, double lambda, RegularizerKind reg,
                  const RwOptions& opts, GradientBuffer& out,
                  unsigned threads = 1);

// grad_undirected_into over per-entry weights (see expand_to_entries). out
// gets one value per CSR entry; both entries of an edge match bitwise.
void grad_entries_into(const Graph& g, const EdgeWeights& entry_w,
                       std::span<const double> p_t,
                       std::span<const double> p_next, const LabelSet& labels,
                       double lambda, RegularizerKind reg, GradientBuffer& out,
                       unsigned threads = 1);

// grad_entries_into followed by apply_gradient_step, fused so the gradient is
// never stored. Returns max |grad| when track_peak is set, else 0.
double step_entries(const Graph& g, EdgeWeights& entry_w,
                    std::span<const double> p_t, std::span<const double> p_next,
                    const LabelSet& labels, double lambda, RegularizerKind reg,
                    double gamma, Renorm mode = Renorm::Clamp,
                    unsigned threads = 1, bool track_peak = true);

// w <- normalize(w - gamma grad). Throws NumericalError when the gradient has
// a non-finite entry, InputError on a shape mismatch or negative gamma.
void apply_gradient_step(EdgeWeights& w, const GradientBuffer& grad,
                         double gamma, Renorm mode = Renorm::Clamp);

}  // namespace jwp
