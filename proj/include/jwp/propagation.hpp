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

#include <span>
#include <vector>

#include "jwp/graph.hpp"
#include "jwp/labels.hpp"

namespace jwp {

// q_u = theta on L_P, -theta on L_N, 0 elsewhere. Throws InputError when
// theta <= 0 or the label sets overlap.
std::vector<double> assign_priors(const LabelSet& labels, double theta,
                                  std::size_t n);

// Entrywise min(p, 0) and max(p, 0).
std::vector<double> half_neg(std::span<const double> p);
std::vector<double> half_pos(std::span<const double> p);

// One synchronous optimized-LBP step on an undirected graph:
//   out = q + W p
void lbp_step_undirected(const Graph& g, const EdgeWeights& w,
                         std::span<const double> q, std::span<const double> p,
                         std::span<double> out, unsigned threads = 1);
std::vector<double> lbp_step_undirected(const Graph& g, const EdgeWeights& w,
                                        std::span<const double> q,
                                        std::span<const double> p);

// Directed variant: bidirectional neighbors contribute w p_v, unidirectional
// incoming neighbors w min(p_v, 0), unidirectional outgoing ones w max(p_v, 0).
void lbp_step_directed(const Graph& g, const EdgeWeights& w,
                       std::span<const double> q, std::span<const double> p,
                       std::span<double> out, unsigned threads = 1);
std::vector<double> lbp_step_directed(const Graph& g, const EdgeWeights& w,
                                      std::span<const double> q,
                                      std::span<const double> p);

// Undirected weights stored once per CSR entry, both entries of an edge
// holding the same value. Kernels then stream the weights in row order.
std::vector<double> expand_to_entries(const Graph& g, const EdgeWeights& w);
void collapse_entries(const Graph& g, std::span<const double> entries,
                      EdgeWeights& w);

// lbp_step_undirected over per-entry weights.
void lbp_step_entries(const Graph& g, std::span<const double> entry_w,
                      std::span<const double> q, std::span<const double> p,
                      std::span<double> out, unsigned threads = 1);

enum class RwVariant { Negative, Positive, Both };

// Which endpoint's weighted degree divides an edge's share.
enum class RwNormalization { Receiver, Sender };

struct RwOptions {
  RwVariant variant = RwVariant::Both;
  double restart = 0.15;
  // RW-N and RW-P always divide by the sender's weighted degree; this only
  // selects the RW-B rule.
  RwNormalization both_normalization = RwNormalization::Receiver;

  RwNormalization normalization() const {
    return variant == RwVariant::Both ? both_normalization
                                      : RwNormalization::Sender;
  }
};

// Priors for a random-walk variant: RW-N keeps only -theta on L_N, RW-P only
// +theta on L_P, RW-B both.
std::vector<double> rw_priors(const LabelSet& labels, double theta,
                              std::size_t n, RwVariant variant);

// One random-walk step on an undirected graph, weighted degree d = sum |w|:
//   receiver: out_v = (1-r) sum_u w_uv p_u / d_v + r q_v
//   sender:   out_v = (1-r) sum_u w_uv p_u / d_u + r q_v
// A node with d = 0 sends nothing and receives out_v = r q_v.
void rw_step(const Graph& g, const EdgeWeights& w, std::span<const double> q,
             std::span<const double> p, std::span<double> out,
             const RwOptions& opts, unsigned threads = 1);
std::vector<double> rw_step(const Graph& g, const EdgeWeights& w,
                            std::span<const double> q,
                            std::span<const double> p, const RwOptions& opts);

// Weighted degree sum_v |w_uv| for every node.
std::vector<double> weighted_degrees(const Graph& g, const EdgeWeights& w,
                                     unsigned threads = 1);

// Positive iff p_u > 0.
inline int predicted_label(double posterior) { return posterior > 0.0 ? 1 : -1; }

}  // namespace jwp
