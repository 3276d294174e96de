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

// Inner loops of propagation and weight learning. Every kernel has a scalar
// reference implementation; an AVX2/FMA variant is picked at runtime when the
// CPU supports it. Variants agree up to floating-point reassociation. Within
// one variant results are bit-reproducible, and the directed row kernel
// reduces in exactly the same order as the undirected one.

#include <cstddef>
#include <cstdint>

namespace jwp::kernels {

enum class Isa { Scalar, Avx2 };

// Adjacency-entry class codes stored per CSR entry of a directed graph.
inline constexpr std::uint8_t kBidirectional = 0;
inline constexpr std::uint8_t kUniIncoming = 1;
inline constexpr std::uint8_t kUniOutgoing = 2;

// CSR rows. slots[k] indexes the weight array for entry k, or entry k reads
// w[k] when slots is null; classes is null for undirected graphs.
struct RowView {
  const std::uint64_t* offsets = nullptr;
  const std::uint32_t* cols = nullptr;
  const std::uint32_t* slots = nullptr;
  const std::uint8_t* classes = nullptr;
};

struct KernelTable {
  Isa isa;

  // out[u] = q[u] + sum_k w[slots[k]] * p[cols[k]] for rows [begin, end).
  // q may be null (treated as zero).
  void (*propagate_rows)(const RowView& rows, const double* w, const double* p,
                         const double* q, double* out, std::size_t begin,
                         std::size_t end);

  // Same as propagate_rows, but the neighbor score goes through min(., 0) on
  // UniIncoming entries and max(., 0) on UniOutgoing entries.
  void (*propagate_rows_directed)(const RowView& rows, const double* w,
                                  const double* p, const double* q,
                                  double* out, std::size_t begin,
                                  std::size_t end);

  // out[u] = sum_k |w[slots[k]]|
  void (*abs_row_sums)(const RowView& rows, const double* w, double* out,
                       std::size_t begin, std::size_t end);

  // g[s] = r[a] p[b] + r[b] p[a] - c p[a] p[b], with a = src[s], b = dst[s].
  void (*gradient_symmetric)(const std::uint32_t* src, const std::uint32_t* dst,
                             const double* p, const double* resid, double c,
                             double* g, std::size_t begin, std::size_t end);

  // g[s] = r[a] t_s(p[b]) - c p[a] p[b], t_s the class filter of slot s.
  void (*gradient_directed)(const std::uint32_t* src, const std::uint32_t* dst,
                            const std::uint8_t* classes, const double* p,
                            const double* resid, double c, double* g,
                            std::size_t begin, std::size_t end);

  // gradient_symmetric for weights stored once per CSR entry, evaluated as
  // (r_u p_v + r_v p_u) - c (p_u p_v) without contraction. Every operation is
  // commutative, so both entries of an edge come out bit-identical. pr
  // interleaves the operands: pr[2u] = p_u, pr[2u+1] = resid_u.
  void (*gradient_rows)(const RowView& rows, const double* pr, double c,
                        double* g, std::size_t begin, std::size_t end);

  // Fused gradient_rows, add_l1_penalty(l1), add_l2_penalty(l2) and
  // descend_clamp on w (same operations, same results). Returns NaN when
  // some g is not finite, else max |g| over the range (0 unless peak).
  double (*step_rows)(const RowView& rows, const double* pr, double c,
                      double l1, double l2, double gamma, double bound,
                      bool peak, double* w, std::size_t begin, std::size_t end);

  // g[i] += lambda * sign(w[i])   (sign(0) = 0)
  void (*add_l1_penalty)(const double* w, double lambda, double* g,
                         std::size_t n);
  // g[i] += 2 lambda w[i]
  void (*add_l2_penalty)(const double* w, double lambda, double* g,
                         std::size_t n);

  // w[i] = clamp(w[i] - gamma g[i], -bound, bound)
  void (*descend_clamp)(double* w, const double* g, double gamma, double bound,
                        std::size_t n);
  // w[i] -= gamma g[i]
  void (*descend)(double* w, const double* g, double gamma, std::size_t n);
  // w[i] *= s
  void (*scale)(double* w, double s, std::size_t n);

  // diff = sum |a - b|, norm = sum |a|
  void (*l1_change)(const double* a, const double* b, std::size_t n,
                    double* diff, double* norm);
  double (*abs_max)(const double* x, std::size_t n);
  bool (*all_finite)(const double* x, std::size_t n);

  void (*rectify_neg)(const double* in, double* out, std::size_t n);
  void (*rectify_pos)(const double* in, double* out, std::size_t n);
};

const char* name(Isa isa);
bool available(Isa isa);

// Kernel table for a given variant. Throws std::invalid_argument when the
// variant is not compiled in or not supported by this CPU.
const KernelTable& table(Isa isa);

// Process-wide selection. Defaults to the widest available variant; the
// JWP_ISA environment variable ("scalar" or "avx2") overrides the default.
const KernelTable& active();
Isa active_isa();
void select(Isa isa);

}  // namespace jwp::kernels
