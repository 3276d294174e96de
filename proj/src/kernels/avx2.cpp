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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "jwp/kernels.hpp"

namespace jwp::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

// (p_v, r_v) of four neighbors from the interleaved array. Plain loads beat
// gathers here. Lanes come out in neighbor order 0, 2, 1, 3.
inline void load_pairs(const double* pr, const std::uint32_t* cols, __m256d& pv,
                       __m256d& rv) {
  const __m256d a = _mm256_insertf128_pd(
      _mm256_castpd128_pd256(_mm_loadu_pd(pr + 2 * std::size_t{cols[0]})),
      _mm_loadu_pd(pr + 2 * std::size_t{cols[1]}), 1);
  const __m256d b = _mm256_insertf128_pd(
      _mm256_castpd128_pd256(_mm_loadu_pd(pr + 2 * std::size_t{cols[2]})),
      _mm_loadu_pd(pr + 2 * std::size_t{cols[3]}), 1);
  pv = _mm256_unpacklo_pd(a, b);
  rv = _mm256_unpackhi_pd(a, b);
}

inline double filter(std::uint8_t cls, double x) {
  if (cls == kUniIncoming) return std::min(x, 0.0);
  if (cls == kUniOutgoing) return std::max(x, 0.0);
  return x;
}

inline __m128i load4(const std::uint32_t* p) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
}

inline __m256d filter4(const std::uint8_t* classes, __m256d v) {
  std::int32_t packed;
  std::memcpy(&packed, classes, sizeof packed);
  const __m256i cls = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
  const __m256d zero = _mm256_setzero_pd();
  const __m256d in_mask = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(cls, _mm256_set1_epi64x(kUniIncoming)));
  const __m256d out_mask = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(cls, _mm256_set1_epi64x(kUniOutgoing)));
  v = _mm256_blendv_pd(v, _mm256_min_pd(v, zero), in_mask);
  return _mm256_blendv_pd(v, _mm256_max_pd(v, zero), out_mask);
}

template <bool Directed>
void propagate_impl(const RowView& rows, const double* w, const double* p,
                    const double* q, double* out, std::size_t begin,
                    std::size_t end) {
  const std::uint32_t* cols = rows.cols;
  for (std::size_t u = begin; u < end; ++u) {
    std::uint64_t k = rows.offsets[u];
    const std::uint64_t stop = rows.offsets[u + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= stop; k += 4) {
      __m256d pv = _mm256_i32gather_pd(p, load4(cols + k), 8);
      const __m256d wv = rows.slots
                             ? _mm256_i32gather_pd(w, load4(rows.slots + k), 8)
                             : _mm256_loadu_pd(w + k);
      if constexpr (Directed) pv = filter4(rows.classes + k, pv);
      acc = _mm256_fmadd_pd(wv, pv, acc);
    }
    double s = hsum(acc);
    for (; k < stop; ++k) {
      double pv = p[cols[k]];
      if constexpr (Directed) pv = filter(rows.classes[k], pv);
      s = std::fma(w[rows.slots ? rows.slots[k] : k], pv, s);
    }
    out[u] = (q ? q[u] : 0.0) + s;
  }
}

void propagate_rows(const RowView& rows, const double* w, const double* p,
                    const double* q, double* out, std::size_t begin,
                    std::size_t end) {
  propagate_impl<false>(rows, w, p, q, out, begin, end);
}

void propagate_rows_directed(const RowView& rows, const double* w,
                             const double* p, const double* q, double* out,
                             std::size_t begin, std::size_t end) {
  propagate_impl<true>(rows, w, p, q, out, begin, end);
}

inline __m256d abs4(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void abs_row_sums(const RowView& rows, const double* w, double* out,
                  std::size_t begin, std::size_t end) {
  for (std::size_t u = begin; u < end; ++u) {
    std::uint64_t k = rows.offsets[u];
    const std::uint64_t stop = rows.offsets[u + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= stop; k += 4) {
      const __m256d wv = rows.slots
                             ? _mm256_i32gather_pd(w, load4(rows.slots + k), 8)
                             : _mm256_loadu_pd(w + k);
      acc = _mm256_add_pd(acc, abs4(wv));
    }
    double s = hsum(acc);
    for (; k < stop; ++k) s += std::fabs(w[rows.slots ? rows.slots[k] : k]);
    out[u] = s;
  }
}

void gradient_symmetric(const std::uint32_t* src, const std::uint32_t* dst,
                        const double* p, const double* resid, double c,
                        double* g, std::size_t begin, std::size_t end) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t s = begin;
  for (; s + 4 <= end; s += 4) {
    const __m128i a = load4(src + s), b = load4(dst + s);
    const __m256d pa = _mm256_i32gather_pd(p, a, 8);
    const __m256d pb = _mm256_i32gather_pd(p, b, 8);
    const __m256d ra = _mm256_i32gather_pd(resid, a, 8);
    const __m256d rb = _mm256_i32gather_pd(resid, b, 8);
    __m256d t = _mm256_mul_pd(ra, pb);
    t = _mm256_fmadd_pd(rb, pa, t);
    t = _mm256_fnmadd_pd(_mm256_mul_pd(cv, pa), pb, t);
    _mm256_storeu_pd(g + s, t);
  }
  for (; s < end; ++s) {
    const double pa = p[src[s]], pb = p[dst[s]];
    double t = resid[src[s]] * pb;
    t = std::fma(resid[dst[s]], pa, t);
    g[s] = std::fma(-(c * pa), pb, t);
  }
}

void gradient_rows(const RowView& rows, const double* pr, double c, double* g,
                   std::size_t begin, std::size_t end) {
  const __m256d cv = _mm256_set1_pd(c);
  for (std::size_t u = begin; u < end; ++u) {
    const __m256d pu = _mm256_set1_pd(pr[2 * u]);
    const __m256d ru = _mm256_set1_pd(pr[2 * u + 1]);
    std::uint64_t k = rows.offsets[u];
    const std::uint64_t stop = rows.offsets[u + 1];
    for (; k + 4 <= stop; k += 4) {
      __m256d pv, rv;
      load_pairs(pr, rows.cols + k, pv, rv);
      const __m256d cross = _mm256_add_pd(_mm256_mul_pd(ru, pv), _mm256_mul_pd(rv, pu));
      const __m256d t = _mm256_sub_pd(cross, _mm256_mul_pd(cv, _mm256_mul_pd(pu, pv)));
      _mm256_storeu_pd(g + k, _mm256_permute4x64_pd(t, 0xD8));
    }
    for (; k < stop; ++k) {
      const double pv = pr[2 * rows.cols[k]], rv = pr[2 * rows.cols[k] + 1];
      g[k] = (pr[2 * u + 1] * pv + rv * pr[2 * u]) - c * (pr[2 * u] * pv);
    }
  }
}

template <bool Track>
double step_rows_impl(const RowView& rows, const double* pr, double c, double l1,
                      double l2, double gamma, double bound, double* w,
                      std::size_t begin, std::size_t end) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pos = _mm256_set1_pd(l1), neg = _mm256_set1_pd(-l1);
  const __m256d l2v = _mm256_set1_pd(2.0 * l2);
  const __m256d gm = _mm256_set1_pd(gamma);
  const __m256d hi = _mm256_set1_pd(bound), lo = _mm256_set1_pd(-bound);
  const __m256d huge = _mm256_set1_pd(std::numeric_limits<double>::max());
  const __m256i lane = _mm256_setr_epi64x(0, 1, 2, 3);
  __m256d peak = zero, bad = zero;

  // Four entries starting at k; lanes outside `live` are neither read nor
  // written in w.
  auto block = [&](__m256d pu, __m256d ru, const std::uint32_t* cols, double* wk,
                   __m256i live, bool full) {
    __m256d pv, rv;
    load_pairs(pr, cols, pv, rv);
    const __m256d cross = _mm256_add_pd(_mm256_mul_pd(ru, pv), _mm256_mul_pd(rv, pu));
    __m256d g = _mm256_sub_pd(cross, _mm256_mul_pd(cv, _mm256_mul_pd(pu, pv)));
    g = _mm256_permute4x64_pd(g, 0xD8);
    const __m256d wv = full ? _mm256_loadu_pd(wk) : _mm256_maskload_pd(wk, live);
    if (l1 != 0.0) {
      const __m256d up = _mm256_and_pd(_mm256_cmp_pd(wv, zero, _CMP_GT_OQ), pos);
      const __m256d dn = _mm256_and_pd(_mm256_cmp_pd(wv, zero, _CMP_LT_OQ), neg);
      g = _mm256_add_pd(g, _mm256_add_pd(up, dn));
    }
    if (l2 != 0.0) g = _mm256_fmadd_pd(l2v, wv, g);
    __m256d mag = abs4(g);
    if (!full) mag = _mm256_and_pd(mag, _mm256_castsi256_pd(live));
    bad = _mm256_or_pd(bad, _mm256_cmp_pd(mag, huge, _CMP_NLE_UQ));
    if constexpr (Track) peak = _mm256_max_pd(peak, mag);
    __m256d nw = _mm256_fnmadd_pd(gm, g, wv);
    nw = _mm256_min_pd(_mm256_max_pd(nw, lo), hi);
    if (full)
      _mm256_storeu_pd(wk, nw);
    else
      _mm256_maskstore_pd(wk, live, nw);
  };

  for (std::size_t u = begin; u < end; ++u) {
    const __m256d pu = _mm256_set1_pd(pr[2 * u]);
    const __m256d ru = _mm256_set1_pd(pr[2 * u + 1]);
    std::uint64_t k = rows.offsets[u];
    const std::uint64_t stop = rows.offsets[u + 1];
    for (; k + 4 <= stop; k += 4) block(pu, ru, rows.cols + k, w + k, lane, true);
    if (k < stop) {
      // Dead lanes point at u itself so every load stays in bounds.
      const auto self = static_cast<std::uint32_t>(u);
      std::uint32_t cols[4] = {self, self, self, self};
      for (std::uint64_t i = k; i < stop; ++i) cols[i - k] = rows.cols[i];
      const __m256i live = _mm256_cmpgt_epi64(
          _mm256_set1_epi64x(static_cast<long long>(stop - k)), lane);
      block(pu, ru, cols, w + k, live, false);
    }
  }
  if (_mm256_movemask_pd(bad) != 0) return std::numeric_limits<double>::quiet_NaN();
  return Track ? hmax(peak) : 0.0;
}

double step_rows(const RowView& rows, const double* pr, double c, double l1,
                 double l2, double gamma, double bound, bool track, double* w,
                 std::size_t begin, std::size_t end) {
  return track ? step_rows_impl<true>(rows, pr, c, l1, l2, gamma, bound, w, begin, end)
               : step_rows_impl<false>(rows, pr, c, l1, l2, gamma, bound, w, begin, end);
}

void gradient_directed(const std::uint32_t* src, const std::uint32_t* dst,
                       const std::uint8_t* classes, const double* p,
                       const double* resid, double c, double* g,
                       std::size_t begin, std::size_t end) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t s = begin;
  for (; s + 4 <= end; s += 4) {
    const __m128i a = load4(src + s), b = load4(dst + s);
    const __m256d pa = _mm256_i32gather_pd(p, a, 8);
    const __m256d pb = _mm256_i32gather_pd(p, b, 8);
    const __m256d ra = _mm256_i32gather_pd(resid, a, 8);
    __m256d t = _mm256_mul_pd(ra, filter4(classes + s, pb));
    t = _mm256_fnmadd_pd(_mm256_mul_pd(cv, pa), pb, t);
    _mm256_storeu_pd(g + s, t);
  }
  for (; s < end; ++s) {
    const double pa = p[src[s]], pb = p[dst[s]];
    const double t = resid[src[s]] * filter(classes[s], pb);
    g[s] = std::fma(-(c * pa), pb, t);
  }
}

void add_l1_penalty(const double* w, double lambda, double* g, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pos = _mm256_set1_pd(lambda), neg = _mm256_set1_pd(-lambda);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w + i);
    const __m256d up = _mm256_and_pd(_mm256_cmp_pd(wv, zero, _CMP_GT_OQ), pos);
    const __m256d dn = _mm256_and_pd(_mm256_cmp_pd(wv, zero, _CMP_LT_OQ), neg);
    _mm256_storeu_pd(g + i, _mm256_add_pd(_mm256_loadu_pd(g + i),
                                          _mm256_add_pd(up, dn)));
  }
  for (; i < n; ++i) {
    const double sign = (w[i] > 0.0) - (w[i] < 0.0);
    g[i] += lambda * sign;
  }
}

void add_l2_penalty(const double* w, double lambda, double* g, std::size_t n) {
  const __m256d k = _mm256_set1_pd(2.0 * lambda);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(g + i, _mm256_fmadd_pd(k, _mm256_loadu_pd(w + i),
                                            _mm256_loadu_pd(g + i)));
  for (; i < n; ++i) g[i] = std::fma(2.0 * lambda, w[i], g[i]);
}

void descend_clamp(double* w, const double* g, double gamma, double bound,
                   std::size_t n) {
  const __m256d gm = _mm256_set1_pd(gamma);
  const __m256d hi = _mm256_set1_pd(bound), lo = _mm256_set1_pd(-bound);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fnmadd_pd(gm, _mm256_loadu_pd(g + i),
                                 _mm256_loadu_pd(w + i));
    v = _mm256_min_pd(_mm256_max_pd(v, lo), hi);
    _mm256_storeu_pd(w + i, v);
  }
  for (; i < n; ++i)
    w[i] = std::clamp(std::fma(-gamma, g[i], w[i]), -bound, bound);
}

void descend(double* w, const double* g, double gamma, std::size_t n) {
  const __m256d gm = _mm256_set1_pd(gamma);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(w + i, _mm256_fnmadd_pd(gm, _mm256_loadu_pd(g + i),
                                             _mm256_loadu_pd(w + i)));
  for (; i < n; ++i) w[i] = std::fma(-gamma, g[i], w[i]);
}

void scale(double* w, double s, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(w + i, _mm256_mul_pd(sv, _mm256_loadu_pd(w + i)));
  for (; i < n; ++i) w[i] *= s;
}

void l1_change(const double* a, const double* b, std::size_t n, double* diff,
               double* norm) {
  __m256d d = _mm256_setzero_pd(), m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d av = _mm256_loadu_pd(a + i);
    d = _mm256_add_pd(d, abs4(_mm256_sub_pd(av, _mm256_loadu_pd(b + i))));
    m = _mm256_add_pd(m, abs4(av));
  }
  double ds = hsum(d), ms = hsum(m);
  for (; i < n; ++i) {
    ds += std::fabs(a[i] - b[i]);
    ms += std::fabs(a[i]);
  }
  *diff = ds;
  *norm = ms;
}

double abs_max(const double* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs4(_mm256_loadu_pd(x + i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

bool all_finite(const double* x, std::size_t n) {
  // x - x is NaN exactly when x is infinite or NaN.
  __m256d bad = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d z = _mm256_sub_pd(v, v);
    bad = _mm256_or_pd(bad, _mm256_cmp_pd(z, z, _CMP_UNORD_Q));
  }
  if (_mm256_movemask_pd(bad) != 0) return false;
  for (; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

void rectify_neg(const double* in, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(in + i), zero));
  for (; i < n; ++i) out[i] = std::min(in[i], 0.0);
}

void rectify_pos(const double* in, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(in + i), zero));
  for (; i < n; ++i) out[i] = std::max(in[i], 0.0);
}

}  // namespace

extern const KernelTable kAvx2Table = {
    Isa::Avx2,         propagate_rows, propagate_rows_directed,
    abs_row_sums,      gradient_symmetric, gradient_directed,
    gradient_rows,     step_rows,      add_l1_penalty, add_l2_penalty,
    descend_clamp,     descend,        scale,
    l1_change,         abs_max,        all_finite,
    rectify_neg,       rectify_pos,
};

}  // namespace jwp::kernels
