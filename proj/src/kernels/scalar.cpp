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

#include <algorithm>
#include <cmath>
#include <limits>

#include "jwp/kernels.hpp"

namespace jwp::kernels {
namespace {

inline double filter(std::uint8_t cls, double x) {
  if (cls == kUniIncoming) return std::min(x, 0.0);
  if (cls == kUniOutgoing) return std::max(x, 0.0);
  return x;
}

void propagate_rows(const RowView& rows, const double* w, const double* p,
                    const double* q, double* out, std::size_t begin,
                    std::size_t end) {
  for (std::size_t u = begin; u < end; ++u) {
    double acc = 0.0;
    for (std::uint64_t k = rows.offsets[u]; k < rows.offsets[u + 1]; ++k)
      acc += w[rows.slots ? rows.slots[k] : k] * p[rows.cols[k]];
    out[u] = (q ? q[u] : 0.0) + acc;
  }
}

void propagate_rows_directed(const RowView& rows, const double* w,
                             const double* p, const double* q, double* out,
                             std::size_t begin, std::size_t end) {
  for (std::size_t u = begin; u < end; ++u) {
    double acc = 0.0;
    for (std::uint64_t k = rows.offsets[u]; k < rows.offsets[u + 1]; ++k)
      acc += w[rows.slots ? rows.slots[k] : k] *
             filter(rows.classes[k], p[rows.cols[k]]);
    out[u] = (q ? q[u] : 0.0) + acc;
  }
}

void abs_row_sums(const RowView& rows, const double* w, double* out,
                  std::size_t begin, std::size_t end) {
  for (std::size_t u = begin; u < end; ++u) {
    double acc = 0.0;
    for (std::uint64_t k = rows.offsets[u]; k < rows.offsets[u + 1]; ++k)
      acc += std::fabs(w[rows.slots ? rows.slots[k] : k]);
    out[u] = acc;
  }
}

void gradient_symmetric(const std::uint32_t* src, const std::uint32_t* dst,
                        const double* p, const double* resid, double c,
                        double* g, std::size_t begin, std::size_t end) {
  for (std::size_t s = begin; s < end; ++s) {
    const double pa = p[src[s]], pb = p[dst[s]];
    g[s] = resid[src[s]] * pb + resid[dst[s]] * pa - c * pa * pb;
  }
}

void gradient_rows(const RowView& rows, const double* pr, double c, double* g,
                   std::size_t begin, std::size_t end) {
  for (std::size_t u = begin; u < end; ++u) {
    const double pu = pr[2 * u], ru = pr[2 * u + 1];
    for (std::uint64_t k = rows.offsets[u]; k < rows.offsets[u + 1]; ++k) {
      const double pv = pr[2 * rows.cols[k]], rv = pr[2 * rows.cols[k] + 1];
      g[k] = (ru * pv + rv * pu) - c * (pu * pv);
    }
  }
}

double step_rows(const RowView& rows, const double* pr, double c, double l1,
                 double l2, double gamma, double bound, bool track, double* w,
                 std::size_t begin, std::size_t end) {
  double peak = 0.0;
  bool finite = true;
  for (std::size_t u = begin; u < end; ++u) {
    const double pu = pr[2 * u], ru = pr[2 * u + 1];
    for (std::uint64_t k = rows.offsets[u]; k < rows.offsets[u + 1]; ++k) {
      const double pv = pr[2 * rows.cols[k]], rv = pr[2 * rows.cols[k] + 1];
      double g = (ru * pv + rv * pu) - c * (pu * pv);
      if (l1 != 0.0) g += l1 * ((w[k] > 0.0) - (w[k] < 0.0));
      if (l2 != 0.0) g += 2.0 * l2 * w[k];
      finite = finite && std::isfinite(g);
      peak = std::max(peak, std::fabs(g));
      w[k] = std::clamp(w[k] - gamma * g, -bound, bound);
    }
  }
  return finite ? (track ? peak : 0.0) : std::numeric_limits<double>::quiet_NaN();
}

void gradient_directed(const std::uint32_t* src, const std::uint32_t* dst,
                       const std::uint8_t* classes, const double* p,
                       const double* resid, double c, double* g,
                       std::size_t begin, std::size_t end) {
  for (std::size_t s = begin; s < end; ++s) {
    const double pa = p[src[s]], pb = p[dst[s]];
    g[s] = resid[src[s]] * filter(classes[s], pb) - c * pa * pb;
  }
}

void add_l1_penalty(const double* w, double lambda, double* g, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (w[i] > 0.0) - (w[i] < 0.0);
    g[i] += lambda * sign;
  }
}

void add_l2_penalty(const double* w, double lambda, double* g, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) g[i] += 2.0 * lambda * w[i];
}

void descend_clamp(double* w, const double* g, double gamma, double bound,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    w[i] = std::clamp(w[i] - gamma * g[i], -bound, bound);
}

void descend(double* w, const double* g, double gamma, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) w[i] -= gamma * g[i];
}

void scale(double* w, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) w[i] *= s;
}

void l1_change(const double* a, const double* b, std::size_t n, double* diff,
               double* norm) {
  double d = 0.0, m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d += std::fabs(a[i] - b[i]);
    m += std::fabs(a[i]);
  }
  *diff = d;
  *norm = m;
}

double abs_max(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

bool all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

void rectify_neg(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(in[i], 0.0);
}

void rectify_pos(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(in[i], 0.0);
}

}  // namespace

extern const KernelTable kScalarTable = {
    Isa::Scalar,       propagate_rows, propagate_rows_directed,
    abs_row_sums,      gradient_symmetric, gradient_directed,
    gradient_rows,     step_rows,      add_l1_penalty, add_l2_penalty,
    descend_clamp,     descend,        scale,
    l1_change,         abs_max,        all_finite,
    rectify_neg,       rectify_pos,
};

}  // namespace jwp::kernels
