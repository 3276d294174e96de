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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "jwp/graph.hpp"
#include "jwp/kernels.hpp"
#include "oracles.hpp"

using namespace jwp;
namespace k = jwp::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = -1,
                               double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::fabs(a[i] - b[i]) <= tol * std::max(1.0, std::fabs(a[i])));
}

bool have_avx2() { return k::available(k::Isa::Avx2); }

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(k::available(k::Isa::Scalar));
  CHECK(k::table(k::Isa::Scalar).isa == k::Isa::Scalar);
  CHECK(std::string(k::name(k::Isa::Avx2)) == "avx2");
}

TEST_CASE("select switches the active table") {
  const auto before = k::active_isa();
  k::select(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::select(before);
  CHECK(k::active_isa() == before);
}

TEST_CASE("row kernels agree across variants") {
  if (!have_avx2()) return;
  const auto& s = k::table(k::Isa::Scalar);
  const auto& v = k::table(k::Isa::Avx2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + trial * 3;
    const bool directed = trial % 2 == 1;
    auto edges = oracle::random_edges(n, n * (1 + trial % 7), directed, rng);
    const Graph g = Graph::from_edges(n, edges, directed);
    const auto w = random_vec(g.slot_count(), rng);
    const auto p = random_vec(n, rng, -2, 2);
    const auto q = random_vec(n, rng);
    std::vector<double> a(n), b(n);
    const auto rows = g.rows();
    if (directed) {
      s.propagate_rows_directed(rows, w.data(), p.data(), q.data(), a.data(), 0, n);
      v.propagate_rows_directed(rows, w.data(), p.data(), q.data(), b.data(), 0, n);
    } else {
      s.propagate_rows(rows, w.data(), p.data(), q.data(), a.data(), 0, n);
      v.propagate_rows(rows, w.data(), p.data(), q.data(), b.data(), 0, n);
    }
    check_close(a, b, 1e-12);
    s.propagate_rows(rows, w.data(), p.data(), nullptr, a.data(), 0, n);
    v.propagate_rows(rows, w.data(), p.data(), nullptr, b.data(), 0, n);
    check_close(a, b, 1e-12);
    s.abs_row_sums(rows, w.data(), a.data(), 0, n);
    v.abs_row_sums(rows, w.data(), b.data(), 0, n);
    check_close(a, b, 1e-12);
  }
}

TEST_CASE("directed row kernel equals undirected one on bidirectional rows") {
  std::mt19937_64 rng(5);
  const std::size_t n = 40;
  const auto und = oracle::random_edges(n, 300, false, rng);
  std::vector<Edge> both;
  for (const auto& e : und) {
    both.push_back(e);
    both.push_back({e.v, e.u});
  }
  const Graph gu = Graph::from_edges(n, und, false);
  const Graph gd = Graph::from_edges(n, both, true);
  // Same value on both slots of a pair, so the matrices coincide.
  std::vector<double> wu = random_vec(gu.slot_count(), rng);
  std::vector<double> wd(gd.slot_count());
  for (std::size_t s = 0; s < gd.slot_count(); ++s)
    wd[s] = wu[*gu.edge_slot(gd.slot_source()[s], gd.slot_target()[s])];
  const auto p = random_vec(n, rng);
  for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
    if (!k::available(isa)) continue;
    const auto& t = k::table(isa);
    std::vector<double> a(n), b(n);
    t.propagate_rows(gu.rows(), wu.data(), p.data(), p.data(), a.data(), 0, n);
    t.propagate_rows_directed(gd.rows(), wd.data(), p.data(), p.data(), b.data(), 0, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("edge kernels agree across variants, all tail lengths") {
  if (!have_avx2()) return;
  const auto& s = k::table(k::Isa::Scalar);
  const auto& v = k::table(k::Isa::Avx2);
  std::mt19937_64 rng(3);
  for (std::size_t m = 0; m <= 19; ++m) {
    const std::size_t n = 8;
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    std::vector<std::uint32_t> src(m), dst(m);
    std::vector<std::uint8_t> cls(m);
    for (std::size_t i = 0; i < m; ++i) {
      src[i] = pick(rng);
      dst[i] = pick(rng);
      cls[i] = static_cast<std::uint8_t>(i % 3);
    }
    const auto p = random_vec(n, rng), r = random_vec(n, rng);
    std::vector<double> a(m), b(m);
    s.gradient_symmetric(src.data(), dst.data(), p.data(), r.data(), 0.3, a.data(), 0, m);
    v.gradient_symmetric(src.data(), dst.data(), p.data(), r.data(), 0.3, b.data(), 0, m);
    check_close(a, b, 1e-14);
    s.gradient_directed(src.data(), dst.data(), cls.data(), p.data(), r.data(), 0.3,
                        a.data(), 0, m);
    v.gradient_directed(src.data(), dst.data(), cls.data(), p.data(), r.data(), 0.3,
                        b.data(), 0, m);
    check_close(a, b, 1e-14);

    auto w = random_vec(m, rng);
    if (m > 2) w[1] = 0.0;
    auto ga = random_vec(m, rng);
    auto gb = ga;
    s.add_l1_penalty(w.data(), 0.2, ga.data(), m);
    v.add_l1_penalty(w.data(), 0.2, gb.data(), m);
    check_close(ga, gb, 0);
    s.add_l2_penalty(w.data(), 0.2, ga.data(), m);
    v.add_l2_penalty(w.data(), 0.2, gb.data(), m);
    check_close(ga, gb, 1e-15);

    auto wa = w, wb = w;
    s.descend_clamp(wa.data(), ga.data(), 0.7, 0.5, m);
    v.descend_clamp(wb.data(), gb.data(), 0.7, 0.5, m);
    check_close(wa, wb, 1e-15);
    s.descend(wa.data(), ga.data(), 0.7, m);
    v.descend(wb.data(), gb.data(), 0.7, m);
    check_close(wa, wb, 1e-15);
    s.scale(wa.data(), -1.5, m);
    v.scale(wb.data(), -1.5, m);
    check_close(wa, wb, 1e-15);

    double d1, n1, d2, n2;
    s.l1_change(wa.data(), w.data(), m, &d1, &n1);
    v.l1_change(wa.data(), w.data(), m, &d2, &n2);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-13));
    CHECK(n1 == doctest::Approx(n2).epsilon(1e-13));
    CHECK(s.abs_max(w.data(), m) == v.abs_max(w.data(), m));
    CHECK(s.all_finite(w.data(), m) == v.all_finite(w.data(), m));
    if (m > 0) {
      auto bad = w;
      bad[m - 1] = std::numeric_limits<double>::quiet_NaN();
      CHECK_FALSE(s.all_finite(bad.data(), m));
      CHECK_FALSE(v.all_finite(bad.data(), m));
      bad[m - 1] = std::numeric_limits<double>::infinity();
      CHECK_FALSE(v.all_finite(bad.data(), m));
    }
    s.rectify_neg(w.data(), wa.data(), m);
    v.rectify_neg(w.data(), wb.data(), m);
    check_close(wa, wb, 0);
    s.rectify_pos(w.data(), wa.data(), m);
    v.rectify_pos(w.data(), wb.data(), m);
    check_close(wa, wb, 0);
  }
}

TEST_CASE("scalar elementwise kernels") {
  const auto& s = k::table(k::Isa::Scalar);
  std::vector<double> w{0.4, 0.1, -0.45, 0.0};
  std::vector<double> g{-0.3, 0.05, 0.2, 1.0};
  s.descend_clamp(w.data(), g.data(), 1.0, 0.5, w.size());
  CHECK(w[0] == 0.5);
  CHECK(w[1] == doctest::Approx(0.05));
  CHECK(w[2] == -0.5);
  CHECK(w[3] == -0.5);
  std::vector<double> l1(4, 0.0);
  std::vector<double> x{1.0, -2.0, 0.0, 3.0};
  s.add_l1_penalty(x.data(), 0.5, l1.data(), 4);
  CHECK(l1 == std::vector<double>{0.5, -0.5, 0.0, 0.5});
  CHECK(s.abs_max(x.data(), 4) == 3.0);
  CHECK(s.abs_max(x.data(), 0) == 0.0);
}

namespace {

// Undirected graph with weights laid out per CSR entry, plus the interleaved
// (p, residual) operand of the row gradient kernels.
struct EntryCase {
  Graph g;
  k::RowView rows;
  std::vector<double> slot_w, entry_w, p, r, pr;
};

EntryCase entry_case(std::size_t n, std::size_t edges, std::mt19937_64& rng) {
  EntryCase c;
  c.g = Graph::from_edges(n, oracle::random_edges(n, edges, false, rng), false);
  c.rows = c.g.rows();
  c.slot_w = random_vec(c.g.slot_count(), rng);
  for (std::size_t e = 0; e < c.rows.offsets[n]; ++e)
    c.entry_w.push_back(c.slot_w[c.rows.slots[e]]);
  c.p = random_vec(n, rng, -2, 2);
  c.r = random_vec(n, rng);
  for (std::size_t u = 0; u < n; ++u) {
    c.pr.push_back(c.p[u]);
    c.pr.push_back(c.r[u]);
  }
  return c;
}

}  // namespace

TEST_CASE("identity slots read weights in entry order") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6 + trial * 2;
    const auto c = entry_case(n, n * (1 + trial % 5), rng);
    auto flat = c.rows;
    flat.slots = nullptr;
    for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
      if (!k::available(isa)) continue;
      const auto& t = k::table(isa);
      std::vector<double> a(n), b(n);
      t.propagate_rows(c.rows, c.slot_w.data(), c.p.data(), c.r.data(), a.data(), 0, n);
      t.propagate_rows(flat, c.entry_w.data(), c.p.data(), c.r.data(), b.data(), 0, n);
      CHECK(a == b);
      t.abs_row_sums(c.rows, c.slot_w.data(), a.data(), 0, n);
      t.abs_row_sums(flat, c.entry_w.data(), b.data(), 0, n);
      CHECK(a == b);
    }
  }
}

TEST_CASE("row gradient matches the edge gradient on both entries") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6 + trial * 2;
    const auto c = entry_case(n, n * (1 + trial % 5), rng);
    const std::size_t entries = c.entry_w.size();
    std::vector<std::vector<double>> per_isa;
    for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
      if (!k::available(isa)) continue;
      const auto& t = k::table(isa);
      std::vector<double> edge(c.g.slot_count()), row(entries);
      t.gradient_symmetric(c.g.slot_source().data(), c.g.slot_target().data(),
                           c.p.data(), c.r.data(), 0.4, edge.data(), 0, edge.size());
      t.gradient_rows(c.rows, c.pr.data(), 0.4, row.data(), 0, n);
      for (NodeId u = 0; u < n; ++u) {
        for (std::size_t e = c.rows.offsets[u]; e < c.rows.offsets[u + 1]; ++e) {
          const NodeId v = c.rows.cols[e];
          const auto back = c.g.neighbors(v);
          const std::size_t mirror =
              c.rows.offsets[v] +
              static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), u) -
                                       back.begin());
          // The two entries of an edge match each other bit for bit.
          CHECK(row[e] == row[mirror]);
          CHECK(std::fabs(row[e] - edge[c.rows.slots[e]]) <= 1e-14);
        }
      }
      per_isa.push_back(row);
    }
    if (per_isa.size() == 2) check_close(per_isa[0], per_isa[1], 1e-14);
  }
}

TEST_CASE("fused row step equals gradient, penalty and descent in sequence") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 6 + trial;
    auto c = entry_case(n, n * (1 + trial % 4), rng);
    const std::size_t entries = c.entry_w.size();
    if (entries > 3) c.entry_w[2] = 0.0;
    const double l1 = trial % 3 == 1 ? 0.3 : 0.0;
    const double l2 = trial % 3 == 2 ? 0.3 : 0.0;
    const double bound = trial % 2 ? 0.5 : std::numeric_limits<double>::infinity();
    auto flat = c.rows;
    flat.slots = nullptr;
    for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
      if (!k::available(isa)) continue;
      const auto& t = k::table(isa);
      std::vector<double> g(entries), w_ref = c.entry_w, w_fused = c.entry_w;
      t.gradient_rows(flat, c.pr.data(), 0.25, g.data(), 0, n);
      t.add_l1_penalty(w_ref.data(), l1, g.data(), entries);
      t.add_l2_penalty(w_ref.data(), l2, g.data(), entries);
      t.descend_clamp(w_ref.data(), g.data(), 0.7, bound, entries);
      const double peak = t.step_rows(flat, c.pr.data(), 0.25, l1, l2, 0.7, bound,
                                      true, w_fused.data(), 0, n);
      CHECK(w_fused == w_ref);
      CHECK(peak == t.abs_max(g.data(), entries));
      auto untracked = c.entry_w;
      CHECK(t.step_rows(flat, c.pr.data(), 0.25, l1, l2, 0.7, bound, false,
                        untracked.data(), 0, n) == 0.0);
      CHECK(untracked == w_ref);
    }
  }
}

TEST_CASE("fused row step reports a non-finite gradient") {
  std::mt19937_64 rng(24);
  auto c = entry_case(12, 40, rng);
  c.pr[2 * c.rows.cols[0] + 1] = std::numeric_limits<double>::infinity();
  auto flat = c.rows;
  flat.slots = nullptr;
  for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
    if (!k::available(isa)) continue;
    auto w = c.entry_w;
    for (bool track : {true, false})
      CHECK(std::isnan(k::table(isa).step_rows(flat, c.pr.data(), 0.1, 0, 0, 0.1, 0.5,
                                               track, w.data(), 0, 12)));
  }
}
