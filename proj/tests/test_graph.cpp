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

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "jwp/error.hpp"
#include "jwp/graph.hpp"
#include "jwp/labels.hpp"
#include "oracles.hpp"

using namespace jwp;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "jwp_test_graph";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path) << body;
  return path;
}

std::set<std::pair<NodeId, NodeId>> edge_set(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const auto& e : g.edges()) out.insert({e.u, e.v});
  return out;
}

}  // namespace

TEST_CASE("reciprocal directed lines are one bidirectional pair") {
  const Graph g = load_edge_list(write_temp("a.txt", "0\t1\n1\t0\n"), true);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.pair_class(0, 1) == PairClass::Bidirectional);
  CHECK(g.pair_class(1, 0) == PairClass::Bidirectional);
}

TEST_CASE("duplicate undirected lines merge") {
  LoadStats stats;
  const Graph g = load_edge_list(write_temp("b.txt", "0 1\n0 1\n1 0\n"), false, &stats);
  CHECK(g.edge_count() == 1);
  CHECK(g.slot_count() == 1);
  CHECK(stats.duplicates == 2);
}

TEST_CASE("triangle") {
  const Graph g = load_edge_list(write_temp("c.txt", "# tri\n0\t1\n1\t2\n2\t0\n"), false);
  CHECK(g.slot_count() == 3);
  for (NodeId u = 0; u < 3; ++u) CHECK(g.degree(u) == 2);
  CHECK(average_degree(g) == 2.0);
}

TEST_CASE("self-loops are dropped and counted") {
  LoadStats stats;
  const Graph g = load_edge_list(write_temp("d.txt", "0\t0\n0\t1\n2\t2\n"), false, &stats);
  CHECK(stats.self_loops == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.node_count() == 3);
  CHECK(g.degree(2) == 0);
}

TEST_CASE("malformed input names the line") {
  const auto bad = write_temp("e.txt", "0\t1\n1\tx\n");
  try {
    load_edge_list(bad, false);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_edge_list(write_temp("f.txt", "0\t1\t2\n"), false), InputError);
  CHECK_THROWS_AS(load_edge_list(write_temp("g.txt", "-1\t2\n"), false), InputError);
  CHECK_THROWS_AS(load_edge_list(write_temp("h.txt", "# nothing\n"), false), InputError);
  CHECK_THROWS_AS(load_edge_list(write_temp("i.txt", "3\t3\n"), false), InputError);
  CHECK_THROWS_AS(load_edge_list("/nonexistent/graph.txt", false), InputError);
}

TEST_CASE("average degree") {
  CHECK(average_degree(Graph::from_edges(2, {{0, 1}}, false)) == 1.0);
  const Graph star = Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, false);
  CHECK(average_degree(star) == doctest::Approx(1.6));
  const Graph d = Graph::from_edges(4, {{0, 1}, {1, 0}, {2, 3}}, true);
  CHECK(average_degree(d) == doctest::Approx(0.75));
}

TEST_CASE("mutual projection keeps only reciprocal pairs") {
  // a=0 b=1 c=2
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 0}, {0, 2}}, true);
  const Graph m = mutual_projection_lcc(g);
  CHECK_FALSE(m.directed());
  CHECK(m.node_count() == 2);
  CHECK(m.edge_count() == 1);
  CHECK(m.original_id(0) == 0);
  CHECK(m.original_id(1) == 1);
}

TEST_CASE("mutual projection of a bidirectional triangle") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}, true);
  const Graph m = mutual_projection_lcc(g);
  CHECK(m.node_count() == 3);
  CHECK(edge_set(m) == std::set<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("mutual projection tie goes to the smallest original id") {
  // a=5 b=6 c=1 d=2 e=3: {c,d} holds id 1.
  const Graph g = Graph::from_edges(
      7, {{5, 6}, {6, 5}, {1, 2}, {2, 1}, {3, 1}}, true);
  const Graph m = mutual_projection_lcc(g);
  REQUIRE(m.node_count() == 2);
  CHECK(m.original_id(0) == 1);
  CHECK(m.original_id(1) == 2);
  CHECK_THROWS_AS(mutual_projection_lcc(Graph::from_edges(2, {{0, 1}}, true)), InputError);
  CHECK_THROWS_AS(mutual_projection_lcc(Graph::from_edges(2, {{0, 1}}, false)), InputError);
}

TEST_CASE("mutual projection is idempotent") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30;
    const Graph g = Graph::from_edges(n, oracle::random_edges(n, 200, true, rng), true);
    const Graph m = mutual_projection_lcc(g);
    std::vector<Edge> both;
    for (const auto& e : m.edges()) {
      both.push_back(e);
      both.push_back({e.v, e.u});
    }
    const Graph again = mutual_projection_lcc(Graph::from_edges(m.node_count(), both, true));
    CHECK(edge_set(again) == edge_set(m));
    CHECK(again.node_count() == m.node_count());
  }
}

TEST_CASE("directed pair classes partition each row") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 25;
    const auto pairs = oracle::random_edges(n, 120, true, rng);
    const Graph g = Graph::from_edges(n, pairs, true);
    const auto masks = oracle::directed_masks(n, pairs);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) {
        const int memberships = static_cast<int>(masks.bidir[u][v] + masks.incoming[u][v] +
                                                 masks.outgoing[u][v]);
        CHECK(memberships <= 1);
        CHECK(masks.bidir[u][v] == masks.bidir[v][u]);
        const auto cls = g.pair_class(u, v);
        CHECK(cls.has_value() == (memberships == 1));
        if (!cls) continue;
        if (masks.bidir[u][v] != 0) CHECK(*cls == PairClass::Bidirectional);
        if (masks.incoming[u][v] != 0) CHECK(*cls == PairClass::UniIncoming);
        if (masks.outgoing[u][v] != 0) CHECK(*cls == PairClass::UniOutgoing);
      }
  }
}

TEST_CASE("undirected slots are shared by both rows") {
  const Graph g = Graph::from_edges(4, {{2, 0}, {0, 1}, {1, 2}, {3, 2}}, false);
  CHECK(g.slot_count() == 4);
  for (const auto& e : g.edges()) {
    CHECK(e.u < e.v);
    CHECK(g.edge_slot(e.u, e.v) == g.edge_slot(e.v, e.u));
  }
  CHECK_FALSE(g.edge_slot(0, 3).has_value());
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}, false), InputError);
}

TEST_CASE("load, write, load round-trips") {
  std::mt19937_64 rng(29);
  for (bool directed : {false, true}) {
    const Graph g = Graph::from_edges(40, oracle::random_edges(40, 150, directed, rng), directed);
    const fs::path path = fs::temp_directory_path() / "jwp_test_graph" / "rt.txt";
    write_edge_list(g, path);
    const Graph back = load_edge_list(path, directed);
    CHECK(edge_set(back) == edge_set(g));
  }
}

TEST_CASE("edge weights normalization") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, false);
  EdgeWeights w(g, 0.0);
  CHECK(w.size() == 3);
  w.values = {0.9, -2.0, 0.25};
  auto clamped = w;
  clamped.normalize(Renorm::Clamp);
  CHECK(clamped.values == std::vector<double>{0.5, -0.5, 0.25});
  auto twice = clamped;
  twice.normalize(Renorm::Clamp);
  CHECK(twice.values == clamped.values);
  auto scaled = w;
  scaled.normalize(Renorm::Rescale);
  CHECK(scaled.values[1] == doctest::Approx(-0.5));
  CHECK(scaled.values[0] == doctest::Approx(0.225));
  CHECK(scaled.values[2] == doctest::Approx(0.0625));
}

TEST_CASE("label files") {
  const auto path = write_temp("labels.txt", "# train\n3\t+1\n1\t-1\n4\t1\n");
  const LabelSet l = read_labels(path);
  CHECK(l.positives == std::vector<NodeId>{3, 4});
  CHECK(l.negatives == std::vector<NodeId>{1});
  CHECK_NOTHROW(l.validate(5));
  CHECK_THROWS_AS(l.validate(4), InputError);
  LabelSet overlap{{1}, {1}};
  CHECK_THROWS_AS(overlap.validate(3), InputError);
  const auto dense = l.dense(5);
  CHECK(dense == std::vector<std::int8_t>{0, -1, 0, 1, 1});
  const auto out = fs::temp_directory_path() / "jwp_test_graph" / "labels_out.txt";
  write_labels(l, out);
  const LabelSet back = read_labels(out);
  CHECK(back.positives == l.positives);
  CHECK(back.negatives == l.negatives);
  CHECK_THROWS_AS(read_labels(write_temp("bad.txt", "1\t2\n")), InputError);
}
