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

#include "jwp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "jwp/error.hpp"

namespace jwp {

Graph gen_pa(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw InputError("preferential attachment needs 1 <= m < n");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m * (m - 1) / 2 + (n - m) * m);
  // Every edge endpoint, so a uniform pick is a degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * edges.capacity());
  for (NodeId a = 0; a < m; ++a)
    for (NodeId b = a + 1; b < m; ++b) {
      edges.push_back({a, b});
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  std::vector<NodeId> targets;
  targets.reserve(m);
  for (std::size_t v = m; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      NodeId t;
      if (endpoints.empty()) {
        t = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
      } else {
        t = endpoints[std::uniform_int_distribution<std::size_t>(
            0, endpoints.size() - 1)(rng)];
      }
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({t, static_cast<NodeId>(v)});
      endpoints.push_back(t);
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(n, std::move(edges), false);
}

Graph directed_sample(const Graph& g, double keep_fraction, std::uint64_t seed) {
  if (g.directed()) throw InputError("directed_sample expects an undirected graph");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
    throw InputError("keep fraction must lie in (0, 1]");
  std::vector<Edge> pairs;
  pairs.reserve(2 * g.edge_count());
  for (const Edge& e : g.edges()) {
    pairs.push_back({e.u, e.v});
    pairs.push_back({e.v, e.u});
  }
  const auto keep = static_cast<std::size_t>(
      std::llround(keep_fraction * static_cast<double>(pairs.size())));
  std::vector<Edge> kept;
  kept.reserve(keep);
  std::mt19937_64 rng(seed);
  std::sample(pairs.begin(), pairs.end(), std::back_inserter(kept), keep, rng);
  Graph out = Graph::from_edges(g.node_count(), std::move(kept), true);
  if (!g.original_ids().empty())
    out.set_original_ids({g.original_ids().begin(), g.original_ids().end()});
  return out;
}

SybilBenchmark synth_sybil_replicate(const Graph& g, std::size_t k,
                                     std::uint64_t seed) {
  if (g.directed()) throw InputError("replication expects an undirected graph");
  const std::size_t n = g.node_count();
  if (static_cast<double>(k) > static_cast<double>(n) * static_cast<double>(n))
    throw InputError("more attack edges requested than original-replica pairs");
  std::vector<Edge> edges;
  edges.reserve(2 * g.edge_count() + k);
  const auto shift = static_cast<NodeId>(n);
  for (const Edge& e : g.edges()) {
    edges.push_back(e);
    edges.push_back({e.u + shift, e.v + shift});
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  std::unordered_set<std::uint64_t> used;
  used.reserve(k * 2);
  while (used.size() < k) {
    const std::uint64_t a = pick(rng), b = pick(rng);
    if (used.insert(a * n + b).second)
      edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b) + shift});
  }
  SybilBenchmark out;
  out.graph = Graph::from_edges(2 * n, std::move(edges), false);
  out.truth.negatives.resize(n);
  out.truth.positives.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.truth.negatives[i] = static_cast<NodeId>(i);
    out.truth.positives[i] = static_cast<NodeId>(i + n);
  }
  return out;
}

LabelSet sample_training(const LabelSet& truth, std::size_t n_pos,
                         std::size_t n_neg, std::uint64_t seed) {
  if (n_pos > truth.positives.size() || n_neg > truth.negatives.size())
    throw InputError("not enough labeled nodes to sample the training set");
  std::mt19937_64 rng(seed);
  LabelSet out;
  std::sample(truth.positives.begin(), truth.positives.end(),
              std::back_inserter(out.positives), n_pos, rng);
  std::sample(truth.negatives.begin(), truth.negatives.end(),
              std::back_inserter(out.negatives), n_neg, rng);
  return out;
}

LabelSet inject_noise(const LabelSet& train, double alpha_percent,
                      std::uint64_t seed) {
  if (!(alpha_percent >= 0.0 && alpha_percent <= 100.0))
    throw InputError("noise level must lie in [0, 100]");
  std::mt19937_64 rng(seed);
  auto split = [&rng, alpha_percent](const std::vector<NodeId>& ids,
                                     std::vector<NodeId>& stay,
                                     std::vector<NodeId>& flip) {
    const auto count = static_cast<std::size_t>(
        std::llround(alpha_percent / 100.0 * static_cast<double>(ids.size())));
    std::vector<NodeId> order = ids;
    std::shuffle(order.begin(), order.end(), rng);
    flip.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    stay.assign(order.begin() + static_cast<std::ptrdiff_t>(count), order.end());
    std::sort(flip.begin(), flip.end());
    std::sort(stay.begin(), stay.end());
  };
  std::vector<NodeId> pos_stay, pos_flip, neg_stay, neg_flip;
  split(train.positives, pos_stay, pos_flip);
  split(train.negatives, neg_stay, neg_flip);
  LabelSet out;
  out.positives = std::move(pos_stay);
  out.positives.insert(out.positives.end(), neg_flip.begin(), neg_flip.end());
  out.negatives = std::move(neg_stay);
  out.negatives.insert(out.negatives.end(), pos_flip.begin(), pos_flip.end());
  return out;
}

}  // namespace jwp
