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

#include <cstdint>
#include <utility>

#include "jwp/graph.hpp"
#include "jwp/labels.hpp"

namespace jwp {

// Preferential attachment (Barabasi-Albert): an m-clique seed, then every new
// node links to m distinct existing nodes drawn proportionally to degree.
// C(m,2) + (n-m) m edges. Throws InputError unless 1 <= m < n.
Graph gen_pa(std::size_t n, std::size_t m, std::uint64_t seed);

// Splits each undirected edge into (u,v) and (v,u) and keeps exactly
// round(keep_fraction * 2|E|) of those ordered pairs, chosen uniformly.
Graph directed_sample(const Graph& g, double keep_fraction, std::uint64_t seed);

struct SybilBenchmark {
  Graph graph;
  LabelSet truth;
};

// Doubles g: originals are negatives, node i + n is the positive replica of i
// with mirrored edges, and k distinct attack edges join a uniform original to
// a uniform replica. Throws InputError when k > n^2.
SybilBenchmark synth_sybil_replicate(const Graph& g, std::size_t k,
                                     std::uint64_t seed);

// Uniform samples without replacement of n_pos positives and n_neg negatives.
LabelSet sample_training(const LabelSet& truth, std::size_t n_pos,
                         std::size_t n_neg, std::uint64_t seed);

// Moves round(alpha% |L_P|) positives to L_N and round(alpha% |L_N|)
// negatives to L_P, both chosen uniformly.
LabelSet inject_noise(const LabelSet& train, double alpha_percent,
                      std::uint64_t seed);

}  // namespace jwp
