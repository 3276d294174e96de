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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jwp/graph.hpp"
#include "jwp/labels.hpp"
#include "jwp/propagation.hpp"
#include "jwp/weight_learning.hpp"

namespace jwp {

enum class Method {
  LbpU,      // optimized LBP, undirected, fixed weights
  LbpD,      // optimized LBP, directed, fixed weights
  LbpJwpU,   // LBP with joint weight learning, undirected
  LbpJwpD,   // LBP with joint weight learning, directed
  RwN,       // random walk seeded by negatives
  RwP,       // random walk seeded by positives
  RwB,       // random walk seeded by both
  RwJwpU,    // RW-B with joint weight learning
};

const char* method_name(Method m);
bool learns_weights(Method m);
bool needs_directed(Method m);
bool is_random_walk(Method m);

struct JwpConfig {
  Method method = Method::LbpJwpU;
  RegularizerKind regularizer = RegularizerKind::Consistency;
  double theta = 1.0;
  std::optional<double> lambda;  // unset: default_lambda(average degree)
  double gamma = 1.0;
  std::optional<double> w0;      // unset: 1 / average degree
  double clamp_bound = 0.5;
  std::size_t max_alternations = 15;
  double tolerance = 1e-3;
  bool early_stop = true;        // false: always run max_alternations
  std::size_t inner_iters = 1;
  Renorm renorm = Renorm::Clamp;
  double restart = 0.15;
  RwNormalization rw_normalization = RwNormalization::Receiver;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  // Compute loss, C(W) and |grad| per alternation. Costs extra edge passes.
  bool diagnostics = false;

  // Throws InputError on out-of-range values.
  void validate() const;
};

// Heuristic lambda between the dense-graph (0.1) and sparse-graph (1.0)
// settings: min(1, 10 / average degree).
double default_lambda(double average_degree);

struct AlternationDiagnostics {
  std::size_t t = 0;
  double convergence = 0.0;
  double loss = 0.0;          // NaN unless diagnostics enabled
  double consistency = 0.0;   // NaN unless diagnostics enabled
  double grad_inf = 0.0;      // NaN unless diagnostics enabled and learning
  double mean_homogeneous_w = 0.0;    // NaN without ground truth
  double mean_heterogeneous_w = 0.0;  // NaN without ground truth
  double wall_ms = 0.0;
};

struct RunResult {
  std::vector<double> posteriors;
  EdgeWeights weights;
  std::size_t alternations = 0;
  std::vector<AlternationDiagnostics> diagnostics;
  bool converged = false;
  double lambda = 0.0;
  double w0 = 0.0;
};

// ||p_new - p_old||_1 / ||p_new||_1; +infinity when p_new is all zero.
double convergence_metric(std::span<const double> p_new,
                          std::span<const double> p_old);

// Mean weight over slots whose endpoints share / differ in ground-truth
// label. Slots with an unlabeled endpoint are skipped; NaN for empty groups.
std::pair<double, double> mean_weights_by_homophily(const Graph& g,
                                                    const EdgeWeights& w,
                                                    const LabelSet& truth);

using AlternationObserver = std::function<void(const AlternationDiagnostics&)>;

// Alternates propagation and (for learning methods) one gradient step on the
// weights until the relative L1 change of the posteriors drops below the
// tolerance or max_alternations is reached. The convergence test runs right
// after propagation; a converged alternation skips its weight update.
// truth, when given, feeds the homophily weight means in the diagnostics.
RunResult run(const Graph& g, const LabelSet& train, const JwpConfig& cfg,
              const LabelSet* truth = nullptr,
              const AlternationObserver& observer = {});

}  // namespace jwp
