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

#include "jwp/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "jwp/error.hpp"
#include "jwp/kernels.hpp"

namespace jwp {

const char* method_name(Method m) {
  switch (m) {
    case Method::LbpU: return "LBP-U";
    case Method::LbpD: return "LBP-D";
    case Method::LbpJwpU: return "LBP-JWP-U";
    case Method::LbpJwpD: return "LBP-JWP-D";
    case Method::RwN: return "RW-N";
    case Method::RwP: return "RW-P";
    case Method::RwB: return "RW-B";
    case Method::RwJwpU: return "RW-JWP-U";
  }
  return "?";
}

bool learns_weights(Method m) {
  return m == Method::LbpJwpU || m == Method::LbpJwpD || m == Method::RwJwpU;
}

bool needs_directed(Method m) { return m == Method::LbpD || m == Method::LbpJwpD; }

bool is_random_walk(Method m) {
  return m == Method::RwN || m == Method::RwP || m == Method::RwB ||
         m == Method::RwJwpU;
}

void JwpConfig::validate() const {
  if (!(theta > 0.0)) throw InputError("theta must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InputError("gamma must be a nonnegative finite number");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
  if (max_alternations < 1) throw InputError("max_alternations must be at least 1");
  if (inner_iters < 1) throw InputError("inner_iters must be at least 1");
  if (!(clamp_bound > 0.0)) throw InputError("clamp bound must be positive");
  if (lambda && !(*lambda >= 0.0)) throw InputError("lambda must be nonnegative");
  if (w0 && !std::isfinite(*w0)) throw InputError("w0 must be finite");
  if (!(restart >= 0.0 && restart <= 1.0))
    throw InputError("restart probability must lie in [0, 1]");
  if (threads < 1) throw InputError("threads must be at least 1");
}

double default_lambda(double average_degree) {
  if (!(average_degree > 0.0)) return 1.0;
  return std::min(1.0, 10.0 / average_degree);
}

double convergence_metric(std::span<const double> p_new,
                          std::span<const double> p_old) {
  if (p_new.size() != p_old.size())
    throw InputError("convergence metric on vectors of different length");
  double diff = 0.0, norm = 0.0;
  kernels::active().l1_change(p_new.data(), p_old.data(), p_new.size(), &diff,
                              &norm);
  if (norm == 0.0) return std::numeric_limits<double>::infinity();
  return diff / norm;
}

std::pair<double, double> mean_weights_by_homophily(const Graph& g,
                                                    const EdgeWeights& w,
                                                    const LabelSet& truth) {
  const auto y = truth.dense(g.node_count());
  const auto src = g.slot_source();
  const auto dst = g.slot_target();
  double homo = 0.0, hetero = 0.0;
  std::size_t n_homo = 0, n_hetero = 0;
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const int a = y[src[s]], b = y[dst[s]];
    if (a == 0 || b == 0) continue;
    if (a == b) {
      homo += w.values[s];
      ++n_homo;
    } else {
      hetero += w.values[s];
      ++n_hetero;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {n_homo ? homo / n_homo : nan, n_hetero ? hetero / n_hetero : nan};
}

namespace {

RwVariant rw_variant(Method m) {
  if (m == Method::RwN) return RwVariant::Negative;
  if (m == Method::RwP) return RwVariant::Positive;
  return RwVariant::Both;
}

}  // namespace

RunResult run(const Graph& g, const LabelSet& train, const JwpConfig& cfg,
              const LabelSet* truth, const AlternationObserver& observer) {
  using Clock = std::chrono::steady_clock;
  cfg.validate();
  const std::size_t n = g.node_count();
  train.validate(n);
  if (needs_directed(cfg.method) != g.directed())
    throw InputError(std::string(method_name(cfg.method)) + " needs " +
                     (needs_directed(cfg.method) ? "a directed" : "an undirected") +
                     " graph");

  const double avg = average_degree(g);
  RunResult result;
  result.w0 = cfg.w0.value_or(1.0 / avg);
  result.lambda = cfg.lambda.value_or(default_lambda(avg));
  const bool learn = learns_weights(cfg.method);
  const bool walk = is_random_walk(cfg.method);

  RwOptions rw;
  rw.variant = rw_variant(cfg.method);
  rw.restart = cfg.restart;
  rw.both_normalization = cfg.rw_normalization;

  const std::vector<double> q = walk ? rw_priors(train, cfg.theta, n, rw.variant)
                                     : assign_priors(train, cfg.theta, n);

  // All initial weights are equal, so normalizing one of them is enough.
  EdgeWeights init;
  init.values = {result.w0};
  init.clamp_bound = cfg.clamp_bound;
  init.normalize(cfg.renorm);
  EdgeWeights& w = result.weights;
  w = EdgeWeights(g, init.values[0], cfg.clamp_bound);

  // Undirected LBP works on per-entry weights; w is refreshed from them
  // whenever it is read.
  const bool per_entry = !walk && !g.directed();
  EdgeWeights ew;
  if (per_entry) {
    ew.values.assign(2 * g.edge_count(), init.values[0]);
    ew.clamp_bound = cfg.clamp_bound;
  }
  auto sync = [&] {
    if (per_entry && learn) collapse_entries(g, ew.values, w);
  };

  auto propagate = [&](std::span<const double> p, std::span<double> out) {
    if (per_entry)
      lbp_step_entries(g, ew.values, q, p, out, cfg.threads);
    else if (walk)
      rw_step(g, w, q, p, out, rw, cfg.threads);
    else if (g.directed())
      lbp_step_directed(g, w, q, p, out, cfg.threads);
    else
      lbp_step_undirected(g, w, q, p, out, cfg.threads);
  };
  auto gradient = [&](std::span<const double> p, std::span<const double> p_next,
                      GradientBuffer& out) {
    if (walk)
      grad_rw_into(g, w, p, p_next, train, result.lambda, cfg.regularizer, rw,
                   out, cfg.threads);
    else if (g.directed())
      grad_directed_into(g, w, p, p_next, train, result.lambda, cfg.regularizer,
                         out, cfg.threads);
    else
      grad_undirected_into(g, w, p, p_next, train, result.lambda,
                           cfg.regularizer, out, cfg.threads);
  };

  std::vector<double> p = q;
  std::vector<double> p_next(n);
  std::vector<double> scratch;
  GradientBuffer grad;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t t = 1; t <= cfg.max_alternations; ++t) {
    const auto start = Clock::now();
    propagate(p, p_next);
    if (!kernels::active().all_finite(p_next.data(), n))
      throw NumericalError("non-finite posterior at alternation " + std::to_string(t));
    AlternationDiagnostics diag;
    diag.t = t;
    diag.convergence = convergence_metric(p_next, p);
    const bool converged = diag.convergence < cfg.tolerance;
    const bool stop = cfg.early_stop && converged;

    diag.grad_inf = nan;
    if (learn && !stop) {
      for (std::size_t it = 0; it < cfg.inner_iters; ++it) {
        std::span<const double> target = p_next;
        if (it > 0) {
          scratch.resize(n);
          propagate(p, scratch);
          target = scratch;
        }
        double peak;
        if (per_entry) {
          peak = step_entries(g, ew, p, target, train, result.lambda,
                              cfg.regularizer, cfg.gamma, cfg.renorm, cfg.threads,
                              cfg.diagnostics && it == 0);
        } else {
          gradient(p, target, grad);
          peak = cfg.diagnostics && it == 0 ? grad.abs_max() : nan;
          apply_gradient_step(w, grad, cfg.gamma, cfg.renorm);
        }
        if (cfg.diagnostics && it == 0) diag.grad_inf = peak;
      }
    }
    if (cfg.diagnostics || truth) sync();
    if (cfg.diagnostics) {
      diag.loss = training_loss(p_next, train);
      diag.consistency = consistency_value(g, w, p_next);
    } else {
      diag.loss = diag.consistency = nan;
    }
    if (truth) {
      std::tie(diag.mean_homogeneous_w, diag.mean_heterogeneous_w) =
          mean_weights_by_homophily(g, w, *truth);
    } else {
      diag.mean_homogeneous_w = diag.mean_heterogeneous_w = nan;
    }
    diag.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();

    p.swap(p_next);
    result.alternations = t;
    result.converged = converged;
    result.diagnostics.push_back(diag);
    if (observer) observer(diag);
    if (stop) break;
  }
  sync();
  result.posteriors = std::move(p);
  return result;
}

}  // namespace jwp
