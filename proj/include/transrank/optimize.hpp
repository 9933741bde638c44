// Copyright 2026 The transrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Projected gradient descent over the sum-zero subspace {x : 1'x = 0}.
//
// Every iterate is mean-centered. Step sizes come from Armijo backtracking
// (default) or a fixed eta. An optional Newton direction, solved on the
// sum-zero subspace, accelerates convergence for twice-differentiable
// objectives.

#ifndef TRANSRANK_OPTIMIZE_HPP_
#define TRANSRANK_OPTIMIZE_HPP_

#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "transrank/error.hpp"
#include "transrank/likelihood.hpp"

namespace transrank {

enum class StepRule { kFixed, kBacktracking };

struct OptimizerConfig {
  int max_iters = 10000;
  double grad_tol = 1e-8;  // sup-norm of the projected gradient
  StepRule step_rule = StepRule::kBacktracking;
  double fixed_eta = 0.0;  // required when step_rule == kFixed
  bool newton = false;     // needs a hessian() on the objective
  double armijo_c1 = 1e-4;

  void validate() const {
    if (max_iters < 1) {
      throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
    }
    if (!(grad_tol > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "grad_tol must be > 0");
    }
    if (step_rule == StepRule::kFixed && !(fixed_eta > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fixed step rule needs a positive eta");
    }
  }
};

struct OptimResult {
  WorthVector solution;
  int iterations = 0;
  double final_grad_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  // Set by fitting code when Ford's condition fails on the data.
  bool mle_existence_warning = false;
};

template <class F>
concept SmoothObjective = requires(const F& f, const Vector& x) {
  { f.value(x) } -> std::convertible_to<double>;
  { f.gradient(x) } -> std::convertible_to<Vector>;
};

template <class F>
concept TwiceSmoothObjective = SmoothObjective<F> && requires(const F& f, const Vector& x) {
  { f.hessian(x) } -> std::convertible_to<Matrix>;
};

// Adapter for plain callbacks.
struct CallbackObjective {
  std::function<double(const Vector&)> value_fn;
  std::function<Vector(const Vector&)> gradient_fn;

  double value(const Vector& x) const { return value_fn(x); }
  Vector gradient(const Vector& x) const { return gradient_fn(x); }
};

namespace detail {

[[noreturn]] inline void non_finite_at(int iteration, const char* what) {
  throw Error(ErrorCode::kNonFinite, std::string("non-finite ") + what +
                                         " at iteration " +
                                         std::to_string(iteration));
}

// Newton direction restricted to 1-perp: solve (H + 11'/M) d = -g.
template <class F>
bool newton_direction(const F& f, const Vector& x, const Vector& g, Vector& d) {
  if constexpr (TwiceSmoothObjective<F>) {
    const auto m = x.size();
    Matrix h = f.hessian(x);
    h.array() += 1.0 / static_cast<double>(m);
    Eigen::LDLT<Matrix> ldlt(h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    Vector step = ldlt.solve(-g);
    if (!step.allFinite()) return false;
    d = center(step);
    return d.dot(g) < 0.0;
  } else {
    (void)f, (void)x, (void)g, (void)d;
    return false;
  }
}

}  // namespace detail

template <SmoothObjective F>
OptimResult minimize_sum_zero(const F& f, const Vector& init,
                              const OptimizerConfig& config) {
  config.validate();
  if (!init.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "initial point is not finite");
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  OptimResult result;
  Vector x = center(init);
  double fx = f.value(x);
  if (!std::isfinite(fx)) detail::non_finite_at(0, "objective");

  double eta = config.step_rule == StepRule::kFixed ? config.fixed_eta : 1.0;
  int t = 0;
  for (;; ++t) {
    Vector g = center(f.gradient(x));
    if (!g.allFinite()) detail::non_finite_at(t, "gradient");
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    result.final_grad_norm = gnorm;
    if (gnorm <= config.grad_tol) {
      result.converged = true;
      break;
    }
    if (t >= config.max_iters) break;

    Vector d = -g;
    bool newton = config.newton && detail::newton_direction(f, x, g, d);
    if (!newton) d = -g;
    const double slope = g.dot(d);

    if (config.step_rule == StepRule::kFixed) {
      x = center(x + config.fixed_eta * d);
      fx = f.value(x);
      if (!std::isfinite(fx)) detail::non_finite_at(t + 1, "objective");
      continue;
    }

    // Armijo backtracking. Near the optimum the decrease falls below the
    // resolution of fx; there we accept a step once the directional
    // derivative at the trial point is still non-positive, which for a
    // convex objective guarantees no increase.
    double step = newton ? 1.0 : std::min(2.0 * eta, 1e12);
    bool accepted = false;
    for (int halvings = 0; halvings < 80; ++halvings, step *= 0.5) {
      Vector trial = center(x + step * d);
      const double ft = f.value(trial);
      if (!std::isfinite(ft)) continue;
      if (ft <= fx + config.armijo_c1 * step * slope) {
        x = std::move(trial);
        fx = ft;
        accepted = true;
        break;
      }
      const double resolution = 64.0 * kEps * std::max(1.0, std::abs(fx));
      if (std::abs(ft - fx) <= resolution) {
        const Vector gt = f.gradient(trial);
        if (gt.allFinite() && gt.dot(d) <= 0.0) {
          x = std::move(trial);
          fx = ft;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;  // stalled; reported as not converged
    if (!newton) eta = step;
  }
  result.solution = center(x);
  result.iterations = t;
  result.objective_value = fx;
  return result;
}

inline OptimResult minimize_sum_zero(
    const std::function<double(const Vector&)>& value,
    const std::function<Vector(const Vector&)>& gradient, const Vector& init,
    const OptimizerConfig& config) {
  return minimize_sum_zero(CallbackObjective{value, gradient}, init, config);
}

}  // namespace transrank

#endif  // TRANSRANK_OPTIMIZE_HPP_
