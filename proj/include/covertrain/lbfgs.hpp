// Copyright 2026 The covertrain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Limited-memory BFGS with a strong-Wolfe line search (bracketing + zoom with
// safeguarded cubic interpolation).

#ifndef COVERTRAIN_LBFGS_HPP_
#define COVERTRAIN_LBFGS_HPP_

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "covertrain/error.hpp"

namespace covertrain {

struct OptConfig {
  int memory = 10;
  double grad_tol = 1e-6;  // on the infinity norm
  int max_iters = 500;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search = 40;

  void validate() const {
    if (memory < 1) throw UsageError("optimizer: memory must be >= 1");
    if (!(grad_tol > 0.0)) throw UsageError("optimizer: grad_tol must be > 0");
    if (max_iters < 0) throw UsageError("optimizer: max_iters must be >= 0");
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
      throw UsageError("optimizer: need 0 < c1 < c2 < 1");
    }
    if (max_line_search < 1) {
      throw UsageError("optimizer: max_line_search must be >= 1");
    }
  }
};

enum class Termination { kConverged, kMaxIters, kLineSearchFailure };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kMaxIters: return "max_iters";
    case Termination::kLineSearchFailure: return "line_search_failure";
  }
  return "?";
}

struct OptReport {
  int iterations = 0;
  int evaluations = 0;
  double final_grad_norm = 0.0;
  std::vector<double> trace;       // objective at x0 and after each step
  std::vector<double> grad_norms;  // matching infinity norms
  Termination termination = Termination::kMaxIters;
};

template <typename Scalar>
struct MinimizeResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value{};
  OptReport report;
};

namespace detail {

// Minimizer of the cubic matching values and slopes at a and b. Falls back
// to bisection when the cubic has no real minimizer.
template <typename Scalar>
Scalar cubic_minimizer(Scalar a, Scalar fa, Scalar da, Scalar b, Scalar fb,
                       Scalar db) {
  const Scalar d1 = da + db - 3 * (fa - fb) / (a - b);
  const Scalar disc = d1 * d1 - da * db;
  if (!(disc >= 0) || !std::isfinite(disc)) return (a + b) / 2;
  const Scalar d2 = (b > a ? 1 : -1) * std::sqrt(disc);
  const Scalar denom = db - da + 2 * d2;
  if (denom == 0) return (a + b) / 2;
  const Scalar x = b - (b - a) * (db + d2 - d1) / denom;
  return std::isfinite(x) ? x : (a + b) / 2;
}

}  // namespace detail

// Minimizes a smooth function. `fn(x, grad)` returns f(x) and writes the
// gradient. `observer(iteration, x, f, grad)` runs after every accepted step.
template <typename Scalar, typename Fn>
MinimizeResult<Scalar> minimize(
    Fn&& fn, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x0, const OptConfig& cfg,
    const std::function<void(int, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&,
                             Scalar,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>&)>&
        observer = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  cfg.validate();

  MinimizeResult<Scalar> out;
  OptReport& report = out.report;
  Vec x = std::move(x0);
  Vec g(x.size());
  Scalar f = fn(x, g);
  ++report.evaluations;
  if (!std::isfinite(f) || !g.allFinite()) {
    throw NumericalError("optimizer: non-finite objective at the start point");
  }
  report.trace.push_back(static_cast<double>(f));
  report.grad_norms.push_back(
      static_cast<double>(g.size() ? g.template lpNorm<Eigen::Infinity>() : 0));

  std::deque<std::pair<Vec, Vec>> pairs;  // (s, y)
  std::deque<Scalar> rhos;
  Vec x_trial(x.size()), g_trial(x.size()), direction(x.size());

  auto gnorm = [](const Vec& v) {
    return v.size() ? v.template lpNorm<Eigen::Infinity>() : Scalar(0);
  };

  report.termination = Termination::kMaxIters;
  bool retried = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (gnorm(g) <= cfg.grad_tol) {
      report.termination = Termination::kConverged;
      break;
    }

    // Two-loop recursion.
    direction = -g;
    std::vector<Scalar> alphas(pairs.size());
    for (std::size_t i = pairs.size(); i-- > 0;) {
      alphas[i] = rhos[i] * pairs[i].first.dot(direction);
      direction -= alphas[i] * pairs[i].second;
    }
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      direction *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Scalar beta = rhos[i] * pairs[i].second.dot(direction);
      direction += (alphas[i] - beta) * pairs[i].first;
    }

    Scalar d0 = g.dot(direction);
    if (!(d0 < 0)) {
      pairs.clear();
      rhos.clear();
      direction = -g;
      d0 = -g.squaredNorm();
    }
    const Scalar step0 =
        pairs.empty() ? std::min<Scalar>(1, 1 / std::sqrt(-d0)) : Scalar(1);

    // Strong-Wolfe line search on phi(a) = f(x + a d).
    int evals = 0;
    auto phi = [&](Scalar a, Scalar& value, Scalar& slope) {
      x_trial = x + a * direction;
      value = fn(x_trial, g_trial);
      ++evals;
      ++report.evaluations;
      slope = g_trial.dot(direction);
      return std::isfinite(value) && g_trial.allFinite();
    };
    const Scalar f0 = f;
    bool accepted = false;
    Scalar f_acc = 0;
    Vec x_acc, g_acc;
    auto accept = [&](Scalar value) {
      accepted = true;
      f_acc = value;
      x_acc = x_trial;
      g_acc = g_trial;
    };
    auto armijo = [&](Scalar a, Scalar value) {
      return value <= f0 + cfg.c1 * a * d0;
    };
    auto curvature = [&](Scalar slope) {
      return std::abs(slope) <= -cfg.c2 * d0;
    };

    auto zoom = [&](Scalar lo, Scalar f_lo, Scalar d_lo, Scalar hi,
                    Scalar f_hi, Scalar d_hi) {
      while (evals < cfg.max_line_search) {
        const Scalar width = hi - lo;
        Scalar a = detail::cubic_minimizer(lo, f_lo, d_lo, hi, f_hi, d_hi);
        const Scalar left = std::min(lo, hi) + Scalar(0.1) * std::abs(width);
        const Scalar right = std::max(lo, hi) - Scalar(0.1) * std::abs(width);
        if (!(a >= left && a <= right)) a = (lo + hi) / 2;
        if (a == lo || a == hi) return;
        Scalar fa, da;
        if (!phi(a, fa, da)) {
          hi = a;
          f_hi = std::numeric_limits<Scalar>::infinity();
          d_hi = 0;
          continue;
        }
        if (!armijo(a, fa) || fa >= f_lo) {
          hi = a;
          f_hi = fa;
          d_hi = da;
        } else {
          if (curvature(da)) {
            accept(fa);
            return;
          }
          if (da * (hi - lo) >= 0) {
            hi = lo;
            f_hi = f_lo;
            d_hi = d_lo;
          }
          lo = a;
          f_lo = fa;
          d_lo = da;
        }
      }
      // Budget exhausted: keep the best sufficient-decrease point, if any.
      if (lo > 0 && f_lo < f0) {
        x_trial = x + lo * direction;
        Scalar fl = fn(x_trial, g_trial);
        ++report.evaluations;
        if (std::isfinite(fl) && fl < f0) accept(fl);
      }
    };

    Scalar a_prev = 0, f_prev = f0, d_prev = d0;
    Scalar a = step0;
    bool first = true;
    while (!accepted && evals < cfg.max_line_search) {
      Scalar fa, da;
      if (!phi(a, fa, da)) {
        // Non-finite trial: shrink toward the last good point.
        a = a_prev + (a - a_prev) / 2;
        continue;
      }
      if (!armijo(a, fa) || (!first && fa >= f_prev)) {
        zoom(a_prev, f_prev, d_prev, a, fa, da);
        break;
      }
      if (curvature(da)) {
        accept(fa);
        break;
      }
      if (da >= 0) {
        zoom(a, fa, da, a_prev, f_prev, d_prev);
        break;
      }
      first = false;
      a_prev = a;
      f_prev = fa;
      d_prev = da;
      a = std::min<Scalar>(a * 2, Scalar(1e10));
    }

    if (!accepted) {
      if (!pairs.empty() && !retried) {
        // Stale curvature can point badly; retry once from steepest descent.
        pairs.clear();
        rhos.clear();
        retried = true;
        --iter;
        continue;
      }
      report.termination = Termination::kLineSearchFailure;
      break;
    }
    retried = false;

    Vec s = x_acc - x;
    Vec y = g_acc - g;
    const Scalar sy = s.dot(y);
    if (sy > std::numeric_limits<Scalar>::epsilon() * y.squaredNorm() &&
        sy > 0) {
      if (static_cast<int>(pairs.size()) == cfg.memory) {
        pairs.pop_front();
        rhos.pop_front();
      }
      rhos.push_back(1 / sy);
      pairs.emplace_back(std::move(s), std::move(y));
    }
    x = std::move(x_acc);
    g = std::move(g_acc);
    f = f_acc;
    ++report.iterations;
    report.trace.push_back(static_cast<double>(f));
    report.grad_norms.push_back(static_cast<double>(gnorm(g)));
    if (observer) observer(report.iterations, x, f, g);
  }
  if (report.termination == Termination::kMaxIters && gnorm(g) <= cfg.grad_tol) {
    report.termination = Termination::kConverged;
  }

  report.final_grad_norm = static_cast<double>(gnorm(g));
  out.x = std::move(x);
  out.value = f;
  return out;
}

}  // namespace covertrain

#endif  // COVERTRAIN_LBFGS_HPP_
