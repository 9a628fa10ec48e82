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

#include "covertrain/smooth_lsvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "covertrain/error.hpp"

namespace covertrain {

void SmoothConfig::validate() const {
  if (!(mu > 0.0)) throw UsageError("mu must be positive");
  if (n_top < 0) throw UsageError("n_top must be nonnegative");
  if (!is_smooth(loss)) {
    throw UsageError("the smoothed objective needs squared_hinge or logistic");
  }
  if (!(c > 0.0)) throw UsageError("C must be positive");
}

namespace {

TopScores top_of(const Vector& all, int n_top) {
  const auto m = static_cast<int>(all.size());
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  const int n = std::min(n_top, m);
  std::partial_sort(order.begin(), order.begin() + n, order.end(),
                    [&](int a, int b) {
                      if (all[a] != all[b]) return all[a] > all[b];
                      return a < b;
                    });
  order.resize(static_cast<std::size_t>(n));
  std::sort(order.begin(), order.end());
  TopScores top;
  top.scores.resize(n);
  for (int i = 0; i < n; ++i) top.scores[i] = all[order[static_cast<std::size_t>(i)]];
  top.indices = std::move(order);
  return top;
}

BagEvaluation evaluate_full(const Vector& scores, const SmoothConfig& cfg) {
  const auto sm = smoothed_max(scores, cfg.mu, cfg.omega);
  BagEvaluation ev;
  ev.value = sm.value;
  ev.support = sm.support;
  ev.weights = sm.weights;
  return ev;
}

BagEvaluation evaluate_bag(const Vector& scores, const SmoothConfig& cfg) {
  const auto m = static_cast<int>(scores.size());
  if (cfg.n_top == 0 || cfg.n_top >= m) return evaluate_full(scores, cfg);

  const TopScores top = top_of(scores, cfg.n_top);
  BagEvaluation ev;
  ev.truncated = true;
  if (cfg.omega == Omega::kEuclidean) {
    const auto sm = smoothed_max(top.scores, cfg.mu, cfg.omega);
    // Exact when the threshold search stopped inside the reduced vector and
    // every dropped score (all <= the smallest kept one) is below theta.
    const double smallest = (top.scores / cfg.mu).minCoeff();
    if (sm.threshold_support < cfg.n_top && smallest <= sm.theta) {
      ev.value = sm.value;
      ev.weights = sm.weights;
      ev.support.reserve(sm.support.size());
      for (int k : sm.support) {
        ev.support.push_back(top.indices[static_cast<std::size_t>(k)]);
      }
      ev.exact = true;
      return ev;
    }
  }
  // Softmax weights are never sparse, so entropy always falls back.
  BagEvaluation full = evaluate_full(scores, cfg);
  full.truncated = true;
  full.exact = false;
  return full;
}

}  // namespace

TopScores top_n_scores(const Model& model, const Bag& bag, int n_top) {
  if (n_top < 1 || n_top > bag.size()) {
    throw UsageError("top_n_scores: need 1 <= n_top <= bag size");
  }
  return top_of(instance_scores(model, bag), n_top);
}

BagEvaluation smoothed_bag_score(const Model& model, const Bag& bag,
                                 const SmoothConfig& cfg) {
  cfg.validate();
  return evaluate_bag(instance_scores(model, bag), cfg);
}

ObjectiveGrad slsvm_objective_grad(const Model& model, const Dataset& ds,
                                   const SmoothConfig& cfg) {
  cfg.validate();
  check_dimension(model, ds);
  ObjectiveGrad out;
  out.grad_w = model.w;
  double data = 0.0;
  for (const Bag& bag : ds.bags) {
    const BagEvaluation ev = evaluate_bag(instance_scores(model, bag), cfg);
    if (ev.truncated) {
      ++out.truncated_bags;
      if (ev.exact) ++out.certified_bags;
    }
    data += loss_value(cfg.loss, bag.label, ev.value);
    const double d = cfg.c * loss_derivative(cfg.loss, bag.label, ev.value);
    if (d == 0.0) continue;
    // A^T u*, accumulated over the support in ascending instance order.
    for (std::size_t k = 0; k < ev.support.size(); ++k) {
      const double u = ev.weights[static_cast<Eigen::Index>(k)];
      out.grad_w.noalias() += (d * u) * bag.instances.row(ev.support[k]).transpose();
    }
    // The weights sum to one, so the bias picks up the loss derivative.
    out.grad_bias += d;
  }
  out.value = 0.5 * model.w.squaredNorm() + cfg.c * data;
  if (!std::isfinite(out.value)) {
    throw NumericalError("slsvm objective is not finite");
  }
  if (!model.use_bias()) out.grad_bias = 0.0;
  return out;
}

SlsvmResult train_slsvm(const Model& init, const Dataset& ds,
                        const SmoothConfig& cfg, const OptConfig& opt) {
  cfg.validate();
  check_dimension(init, ds);
  const Eigen::Index dim = ds.dim;
  const bool use_bias = init.use_bias();

  double last_rate = 1.0;
  auto objective = [&](const Vector& params, Vector& grad) {
    const Model m = Model::unpack(params, dim, use_bias);
    const ObjectiveGrad og = slsvm_objective_grad(m, ds, cfg);
    grad.resize(params.size());
    grad.head(dim) = og.grad_w;
    if (use_bias) grad[dim] = og.grad_bias;
    last_rate = og.certification_rate();
    return og.value;
  };

  SlsvmResult out;
  std::vector<double>& rates = out.report.certification_rate;
  auto observer = [&](int, const Vector& params, double, const Vector&) {
    if (cfg.n_top == 0) {
      rates.push_back(1.0);
      return;
    }
    // The last evaluation is not always the accepted iterate (the zoom
    // fallback re-evaluates), so recompute at the iterate itself.
    const Model m = Model::unpack(params, dim, use_bias);
    rates.push_back(slsvm_objective_grad(m, ds, cfg).certification_rate());
  };

  Vector x0 = init.pack();
  {
    Vector g;
    objective(x0, g);
    rates.push_back(last_rate);
  }
  auto result = minimize<double>(objective, std::move(x0), opt, observer);
  out.model = Model::unpack(result.x, dim, use_bias);
  out.report.opt = std::move(result.report);
  return out;
}

}  // namespace covertrain
