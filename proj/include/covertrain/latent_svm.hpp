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

// Latent SVM over bags: a bag is scored by its best instance,
//
//   J(w) = 1/2 |w|^2 + C sum_i loss(y_i, max_j w.x_ij + b),
//
// and trained by the concave-convex procedure. Each outer step fixes the
// best-scoring instance of every positive bag, which turns J into a convex
// upper bound that touches it at the current w; negative bags keep the max
// inside the loss, which is already convex.

#ifndef COVERTRAIN_LATENT_SVM_HPP_
#define COVERTRAIN_LATENT_SVM_HPP_

#include <span>
#include <vector>

#include "covertrain/dataset.hpp"
#include "covertrain/lbfgs.hpp"
#include "covertrain/loss.hpp"
#include "covertrain/model.hpp"

namespace covertrain {

struct Decision {
  int label = 1;     // sign(score), with sign(0) = +1
  int argmax = 0;    // lowest instance id among the maxima
  double score = 0.0;
};

Decision decide(const Model& model, const Bag& bag);

struct TrainConfig {
  double c = 1.0;
  LossKind loss = LossKind::kHinge;
  int max_outer = 50;
  double outer_tol = 1e-6;  // relative decrease of the outer objective
  OptConfig inner;

  void validate() const;
  // The hinge is swapped for the squared hinge wherever a smooth solve runs.
  LossKind smooth_loss() const {
    return loss == LossKind::kHinge ? LossKind::kSquaredHinge : loss;
  }
};

// Objective J under cfg.loss (hinge allowed); bias excluded from the norm.
double lsvm_objective(const Model& model, const Dataset& ds,
                      const TrainConfig& cfg);

// Ordinary linear classifier on instances: every instance of every negative
// bag is a negative example. With `positives` empty the positive examples are
// the per-bag means of the positive bags; otherwise they are exactly the
// listed instances. Solved with the smooth loss to cfg.inner.grad_tol.
Model train_initial_svm(const Dataset& ds,
                        std::span<const InstanceRef> positives,
                        const TrainConfig& cfg, bool use_bias);
Model train_initial_svm_bag_average(const Dataset& ds, const TrainConfig& cfg,
                                    bool use_bias);

// Lower-level entry: rows of `examples` with labels `labels` in {-1, +1}.
Model train_linear_svm(const InstanceMatrix& examples,
                       std::span<const int> labels, const TrainConfig& cfg,
                       bool use_bias);

// Best instance of every bag under `model` (entries for negative bags too).
std::vector<int> impute_latent(const Model& model, const Dataset& ds);

struct LsvmResult {
  Model model;
  // Outer objective under the smooth training loss: initial value, then one
  // entry per outer iteration. Nonincreasing.
  std::vector<double> trace;
  // The same iterates evaluated under the plain hinge.
  std::vector<double> hinge_trace;
  int outer_iterations = 0;
  bool converged = false;
  std::vector<OptReport> inner_reports;
};

LsvmResult train_lsvm_cccp(const Model& init, const Dataset& ds,
                           const TrainConfig& cfg);

}  // namespace covertrain

#endif  // COVERTRAIN_LATENT_SVM_HPP_
