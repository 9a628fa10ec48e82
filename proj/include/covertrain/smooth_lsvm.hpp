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

// Smoothed latent SVM. The per-bag max over instance scores is replaced by
// the smoothed max of simplex.hpp and the hinge by a smooth loss, giving
//
//   J_mu(w) = 1/2 |w|^2 + C sum_i loss(y_i, f_mu(A_i w + b)),
//   grad    = w + C sum_i loss'(y_i, f_mu) A_i^T u*_i,
//
// which the quasi-Newton optimizer minimizes directly.
//
// With n_top = N > 0 only the N best instances of a bag enter the projection.
// That result is certified exact when its support is smaller than N (and the
// N-th score is already below the threshold); otherwise the bag is evaluated
// on all of its instances.

#ifndef COVERTRAIN_SMOOTH_LSVM_HPP_
#define COVERTRAIN_SMOOTH_LSVM_HPP_

#include <vector>

#include "covertrain/dataset.hpp"
#include "covertrain/lbfgs.hpp"
#include "covertrain/loss.hpp"
#include "covertrain/model.hpp"
#include "covertrain/simplex.hpp"

namespace covertrain {

struct SmoothConfig {
  double mu = 0.1;
  int n_top = 0;  // 0 evaluates every instance
  Omega omega = Omega::kEuclidean;
  LossKind loss = LossKind::kSquaredHinge;
  double c = 1.0;

  void validate() const;
};

struct TopScores {
  std::vector<int> indices;  // ascending instance id
  Vector scores;             // aligned with `indices`
  bool certified = false;    // filled in by the caller
};

// The n_top highest-scoring instances (ties to the lowest instance id),
// returned in ascending instance order.
TopScores top_n_scores(const Model& model, const Bag& bag, int n_top);

// Smoothed bag score with its sparse maximizer, honoring the top-N rule.
// `exact` reports whether the truncated evaluation was certified; it is true
// whenever no truncation happened.
struct BagEvaluation {
  double value = 0.0;
  std::vector<int> support;  // ascending instance ids
  Vector weights;
  bool truncated = false;  // a top-N evaluation was attempted
  bool exact = true;
};

BagEvaluation smoothed_bag_score(const Model& model, const Bag& bag,
                                 const SmoothConfig& cfg);

struct ObjectiveGrad {
  double value = 0.0;
  Vector grad_w;
  double grad_bias = 0.0;
  int truncated_bags = 0;
  int certified_bags = 0;

  // Share of truncated bags that were certified; 1 when none were truncated.
  double certification_rate() const {
    return truncated_bags == 0
               ? 1.0
               : static_cast<double>(certified_bags) / truncated_bags;
  }
};

ObjectiveGrad slsvm_objective_grad(const Model& model, const Dataset& ds,
                                   const SmoothConfig& cfg);

struct TrainReport {
  OptReport opt;
  std::vector<double> certification_rate;  // one per trace entry
};

struct SlsvmResult {
  Model model;
  TrainReport report;
};

SlsvmResult train_slsvm(const Model& init, const Dataset& ds,
                        const SmoothConfig& cfg, const OptConfig& opt);

}  // namespace covertrain

#endif  // COVERTRAIN_SMOOTH_LSVM_HPP_
