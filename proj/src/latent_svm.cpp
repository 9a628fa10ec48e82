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

#include "covertrain/latent_svm.hpp"

#include <algorithm>
#include <cmath>

#include "covertrain/error.hpp"

namespace covertrain {

namespace {

// First index of the maximum.
int argmax_first(const Vector& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

void require_finite(double value, const char* where) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string(where) + ": non-finite objective");
  }
}

}  // namespace

Decision decide(const Model& model, const Bag& bag) {
  const Vector scores = instance_scores(model, bag);
  Decision d;
  d.argmax = argmax_first(scores);
  d.score = scores[d.argmax];
  d.label = d.score >= 0.0 ? 1 : -1;
  return d;
}

void TrainConfig::validate() const {
  if (!(c > 0.0)) throw UsageError("C must be positive");
  if (max_outer < 1) throw UsageError("max_outer must be at least 1");
  if (!(outer_tol > 0.0)) throw UsageError("outer_tol must be positive");
  inner.validate();
}

double lsvm_objective(const Model& model, const Dataset& ds,
                      const TrainConfig& cfg) {
  check_dimension(model, ds);
  double data = 0.0;
  for (const Bag& bag : ds.bags) {
    data += loss_value(cfg.loss, bag.label, instance_scores(model, bag).maxCoeff());
  }
  return 0.5 * model.w.squaredNorm() + cfg.c * data;
}

Model train_linear_svm(const InstanceMatrix& examples,
                       std::span<const int> labels, const TrainConfig& cfg,
                       bool use_bias) {
  cfg.validate();
  if (examples.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw UsageError("train_linear_svm: label count mismatch");
  }
  const Eigen::Index dim = examples.cols();
  const LossKind loss = cfg.smooth_loss();
  const double c = cfg.c;
  auto objective = [&](const Vector& params, Vector& grad) {
    const Model m = Model::unpack(params, dim, use_bias);
    Vector scores = examples * m.w;
    if (use_bias) scores.array() += *m.bias;
    Vector dscore(scores.size());
    double data = 0.0;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
      const int y = labels[static_cast<std::size_t>(i)];
      data += loss_value(loss, y, scores[i]);
      dscore[i] = loss_derivative(loss, y, scores[i]);
    }
    grad.resize(params.size());
    grad.head(dim) = m.w + c * (examples.transpose() * dscore);
    if (use_bias) grad[dim] = c * dscore.sum();
    return 0.5 * m.w.squaredNorm() + c * data;
  };
  auto result = minimize<double>(objective, Model::zeros(dim, use_bias).pack(),
                                 cfg.inner);
  require_finite(result.value, "train_linear_svm");
  return Model::unpack(result.x, dim, use_bias);
}

Model train_initial_svm(const Dataset& ds,
                        std::span<const InstanceRef> positives,
                        const TrainConfig& cfg, bool use_bias) {
  Eigen::Index rows = static_cast<Eigen::Index>(positives.size());
  if (positives.empty()) {
    for (const Bag& bag : ds.bags) rows += bag.positive() ? 1 : 0;
  }
  for (const Bag& bag : ds.bags) rows += bag.positive() ? 0 : bag.size();
  if (rows == 0) throw DataError("train_initial_svm: no training examples");

  InstanceMatrix examples(rows, ds.dim);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(rows));
  Eigen::Index r = 0;
  if (positives.empty()) {
    for (const Bag& bag : ds.bags) {
      if (!bag.positive()) continue;
      examples.row(r++) = bag.instances.colwise().mean();
      labels.push_back(1);
    }
  } else {
    for (const InstanceRef& ref : positives) {
      const Bag& bag = ds.bag(ref.bag_id);
      if (ref.instance_id < 0 || ref.instance_id >= bag.size()) {
        throw DataError("train_initial_svm: instance out of range");
      }
      examples.row(r++) = bag.instances.row(ref.instance_id);
      labels.push_back(1);
    }
  }
  if (labels.empty()) {
    throw DataError("train_initial_svm: empty positive set");
  }
  for (const Bag& bag : ds.bags) {
    if (bag.positive()) continue;
    examples.middleRows(r, bag.size()) = bag.instances;
    r += bag.size();
    labels.insert(labels.end(), static_cast<std::size_t>(bag.size()), -1);
  }
  return train_linear_svm(examples, labels, cfg, use_bias);
}

Model train_initial_svm_bag_average(const Dataset& ds, const TrainConfig& cfg,
                                    bool use_bias) {
  if (ds.positive_count() == 0) {
    throw DataError("train_initial_svm: empty positive set");
  }
  return train_initial_svm(ds, {}, cfg, use_bias);
}

std::vector<int> impute_latent(const Model& model, const Dataset& ds) {
  check_dimension(model, ds);
  std::vector<int> latent;
  latent.reserve(ds.bags.size());
  for (const Bag& bag : ds.bags) {
    latent.push_back(argmax_first(instance_scores(model, bag)));
  }
  return latent;
}

LsvmResult train_lsvm_cccp(const Model& init, const Dataset& ds,
                           const TrainConfig& cfg) {
  cfg.validate();
  check_dimension(init, ds);
  const Eigen::Index dim = ds.dim;
  const bool use_bias = init.use_bias();
  const LossKind loss = cfg.smooth_loss();
  const double c = cfg.c;

  TrainConfig smooth_cfg = cfg;
  smooth_cfg.loss = loss;
  TrainConfig hinge_cfg = cfg;
  hinge_cfg.loss = LossKind::kHinge;

  LsvmResult out;
  out.model = init;
  double current = lsvm_objective(init, ds, smooth_cfg);
  require_finite(current, "train_lsvm_cccp");
  out.trace.push_back(current);
  out.hinge_trace.push_back(lsvm_objective(init, ds, hinge_cfg));

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const std::vector<int> latent = impute_latent(out.model, ds);

    // Convex surrogate: positives pinned to `latent`, negatives keep the max.
    // Bags are visited in dataset order so the surrogate equals the outer
    // objective exactly at the current iterate.
    auto surrogate = [&](const Vector& params, Vector& grad) {
      const Model m = Model::unpack(params, dim, use_bias);
      grad.resize(params.size());
      grad.head(dim) = m.w;
      double dbias = 0.0;
      double data = 0.0;
      for (std::size_t b = 0; b < ds.bags.size(); ++b) {
        const Bag& bag = ds.bags[b];
        int row = latent[b];
        double score = 0.0;
        if (bag.positive()) {
          score = bag.instances.row(row).dot(m.w) + m.offset();
        } else {
          const Vector scores = instance_scores(m, bag);
          row = argmax_first(scores);
          score = scores[row];
        }
        data += loss_value(loss, bag.label, score);
        const double d = c * loss_derivative(loss, bag.label, score);
        if (d != 0.0) {
          grad.head(dim) += d * bag.instances.row(row).transpose();
          dbias += d;
        }
      }
      if (use_bias) grad[dim] = dbias;
      return 0.5 * m.w.squaredNorm() + c * data;
    };

    auto inner = minimize<double>(surrogate, out.model.pack(), cfg.inner);
    out.inner_reports.push_back(inner.report);
    const Model next = Model::unpack(inner.x, dim, use_bias);
    const double value = lsvm_objective(next, ds, smooth_cfg);
    require_finite(value, "train_lsvm_cccp");

    out.model = next;
    out.trace.push_back(value);
    out.hinge_trace.push_back(lsvm_objective(next, ds, hinge_cfg));
    ++out.outer_iterations;

    const double decrease = current - value;
    current = value;
    if (decrease < cfg.outer_tol * std::max(1.0, std::abs(out.trace.end()[-2]))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace covertrain
