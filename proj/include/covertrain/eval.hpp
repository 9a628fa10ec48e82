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

// Bag-level accuracy and k-fold cross-validation over (C, mu).

#ifndef COVERTRAIN_EVAL_HPP_
#define COVERTRAIN_EVAL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "covertrain/dataset.hpp"
#include "covertrain/latent_svm.hpp"
#include "covertrain/model.hpp"
#include "covertrain/smooth_lsvm.hpp"

namespace covertrain {

// Percentage of bags whose decision label matches the bag label.
double bag_accuracy(const Model& model, const Dataset& ds);

enum class Method { kLsvm, kSlsvm };

Method parse_method(const std::string& text);
std::string to_string(Method method);

struct CvOptions {
  std::vector<Method> methods{Method::kLsvm, Method::kSlsvm};
  std::vector<bool> bias_variants{false, true};
  std::vector<double> c_values{0.1, 1.0, 10.0, 100.0};
  std::vector<double> mu_values{0.01, 0.1, 1.0, 10.0};
  int folds = 10;
  std::uint64_t seed = 0;
  bool standardize = true;
  // Templates; C (and mu) are overwritten per cell.
  TrainConfig lsvm;
  SmoothConfig smooth;
  OptConfig opt;
  int threads = 1;
};

struct CvCell {
  Method method = Method::kLsvm;
  bool bias = false;
  double c = 1.0;
  double mu = 0.0;
  std::vector<double> fold_accuracy;  // exactly `folds` entries when ok
  double mean = 0.0;
  double stddev = 0.0;                // sample standard deviation
  std::string error;                  // first failure, empty when ok

  bool ok() const { return error.empty(); }
};

struct CvReport {
  std::string dataset;
  int folds = 0;
  std::uint64_t seed = 0;
  // Sorted by (method, bias, C, mu) regardless of the grid's input order.
  std::vector<CvCell> cells;
  int best = -1;  // highest mean among ok cells, first on ties

  // Best ok cell for one (method, bias) column, or -1.
  int best_for(Method method, bool bias) const;
};

// Per fold: standardize with training statistics, fit the bag-averaged
// initial SVM once per (C, bias), start every method from that same model,
// and score the held-out bags. Training failures are recorded per cell.
CvReport cross_validate(const Dataset& ds, const CvOptions& options);

// Plain-text summary: one row for the dataset, a column per (method, bias)
// pair showing the best cell as mean +- std, followed by every cell.
std::string format_cv_table(const CvReport& report);

}  // namespace covertrain

#endif  // COVERTRAIN_EVAL_HPP_
