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

#ifndef COVERTRAIN_MODEL_HPP_
#define COVERTRAIN_MODEL_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "covertrain/dataset.hpp"

namespace covertrain {

// Linear max-instance classifier. The bias, when present, is added to every
// instance score and is never regularized.
struct Model {
  Vector w;
  std::optional<double> bias;

  static Model zeros(Eigen::Index dim, bool use_bias) {
    Model m;
    m.w = Vector::Zero(dim);
    if (use_bias) m.bias = 0.0;
    return m;
  }

  bool use_bias() const { return bias.has_value(); }
  double offset() const { return bias.value_or(0.0); }
  Eigen::Index dim() const { return w.size(); }

  // Packs w followed by the bias (if any) into one optimizer vector.
  Vector pack() const;
  static Model unpack(const Vector& params, Eigen::Index dim, bool use_bias);
};

// Instance scores w.x + b for every row of the bag.
Vector instance_scores(const Model& model, const Bag& bag);

// Throws DataError when dimensions disagree.
void check_dimension(const Model& model, const Dataset& ds);

// Text form: optional `#` comment lines, a `dim <d>` or `dim <d> bias`
// header, d weight lines, then the bias line when present.
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace covertrain

#endif  // COVERTRAIN_MODEL_HPP_
