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

#ifndef COVERTRAIN_LOSS_HPP_
#define COVERTRAIN_LOSS_HPP_

#include <algorithm>
#include <cmath>
#include <string>

#include "covertrain/error.hpp"

namespace covertrain {

enum class LossKind { kHinge, kSquaredHinge, kLogistic };

inline LossKind parse_loss(const std::string& text) {
  if (text == "hinge") return LossKind::kHinge;
  if (text == "squared_hinge" || text == "squared-hinge") {
    return LossKind::kSquaredHinge;
  }
  if (text == "logistic") return LossKind::kLogistic;
  throw UsageError("unknown loss '" + text +
                   "' (expected hinge, squared_hinge or logistic)");
}

inline std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kHinge: return "hinge";
    case LossKind::kSquaredHinge: return "squared_hinge";
    case LossKind::kLogistic: return "logistic";
  }
  return "?";
}

inline bool is_smooth(LossKind kind) { return kind != LossKind::kHinge; }

// l(y, s) for label y in {-1, +1} and score s.
template <typename Scalar>
Scalar loss_value(LossKind kind, int y, Scalar s) {
  const Scalar margin = 1 - y * s;
  switch (kind) {
    case LossKind::kHinge: return std::max<Scalar>(0, margin);
    case LossKind::kSquaredHinge: {
      const Scalar m = std::max<Scalar>(0, margin);
      return m * m;
    }
    case LossKind::kLogistic: {
      const Scalar z = -y * s;  // log(1 + e^z), stable for both signs
      return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
  }
  return 0;
}

// dl/ds. For the hinge this is the subgradient that is zero at the kink.
template <typename Scalar>
Scalar loss_derivative(LossKind kind, int y, Scalar s) {
  switch (kind) {
    case LossKind::kHinge: return 1 - y * s > 0 ? Scalar(-y) : Scalar(0);
    case LossKind::kSquaredHinge:
      return -2 * y * std::max<Scalar>(0, 1 - y * s);
    case LossKind::kLogistic: {
      const Scalar z = -y * s;
      // sigmoid(z), stable for both signs
      const Scalar sig = z >= 0 ? 1 / (1 + std::exp(-z))
                                : std::exp(z) / (1 + std::exp(z));
      return -y * sig;
    }
  }
  return 0;
}

}  // namespace covertrain

#endif  // COVERTRAIN_LOSS_HPP_
