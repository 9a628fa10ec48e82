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

// Euclidean projection onto the probability simplex and the smoothed maximum
// built on it.
//
// The projection of v is max(v - theta, 0) for the unique theta that makes
// the result sum to one. It keeps the order of the coordinates and is sparse,
// which is what lets the smoothed max look at only the top few scores.

#ifndef COVERTRAIN_SIMPLEX_HPP_
#define COVERTRAIN_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "covertrain/error.hpp"

namespace covertrain {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SimplexProjection {
  VectorX<Scalar> u;
  Scalar theta{};
  int support = 0;  // number of coordinates kept by the threshold search
};

// Sort-based projection, O(m log m). The threshold search walks the sorted
// values and stops at the first coordinate that falls out of the support, so
// any input sharing the same top entries yields a bit-identical theta.
template <typename Derived>
SimplexProjection<typename Derived::Scalar> project_simplex_detailed(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = v.size();
  if (m == 0) throw UsageError("project_simplex: empty vector");
  if (!v.allFinite()) throw UsageError("project_simplex: non-finite input");

  std::vector<Scalar> sorted(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) sorted[i] = v(i);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

  Scalar cumsum = 0;
  Scalar theta = sorted[0] - 1;
  int support = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    cumsum += sorted[j];
    const Scalar t = (cumsum - 1) / static_cast<Scalar>(j + 1);
    if (sorted[j] - t > 0) {
      theta = t;
      support = static_cast<int>(j + 1);
    } else {
      break;
    }
  }
  SimplexProjection<Scalar> out;
  out.theta = theta;
  out.support = support;
  out.u = (v.derived().array() - theta).max(Scalar(0)).matrix();
  return out;
}

template <typename Derived>
VectorX<typename Derived::Scalar> project_simplex(
    const Eigen::MatrixBase<Derived>& v) {
  return project_simplex_detailed(v).u;
}

// Pivot-based projection with expected linear time: partition the candidate
// set around a pivot and keep only the side that still holds the threshold.
template <typename Derived>
VectorX<typename Derived::Scalar> project_simplex_pivot(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = v.size();
  if (m == 0) throw UsageError("project_simplex: empty vector");
  if (!v.allFinite()) throw UsageError("project_simplex: non-finite input");

  std::vector<Scalar> candidates(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) candidates[i] = v(i);
  Scalar kept_sum = 0;
  Eigen::Index kept = 0;
  std::vector<Scalar> upper, lower;
  while (!candidates.empty()) {
    // Median of three on a deterministic sample.
    const Scalar a = candidates.front();
    const Scalar b = candidates[candidates.size() / 2];
    const Scalar c = candidates.back();
    const Scalar pivot = std::max(std::min(a, b), std::min(std::max(a, b), c));
    upper.clear();
    lower.clear();
    Scalar upper_sum = 0;
    for (Scalar x : candidates) {
      if (x >= pivot) {
        upper.push_back(x);
        upper_sum += x;
      } else {
        lower.push_back(x);
      }
    }
    const auto upper_count = static_cast<Eigen::Index>(upper.size());
    if ((kept_sum + upper_sum) -
            static_cast<Scalar>(kept + upper_count) * pivot <
        1) {
      // The pivot is inside the support, and so is everything above it.
      kept_sum += upper_sum;
      kept += upper_count;
      candidates.swap(lower);
    } else {
      // The threshold is at or above the pivot: drop one copy of it and
      // everything below.
      upper.erase(std::find(upper.begin(), upper.end(), pivot));
      candidates.swap(upper);
    }
  }
  const Scalar theta = (kept_sum - 1) / static_cast<Scalar>(kept);
  return (v.derived().array() - theta).max(Scalar(0)).matrix();
}

enum class Omega { kEuclidean, kEntropy };

inline Omega parse_omega(const std::string& text) {
  if (text == "euclidean") return Omega::kEuclidean;
  if (text == "entropy") return Omega::kEntropy;
  throw UsageError("unknown omega '" + text +
                   "' (expected euclidean or entropy)");
}

inline std::string to_string(Omega omega) {
  return omega == Omega::kEuclidean ? "euclidean" : "entropy";
}

template <typename Scalar>
struct SmoothedMaxResult {
  Scalar value{};
  // Sparse maximizer: ascending indices with their (positive) weights.
  std::vector<int> support;
  VectorX<Scalar> weights;
  // Set by top-N callers when the truncated evaluation is known to be exact.
  bool exact = true;
  // Threshold of the Euclidean projection; unused for the entropy variant.
  Scalar theta{};
  int threshold_support = 0;
};

// max over the simplex of <scores, u> - (mu / 2) omega(u).
//
// euclidean: omega(u) = |u|^2, maximizer = projection of scores / mu.
// entropy:   omega(u) = 2 sum u log u, maximizer = softmax(scores / mu) and
//            value = mu log sum exp(scores / mu).
template <typename Derived>
SmoothedMaxResult<typename Derived::Scalar> smoothed_max(
    const Eigen::MatrixBase<Derived>& scores, typename Derived::Scalar mu,
    Omega omega) {
  using Scalar = typename Derived::Scalar;
  if (scores.size() == 0) throw UsageError("smoothed_max: empty scores");
  if (!(mu > 0)) throw UsageError("smoothed_max: mu must be positive");
  const Eigen::Index m = scores.size();
  SmoothedMaxResult<Scalar> out;

  if (omega == Omega::kEuclidean) {
    const VectorX<Scalar> scaled = scores / mu;
    const auto proj = project_simplex_detailed(scaled);
    out.theta = proj.theta;
    out.threshold_support = proj.support;
    Scalar dot = 0, sq = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Scalar u = proj.u[i];
      if (u > 0) {
        out.support.push_back(static_cast<int>(i));
        dot += scores(i) * u;
        sq += u * u;
      }
    }
    out.weights.resize(static_cast<Eigen::Index>(out.support.size()));
    for (std::size_t k = 0; k < out.support.size(); ++k) {
      out.weights[static_cast<Eigen::Index>(k)] = proj.u[out.support[k]];
    }
    out.value = dot - mu / 2 * sq;
    return out;
  }

  const Scalar top = scores.maxCoeff();
  const VectorX<Scalar> e = ((scores.derived().array() - top) / mu).exp().matrix();
  const Scalar total = e.sum();
  out.support.resize(static_cast<std::size_t>(m));
  std::iota(out.support.begin(), out.support.end(), 0);
  out.weights = e / total;
  out.value = top + mu * std::log(total);
  out.threshold_support = static_cast<int>(m);
  return out;
}

}  // namespace covertrain

#endif  // COVERTRAIN_SIMPLEX_HPP_
