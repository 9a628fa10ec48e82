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

// Thresholded coverage objective over a BipartiteGraph and its greedy
// minimum-cardinality cover.
//
// For a selection S of V nodes, bag B scores g(min(t, |Gamma(S) n B|)) where
// Gamma(S) is the set of U nodes reached by edges out of S. The total score F
// sums this over all positive bags; F is monotone and submodular, so greedy
// selection until F(S) >= alpha * F(V) is within a logarithmic factor of the
// smallest such S.

#ifndef COVERTRAIN_SUBMODULAR_COVER_HPP_
#define COVERTRAIN_SUBMODULAR_COVER_HPP_

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "covertrain/dataset.hpp"
#include "covertrain/neighbor_graph.hpp"

namespace covertrain {

enum class ConcaveFn { kIdentity, kSqrt, kLog1p };

ConcaveFn parse_concave_fn(const std::string& text);
std::string to_string(ConcaveFn g);

// g(a) for a >= 0. All three satisfy g(0) = 0.
double concave_value(ConcaveFn g, double a);

struct CoverConfig {
  int t = 1;
  double alpha = 1.0;
  ConcaveFn g = ConcaveFn::kIdentity;
  // Truncation used to build the graph; only the bound depends on it.
  int k = 1;

  void validate() const;
};

struct CoverResult {
  std::vector<NodeId> selected;  // in selection order
  std::vector<double> gains;     // realized marginal gain of each pick
  double f_final = 0.0;
  double f_total = 0.0;
  // Covered U nodes by positive bag id, as instance ids.
  std::map<BagId, std::set<int>> covered;
};

double cover_score(std::span<const NodeId> selection,
                   const BipartiteGraph& graph, BagId bag,
                   const CoverConfig& cfg);
double total_cover(std::span<const NodeId> selection,
                   const BipartiteGraph& graph, const CoverConfig& cfg);

enum class GreedyMode { kLazy, kNaive };

// Picks the largest marginal gain each step (ties to the lowest node id) and
// stops as soon as F(S) >= alpha * F(V). Lazy and naive modes return the
// same sequence.
CoverResult greedy_cover(const BipartiteGraph& graph, const CoverConfig& cfg,
                         GreedyMode mode = GreedyMode::kLazy);

// Exhaustive minimum-cardinality cover, subsets tried by size and then
// lexicographically. Refuses graphs with more than 20 nodes.
std::vector<NodeId> brute_force_cover(const BipartiteGraph& graph,
                                      const CoverConfig& cfg);

// 1 + ln(k g(1) / (g(t) - g(t-1))).
double approx_bound(const CoverConfig& cfg);

// Cluster i holds the i-th selected node and the U nodes its edges reach.
std::vector<std::set<InstanceRef>> extract_positives(
    const CoverResult& result, const BipartiteGraph& graph, int n_clusters);

// For each positive bag, the instance whose nearest negative instance is
// farthest away (ties to the lowest instance id).
std::map<BagId, int> negative_mine(const Dataset& ds);

}  // namespace covertrain

#endif  // COVERTRAIN_SUBMODULAR_COVER_HPP_
