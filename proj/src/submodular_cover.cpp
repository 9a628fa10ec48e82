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

#include "covertrain/submodular_cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "covertrain/error.hpp"

namespace covertrain {

ConcaveFn parse_concave_fn(const std::string& text) {
  if (text == "identity") return ConcaveFn::kIdentity;
  if (text == "sqrt") return ConcaveFn::kSqrt;
  if (text == "log1p") return ConcaveFn::kLog1p;
  throw UsageError("unknown concave function '" + text +
                   "' (expected identity, sqrt or log1p)");
}

std::string to_string(ConcaveFn g) {
  switch (g) {
    case ConcaveFn::kIdentity: return "identity";
    case ConcaveFn::kSqrt: return "sqrt";
    case ConcaveFn::kLog1p: return "log1p";
  }
  return "?";
}

double concave_value(ConcaveFn g, double a) {
  switch (g) {
    case ConcaveFn::kIdentity: return a;
    case ConcaveFn::kSqrt: return std::sqrt(a);
    case ConcaveFn::kLog1p: return std::log1p(a);
  }
  return a;
}

void CoverConfig::validate() const {
  if (t < 1) throw UsageError("cover: t must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw UsageError("cover: alpha must lie in (0, 1]");
  }
  if (k < 1) throw UsageError("cover: k must be at least 1");
}

namespace {

// Per-bag covered counts for a growing selection. F is always recomputed as
// a fixed-order sum over bags so equal coverage gives bit-equal values.
class CoverState {
 public:
  CoverState(const BipartiteGraph& graph, const CoverConfig& cfg)
      : graph_(graph),
        cfg_(cfg),
        covered_(static_cast<std::size_t>(graph.node_count()), false),
        counts_(static_cast<std::size_t>(graph.bag_count()), 0) {
    // g(min(t, c)) only ever needs c in [0, t].
    for (int c = 0; c <= cfg.t; ++c) {
      table_.push_back(concave_value(cfg.g, static_cast<double>(c)));
    }
  }

  double bag_value(int count) const {
    return table_[static_cast<std::size_t>(std::min(count, cfg_.t))];
  }

  double value() const {
    double f = 0.0;
    for (int c : counts_) f += bag_value(c);
    return f;
  }

  double gain(NodeId v) {
    scratch_.clear();
    for (const auto& e : graph_.edges(v)) {
      if (covered_[static_cast<std::size_t>(e.target)]) continue;
      scratch_.push_back(graph_.bag_of(e.target));
    }
    if (scratch_.empty()) return 0.0;
    std::sort(scratch_.begin(), scratch_.end());
    double g = 0.0;
    for (std::size_t i = 0; i < scratch_.size();) {
      std::size_t j = i;
      while (j < scratch_.size() && scratch_[j] == scratch_[i]) ++j;
      const int before = counts_[static_cast<std::size_t>(scratch_[i])];
      g += bag_value(before + static_cast<int>(j - i)) - bag_value(before);
      i = j;
    }
    return g;
  }

  void add(NodeId v) {
    for (const auto& e : graph_.edges(v)) {
      auto&& flag = covered_[static_cast<std::size_t>(e.target)];
      if (flag) continue;
      flag = true;
      ++counts_[static_cast<std::size_t>(graph_.bag_of(e.target))];
    }
  }

  bool covered(NodeId u) const { return covered_[static_cast<std::size_t>(u)]; }

 private:
  const BipartiteGraph& graph_;
  const CoverConfig& cfg_;
  std::vector<bool> covered_;
  std::vector<int> counts_;
  std::vector<double> table_;
  std::vector<int> scratch_;
};

double cover_value(std::span<const NodeId> selection,
                   const BipartiteGraph& graph, const CoverConfig& cfg) {
  CoverState state(graph, cfg);
  for (NodeId v : selection) {
    if (v < 0 || v >= graph.node_count()) {
      throw UsageError("cover: node id out of range");
    }
    state.add(v);
  }
  return state.value();
}

std::vector<NodeId> all_nodes(const BipartiteGraph& graph) {
  std::vector<NodeId> v(static_cast<std::size_t>(graph.node_count()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

double cover_score(std::span<const NodeId> selection,
                   const BipartiteGraph& graph, BagId bag,
                   const CoverConfig& cfg) {
  cfg.validate();
  const int b = graph.bag_index(bag);
  if (b < 0) throw DataError("cover_score: unknown bag id " + std::to_string(bag));
  std::set<NodeId> reached;
  for (NodeId v : selection) {
    if (v < 0 || v >= graph.node_count()) {
      throw UsageError("cover: node id out of range");
    }
    for (const auto& e : graph.edges(v)) {
      if (graph.bag_of(e.target) == b) reached.insert(e.target);
    }
  }
  const int count = std::min(cfg.t, static_cast<int>(reached.size()));
  return concave_value(cfg.g, static_cast<double>(count));
}

double total_cover(std::span<const NodeId> selection,
                   const BipartiteGraph& graph, const CoverConfig& cfg) {
  cfg.validate();
  return cover_value(selection, graph, cfg);
}

CoverResult greedy_cover(const BipartiteGraph& graph, const CoverConfig& cfg,
                         GreedyMode mode) {
  cfg.validate();
  CoverResult result;
  const std::vector<NodeId> everything = all_nodes(graph);
  result.f_total = cover_value(everything, graph, cfg);
  const double target = cfg.alpha * result.f_total;

  CoverState state(graph, cfg);
  double f = 0.0;
  const int n = graph.node_count();
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  // Lazy bookkeeping: upper bounds on each node's gain, tagged with the step
  // they were computed at. Ordered by (gain desc, id asc).
  struct Entry {
    double gain;
    NodeId v;
    int step;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.v > b.v;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  if (mode == GreedyMode::kLazy) {
    for (NodeId v = 0; v < n; ++v) heap.push({state.gain(v), v, 0});
  }

  int step = 0;
  while (f < target) {
    NodeId best = -1;
    double best_gain = 0.0;
    if (mode == GreedyMode::kNaive) {
      for (NodeId v = 0; v < n; ++v) {
        if (chosen[static_cast<std::size_t>(v)]) continue;
        const double g = state.gain(v);
        if (g > best_gain) {
          best_gain = g;
          best = v;
        }
      }
    } else {
      while (!heap.empty()) {
        Entry top = heap.top();
        heap.pop();
        if (top.step == step) {
          if (top.gain > 0.0) {
            best = top.v;
            best_gain = top.gain;
          }
          break;
        }
        top.gain = state.gain(top.v);
        top.step = step;
        heap.push(top);
      }
    }
    if (best < 0) break;  // nothing left with positive gain
    state.add(best);
    chosen[static_cast<std::size_t>(best)] = true;
    const double next = state.value();
    result.selected.push_back(best);
    result.gains.push_back(next - f);
    f = next;
    ++step;
  }
  result.f_final = f;

  for (NodeId v : result.selected) {
    for (const auto& e : graph.edges(v)) {
      const InstanceRef& u = graph.node(e.target);
      result.covered[u.bag_id].insert(u.instance_id);
    }
  }
  return result;
}

std::vector<NodeId> brute_force_cover(const BipartiteGraph& graph,
                                      const CoverConfig& cfg) {
  cfg.validate();
  const int n = graph.node_count();
  if (n > 20) {
    throw UsageError("brute_force_cover: refusing " + std::to_string(n) +
                     " nodes (limit 20)");
  }
  const double target = cfg.alpha * cover_value(all_nodes(graph), graph, cfg);
  if (target <= 0.0) return {};

  for (int size = 1; size <= n; ++size) {
    // Lexicographic enumeration of size-combinations.
    std::vector<NodeId> combo(static_cast<std::size_t>(size));
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      if (cover_value(combo, graph, cfg) >= target) return combo;
      int i = size - 1;
      while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++combo[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        combo[static_cast<std::size_t>(j)] =
            combo[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return all_nodes(graph);
}

double approx_bound(const CoverConfig& cfg) {
  cfg.validate();
  const double top = concave_value(cfg.g, cfg.t);
  const double below = concave_value(cfg.g, cfg.t - 1);
  if (!(top > below)) {
    throw UsageError("approx_bound: g(t) must exceed g(t-1)");
  }
  return 1.0 + std::log(cfg.k * concave_value(cfg.g, 1.0) / (top - below));
}

std::vector<std::set<InstanceRef>> extract_positives(
    const CoverResult& result, const BipartiteGraph& graph, int n_clusters) {
  if (n_clusters < 0 ||
      n_clusters > static_cast<int>(result.selected.size())) {
    throw UsageError("extract_positives: n_clusters=" +
                     std::to_string(n_clusters) + " but only " +
                     std::to_string(result.selected.size()) +
                     " nodes were selected");
  }
  std::vector<std::set<InstanceRef>> clusters;
  clusters.reserve(static_cast<std::size_t>(n_clusters));
  for (int i = 0; i < n_clusters; ++i) {
    const NodeId v = result.selected[static_cast<std::size_t>(i)];
    std::set<InstanceRef> cluster{graph.node(v)};
    for (const auto& e : graph.edges(v)) cluster.insert(graph.node(e.target));
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::map<BagId, int> negative_mine(const Dataset& ds) {
  if (ds.negative_count() < 1) {
    throw DataError("negative_mine: need at least one negative bag");
  }
  std::map<BagId, int> picks;
  for (const Bag& bag : ds.bags) {
    if (!bag.positive()) continue;
    int best = 0;
    double best_sq = -1.0;
    for (int r = 0; r < bag.size(); ++r) {
      const auto x = bag.instances.row(r);
      double nearest = std::numeric_limits<double>::infinity();
      for (const Bag& neg : ds.bags) {
        if (neg.positive()) continue;
        nearest = std::min(
            nearest, (neg.instances.rowwise() - x).rowwise().squaredNorm().minCoeff());
      }
      if (nearest > best_sq) {
        best_sq = nearest;
        best = r;
      }
    }
    picks[bag.id] = best;
  }
  return picks;
}

}  // namespace covertrain
