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

// Independent reference implementations and random generators shared by the
// unit tests and the acceptance binary. Nothing here calls the code under
// test except to construct inputs.

#ifndef COVERTRAIN_TESTS_ORACLES_HPP_
#define COVERTRAIN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "covertrain/dataset.hpp"
#include "covertrain/model.hpp"
#include "covertrain/neighbor_graph.hpp"
#include "covertrain/submodular_cover.hpp"

namespace oracle {

using covertrain::Bag;
using covertrain::BagId;
using covertrain::BipartiteGraph;
using covertrain::ConcaveFn;
using covertrain::CoverConfig;
using covertrain::Dataset;
using covertrain::InstanceRef;
using covertrain::Model;
using covertrain::NodeId;
using covertrain::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  Vector normal_vector(Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Bags with ids 0..n_bags-1 in random order of labels; at least one of each.
inline Dataset random_dataset(Rng& rng, int n_bags, int max_bag_size,
                              Eigen::Index dim, double scale = 1.0) {
  Dataset ds;
  ds.name = "random";
  ds.dim = dim;
  for (int b = 0; b < n_bags; ++b) {
    Bag bag;
    bag.id = b;
    bag.label = b == 0 ? 1 : (b == 1 ? -1 : (rng.coin() ? 1 : -1));
    const int m = rng.uniform_int(1, max_bag_size);
    bag.instances.resize(m, dim);
    for (int r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) bag.instances(r, c) = scale * rng.normal();
    }
    ds.bags.push_back(std::move(bag));
  }
  return ds;
}

inline Model random_model(Rng& rng, Eigen::Index dim, bool use_bias,
                          double scale = 1.0) {
  Model m;
  m.w = rng.normal_vector(dim, scale);
  if (use_bias) m.bias = scale * rng.normal();
  return m;
}

// Row-by-row Euclidean distance computed with plain loops.
inline double distance(const Bag& a, int ra, const Bag& b, int rb) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < a.instances.cols(); ++c) {
    const double d = a.instances(ra, c) - b.instances(rb, c);
    s += d * d;
  }
  return std::sqrt(s);
}

struct NeighborEntry {
  double distance;
  BagId bag_id;
  int instance_id;
  bool positive;
  auto operator<=>(const NeighborEntry&) const = default;
};

// Exhaustive scan: the nearest instance of every other bag, sorted by
// (distance, bag id, instance id).
inline std::vector<NeighborEntry> nearest_per_bag(const Dataset& ds,
                                                  const InstanceRef& src) {
  const Bag* source = nullptr;
  for (const Bag& bag : ds.bags) {
    if (bag.id == src.bag_id) source = &bag;
  }
  std::vector<NeighborEntry> out;
  for (const Bag& bag : ds.bags) {
    if (bag.id == src.bag_id) continue;
    NeighborEntry best{std::numeric_limits<double>::infinity(), bag.id, -1,
                       bag.positive()};
    for (int r = 0; r < bag.size(); ++r) {
      const double d = distance(*source, src.instance_id, bag, r);
      if (d < best.distance) {
        best.distance = d;
        best.instance_id = r;
      }
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Edge sets keyed by source instance, built from the definition.
inline std::map<InstanceRef, std::vector<InstanceRef>> graph_edges(
    const Dataset& ds, int k) {
  std::map<InstanceRef, std::vector<InstanceRef>> edges;
  for (const Bag& bag : ds.bags) {
    if (!bag.positive()) continue;
    for (int r = 0; r < bag.size(); ++r) {
      const InstanceRef src{bag.id, r};
      const auto list = nearest_per_bag(ds, src);
      std::vector<InstanceRef>& out = edges[src];
      for (int i = 0; i < k && i < static_cast<int>(list.size()); ++i) {
        if (list[i].positive) out.push_back({list[i].bag_id, list[i].instance_id});
      }
    }
  }
  return edges;
}

// Random cover instance. Nodes are split into bags; each node links to up to
// k distinct nodes of other bags.
inline BipartiteGraph random_graph(Rng& rng, int max_nodes, int max_k) {
  const int n = rng.uniform_int(1, max_nodes);
  const int n_bags = rng.uniform_int(1, std::max(1, std::min(n, 5)));
  const int k = rng.uniform_int(1, max_k);
  std::vector<InstanceRef> nodes;
  std::vector<int> node_bag;
  std::vector<int> per_bag(static_cast<std::size_t>(n_bags), 0);
  for (int v = 0; v < n; ++v) {
    const int b = v < n_bags ? v : rng.uniform_int(0, n_bags - 1);
    nodes.push_back({static_cast<BagId>(10 * b + 3), per_bag[b]++});
    node_bag.push_back(b);
  }
  std::vector<BagId> bag_ids;
  for (int b = 0; b < n_bags; ++b) bag_ids.push_back(10 * b + 3);
  std::vector<std::vector<BipartiteGraph::Edge>> edges(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::vector<int> candidates;
    for (int u = 0; u < n; ++u) {
      if (node_bag[u] != node_bag[v]) candidates.push_back(u);
    }
    std::shuffle(candidates.begin(), candidates.end(), rng.engine());
    const int deg = rng.uniform_int(0, std::min<int>(k, candidates.size()));
    for (int i = 0; i < deg; ++i) {
      edges[v].push_back({candidates[i], rng.uniform(0.0, 1.0)});
    }
  }
  return BipartiteGraph(std::move(nodes), std::move(node_bag), std::move(bag_ids),
                        std::move(edges), k);
}

inline CoverConfig random_cover_config(Rng& rng, int k) {
  CoverConfig cfg;
  cfg.t = rng.uniform_int(1, 4);
  const int g = rng.uniform_int(0, 2);
  cfg.g = g == 0 ? ConcaveFn::kIdentity
                 : (g == 1 ? ConcaveFn::kSqrt : ConcaveFn::kLog1p);
  const double alphas[] = {0.5, 0.9, 1.0};
  cfg.alpha = alphas[rng.uniform_int(0, 2)];
  cfg.k = k;
  return cfg;
}

inline double g_value(ConcaveFn g, double a) {
  switch (g) {
    case ConcaveFn::kIdentity: return a;
    case ConcaveFn::kSqrt: return std::sqrt(a);
    case ConcaveFn::kLog1p: return std::log1p(a);
  }
  return 0.0;
}

// Covering objective by set arithmetic over instance references.
inline double cover_value(const std::vector<NodeId>& selection,
                          const BipartiteGraph& graph, const CoverConfig& cfg) {
  std::set<InstanceRef> neighborhood;
  for (NodeId v : selection) {
    for (const auto& e : graph.edges(v)) neighborhood.insert(graph.node(e.target));
  }
  std::map<BagId, int> counts;
  for (const InstanceRef& r : neighborhood) ++counts[r.bag_id];
  double total = 0.0;
  for (const auto& [bag, c] : counts) {
    total += g_value(cfg.g, std::min(cfg.t, c));
  }
  return total;
}

// Euclidean projection onto the simplex from the KKT conditions: bisection on
// the threshold, then an exact threshold on the identified support.
inline Vector kkt_projection(const Vector& v) {
  double lo = v.minCoeff() - 1.0;
  double hi = v.maxCoeff();
  auto mass = [&](double theta) { return (v.array() - theta).max(0.0).sum(); };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  const double theta0 = 0.5 * (lo + hi);
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > theta0) {
      sum += v[i];
      ++count;
    }
  }
  const double theta = count > 0 ? (sum - 1.0) / count : theta0;
  return (v.array() - theta).max(0.0).matrix();
}

// Central differences of a scalar function of a parameter vector.
template <typename Fn>
Vector finite_difference(Fn&& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// max_i |a_i - b_i| / max(1, |b|_inf).
inline double relative_error(const Vector& a, const Vector& b) {
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  return (a - b).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace oracle

#endif  // COVERTRAIN_TESTS_ORACLES_HPP_
