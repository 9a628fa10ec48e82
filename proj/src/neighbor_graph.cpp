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

#include "covertrain/neighbor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "covertrain/error.hpp"

namespace covertrain {

namespace {

NeighborList nearest_per_bag_at(const Dataset& ds, std::size_t source_bag,
                                int source_row) {
  const auto x = ds.bags[source_bag].instances.row(source_row);
  NeighborList list;
  list.source = {ds.bags[source_bag].id, source_row};
  list.neighbors.reserve(ds.bags.size() - 1);
  for (std::size_t b = 0; b < ds.bags.size(); ++b) {
    if (b == source_bag) continue;
    const Bag& bag = ds.bags[b];
    int best = 0;
    double best_sq = (bag.instances.row(0) - x).squaredNorm();
    for (int r = 1; r < bag.size(); ++r) {
      const double sq = (bag.instances.row(r) - x).squaredNorm();
      if (sq < best_sq) {
        best_sq = sq;
        best = r;
      }
    }
    list.neighbors.push_back({{bag.id, best}, std::sqrt(best_sq)});
  }
  std::sort(list.neighbors.begin(), list.neighbors.end(),
            [](const Neighbor& a, const Neighbor& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.ref < b.ref;
            });
  return list;
}

}  // namespace

NeighborList nearest_per_bag(const InstanceRef& source, const Dataset& ds) {
  const int b = ds.find_bag(source.bag_id);
  if (b < 0) {
    throw DataError("unknown bag id " + std::to_string(source.bag_id));
  }
  const Bag& bag = ds.bags[static_cast<std::size_t>(b)];
  if (!bag.positive()) {
    throw UsageError("nearest_per_bag: source must come from a positive bag");
  }
  if (source.instance_id < 0 || source.instance_id >= bag.size()) {
    throw DataError("instance " + std::to_string(source.instance_id) +
                    " out of range in bag " + std::to_string(source.bag_id));
  }
  return nearest_per_bag_at(ds, static_cast<std::size_t>(b),
                            source.instance_id);
}

BipartiteGraph::BipartiteGraph(std::vector<InstanceRef> nodes,
                               std::vector<int> node_bag,
                               std::vector<BagId> bag_ids,
                               std::vector<std::vector<Edge>> edges, int k)
    : nodes_(std::move(nodes)),
      node_bag_(std::move(node_bag)),
      bag_ids_(std::move(bag_ids)),
      edges_(std::move(edges)),
      k_(k) {
  if (node_bag_.size() != nodes_.size() || edges_.size() != nodes_.size()) {
    throw UsageError("BipartiteGraph: inconsistent node arrays");
  }
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (node_bag_[v] < 0 || node_bag_[v] >= static_cast<int>(bag_ids_.size())) {
      throw UsageError("BipartiteGraph: node bag index out of range");
    }
    for (const Edge& e : edges_[v]) {
      if (e.target < 0 || e.target >= static_cast<int>(nodes_.size())) {
        throw UsageError("BipartiteGraph: edge target out of range");
      }
    }
  }
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.size();
  return n;
}

int BipartiteGraph::bag_index(BagId id) const {
  const auto it = std::find(bag_ids_.begin(), bag_ids_.end(), id);
  return it == bag_ids_.end() ? -1 : static_cast<int>(it - bag_ids_.begin());
}

NodeId BipartiteGraph::find_node(const InstanceRef& ref) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), ref);
  return it == nodes_.end() ? -1 : static_cast<NodeId>(it - nodes_.begin());
}

BipartiteGraph build_graph(const Dataset& ds, int k, int threads) {
  if (k < 1) throw UsageError("build_graph: k must be at least 1");
  if (ds.positive_count() < 2) {
    throw DataError("build_graph: need at least two positive bags");
  }

  std::vector<InstanceRef> nodes;
  std::vector<int> node_bag;
  std::vector<BagId> bag_ids;
  std::vector<std::pair<std::size_t, int>> node_source;
  for (std::size_t b = 0; b < ds.bags.size(); ++b) {
    const Bag& bag = ds.bags[b];
    if (!bag.positive()) continue;
    const int pos_index = static_cast<int>(bag_ids.size());
    bag_ids.push_back(bag.id);
    for (int r = 0; r < bag.size(); ++r) {
      nodes.push_back({bag.id, r});
      node_bag.push_back(pos_index);
      node_source.emplace_back(b, r);
    }
  }

  // Lookup from a neighbor reference to its node id.
  std::vector<NodeId> first_node(ds.bags.size(), -1);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    auto& first = first_node[node_source[v].first];
    if (first < 0) first = static_cast<NodeId>(v);
  }
  std::vector<bool> positive(ds.bags.size());
  std::unordered_map<BagId, std::size_t> bag_position;
  for (std::size_t b = 0; b < ds.bags.size(); ++b) {
    positive[b] = ds.bags[b].positive();
    bag_position.emplace(ds.bags[b].id, b);
  }

  const std::size_t n = nodes.size();
  std::vector<std::vector<BipartiteGraph::Edge>> edges(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const auto [b, r] = node_source[v];
      const NeighborList list = nearest_per_bag_at(ds, b, r);
      const std::size_t top =
          std::min(list.neighbors.size(), static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < top; ++i) {
        const Neighbor& nb = list.neighbors[i];
        const std::size_t nb_bag = bag_position.at(nb.ref.bag_id);
        if (!positive[nb_bag]) continue;
        edges[v].push_back(
            {first_node[nb_bag] + nb.ref.instance_id, nb.distance});
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)),
                              1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  return BipartiteGraph(std::move(nodes), std::move(node_bag),
                        std::move(bag_ids), std::move(edges), k);
}

void write_edges(std::ostream& out, const BipartiteGraph& graph) {
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const InstanceRef& from = graph.node(v);
    for (const auto& e : graph.edges(v)) {
      const InstanceRef& to = graph.node(e.target);
      out << from.bag_id << ':' << from.instance_id << " -> " << to.bag_id
          << ':' << to.instance_id << ' ' << format_double(e.distance) << '\n';
    }
  }
}

}  // namespace covertrain
