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

// Discriminative bipartite graph over the instances of positive bags.
//
// Every positive-bag instance v gets one nearest neighbor from each other bag,
// positive or negative. The first k of those (by distance) are kept and then
// filtered down to positive bags; an instance that looks equally at home in
// negative bags therefore loses most of its edges.

#ifndef COVERTRAIN_NEIGHBOR_GRAPH_HPP_
#define COVERTRAIN_NEIGHBOR_GRAPH_HPP_

#include <iosfwd>
#include <vector>

#include "covertrain/dataset.hpp"

namespace covertrain {

struct Neighbor {
  InstanceRef ref;
  double distance = 0.0;
};

struct NeighborList {
  InstanceRef source;
  // One entry per bag other than the source's, ascending by
  // (distance, bag_id, instance_id).
  std::vector<Neighbor> neighbors;
};

NeighborList nearest_per_bag(const InstanceRef& source, const Dataset& ds);

using NodeId = int;

class BipartiteGraph {
 public:
  struct Edge {
    NodeId target = 0;
    double distance = 0.0;
  };

  BipartiteGraph() = default;
  // `nodes` are the positive-bag instances; `node_bag[v]` indexes `bag_ids`.
  // Edge targets index `nodes` (the same instances in their U role).
  BipartiteGraph(std::vector<InstanceRef> nodes, std::vector<int> node_bag,
                 std::vector<BagId> bag_ids,
                 std::vector<std::vector<Edge>> edges, int k);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int bag_count() const { return static_cast<int>(bag_ids_.size()); }
  int k() const { return k_; }
  std::size_t edge_count() const;

  const InstanceRef& node(NodeId v) const { return nodes_[v]; }
  const std::vector<InstanceRef>& nodes() const { return nodes_; }
  // Position of v's bag in bag_ids().
  int bag_of(NodeId v) const { return node_bag_[v]; }
  const std::vector<BagId>& bag_ids() const { return bag_ids_; }
  const std::vector<Edge>& edges(NodeId v) const { return edges_[v]; }
  // -1 when `id` is not a positive bag of this graph.
  int bag_index(BagId id) const;
  // -1 when the instance is not a node.
  NodeId find_node(const InstanceRef& ref) const;

 private:
  std::vector<InstanceRef> nodes_;
  std::vector<int> node_bag_;
  std::vector<BagId> bag_ids_;
  std::vector<std::vector<Edge>> edges_;
  int k_ = 0;
};

// Neighbor lists are computed independently per node; `threads` > 1 splits
// them across workers without changing the result.
BipartiteGraph build_graph(const Dataset& ds, int k, int threads = 1);

// Debug listing, one `v_bag:v_inst -> u_bag:u_inst dist` line per edge.
void write_edges(std::ostream& out, const BipartiteGraph& graph);

}  // namespace covertrain

#endif  // COVERTRAIN_NEIGHBOR_GRAPH_HPP_
