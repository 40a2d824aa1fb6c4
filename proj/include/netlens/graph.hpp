// Copyright 2026 The Netlens Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace netlens {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

// Counts of input edges discarded while building a simple graph.
struct BuildStats {
  std::int64_t self_loops_dropped = 0;
  std::int64_t duplicates_dropped = 0;
};

// Immutable undirected simple graph in compressed sparse row form.
//
// Node ids are dense in [0, node_count()). Neighbor lists are sorted
// ascending, contain no self-loops and no repeats, and every edge appears in
// both endpoint lists.
class Graph {
 public:
  Graph() = default;

  // Self-loops and repeated edges (in either orientation) are dropped and
  // counted in `stats` when non-null.
  static Graph from_edges(NodeId node_count, std::span<const Edge> edges,
                          BuildStats* stats = nullptr);

  NodeId node_count() const { return static_cast<NodeId>(offsets_.size()) - 1; }
  std::int64_t edge_count() const {
    return static_cast<std::int64_t>(targets_.size()) / 2;
  }
  bool empty() const { return node_count() <= 0; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  int degree(NodeId v) const {
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_edge(NodeId u, NodeId v) const;

  // Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const;

  // Source-file ids by dense index; empty when the graph was not parsed.
  const std::vector<std::int64_t>& original_ids() const { return original_ids_; }
  void set_original_ids(std::vector<std::int64_t> ids);

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

 private:
  std::vector<std::int64_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<std::int64_t> original_ids_;
};

// Reads a SNAP-style edge list: one "u v" pair per line, '#' comment lines,
// blank lines ignored, tokens beyond the second ignored. Source ids are
// remapped to dense indices in first-appearance order and the mapping is kept
// in original_ids(). Throws ParseError naming the offending line.
Graph parse_edge_list(std::istream& in, BuildStats* stats = nullptr);

// Writes the graph as "u v" lines using dense ids, preceded by a comment
// header with node and edge counts. parse_edge_list reads it back, although
// trailing isolated nodes are only preserved through the header-aware
// read_graph below.
void write_edge_list(std::ostream& out, const Graph& g);

// Reads a file produced by write_edge_list, honoring the node count in the
// header so isolated nodes survive. Falls back to parse_edge_list semantics
// when the header is absent.
Graph read_graph(std::istream& in);

// Graph on `nodes.size()` vertices where vertex i stands for nodes[i] and
// edges are exactly those of `g` between members. Throws Error on
// out-of-range or repeated ids.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

// Component label per node; labels are dense and assigned in order of the
// smallest node id in each component.
std::vector<NodeId> connected_components(const Graph& g, NodeId* count = nullptr);

bool is_connected(const Graph& g);

}  // namespace netlens
