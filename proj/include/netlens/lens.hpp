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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netlens/classifier.hpp"
#include "netlens/graph.hpp"

namespace netlens {

enum class LabelMode { kStart = 0, kMember = 1 };

// Row layout of a tally matrix: for each lens size (ascending) a start row
// followed by a member row, so row = 2 * size_index + mode.
class LensLayout {
 public:
  LensLayout() = default;
  // Throws Error unless sizes are ascending, unique and >= 2, and C >= 2.
  LensLayout(std::vector<int> sizes, int class_count);

  const std::vector<int>& sizes() const { return sizes_; }
  int class_count() const { return class_count_; }
  int rows() const { return 2 * static_cast<int>(sizes_.size()); }
  int row(std::size_t size_index, LabelMode mode) const {
    return 2 * static_cast<int>(size_index) + static_cast<int>(mode);
  }
  int size_of_row(int row) const { return sizes_.at(static_cast<std::size_t>(row / 2)); }
  LabelMode mode_of_row(int row) const {
    return row % 2 == 0 ? LabelMode::kStart : LabelMode::kMember;
  }
  // "<size>:start" or "<size>:member".
  std::string row_label(int row) const;
  // Inverse of row_label; -1 if the label names no row of this layout.
  int parse_row_label(const std::string& label) const;

  friend bool operator==(const LensLayout&, const LensLayout&) = default;

 private:
  std::vector<int> sizes_;
  int class_count_ = 0;
};

// Label counts for every node: node v owns a rows() x C block of
// nonnegative counts n_ij ("lens i gave label j").
class TallySet {
 public:
  using Counts = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using NodeBlock = Eigen::Map<const Counts>;
  using MutableNodeBlock = Eigen::Map<Counts>;

  TallySet() = default;
  TallySet(LensLayout layout, NodeId node_count);

  const LensLayout& layout() const { return layout_; }
  NodeId node_count() const { return static_cast<NodeId>(data_.rows()); }

  NodeBlock node(NodeId v) const {
    return NodeBlock(data_.row(v).data(), layout_.rows(), layout_.class_count());
  }
  MutableNodeBlock node(NodeId v) {
    return MutableNodeBlock(data_.row(v).data(), layout_.rows(), layout_.class_count());
  }
  std::int32_t& at(NodeId v, int row, int cls) {
    return data_(v, static_cast<Eigen::Index>(row) * layout_.class_count() + cls);
  }
  std::int32_t at(NodeId v, int row, int cls) const {
    return data_(v, static_cast<Eigen::Index>(row) * layout_.class_count() + cls);
  }
  // All counts, one node per row.
  const Counts& data() const { return data_; }

  // y_m: the column of node v's block at class `cls`.
  Eigen::VectorXi true_column(NodeId v, int cls) const {
    return node(v).col(cls).cast<int>();
  }

  friend bool operator==(const TallySet& a, const TallySet& b) {
    return a.layout_ == b.layout_ && a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
  }

 private:
  LensLayout layout_;
  Counts data_;
};

struct LensRunOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  int walks_per_node = 1;
};

struct LensRunReport {
  TallySet tallies;
  // Per lens size index: successful walks and failures by kind.
  std::vector<std::int64_t> walks_ok;
  std::vector<std::int64_t> component_too_small;
  std::vector<std::int64_t> walk_exhausted;
};

// For every node and lens size, walks_per_node walks start at the node; each
// walk's induced subgraph is embedded and labeled by the classifier for that
// size. The label adds one to the start row of the walk's start node and one
// to the member row of every other member. Walk k of node v at size s is
// seeded with mix_seed(seed, v, s, k), and counts are merged by addition, so
// the result is independent of `workers`.
//
// `classifiers` must hold one classifier per layout size, in layout order.
LensRunReport run_lenses(const Graph& g, const LensLayout& layout,
                         std::span<const SignatureClassifier* const> classifiers,
                         const LensRunOptions& options);

struct LensAccuracy {
  // Percent of assignments in each row landing on the true class; empty for
  // rows without counts.
  std::vector<std::optional<double>> per_row;
  // Per lens size: start and member counts pooled ("label assigned to all
  // nodes"), start only, and member only.
  std::vector<std::optional<double>> pooled;
  std::vector<std::optional<double>> start_only;
  std::vector<std::optional<double>> member_only;
};

// Accuracy over the nodes in `nodes` (all nodes when empty).
LensAccuracy per_lens_accuracy(const TallySet& tallies, std::span<const int> truth,
                               std::span<const NodeId> nodes = {});

// CSV "node,row,class,count" with one line per nonzero count, nodes
// ascending, then rows, then classes.
void write_tally_csv(std::ostream& out, const TallySet& tallies, const ClassCatalog& catalog);
TallySet read_tally_csv(std::istream& in, const LensLayout& layout,
                        const ClassCatalog& catalog, NodeId node_count);

}  // namespace netlens
