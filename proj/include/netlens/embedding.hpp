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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netlens/graph.hpp"

namespace netlens {

// Square binary adjacency image. Pixel (i, j) is 1 ("black") iff nodes i and
// j of the ordered subgraph are adjacent.
class BitImage {
 public:
  using Bits =
      Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BitImage() = default;
  explicit BitImage(int n) : bits_(Bits::Zero(n, n)) {}
  // Throws Error unless `bits` is square, 0/1, symmetric with zero diagonal.
  explicit BitImage(Bits bits);

  int size() const { return static_cast<int>(bits_.rows()); }
  bool operator()(int i, int j) const { return bits_(i, j) != 0; }
  const Bits& bits() const { return bits_; }
  std::int64_t popcount() const { return bits_.cast<std::int64_t>().sum(); }

  // Row-major flattening, as used for classifier features.
  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flattened() const {
    return Eigen::Map<const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>>(
               bits_.data(), bits_.size())
        .template cast<Scalar>();
  }

  friend bool operator==(const BitImage& a, const BitImage& b) {
    return a.bits_.rows() == b.bits_.rows() && a.bits_ == b.bits_;
  }

 private:
  friend BitImage embed_image(const Graph& g);
  Bits bits_;
};

// Deterministic node ordering that depends only on the isomorphism class of
// `g` (up to the caveat below). order[k] is the node placed at position k.
//
// Rule: nodes are first ranked by (degree descending, sorted neighbor-degree
// sequence descending) and the ranking is refined by color refinement. Every
// node of the best class is tried as BFS root; the root is individualized,
// the coloring re-refined, and BFS visits unvisited neighbors in color order.
// Remaining ties inside BFS are broken by individualizing the lowest-index
// tied node. The root whose ordering yields the lexicographically smallest
// row-major bit string wins. Ties left after refinement are between nodes
// that refinement cannot separate; for graphs where those are not automorphic
// the result may depend on labels.
std::vector<NodeId> canonical_order(const Graph& g);

// Adjacency matrix of `g` re-indexed by canonical_order(g).
BitImage embed_image(const Graph& g);

// Adjacency matrix of `g` under an explicit ordering.
BitImage image_under_order(const Graph& g, const std::vector<NodeId>& order);

// ASCII PBM ("P1"): magic line, "n n" line, then one row per line with
// pixels separated by single spaces.
std::string write_pbm(const BitImage& img);
void write_pbm(std::ostream& out, const BitImage& img);

// Accepts any whitespace layout permitted by P1, including '#' comments.
// Throws ParseError on malformed input or a non-adjacency image.
BitImage read_pbm(std::istream& in);

}  // namespace netlens
