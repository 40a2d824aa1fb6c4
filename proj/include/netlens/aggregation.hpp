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
#include "netlens/lens.hpp"

namespace netlens {

// Lens weights p: nonnegative, summing to one, one entry per tally row.
using WeightVector = Eigen::VectorXd;

// Label distribution w over classes; nonnegative, summing to one.
using LabelDistribution = Eigen::VectorXd;

// Throws Error unless `p` lies on the probability simplex (within `tol`).
void check_weights(const WeightVector& p, double tol = 1e-9);

// One training example of the weight LP: tally block X_m (rows x C) and
// the node's true class.
struct TrainingNode {
  Eigen::MatrixXd counts;
  int truth = 0;
};

struct SlackSolution {
  WeightVector p;
  Eigen::VectorXd xi;  // per training node, >= 0
  double objective = 0;
};

enum class LpMethod {
  kAuto,          // tableau for small problems, cutting planes otherwise
  kTableau,       // the full LP in one dense tableau
  kCuttingPlane,  // same LP, solved through its epigraph over p
};

struct WeightLpOptions {
  LpMethod method = LpMethod::kAuto;
  // kAuto uses the tableau while nodes * (C - 1) stays at or below this.
  std::int64_t tableau_row_limit = 400;
};

// Solves
//
//   minimize   sum_m xi_m
//   subject to y_m' p >= (X_m' p)_j - xi_m   for every node m and class j
//              sum_i p_i = 1,  0 <= p_i <= 1,  xi_m >= 0
//
// where y_m is the column of X_m at the node's true class. Both methods
// reach an optimum of this LP; the returned xi are recomputed from p as
// max(0, max_j (X_m' p)_j - y_m' p), so the constraints hold with equality
// where binding. Throws Error with no nodes, fewer than two classes or
// inconsistent shapes.
SlackSolution solve_weights_lp(std::span<const TrainingNode> nodes,
                               const WeightLpOptions& options = {});

// Objective value attained by weights `p` (sum of the implied slacks).
double weights_lp_objective(std::span<const TrainingNode> nodes, const WeightVector& p);

// Training examples from a tally set. When `row_normalize` is set each row
// of X_m is scaled to sum to one (rows with no counts stay zero).
std::vector<TrainingNode> training_nodes(const TallySet& tallies, std::span<const int> truth,
                                         std::span<const NodeId> nodes,
                                         bool row_normalize = false);

// p_i = acc_i / sum(acc). Throws Error on negative or all-zero input.
WeightVector naive_weights(const Eigen::VectorXd& accuracies);

// scores_j = sum_i p_i n_ij, normalized to sum to one. nullopt ("unlabeled")
// when every score is zero.
template <typename Derived>
std::optional<LabelDistribution> node_distribution(const Eigen::MatrixBase<Derived>& counts,
                                                   const WeightVector& p) {
  if (counts.rows() != p.size()) throw Error("tally rows do not match weight count");
  const Eigen::VectorXd scores = counts.template cast<double>().transpose() * p;
  const double total = scores.sum();
  if (!(total > 0)) return std::nullopt;
  return LabelDistribution(scores / total);
}

struct Prediction {
  // Nonzero-weight labels, weight descending; weights equal to about 1e-12
  // count as ties, broken by ascending index.
  std::vector<int> ranked;
  int k = 0;                // labels retained
  double tau = 0;

  std::span<const int> retained() const { return {ranked.data(), static_cast<std::size_t>(k)}; }
  bool retains(int label) const;
};

// k is the smallest prefix length whose cumulative weight reaches tau
// (cumulative >= tau - 1e-12). Zero-weight labels are never retained.
// Throws Error unless tau is in (0, 1].
Prediction top_k_prediction(const LabelDistribution& w, double tau);

// 1/k when the true label is retained, else 0.
double node_accuracy(const Prediction& prediction, int true_class);

struct Split {
  std::vector<NodeId> train;
  std::vector<NodeId> test;
};

// Uniform split: round(train_fraction * n) training nodes chosen by a seeded
// shuffle; both lists sorted ascending.
Split train_test_split(NodeId node_count, double train_fraction, std::uint64_t seed);

// Uniform subsample of at most `cap` ids, kept in ascending order.
std::vector<NodeId> subsample(std::span<const NodeId> nodes, std::size_t cap, std::uint64_t seed);

// Weights file: optional '#' comment lines, then one "<row label> <p_i>"
// line per tally row in layout order. Values are written with 17
// significant digits.
void write_weights(std::ostream& out, const LensLayout& layout, const WeightVector& p,
                   const std::string& comment = {});
WeightVector read_weights(std::istream& in, const LensLayout& layout);

}  // namespace netlens
