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

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netlens/aggregation.hpp"
#include "netlens/classifier.hpp"
#include "netlens/error.hpp"

namespace netlens {

// Confusion-style reward matrix at one threshold: a scored node of true class
// i adds 1/k to entry (i, j) for each of its k retained labels j. Nodes with
// no distribution ("unlabeled") score zero and are tallied per class in a
// separate column, so that
//
//   row_sum(i) == scored nodes of class i,  total() == all evaluated nodes,
//   trace() / total() == mean node accuracy.
//
// Rewards are stored as integers in units of 1/lcm(1..C), so all of these
// identities hold exactly in floating point.
class RewardMatrix {
 public:
  using Units = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

  RewardMatrix() = default;
  explicit RewardMatrix(int classes);

  void add(int true_class, const Prediction& prediction);
  void add_unlabeled(int true_class);

  int classes() const { return static_cast<int>(units_.rows()); }
  std::int64_t unit_scale() const { return scale_; }
  const Units& units() const { return units_; }

  double operator()(int i, int j) const { return to_value(units_(i, j)); }
  double row_sum(int i) const { return to_value(units_.row(i).sum()); }
  double trace() const { return to_value(units_.trace()); }
  double total() const;
  std::int64_t scored(int i) const { return scored_[static_cast<std::size_t>(i)]; }
  std::int64_t unlabeled(int i) const { return unlabeled_[static_cast<std::size_t>(i)]; }
  // trace() / total(); 0 for an empty matrix.
  double accuracy() const;

 private:
  double to_value(std::int64_t units) const {
    return static_cast<double>(units) / static_cast<double>(scale_);
  }

  Units units_;
  std::vector<std::int64_t> scored_;
  std::vector<std::int64_t> unlabeled_;
  std::int64_t scale_ = 1;
};

// One evaluated node: its distribution (nullopt when unlabeled) and truth.
struct ScoredNode {
  NodeId node = 0;
  int truth = 0;
  std::optional<LabelDistribution> distribution;
};

struct AccuracyCurve {
  std::vector<double> tau;
  std::vector<double> accuracy;

  // First index of the maximum accuracy.
  std::size_t peak_index() const;
};

// tau = step, 2 step, ..., 1 (the last value is exactly 1). Throws Error
// unless 1 / step is a positive integer within 1e-9.
std::vector<double> tau_grid(double step);

RewardMatrix confusion_reward(std::span<const ScoredNode> nodes, int classes, double tau);

// Mean node accuracy per tau. Unlabeled nodes count with score 0. Throws
// Error on an empty node set or a tau grid that is not strictly increasing
// inside (0, 1].
AccuracyCurve accuracy_curve(std::span<const ScoredNode> nodes, int classes,
                             std::span<const double> taus);

// -sum w_i ln w_i / ln C with 0 ln 0 = 0; C is the distribution length.
template <typename Derived>
double normalized_entropy(const Eigen::MatrixBase<Derived>& w) {
  const auto classes = w.size();
  if (classes < 2) return 0.0;
  double h = 0;
  for (Eigen::Index i = 0; i < classes; ++i) {
    const double p = static_cast<double>(w(i));
    if (p > 0) h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(classes));
}

// Pearson correlation. Throws Error on length mismatch, fewer than two
// samples, or a constant input.
template <typename DerivedX, typename DerivedY>
double pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) throw Error("pearson: inputs differ in length");
  if (x.size() < 2) throw Error("pearson: need at least two samples");
  const Eigen::ArrayXd a = x.template cast<double>().reshaped().array();
  const Eigen::ArrayXd b = y.template cast<double>().reshaped().array();
  const Eigen::ArrayXd da = a - a.mean();
  const Eigen::ArrayXd db = b - b.mean();
  const double sa = std::sqrt(da.square().sum());
  const double sb = std::sqrt(db.square().sum());
  if (sa == 0 || sb == 0) throw Error("pearson: correlation undefined for constant input");
  return std::clamp((da * db).sum() / (sa * sb), -1.0, 1.0);
}

struct DiversityRecord {
  int diversity = 1;
  double top_weight = 0;
  double entropy = 0;  // normalized
  bool top_correct = false;
};

// Records for labeled nodes only; `diversity` is indexed by node id.
std::vector<DiversityRecord> diversity_records(std::span<const ScoredNode> nodes,
                                               std::span<const int> diversity);

struct DiversityBucket {
  int diversity = 0;
  std::int64_t nodes = 0;
  double top_correct_percent = 0;
  double mean_top_weight = 0;
  double mean_entropy = 0;
};

struct DiversityReport {
  std::vector<DiversityBucket> buckets;  // ascending diversity, empty buckets omitted
  // Over nodes; nullopt when undefined (e.g. all nodes share one diversity).
  std::optional<double> top_weight_correlation;
  std::optional<double> entropy_correlation;
  // Over bucket rows (diversity vs bucket mean).
  std::optional<double> bucket_top_weight_correlation;
  std::optional<double> bucket_entropy_correlation;
};

DiversityReport diversity_report(std::span<const DiversityRecord> records);

struct HomogeneityRun {
  std::string network;
  int true_class = 0;
  AccuracyCurve curve;
  RewardMatrix reward_at_peak;
};

struct HomogeneityRow {
  std::string network;
  double peak_accuracy = 0;
  double peak_tau = 0;
  // Off-diagonal label with the largest reward in the true-class row; ties
  // go to the lowest index; nullopt when every other label got nothing.
  std::optional<int> mode_incorrect;
};

std::vector<HomogeneityRow> homogeneity_report(std::span<const HomogeneityRun> runs);

// CSV artifacts.
void write_curve_csv(std::ostream& out, const AccuracyCurve& curve);
// Header "true,<class...>,unlabeled"; one row per class.
void write_reward_csv(std::ostream& out, const RewardMatrix& reward, const ClassCatalog& catalog);
// Bucket rows, then correlation footer rows.
void write_diversity_csv(std::ostream& out, const DiversityReport& report);
void write_homogeneity_csv(std::ostream& out, std::span<const HomogeneityRow> rows,
                           const ClassCatalog& catalog);
// "node,true,k,labels,score"; labels are ';'-joined names of retained labels.
void write_predictions_csv(std::ostream& out, std::span<const ScoredNode> nodes, double tau,
                           const ClassCatalog& catalog);

}  // namespace netlens
