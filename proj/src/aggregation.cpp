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

#include "netlens/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "netlens/error.hpp"
#include "netlens/simplex.hpp"

namespace netlens {
namespace {

// Shapes must agree across nodes; returns (lens rows, classes).
std::pair<Eigen::Index, Eigen::Index> check_shapes(std::span<const TrainingNode> nodes) {
  if (nodes.empty()) throw Error("weight LP needs at least one training node");
  const auto rows = nodes.front().counts.rows();
  const auto classes = nodes.front().counts.cols();
  if (rows < 1) throw Error("weight LP needs at least one lens row");
  if (classes < 2) throw Error("weight LP needs at least two classes");
  for (const auto& node : nodes) {
    if (node.counts.rows() != rows || node.counts.cols() != classes) {
      throw Error("training tallies have inconsistent shapes");
    }
    if (node.truth < 0 || node.truth >= classes) throw Error("training label out of range");
  }
  return {rows, classes};
}

// Largest violation max_j (X_m' p)_j - y_m' p, or 0, and the class reaching it.
// A gap inside the rounding bound of its dot product has no reliable sign and
// counts as 0.
std::pair<double, int> node_slack(const TrainingNode& node, const WeightVector& p) {
  const auto own = node.counts.col(node.truth);
  const double eps = std::numeric_limits<double>::epsilon();
  const double dims = static_cast<double>(p.size() + 1);
  double worst = 0;
  int arg = node.truth;
  for (Eigen::Index j = 0; j < node.counts.cols(); ++j) {
    if (j == node.truth) continue;
    const Eigen::VectorXd diff = node.counts.col(j) - own;
    const double gap = diff.dot(p);
    if (gap <= dims * eps * diff.cwiseAbs().dot(p.cwiseAbs())) continue;
    if (gap > worst) {
      worst = gap;
      arg = static_cast<int>(j);
    }
  }
  return {worst, arg};
}

// Projects tiny negative round-off back onto the simplex.
WeightVector clean_weights(WeightVector p) {
  p = p.cwiseMax(0.0);
  const double total = p.sum();
  if (!(total > 0)) throw Error("weight LP produced a degenerate weight vector");
  return p / total;
}

WeightVector solve_by_tableau(std::span<const TrainingNode> nodes, Eigen::Index lenses,
                              Eigen::Index classes) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  LinearProgram<double> lp;
  lp.objective = Eigen::VectorXd::Zero(lenses + m);
  lp.objective.tail(m).setOnes();
  lp.a_ub = Eigen::MatrixXd::Zero(m * (classes - 1), lenses + m);
  lp.b_ub = Eigen::VectorXd::Zero(m * (classes - 1));
  Eigen::Index row = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& node = nodes[k];
    for (Eigen::Index j = 0; j < classes; ++j) {
      if (j == node.truth) continue;
      lp.a_ub.row(row).head(lenses) = (node.counts.col(j) - node.counts.col(node.truth)).transpose();
      lp.a_ub(row, lenses + k) = -1;
      ++row;
    }
  }
  lp.a_eq = Eigen::MatrixXd::Zero(1, lenses + m);
  lp.a_eq.row(0).head(lenses).setOnes();
  lp.b_eq = Eigen::VectorXd::Ones(1);

  const auto result = solve_simplex(lp);
  if (result.status != LpStatus::kOptimal) throw Error("weight LP did not reach an optimum");
  return result.x.head(lenses);
}

// Kelley cutting planes on min_p f(p), f(p) = sum_m max(0, max_j gap_mj(p)).
// Every cut is a valid lower bound of f and there are finitely many
// distinct cuts, so the loop ends at an optimum of the original LP.
WeightVector solve_by_cuts(std::span<const TrainingNode> nodes, Eigen::Index lenses) {
  std::vector<Eigen::VectorXd> cuts;
  constexpr int kMaxRounds = 20000;
  for (int round = 0; round < kMaxRounds; ++round) {
    LinearProgram<double> master;
    const auto k = static_cast<Eigen::Index>(cuts.size());
    master.objective = Eigen::VectorXd::Zero(lenses + 1);
    master.objective(lenses) = 1;
    master.a_ub = Eigen::MatrixXd::Zero(k, lenses + 1);
    master.b_ub = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      master.a_ub.row(i).head(lenses) = cuts[i].transpose();
      master.a_ub(i, lenses) = -1;
    }
    master.a_eq = Eigen::MatrixXd::Zero(1, lenses + 1);
    master.a_eq.row(0).head(lenses).setOnes();
    master.b_eq = Eigen::VectorXd::Ones(1);
    const auto result = solve_simplex(master);
    if (result.status != LpStatus::kOptimal) throw Error("weight LP master did not reach an optimum");

    const WeightVector p = clean_weights(result.x.head(lenses));
    const double bound = result.x(lenses);
    Eigen::VectorXd cut = Eigen::VectorXd::Zero(lenses);
    double value = 0;
    for (const auto& node : nodes) {
      const auto [gap, arg] = node_slack(node, p);
      if (gap > 0) {
        value += gap;
        cut += node.counts.col(arg) - node.counts.col(node.truth);
      }
    }
    if (value <= bound + 1e-9 * std::max(1.0, std::abs(value))) return p;
    if (std::find_if(cuts.begin(), cuts.end(), [&](const Eigen::VectorXd& c) {
          return (c - cut).cwiseAbs().maxCoeff() == 0.0;
        }) != cuts.end()) {
      return p;  // round-off: the master already holds this cut
    }
    cuts.push_back(std::move(cut));
  }
  throw Error("weight LP cutting planes did not converge");
}

}  // namespace

void check_weights(const WeightVector& p, double tol) {
  if (p.size() == 0) throw Error("empty weight vector");
  if ((p.array() < -tol).any() || (p.array() > 1 + tol).any()) {
    throw Error("weights must lie in [0, 1]");
  }
  if (std::abs(p.sum() - 1.0) > tol) throw Error("weights must sum to one");
}

double weights_lp_objective(std::span<const TrainingNode> nodes, const WeightVector& p) {
  double total = 0;
  for (const auto& node : nodes) total += node_slack(node, p).first;
  return total;
}

SlackSolution solve_weights_lp(std::span<const TrainingNode> nodes,
                               const WeightLpOptions& options) {
  const auto [lenses, classes] = check_shapes(nodes);
  auto method = options.method;
  if (method == LpMethod::kAuto) {
    const auto rows = static_cast<std::int64_t>(nodes.size()) * (classes - 1);
    method = rows <= options.tableau_row_limit ? LpMethod::kTableau : LpMethod::kCuttingPlane;
  }
  const WeightVector raw = method == LpMethod::kTableau
                               ? solve_by_tableau(nodes, lenses, classes)
                               : solve_by_cuts(nodes, lenses);
  SlackSolution solution;
  solution.p = clean_weights(raw);
  solution.xi.resize(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    solution.xi(static_cast<Eigen::Index>(m)) = node_slack(nodes[m], solution.p).first;
  }
  solution.objective = solution.xi.sum();
  return solution;
}

std::vector<TrainingNode> training_nodes(const TallySet& tallies, std::span<const int> truth,
                                         std::span<const NodeId> nodes, bool row_normalize) {
  std::vector<TrainingNode> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) {
    Eigen::MatrixXd counts = tallies.node(v).cast<double>();
    if (row_normalize) {
      for (Eigen::Index r = 0; r < counts.rows(); ++r) {
        const double total = counts.row(r).sum();
        if (total > 0) counts.row(r) /= total;
      }
    }
    out.push_back({std::move(counts), truth[v]});
  }
  return out;
}

WeightVector naive_weights(const Eigen::VectorXd& accuracies) {
  if (accuracies.size() == 0) throw Error("no lens accuracies given");
  if ((accuracies.array() < 0).any()) throw Error("lens accuracies must be nonnegative");
  const double total = accuracies.sum();
  if (!(total > 0)) throw Error("lens accuracies are all zero");
  return accuracies / total;
}

bool Prediction::retains(int label) const {
  const auto kept = retained();
  return std::find(kept.begin(), kept.end(), label) != kept.end();
}

Prediction top_k_prediction(const LabelDistribution& w, double tau) {
  if (!(tau > 0 && tau <= 1)) throw Error("threshold tau must lie in (0, 1]");
  Prediction prediction;
  prediction.tau = tau;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w(j) > 0) prediction.ranked.push_back(static_cast<int>(j));
  }
  if (prediction.ranked.empty()) throw Error("label distribution has no positive weight");
  // Weights that differ only by round-off rank as ties, so rescaled tallies
  // give the same order.
  const auto key = [&](int j) { return std::llround(std::ldexp(w(j), 40)); };
  std::stable_sort(prediction.ranked.begin(), prediction.ranked.end(),
                   [&](int a, int b) { return key(a) > key(b); });
  double cumulative = 0;
  prediction.k = static_cast<int>(prediction.ranked.size());
  for (std::size_t i = 0; i < prediction.ranked.size(); ++i) {
    cumulative += w(prediction.ranked[i]);
    if (cumulative >= tau - 1e-12) {
      prediction.k = static_cast<int>(i) + 1;
      break;
    }
  }
  return prediction;
}

double node_accuracy(const Prediction& prediction, int true_class) {
  return prediction.retains(true_class) ? 1.0 / prediction.k : 0.0;
}

Split train_test_split(NodeId node_count, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw Error("train fraction must lie in (0, 1)");
  }
  std::vector<NodeId> ids(static_cast<std::size_t>(node_count));
  std::iota(ids.begin(), ids.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto train = static_cast<std::size_t>(std::llround(train_fraction * node_count));
  Split split;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train));
  split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(train), ids.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<NodeId> subsample(std::span<const NodeId> nodes, std::size_t cap, std::uint64_t seed) {
  std::vector<NodeId> out(nodes.begin(), nodes.end());
  if (out.size() <= cap) return out;
  std::mt19937_64 rng(seed);
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(cap);
  std::sort(out.begin(), out.end());
  return out;
}

void write_weights(std::ostream& out, const LensLayout& layout, const WeightVector& p,
                   const std::string& comment) {
  if (p.size() != layout.rows()) throw Error("weight count does not match lens rows");
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  }
  for (int r = 0; r < layout.rows(); ++r) {
    out << layout.row_label(r) << ' ' << fmt::format("{:.17g}", p(r)) << '\n';
  }
}

WeightVector read_weights(std::istream& in, const LensLayout& layout) {
  WeightVector p = WeightVector::Constant(layout.rows(), -1.0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string label;
    double value = 0;
    if (!(fields >> label >> value)) throw ParseError(line_no, "expected '<row> <weight>'");
    const int r = layout.parse_row_label(label);
    if (r < 0) throw ParseError(line_no, "unknown lens row '" + label + "'");
    if (p(r) >= 0) throw ParseError(line_no, "lens row listed twice");
    p(r) = value;
  }
  if ((p.array() < 0).any()) throw ParseError(0, "weights file misses a lens row or has a negative weight");
  try {
    check_weights(p, 1e-9);
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  return p;
}

}  // namespace netlens
