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

#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "netlens/aggregation.hpp"
#include "netlens/error.hpp"
#include "netlens/lens.hpp"
#include "oracles/lp_oracle.hpp"

namespace netlens {
namespace {

std::vector<TrainingNode> to_nodes(const oracle::LpInstance& inst, double scale = 1.0) {
  std::vector<TrainingNode> nodes;
  for (std::size_t m = 0; m < inst.counts.size(); ++m) {
    Eigen::MatrixXd x(inst.lenses, inst.classes);
    for (int i = 0; i < inst.lenses; ++i) {
      for (int j = 0; j < inst.classes; ++j) x(i, j) = scale * inst.counts[m][i][j];
    }
    nodes.push_back({x, inst.truth[m]});
  }
  return nodes;
}

std::vector<double> as_std(const WeightVector& p) { return {p.data(), p.data() + p.size()}; }

// Every LP row: xi_m >= (X(:,j) - X(:,y)) . p and xi_m >= 0.
void expect_feasible(const std::vector<TrainingNode>& nodes, const SlackSolution& s) {
  EXPECT_NO_THROW(check_weights(s.p, 1e-9));
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const auto& x = nodes[m].counts;
    EXPECT_GE(s.xi(m), -1e-9);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double gap = (x.col(j) - x.col(nodes[m].truth)).dot(s.p);
      EXPECT_LE(gap - s.xi(m), 1e-9);
    }
  }
  EXPECT_NEAR(s.objective, s.xi.sum(), 1e-12);
}

TEST(WeightsLp, DiagonalExample) {
  Eigen::MatrixXd x(2, 2);
  x << 3, 0, 0, 3;
  const std::vector<TrainingNode> nodes{{x, 0}};
  const auto s = solve_weights_lp(nodes);
  EXPECT_NEAR(s.p(0), 1.0, 1e-12);
  EXPECT_NEAR(s.p(1), 0.0, 1e-12);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
  oracle::LpInstance inst{2, 2, {{{3, 0}, {0, 3}}}, {0}};
  EXPECT_NEAR(oracle::grid_minimum(inst), 0.0, 1e-12);
}

TEST(WeightsLp, IdenticalRowsAnyWeightIsOptimal) {
  Eigen::MatrixXd x(3, 3);
  x << 1, 4, 0, 1, 4, 0, 1, 4, 0;
  const std::vector<TrainingNode> nodes{{x, 0}, {x, 2}};
  for (auto method : {LpMethod::kTableau, LpMethod::kCuttingPlane}) {
    const auto s = solve_weights_lp(nodes, {method, 400});
    expect_feasible(nodes, s);
    EXPECT_NEAR(s.objective, 3.0 + 4.0, 1e-12);
  }
}

TEST(WeightsLp, MatchesExactVertexOracle) {
  for (int max_count : {1, 2, 4, 9}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto inst = oracle::random_lp_instance(seed * 13 + max_count, max_count);
      const auto nodes = to_nodes(inst);
      const double exact = oracle::vertex_minimum(inst);
      for (auto method : {LpMethod::kTableau, LpMethod::kCuttingPlane}) {
        const auto s = solve_weights_lp(nodes, {method, 400});
        expect_feasible(nodes, s);
        EXPECT_NEAR(s.objective, exact, 1e-7) << "seed " << seed << " max " << max_count;
        EXPECT_NEAR(oracle::slack_objective(inst, as_std(s.p)), s.objective, 1e-9);
        // The grid holds only feasible points, so it can never beat the solver.
        EXPECT_LE(s.objective, oracle::grid_minimum(inst) + 1e-9);
      }
    }
  }
}

TEST(WeightsLp, GridAgreesWhenOptimumIsOnGrid) {
  // Optima at simplex corners or midpoints lie on the 0.01 grid.
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = oracle::random_lp_instance(seed, 1);
    const auto nodes = to_nodes(inst);
    const auto s = solve_weights_lp(nodes);
    const auto on_grid = (s.p * 100).array().round().matrix() / 100;
    if ((s.p - on_grid).cwiseAbs().maxCoeff() > 1e-12) continue;
    ++checked;
    EXPECT_NEAR(s.objective, oracle::grid_minimum(inst), 1e-6);
  }
  EXPECT_GT(checked, 150);
}

TEST(WeightsLp, NeverWorseThanOneHot) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = oracle::random_lp_instance(seed + 1000, 5, 6, 4, 30);
    const auto nodes = to_nodes(inst);
    const auto s = solve_weights_lp(nodes);
    for (int i = 0; i < inst.lenses; ++i) {
      WeightVector e = WeightVector::Zero(inst.lenses);
      e(i) = 1;
      EXPECT_LE(s.objective, weights_lp_objective(nodes, e) + 1e-9);
    }
  }
}

TEST(WeightsLp, MethodsAgreeOnLargerInstances) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = oracle::random_lp_instance(seed + 77, 6, 8, 3, 150);
    const auto nodes = to_nodes(inst);
    const auto a = solve_weights_lp(nodes, {LpMethod::kTableau, 0});
    const auto b = solve_weights_lp(nodes, {LpMethod::kCuttingPlane, 0});
    expect_feasible(nodes, a);
    expect_feasible(nodes, b);
    EXPECT_NEAR(a.objective, b.objective, 1e-7 * std::max(1.0, a.objective));
  }
}

TEST(WeightsLp, ScalingCountsScalesObjective) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = oracle::random_lp_instance(seed + 500, 4);
    const auto base_nodes = to_nodes(inst);
    const auto scaled_nodes = to_nodes(inst, 7.0);
    const auto base = solve_weights_lp(base_nodes);
    const auto scaled = solve_weights_lp(scaled_nodes);
    EXPECT_NEAR(scaled.objective, 7.0 * base.objective, 1e-9);
    // The scaled optimum is optimal for the original problem too.
    EXPECT_NEAR(weights_lp_objective(base_nodes, scaled.p), base.objective, 1e-9);
    for (std::size_t m = 0; m < base_nodes.size(); ++m) {
      const auto w = node_distribution(base_nodes[m].counts, base.p);
      const auto ws = node_distribution(scaled_nodes[m].counts, base.p);
      ASSERT_EQ(w.has_value(), ws.has_value());
      if (!w) continue;
      for (double tau : {0.3, 0.6, 0.9, 1.0}) {
        const auto a = top_k_prediction(*w, tau);
        const auto b = top_k_prediction(*ws, tau);
        EXPECT_EQ(a.k, b.k);
        EXPECT_EQ(std::vector<int>(a.retained().begin(), a.retained().end()),
                  std::vector<int>(b.retained().begin(), b.retained().end()));
      }
    }
  }
}

TEST(WeightsLp, RejectsBadShapes) {
  EXPECT_THROW(solve_weights_lp(std::vector<TrainingNode>{}), Error);
  const std::vector<TrainingNode> mixed{{Eigen::MatrixXd::Ones(2, 3), 0},
                                        {Eigen::MatrixXd::Ones(3, 3), 0}};
  EXPECT_THROW(solve_weights_lp(mixed), Error);
  const std::vector<TrainingNode> bad_truth{{Eigen::MatrixXd::Ones(2, 3), 3}};
  EXPECT_THROW(solve_weights_lp(bad_truth), Error);
}

TEST(NaiveWeights, Examples) {
  const auto p = naive_weights(Eigen::Vector4d(29.08, 33.96, 34.53, 30.65));
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  EXPECT_NEAR(p(2) / p(0), 34.53 / 29.08, 1e-12);
  EXPECT_EQ(naive_weights(Eigen::Vector3d(5, 5, 5)), Eigen::Vector3d::Constant(1.0 / 3.0));
  EXPECT_THROW(naive_weights(Eigen::Vector4d::Zero()), Error);
  EXPECT_THROW(naive_weights(Eigen::Vector2d(1, -1)), Error);
}

TEST(NodeDistribution, Examples) {
  Eigen::MatrixXi x = Eigen::MatrixXi::Zero(4, 5);
  x(2, 3) = 6;
  const auto one_hot = node_distribution(x, WeightVector::Constant(4, 0.25));
  ASSERT_TRUE(one_hot);
  EXPECT_EQ(*one_hot, (Eigen::VectorXd::Unit(5, 3)));

  Eigen::MatrixXi y(2, 3);
  y << 1, 2, 1, 9, 0, 0;
  const auto row0 = node_distribution(y, Eigen::Vector2d(1, 0));
  EXPECT_TRUE(row0->isApprox(Eigen::Vector3d(0.25, 0.5, 0.25)));

  EXPECT_FALSE(node_distribution(Eigen::MatrixXi::Zero(2, 3), Eigen::Vector2d(0.5, 0.5)));
  Eigen::MatrixXi top_only = Eigen::MatrixXi::Zero(2, 3);
  top_only(0, 1) = 5;
  EXPECT_FALSE(node_distribution(top_only, Eigen::Vector2d(0, 1)));  // weight on an empty row
  EXPECT_THROW(node_distribution(y, Eigen::Vector3d(1, 0, 0)), Error);
}

TEST(TopK, WorkedExample) {
  const Eigen::Vector3d w(0.5, 0.3, 0.2);
  const auto p = top_k_prediction(w, 0.8);
  EXPECT_EQ(p.k, 2);
  EXPECT_EQ(std::vector<int>(p.retained().begin(), p.retained().end()), (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(node_accuracy(p, 1), 0.5);
  EXPECT_DOUBLE_EQ(node_accuracy(p, 2), 0.0);
  EXPECT_EQ(top_k_prediction(w, 0.5).k, 1);
  EXPECT_DOUBLE_EQ(node_accuracy(top_k_prediction(w, 0.5), 0), 1.0);
  EXPECT_EQ(top_k_prediction(w, 1.0).k, 3);
}

TEST(TopK, ZeroWeightsNeverRetainedAndTiesByIndex) {
  const Eigen::Vector4d w(0.0, 0.4, 0.2, 0.4);
  const auto p = top_k_prediction(w, 1.0);
  EXPECT_EQ(p.ranked, (std::vector<int>{1, 3, 2}));
  EXPECT_EQ(p.k, 3);
  EXPECT_FALSE(p.retains(0));
  EXPECT_THROW(top_k_prediction(w, 0.0), Error);
  EXPECT_THROW(top_k_prediction(w, 1.5), Error);
}

TEST(TopK, Invariants) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::VectorXd w(6);
    for (int j = 0; j < 6; ++j) w(j) = unit(rng) < 0.3 ? 0.0 : unit(rng);
    if (w.sum() == 0) continue;
    w /= w.sum();
    const double tau = std::max(0.01, unit(rng));
    const auto p = top_k_prediction(w, tau);
    double kept = 0;
    for (int label : p.retained()) kept += w(label);
    EXPECT_GE(kept, tau - 1e-12);
    if (p.k > 1) EXPECT_LT(kept - w(p.ranked[p.k - 1]), tau - 1e-12);
    for (std::size_t i = 1; i < p.ranked.size(); ++i) {
      EXPECT_GE(w(p.ranked[i - 1]), w(p.ranked[i]) - 1e-12);
    }
    for (int t = 0; t < 6; ++t) {
      const double a = node_accuracy(p, t);
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
      EXPECT_EQ(a == 1.0, p.k == 1 && p.ranked[0] == t);
    }
  }
}

TEST(Split, DisjointCoverAndDeterministic) {
  const auto s = train_test_split(1001, 0.8, 5);
  EXPECT_EQ(s.train.size(), 801u);
  EXPECT_EQ(s.test.size(), 200u);
  std::set<NodeId> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 1001u);
  EXPECT_EQ(train_test_split(1001, 0.8, 5).test, s.test);
  EXPECT_NE(train_test_split(1001, 0.8, 6).test, s.test);
  EXPECT_THROW(train_test_split(10, 1.0, 1), Error);
  EXPECT_THROW(train_test_split(10, 0.0, 1), Error);
}

TEST(Subsample, CapsAndKeepsOrder) {
  std::vector<NodeId> ids(100);
  std::iota(ids.begin(), ids.end(), 0);
  const auto few = subsample(ids, 10, 3);
  EXPECT_EQ(few.size(), 10u);
  EXPECT_TRUE(std::is_sorted(few.begin(), few.end()));
  EXPECT_EQ(subsample(ids, 500, 3), ids);
}

TEST(WeightsFile, RoundTripAndErrors) {
  const LensLayout layout({8, 16}, 3);
  const Eigen::Vector4d p(0.1, 0.2, 0.3, 0.4);
  std::ostringstream out;
  write_weights(out, layout, p, "method=test");
  EXPECT_EQ(out.str().substr(0, 22), "# method=test\n8:start ");
  std::istringstream in(out.str());
  EXPECT_EQ(read_weights(in, layout), WeightVector(p));
  std::istringstream missing("8:start 0.5\n8:member 0.5\n");
  EXPECT_THROW(read_weights(missing, layout), ParseError);
  std::istringstream unknown("9:start 1\n");
  EXPECT_THROW(read_weights(unknown, layout), ParseError);
  std::istringstream unnormalized("8:start 0.5\n8:member 0.5\n16:start 0.5\n16:member 0\n");
  EXPECT_THROW(read_weights(unnormalized, layout), ParseError);
}

TEST(TrainingNodes, CopiesTalliesAndNormalizes) {
  const LensLayout layout({8, 16}, 2);
  TallySet t(layout, 2);
  t.at(1, 1, 0) = 3;
  t.at(1, 1, 1) = 1;
  const std::vector<int> truth{0, 1};
  const std::vector<NodeId> pick{1};
  const auto raw = training_nodes(t, truth, pick);
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_EQ(raw[0].truth, 1);
  EXPECT_EQ(raw[0].counts(1, 0), 3.0);
  const auto norm = training_nodes(t, truth, pick, true);
  EXPECT_EQ(norm[0].counts(1, 0), 0.75);
  EXPECT_EQ(norm[0].counts(0, 0), 0.0);
}

}  // namespace
}  // namespace netlens
