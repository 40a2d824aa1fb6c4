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
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "netlens/error.hpp"

namespace netlens {

// minimize c'x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
template <typename Scalar>
struct LinearProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector objective;
  Matrix a_ub;
  Vector b_ub;
  Matrix a_eq;
  Vector b_eq;

  Eigen::Index variables() const { return objective.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar objective = 0;
  std::int64_t pivots = 0;
};

template <typename Scalar>
struct SimplexOptions {
  Scalar tolerance = Scalar(1e-10);
  std::int64_t max_pivots = 1'000'000;
};

namespace internal {

// Dense tableau with an explicit basis. Column layout: structural variables,
// then one slack/surplus per inequality row, then artificials. The last
// column holds the right-hand side; the last row holds reduced costs with
// the negated objective value in its corner.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tableau(const LinearProgram<Scalar>& lp, Scalar tol) : tol_(tol) {
    const Eigen::Index n = lp.variables();
    const Eigen::Index m_ub = lp.a_ub.rows();
    const Eigen::Index m_eq = lp.a_eq.rows();
    if ((m_ub > 0 && (lp.a_ub.cols() != n || lp.b_ub.size() != m_ub)) ||
        (m_eq > 0 && (lp.a_eq.cols() != n || lp.b_eq.size() != m_eq))) {
      throw Error("linear program dimensions are inconsistent");
    }
    rows_ = m_ub + m_eq;
    structural_ = n;
    // Rows needing an artificial: inequalities with negative rhs (turned
    // into >= after negation) and every equality.
    Eigen::Index artificials = m_eq;
    for (Eigen::Index i = 0; i < m_ub; ++i) {
      if (lp.b_ub(i) < 0) ++artificials;
    }
    first_artificial_ = n + m_ub;
    cols_ = first_artificial_ + artificials;
    t_ = Matrix::Zero(rows_ + 1, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(rows_), -1);

    Eigen::Index next_artificial = first_artificial_;
    for (Eigen::Index i = 0; i < m_ub; ++i) {
      const Scalar sign = lp.b_ub(i) < 0 ? Scalar(-1) : Scalar(1);
      t_.row(i).head(n) = sign * lp.a_ub.row(i);
      t_(i, n + i) = sign;
      t_(i, cols_) = sign * lp.b_ub(i);
      if (sign > 0) {
        basis_[i] = n + i;
      } else {
        t_(i, next_artificial) = 1;
        basis_[i] = next_artificial++;
      }
    }
    for (Eigen::Index k = 0; k < m_eq; ++k) {
      const Eigen::Index i = m_ub + k;
      const Scalar sign = lp.b_eq(k) < 0 ? Scalar(-1) : Scalar(1);
      t_.row(i).head(n) = sign * lp.a_eq.row(k);
      t_(i, cols_) = sign * lp.b_eq(k);
      t_(i, next_artificial) = 1;
      basis_[i] = next_artificial++;
    }
  }

  bool has_artificials() const { return cols_ > first_artificial_; }

  // Phase 1 cost row: minimize the sum of artificials.
  void load_phase_one() {
    t_.row(rows_).setZero();
    for (Eigen::Index j = first_artificial_; j < cols_; ++j) t_(rows_, j) = 1;
    price_out_basis();
  }

  void load_phase_two(const Vector& c) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(structural_) = c.transpose();
    price_out_basis();
    allow_artificials_ = false;
  }

  Scalar objective_value() const { return -t_(rows_, cols_); }

  // Pivots until optimal, unbounded or out of budget. Bland's rule: the
  // lowest-index improving column enters; ratio ties leave by lowest basic
  // index. This cannot cycle on degenerate problems.
  LpStatus optimize(std::int64_t& pivots, std::int64_t max_pivots) {
    const Eigen::Index limit = allow_artificials_ ? cols_ : first_artificial_;
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (t_(rows_, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      Eigen::Index leave = -1;
      Scalar best = 0;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const Scalar a = t_(i, enter);
        if (a <= tol_) continue;
        const Scalar ratio = t_(i, cols_) / a;
        if (leave < 0 || ratio < best - tol_ ||
            (ratio <= best + tol_ && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      if (pivots >= max_pivots) return LpStatus::kIterationLimit;
      pivot(leave, enter);
      ++pivots;
    }
  }

  // After phase 1: pivot zero-level artificials out of the basis where a
  // structural or slack column allows it. Rows where none does are
  // redundant and keep their artificial at zero.
  void expel_artificials(std::int64_t& pivots) {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (Eigen::Index j = 0; j < first_artificial_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          pivot(i, j);
          ++pivots;
          break;
        }
      }
    }
  }

  Vector solution() const {
    Vector x = Vector::Zero(structural_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) x(basis_[i]) = t_(i, cols_);
    }
    return x;
  }

 private:
  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    Vector factor = t_.col(c);
    factor(r) = 0;
    t_.noalias() -= factor * t_.row(r);
    basis_[r] = c;
  }

  void price_out_basis() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Scalar cost = t_(rows_, basis_[i]);
      if (cost != 0) t_.row(rows_) -= cost * t_.row(i);
    }
  }

  Matrix t_;
  std::vector<Eigen::Index> basis_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::Index structural_ = 0;
  Eigen::Index first_artificial_ = 0;
  bool allow_artificials_ = true;
  Scalar tol_;
};

}  // namespace internal

// Two-phase dense tableau simplex. Returns a basic optimal solution when one
// exists.
template <typename Scalar>
LpResult<Scalar> solve_simplex(const LinearProgram<Scalar>& lp,
                               const SimplexOptions<Scalar>& options = {}) {
  internal::Tableau<Scalar> tableau(lp, options.tolerance);
  LpResult<Scalar> result;
  if (tableau.has_artificials()) {
    tableau.load_phase_one();
    result.status = tableau.optimize(result.pivots, options.max_pivots);
    if (result.status == LpStatus::kIterationLimit) return result;
    // Feasibility threshold scales with the problem's right-hand side.
    const Scalar scale = std::max<Scalar>(
        Scalar(1), std::max(lp.b_ub.size() ? lp.b_ub.cwiseAbs().maxCoeff() : Scalar(0),
                            lp.b_eq.size() ? lp.b_eq.cwiseAbs().maxCoeff() : Scalar(0)));
    if (tableau.objective_value() > std::sqrt(options.tolerance) * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    tableau.expel_artificials(result.pivots);
  }
  tableau.load_phase_two(lp.objective);
  result.status = tableau.optimize(result.pivots, options.max_pivots);
  if (result.status != LpStatus::kOptimal) return result;
  result.x = tableau.solution();
  result.objective = lp.objective.dot(result.x);
  return result;
}

}  // namespace netlens
