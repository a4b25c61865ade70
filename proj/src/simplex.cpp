// Copyright 2026 The coevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "coevo/equilibrium.hpp"
#include "coevo/error.hpp"

namespace coevo {

namespace {

constexpr double kPhaseOneTol = 1e-9;
// Entries this small after an elimination are round-off and reset to zero.
constexpr double kDropTol = 1e-13;

// Tableau in standard form: rows are constraints, the last column is the
// right-hand side; a separate objective row holds reduced costs.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0),
        cost_(cols + 1, 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<double>& cost() { return cost_; }

  // Reduced costs for the given objective with the current basis priced out.
  void Price(const std::vector<double>& objective) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t c = 0; c < objective.size(); ++c) cost_[c] = objective[c];
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) cost_[c] -= cb * at(r, c);
    }
  }

  void Pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        double& v = at(r, c);
        v -= f * at(pr, c);
        if (std::abs(v) < kDropTol) v = 0.0;
      }
      at(r, pc) = 0.0;
    }
    const double f = cost_[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= cols_; ++c) {
        cost_[c] -= f * at(pr, c);
        if (std::abs(cost_[c]) < kDropTol) cost_[c] = 0.0;
      }
      cost_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Runs Bland's rule over columns [0, allowed). Returns false if unbounded.
  bool Optimize(std::size_t allowed, std::size_t& pivots) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost_[c] < -kPivotTol) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (leave == rows_ || ratio < best - kPivotTol ||
            (std::abs(ratio - best) <= kPivotTol && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return false;
      Pivot(leave, enter);
      ++pivots;
    }
  }

  void DropRow(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
             a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution SolveLp(const LinearProgram& lp) {
  const std::size_t nv = lp.variables();
  const std::size_t n_ineq = lp.G.rows();
  const std::size_t n_eq = lp.A.rows();
  if ((n_ineq && lp.G.cols() != nv) || (n_eq && lp.A.cols() != nv) ||
      lp.h.size() != n_ineq || lp.b.size() != n_eq ||
      (!lp.free.empty() && lp.free.size() != nv)) {
    throw Error(ErrorKind::kDimensionMismatch, "inconsistent LP dimensions");
  }
  auto finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(lp.c) || !finite(lp.h) || !finite(lp.b) || !lp.G.AllFinite() ||
      !lp.A.AllFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "LP has non-finite entries");
  }

  // Column map: each variable gets one column, free ones a second (negative
  // part); then one slack per inequality, then one artificial per row.
  std::vector<std::size_t> plus(nv), minus(nv, SIZE_MAX);
  std::size_t col = 0;
  for (std::size_t k = 0; k < nv; ++k) {
    plus[k] = col++;
    if (!lp.free.empty() && lp.free[k]) minus[k] = col++;
  }
  const std::size_t slack0 = col;
  col += n_ineq;
  const std::size_t structural = col;
  const std::size_t rows = n_ineq + n_eq;
  const std::size_t total = structural + rows;

  Tableau t(rows, total);
  std::vector<bool> needs_artificial(rows, false);
  auto load_row = [&](std::size_t r, std::span<const double> coeffs,
                      double rhs, bool with_slack) {
    const double sign = rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < nv; ++k) {
      t.at(r, plus[k]) = sign * coeffs[k];
      if (minus[k] != SIZE_MAX) t.at(r, minus[k]) = -sign * coeffs[k];
    }
    t.rhs(r) = sign * rhs;
    if (with_slack && sign > 0.0) {
      t.at(r, slack0 + r) = 1.0;
      t.basis()[r] = slack0 + r;
      return;
    }
    if (with_slack) t.at(r, slack0 + r) = sign;
    t.at(r, structural + r) = 1.0;
    t.basis()[r] = structural + r;
    needs_artificial[r] = true;
  };
  for (std::size_t r = 0; r < n_ineq; ++r) load_row(r, lp.G.row(r), lp.h[r], true);
  for (std::size_t r = 0; r < n_eq; ++r)
    load_row(n_ineq + r, lp.A.row(r), lp.b[r], false);

  LpSolution sol;
  std::vector<double> phase1(total, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (needs_artificial[r]) phase1[structural + r] = 1.0;
  t.Price(phase1);
  if (!t.Optimize(total, sol.pivots))
    throw Error(ErrorKind::kSolverFailure, "phase one reported unbounded");
  double infeasibility = 0.0;
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (t.basis()[r] >= structural) infeasibility += t.rhs(r);
  if (infeasibility > kPhaseOneTol)
    throw Error(ErrorKind::kInfeasible, "linear program is infeasible");

  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are redundant.
  for (std::size_t r = t.rows(); r-- > 0;) {
    if (t.basis()[r] < structural) continue;
    std::size_t pc = structural;
    double largest = kPivotTol;
    for (std::size_t c = 0; c < structural; ++c) {
      if (std::abs(t.at(r, c)) > largest) {
        largest = std::abs(t.at(r, c));
        pc = c;
      }
    }
    if (pc == structural) {
      t.DropRow(r);
    } else {
      t.Pivot(r, pc);
      ++sol.pivots;
    }
  }

  std::vector<double> phase2(total, 0.0);
  for (std::size_t k = 0; k < nv; ++k) {
    phase2[plus[k]] = lp.c[k];
    if (minus[k] != SIZE_MAX) phase2[minus[k]] = -lp.c[k];
  }
  t.Price(phase2);
  if (!t.Optimize(structural, sol.pivots))
    throw Error(ErrorKind::kUnbounded, "linear program is unbounded");

  std::vector<double> column_value(total, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) column_value[t.basis()[r]] = t.rhs(r);
  sol.values.assign(nv, 0.0);
  for (std::size_t k = 0; k < nv; ++k) {
    sol.values[k] = column_value[plus[k]];
    if (minus[k] != SIZE_MAX) sol.values[k] -= column_value[minus[k]];
  }
  for (std::size_t k = 0; k < nv; ++k) sol.objective += lp.c[k] * sol.values[k];
  return sol;
}

}  // namespace coevo
