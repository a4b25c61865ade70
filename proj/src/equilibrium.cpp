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

#include "coevo/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "coevo/error.hpp"

namespace coevo {

LinearProgram AssembleNashLp(const PolymatrixGame& game) {
  const ZeroSumCheck check = VerifyRescaledZeroSum(game);
  if (!check.rescaled_zero_sum) {
    std::ostringstream msg;
    msg << "game is not rescaled zero-sum (residual " << check.residual << ")";
    throw Error(ErrorKind::kNotRescaledZeroSum, msg.str());
  }
  const Layout layout = game.layout();
  const std::size_t dim = layout.dim();
  const std::size_t players = game.players();
  const std::size_t nv = dim + players;

  LinearProgram lp;
  lp.c.assign(nv, 0.0);
  for (PlayerId i = 0; i < players; ++i) lp.c[dim + i] = game.eta[i];
  lp.free.assign(nv, false);
  for (PlayerId i = 0; i < players; ++i) lp.free[dim + i] = true;

  // Row (i, a): sum_j A^{ij}_{a.} x_j (+ self-loop row) - v_i <= 0.
  lp.G = Matrix(dim, nv);
  lp.h.assign(dim, 0.0);
  auto add_block = [&](PlayerId row_player, PlayerId col_player,
                       const Matrix& m) {
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t g = 0; g < m.cols(); ++g)
        lp.G(layout.offset(row_player) + a, layout.offset(col_player) + g) +=
            m(a, g);
  };
  for (const EdgeGame& e : game.edges) {
    add_block(e.i, e.j, e.A_ij);
    add_block(e.j, e.i, e.A_ji);
  }
  for (const SelfLoop& s : game.self_loops) add_block(s.i, s.i, s.A);
  for (PlayerId i = 0; i < players; ++i)
    for (std::size_t a = 0; a < layout.actions(i); ++a)
      lp.G(layout.offset(i) + a, dim + i) = -1.0;

  lp.A = Matrix(players, nv);
  lp.b.assign(players, 1.0);
  for (PlayerId i = 0; i < players; ++i)
    for (std::size_t a = 0; a < layout.actions(i); ++a)
      lp.A(i, layout.offset(i) + a) = 1.0;
  return lp;
}

double VerifyNash(const PolymatrixGame& game, const StrategyProfile& x) {
  if (x.layout().counts() != game.action_counts)
    throw Error(ErrorKind::kDimensionMismatch,
                "strategy profile shape does not match the game");
  const Layout& layout = x.layout();
  std::vector<double> all(layout.dim());
  AllActionUtilities(game, x.flat(), all);
  double worst = -std::numeric_limits<double>::infinity();
  for (PlayerId i = 0; i < game.players(); ++i) {
    const auto ua = std::span<const double>(all).subspan(layout.offset(i),
                                                         layout.actions(i));
    const double ui = Dot(x.player(i), ua);
    for (double v : ua) worst = std::max(worst, v - ui);
  }
  return game.players() ? worst : 0.0;
}

NashResult ComputeNash(const PolymatrixGame& game) {
  const LinearProgram lp = AssembleNashLp(game);
  const LpSolution sol = SolveLp(lp);
  if (std::abs(sol.objective) > kNashObjectiveTol) {
    std::ostringstream msg;
    msg << "LP optimum " << sol.objective
        << " is not zero; the game is not rescaled zero-sum";
    throw Error(ErrorKind::kNotRescaledZeroSum, msg.str());
  }
  const Layout layout = game.layout();
  std::vector<double> x(sol.values.begin(),
                        sol.values.begin() + static_cast<std::ptrdiff_t>(layout.dim()));
  for (PlayerId i = 0; i < layout.players(); ++i) {
    const std::size_t off = layout.offset(i);
    double sum = 0.0;
    for (std::size_t a = 0; a < layout.actions(i); ++a) {
      x[off + a] = std::max(0.0, x[off + a]);
      sum += x[off + a];
    }
    for (std::size_t a = 0; a < layout.actions(i); ++a) x[off + a] /= sum;
  }

  NashResult r;
  r.profile = StrategyProfile(layout, std::move(x));
  r.values.assign(sol.values.begin() + static_cast<std::ptrdiff_t>(layout.dim()),
                  sol.values.end());
  r.objective = sol.objective;
  r.interiority_margin = r.profile.MinEntry();
  r.interior = r.interiority_margin > kInteriorityThreshold;
  r.nash_residual = VerifyNash(game, r.profile);
  if (r.nash_residual > kNashObjectiveTol) {
    std::ostringstream msg;
    msg << "LP solution is not an equilibrium (deviation gain "
        << r.nash_residual << ")";
    throw Error(ErrorKind::kSolverFailure, msg.str());
  }
  return r;
}

}  // namespace coevo
