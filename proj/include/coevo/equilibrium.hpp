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

#ifndef COEVO_EQUILIBRIUM_HPP_
#define COEVO_EQUILIBRIUM_HPP_

#include <cstddef>
#include <vector>

#include "coevo/game_model.hpp"
#include "coevo/matrix.hpp"

namespace coevo {

inline constexpr double kPivotTol = 1e-10;
inline constexpr double kNashObjectiveTol = 1e-8;
inline constexpr double kInteriorityThreshold = 1e-9;

// minimize c.v  subject to  G v <= h,  A v = b,  v_k >= 0 unless free[k].
struct LinearProgram {
  std::vector<double> c;
  Matrix G;
  std::vector<double> h;
  Matrix A;
  std::vector<double> b;
  std::vector<bool> free;

  std::size_t variables() const { return c.size(); }
};

struct LpSolution {
  std::vector<double> values;
  double objective = 0.0;
  std::size_t pivots = 0;
};

// Dense two-phase simplex with Bland's rule. Throws kInfeasible or
// kUnbounded; never cycles.
LpSolution SolveLp(const LinearProgram& lp);

// Variables: every strategy coordinate (player-major) followed by one value
// v_i per player. Objective sum_i eta_i v_i; rows v_i >= u_{ia}(x) and
// sum_a x_{ia} = 1.
LinearProgram AssembleNashLp(const PolymatrixGame& game);

struct NashResult {
  StrategyProfile profile;
  std::vector<double> values;
  double objective = 0.0;
  bool interior = false;
  double interiority_margin = 0.0;
  double nash_residual = 0.0;
};

// Throws kNotRescaledZeroSum when the game fails verification or the LP
// optimum is materially nonzero, kSolverFailure when the extracted profile is
// not an equilibrium.
NashResult ComputeNash(const PolymatrixGame& game);

// max over players and pure deviations of u_{ia}(x) - u_i(x).
double VerifyNash(const PolymatrixGame& game, const StrategyProfile& x);

}  // namespace coevo

#endif  // COEVO_EQUILIBRIUM_HPP_
