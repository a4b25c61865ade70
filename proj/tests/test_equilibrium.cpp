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

#include <cmath>
#include <random>

#include "coevo/equilibrium.hpp"
#include "coevo/error.hpp"
#include "coevo/game_model.hpp"
#include "doctest.h"

using namespace coevo;

namespace {

PolymatrixGame Pennies() {
  PolymatrixGame g;
  g.action_counts = {2, 2};
  g.edges.push_back({0, 1, Matrix{{1, -1}, {-1, 1}}, Matrix{{-1, 1}, {1, -1}}});
  g.eta = {1.0, 1.0};
  return g;
}

// Pairwise rescaled zero-sum: A_ji = -(eta_i / eta_j) A_ij^T.
PolymatrixGame RandomRescaled(std::mt19937_64& rng, std::size_t players) {
  std::uniform_int_distribution<std::size_t> acts(2, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.2, 3.0);
  PolymatrixGame g;
  for (std::size_t i = 0; i < players; ++i) {
    g.action_counts.push_back(acts(rng));
    g.eta.push_back(w(rng));
  }
  for (std::size_t i = 0; i < players; ++i) {
    for (std::size_t j = i + 1; j < players; ++j) {
      Matrix a(g.action_counts[i], g.action_counts[j]);
      for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = u(rng);
      g.edges.push_back({i, j, a, a.Transposed().Scaled(-g.eta[i] / g.eta[j])});
    }
  }
  return g;
}

double PenniesGain(double p, double q) {
  const StrategyProfile x({{p, 1 - p}, {q, 1 - q}});
  return VerifyNash(Pennies(), x);
}

}  // namespace

TEST_CASE("nash LP shape") {
  const LinearProgram lp = AssembleNashLp(BuildGeneralizedRpsReduced(3, 0.8));
  CHECK(lp.variables() == 8);
  CHECK(lp.G.rows() == 6);
  CHECK(lp.A.rows() == 2);
  CHECK(lp.c == std::vector<double>{0, 0, 0, 0, 0, 0, 1.0, 0.8});

  PolymatrixGame single;
  single.action_counts = {4};
  single.self_loops.push_back({0, GeneralizedRpsMatrix(4)});
  single.eta = {1.0};
  const LinearProgram lp1 = AssembleNashLp(single);
  CHECK(lp1.variables() == 5);
  CHECK(lp1.G.rows() == 4);

  PolymatrixGame bad = BuildGeneralizedRpsReduced(3, 0.5);
  bad.eta = {1.0, 1.0};
  try {
    AssembleNashLp(bad);
    FAIL("unverified game accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotRescaledZeroSum);
  }
}

TEST_CASE("simplex solves small programs") {
  LinearProgram lp;
  lp.c = {1.0};
  lp.G = Matrix{{-1.0}};
  lp.h = {-3.0};
  const LpSolution s = SolveLp(lp);
  CHECK(s.values[0] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));

  // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18
  LinearProgram textbook;
  textbook.c = {-3.0, -5.0};
  textbook.G = Matrix{{1, 0}, {0, 2}, {3, 2}};
  textbook.h = {4, 12, 18};
  const LpSolution t = SolveLp(textbook);
  CHECK(t.values[0] == doctest::Approx(2.0));
  CHECK(t.values[1] == doctest::Approx(6.0));
  CHECK(t.objective == doctest::Approx(-36.0));

  LinearProgram free_var;
  free_var.c = {1.0};
  free_var.G = Matrix{{-1.0}};
  free_var.h = {2.0};
  free_var.free = {true};
  CHECK(SolveLp(free_var).values[0] == doctest::Approx(-2.0));
}

TEST_CASE("simplex terminates on a cycling-prone degenerate program") {
  LinearProgram lp;
  lp.c = {-0.75, 20.0, -0.5, 6.0};
  lp.G = Matrix{{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}};
  lp.h = {0, 0, 1};
  const LpSolution s = SolveLp(lp);
  CHECK(s.objective == doctest::Approx(-1.25));
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.values[2] == doctest::Approx(1.0));
}

TEST_CASE("simplex reports infeasible and unbounded programs distinctly") {
  LinearProgram infeasible;
  infeasible.c = {1.0};
  infeasible.G = Matrix{{-1.0}, {1.0}};
  infeasible.h = {-1.0, 0.0};
  try {
    SolveLp(infeasible);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
  }
  LinearProgram unbounded;
  unbounded.c = {-1.0};
  unbounded.G = Matrix{{-1.0}};
  unbounded.h = {0.0};
  try {
    SolveLp(unbounded);
    FAIL("expected unbounded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnbounded);
  }
  LinearProgram ragged;
  ragged.c = {1.0, 1.0};
  ragged.G = Matrix{{1.0}};
  ragged.h = {1.0};
  CHECK_THROWS_AS(SolveLp(ragged), Error);
}

TEST_CASE("matching pennies against the grid oracle") {
  std::vector<std::pair<int, int>> equilibria;
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b)
      if (PenniesGain(a / 100.0, b / 100.0) <= 1e-12) equilibria.emplace_back(a, b);
  REQUIRE(equilibria.size() == 1);
  const NashResult r = ComputeNash(Pennies());
  CHECK(r.profile.flat()[0] == doctest::Approx(equilibria[0].first / 100.0).epsilon(1e-12));
  CHECK(r.profile.flat()[2] == doctest::Approx(equilibria[0].second / 100.0).epsilon(1e-12));
  CHECK(std::abs(r.objective) <= 1e-8);
  CHECK(r.interior);
}

TEST_CASE("reduced RPS and chain equilibria are uniform") {
  for (double mu : {0.1, 0.5, 0.8}) {
    const PolymatrixGame g = BuildGeneralizedRpsReduced(3, mu);
    const NashResult r = ComputeNash(g);
    for (double v : r.profile.values()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(r.interior);
    CHECK(r.interiority_margin == doctest::Approx(1.0 / 3));
    CHECK(std::abs(r.objective) <= 1e-8);
  }
  const std::vector<double> mus = {0.1, 0.5, 0.8, 0.5};
  const NashResult chain = ComputeNash(BuildChain(mus, 3));
  for (double v : chain.profile.values()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(chain.interior);
}

TEST_CASE("butterfly equilibrium") {
  const PolymatrixGame g = BuildButterfly(1);
  const NashResult r = ComputeNash(g);
  CHECK(std::abs(r.objective) <= 1e-8);
  CHECK(VerifyNash(g, r.profile) <= 1e-8);
  CHECK(r.interior);
}

TEST_CASE("verify nash examples") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  CHECK(std::abs(VerifyNash(g, StrategyProfile::Uniform(g.layout()))) <= 1e-12);

  PolymatrixGame single;
  single.action_counts = {3};
  single.self_loops.push_back({0, GeneralizedRpsMatrix(3)});
  single.eta = {1.0};
  CHECK(VerifyNash(single, StrategyProfile({{1.0, 0.0, 0.0}})) == 1.0);

  PolymatrixGame zero;
  zero.action_counts = {2, 3};
  zero.edges.push_back({0, 1, Matrix(2, 3), Matrix(3, 2)});
  zero.eta = {1.0, 1.0};
  CHECK(VerifyNash(zero, StrategyProfile::RandomInterior(zero.layout(), 1)) == 0.0);
  const NashResult zr = ComputeNash(zero);
  CHECK(zr.objective == 0.0);
  CHECK(zr.profile.OnSimplex());
  CHECK_THROWS_AS(VerifyNash(g, StrategyProfile(Layout({1}), {1.0})), Error);
}

TEST_CASE("random rescaled zero-sum games have zero LP optimum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const PolymatrixGame g = RandomRescaled(rng, 2 + trial % 4);
    REQUIRE(VerifyRescaledZeroSum(g).rescaled_zero_sum);
    const NashResult r = ComputeNash(g);
    CHECK(std::abs(r.objective) <= 1e-8);
    CHECK(VerifyNash(g, r.profile) <= 1e-8);
    CHECK(r.nash_residual <= 1e-8);
  }
}

TEST_CASE("common rescaling of eta leaves the profile unchanged") {
  const std::vector<double> mus = {0.1, 0.5, 0.8, 0.5};
  PolymatrixGame g = BuildChain(mus, 3);
  const NashResult a = ComputeNash(g);
  for (double& e : g.eta) e *= 4.0;
  const NashResult b = ComputeNash(g);
  for (std::size_t k = 0; k < a.profile.values().size(); ++k)
    CHECK(a.profile.values()[k] == doctest::Approx(b.profile.values()[k]).epsilon(1e-12));
}

TEST_CASE("solver output is bit-identical across runs") {
  const PolymatrixGame g = BuildButterfly(4);
  const NashResult a = ComputeNash(g);
  const NashResult b = ComputeNash(g);
  CHECK(a.profile.values() == b.profile.values());
  CHECK(a.values == b.values);
  CHECK(a.objective == b.objective);
}

TEST_CASE("a non-equilibrium objective signals a game that is not zero-sum") {
  PolymatrixGame g = Pennies();
  g.eta = {1.0, 2.0};
  try {
    ComputeNash(g);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotRescaledZeroSum);
  }
}
