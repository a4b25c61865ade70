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

#include "coevo/dynamics.hpp"
#include "coevo/error.hpp"
#include "coevo/game_model.hpp"
#include "coevo/reduction.hpp"
#include "doctest.h"

using namespace coevo;

namespace {

double SupDiff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Direct transcription of the single population / single environment system:
//   w_i' = w_i sum_j w_j (y_j - y_i)
//   y_i' = y_i ((P(w) y)_i - y^T P(w) y),  P(w) = P + mu W,  W_ij = w_i - w_j.
SystemState LiteralRpsField(std::size_t n, double mu, const std::vector<double>& y,
                            const std::vector<double>& w) {
  std::vector<std::vector<double>> pw(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    pw[i][(i + 1) % n] -= 1.0;
    pw[i][(i + n - 1) % n] += 1.0;
    for (std::size_t j = 0; j < n; ++j) pw[i][j] += mu * (w[i] - w[j]);
  }
  std::vector<double> py(n, 0.0);
  double ypy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) py[i] += pw[i][j] * y[j];
    ypy += y[i] * py[i];
  }
  SystemState d{{std::vector<double>(n)}, {std::vector<double>(n)}};
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += w[j] * (y[j] - y[i]);
    d.w[0][i] = w[i] * s;
    d.y[0][i] = y[i] * (py[i] - ypy);
  }
  return d;
}

Matrix RandomMatrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = u(rng);
  return m;
}

Matrix RandomAntisymmetric(std::mt19937_64& rng, std::size_t n) {
  Matrix m = RandomMatrix(rng, n);
  for (std::size_t r = 0; r < n; ++r) {
    m(r, r) = 0.0;
    for (std::size_t c = 0; c < r; ++c) m(r, c) = -m(c, r);
  }
  return m;
}

}  // namespace

TEST_CASE("raw field vanishes at the uniform state") {
  const TimeEvolvingSystem sys = BuildGeneralizedRpsSystem(3, 0.8);
  const SystemState s{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {{1.0 / 3, 1.0 / 3, 1.0 / 3}}};
  const SystemState d = RawField(sys, s);
  for (double v : d.y[0]) CHECK(std::abs(v) < 1e-16);
  for (double v : d.w[0]) CHECK(std::abs(v) < 1e-16);
}

TEST_CASE("raw field matches the literal coupled equations") {
  for (std::size_t n : {3u, 5u}) {
    for (double mu : {0.3, 0.8}) {
      const TimeEvolvingSystem sys = BuildGeneralizedRpsSystem(n, mu);
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const StrategyProfile x = StrategyProfile::RandomInterior(sys.layout(), seed);
        const SystemState s = LiftProfile(x, sys);
        const SystemState got = RawField(sys, s);
        const SystemState want = LiteralRpsField(n, mu, s.y[0], s.w[0]);
        CHECK(SupDiff(got.y[0], want.y[0]) <= 1e-12);
        CHECK(SupDiff(got.w[0], want.w[0]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("raw field components sum to zero per node") {
  std::mt19937_64 rng(3);
  TimeEvolvingSystem sys(3, {RandomAntisymmetric(rng, 3), RandomAntisymmetric(rng, 3)}, 2);
  sys.Couple(NodeRef::Population(0), NodeRef::Environment(0), RandomMatrix(rng, 3), RandomMatrix(rng, 3));
  sys.Couple(NodeRef::Environment(1), NodeRef::Population(0), RandomMatrix(rng, 3), RandomMatrix(rng, 3));
  sys.Couple(NodeRef::Population(1), NodeRef::Environment(1), RandomMatrix(rng, 3), RandomMatrix(rng, 3));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SystemState d =
        RawField(sys, LiftProfile(StrategyProfile::RandomInterior(sys.layout(), seed), sys));
    for (const auto& v : d.y) CHECK(std::abs(v[0] + v[1] + v[2]) <= 1e-12);
    for (const auto& v : d.w) CHECK(std::abs(v[0] + v[1] + v[2]) <= 1e-12);
  }
}

TEST_CASE("reduced game field equals the raw field for general couplings") {
  std::mt19937_64 rng(4);
  TimeEvolvingSystem sys(4, {RandomAntisymmetric(rng, 4), RandomAntisymmetric(rng, 4)}, 2);
  sys.Couple(NodeRef::Population(0), NodeRef::Environment(0), RandomMatrix(rng, 4), RandomMatrix(rng, 4));
  sys.Couple(NodeRef::Population(1), NodeRef::Environment(0), RandomMatrix(rng, 4), RandomMatrix(rng, 4));
  sys.Couple(NodeRef::Population(1), NodeRef::Environment(1), RandomMatrix(rng, 4), RandomMatrix(rng, 4));
  const Reduction red = ReduceToPolymatrix(sys);
  CHECK_FALSE(red.eta_from_hint);
  CHECK(red.game.eta == std::vector<double>(4, 1.0));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const StrategyProfile x = StrategyProfile::RandomInterior(sys.layout(), seed);
    const StrategyProfile raw = FlattenState(RawField(sys, LiftProfile(x, sys)));
    CHECK(SupDiff(raw.flat(), ReplicatorField(red.game, x)) <= 1e-12);
  }
}

TEST_CASE("system construction rejects invalid inputs") {
  const Matrix p = GeneralizedRpsMatrix(3);
  CHECK_THROWS_AS(TimeEvolvingSystem(3, {Matrix::Identity(3)}, 1), Error);
  CHECK_THROWS_AS(TimeEvolvingSystem(3, {Matrix(2, 2)}, 1), Error);
  TimeEvolvingSystem sys(3, {p, p}, 1);
  try {
    sys.Couple(NodeRef::Population(0), NodeRef::Population(1), Matrix::Identity(3), Matrix::Identity(3));
    FAIL("population-population coupling accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidGame);
  }
  CHECK_THROWS_AS(sys.Couple(NodeRef::Environment(0), NodeRef::Environment(0), Matrix::Identity(3),
                             Matrix::Identity(3)),
                  Error);
  CHECK_THROWS_AS(sys.Couple(NodeRef::Population(0), NodeRef::Environment(3), Matrix::Identity(3),
                             Matrix::Identity(3)),
                  Error);
  sys.Couple(NodeRef::Population(0), NodeRef::Environment(0), Matrix::Identity(3), Matrix::Identity(3));
  CHECK_THROWS_AS(sys.Couple(NodeRef::Environment(0), NodeRef::Population(0), Matrix::Identity(3),
                             Matrix::Identity(3)),
                  Error);
  CHECK_THROWS_AS(sys.set_eta_hint({1.0}), Error);
  CHECK_THROWS_AS(BuildGeneralizedRpsSystem(2, 0.8), Error);
}

TEST_CASE("generalized RPS system reduces to the preset game") {
  for (double mu : {0.1, 0.8, 1.7}) {
    const Reduction red = ReduceToPolymatrix(BuildGeneralizedRpsSystem(3, mu));
    const PolymatrixGame preset = BuildGeneralizedRpsReduced(3, mu);
    CHECK(red.eta_from_hint);
    CHECK(red.check.rescaled_zero_sum);
    REQUIRE(red.game.edges.size() == 1);
    CHECK(red.game.edges[0].i == 0);
    CHECK(red.game.edges[0].A_ij == preset.edges[0].A_ij);
    CHECK(red.game.edges[0].A_ji == preset.edges[0].A_ji);
    CHECK(red.game.self_loops[0].A == preset.self_loops[0].A);
    CHECK(red.game.eta == preset.eta);
  }
}

TEST_CASE("reduction without weights surfaces the verification result") {
  const TimeEvolvingSystem hinted = BuildGeneralizedRpsSystem(3, 0.5);
  TimeEvolvingSystem plain(3, hinted.populations(), 1);
  const Coupling& c = hinted.couplings()[0];
  plain.Couple(NodeRef::Population(0), NodeRef::Environment(0), c.A_pop_env, c.A_env_pop);
  const Reduction red = ReduceToPolymatrix(plain);
  CHECK_FALSE(red.eta_from_hint);
  CHECK_FALSE(red.check.rescaled_zero_sum);
  CHECK(red.check.residual == doctest::Approx(0.5));
}

TEST_CASE("flatten and lift") {
  const TimeEvolvingSystem sys = BuildGeneralizedRpsSystem(4, 0.8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StrategyProfile x = StrategyProfile::RandomInterior(sys.layout(), seed);
    CHECK(FlattenState(LiftProfile(x, sys)).values() == x.values());
  }
  const SystemState uni{{std::vector<double>(4, 0.25)}, {std::vector<double>(4, 0.25)}};
  CHECK(FlattenState(uni).values() == StrategyProfile::Uniform(sys.layout()).values());
  CHECK_THROWS_AS(LiftProfile(StrategyProfile({{0.5, 0.5}}), sys), Error);
}

TEST_CASE("raw and reduced trajectories agree") {
  const TimeEvolvingSystem sys = BuildGeneralizedRpsSystem(3, 0.8);
  const Reduction red = ReduceToPolymatrix(sys);
  const IntegratorConfig cfg{Method::kRk4X, 0.01, 100.0, 10};
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    const StrategyProfile x0 = StrategyProfile::RandomInterior(sys.layout(), seed);
    const Trajectory a = IntegrateSystem(sys, LiftProfile(x0, sys), cfg);
    const Trajectory b = Integrate(red.game, x0, cfg);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, SupDiff(a.sample(k), b.sample(k)));
    CHECK(worst < 1e-6);
  }
}
