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
#include "coevo/equilibrium.hpp"
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

PolymatrixGame SingleSelfLoop(const Matrix& a) {
  PolymatrixGame g;
  g.action_counts = {a.rows()};
  g.self_loops.push_back({0, a});
  g.eta = {1.0};
  return g;
}

ZState RandomZ(const Layout& layout, std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> z(layout.dim(), 0.0);
  for (PlayerId i = 0; i < layout.players(); ++i)
    for (std::size_t a = 1; a < layout.actions(i); ++a) z[layout.offset(i) + a] = u(rng);
  return ZState(layout, z);
}

const std::vector<double> kChainMus = {0.1, 0.5, 0.8, 0.5};

std::vector<PolymatrixGame> Presets() {
  return {BuildGeneralizedRpsReduced(3, 0.8), BuildGeneralizedRpsReduced(4, 0.3),
          BuildChain(kChainMus, 3), BuildButterfly(1), BuildButterfly(2)};
}

}  // namespace

TEST_CASE("replicator field vanishes at the uniform RPS profile") {
  const PolymatrixGame g = SingleSelfLoop(GeneralizedRpsMatrix(3));
  for (double v : ReplicatorField(g, StrategyProfile::Uniform(g.layout()))) CHECK(std::abs(v) < 1e-16);
}

TEST_CASE("replicator field vanishes on a vertex player") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const StrategyProfile x({{0.0, 1.0, 0.0}, {0.2, 0.3, 0.5}});
  const auto f = ReplicatorField(g, x);
  for (std::size_t a = 0; a < 3; ++a) CHECK(f[a] == 0.0);
}

TEST_CASE("replicator field of the reduced game matches the raw coupled field") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const TimeEvolvingSystem sys = BuildGeneralizedRpsSystem(3, 0.8);
  const StrategyProfile x({{0.5, 0.25, 0.25}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
  const SystemState d = RawField(sys, LiftProfile(x, sys));
  const StrategyProfile raw = FlattenState(d);
  CHECK(SupDiff(ReplicatorField(g, x), raw.flat()) <= 1e-12);
}

TEST_CASE("replicator field is tangent to the simplex") {
  std::uint64_t seed = 1;
  for (const auto& g : Presets()) {
    for (int s = 0; s < 100; ++s) {
      const StrategyProfile x = StrategyProfile::RandomInterior(g.layout(), seed++);
      const auto f = ReplicatorField(g, x);
      for (PlayerId i = 0; i < g.players(); ++i) {
        double sum = 0.0;
        for (std::size_t a = 0; a < g.action_counts[i]; ++a) sum += f[g.layout().offset(i) + a];
        CHECK(std::abs(sum) <= 1e-12);
      }
    }
  }
}

TEST_CASE("replicator field rejects mismatched profiles") {
  CHECK_THROWS_AS(ReplicatorField(BuildGeneralizedRpsReduced(3, 0.8), StrategyProfile({{0.5, 0.5}})),
                  Error);
}

TEST_CASE("log-ratio coordinates") {
  const ZState z0 = ToZ(StrategyProfile({{1.0 / 3, 1.0 / 3, 1.0 / 3}}));
  for (double v : z0.flat()) CHECK(v == 0.0);
  const ZState z1 = ToZ(StrategyProfile({{0.5, 0.25, 0.25}}));
  CHECK(z1.flat()[0] == 0.0);
  CHECK(z1.flat()[1] == doctest::Approx(-0.6931471805599453).epsilon(1e-15));
  CHECK(z1.flat()[2] == doctest::Approx(-0.6931471805599453).epsilon(1e-15));
  CHECK_THROWS_AS(ToZ(StrategyProfile({{1.0, 0.0, 0.0}})), Error);

  const StrategyProfile u = FromZ(ZState(Layout({3}), {0, 0, 0}));
  for (double v : u.flat()) CHECK(v == doctest::Approx(1.0 / 3));
  const StrategyProfile p = FromZ(ZState(Layout({3}), {0, std::log(2.0), std::log(2.0)}));
  CHECK(p.flat()[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.flat()[1] == doctest::Approx(0.4).epsilon(1e-15));
  const StrategyProfile big = FromZ(ZState(Layout({3}), {0, 700, -700}));
  for (double v : big.flat()) CHECK(std::isfinite(v));
  CHECK(big.flat()[1] == 1.0);
  CHECK(big.OnSimplex(1e-15));
}

TEST_CASE("log-ratio round trip") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const StrategyProfile x = StrategyProfile::RandomInterior(Layout({2, 3, 5}), seed);
    CHECK(SupDiff(FromZ(ToZ(x)).flat(), x.flat()) <= 1e-12);
  }
}

TEST_CASE("z field anchors and vanishes at the interior equilibrium") {
  const PolymatrixGame g = BuildChain(kChainMus, 3);
  const ZState at_nash = ToZ(StrategyProfile::Uniform(g.layout()));
  const ZState f0 = ZField(g, at_nash);
  for (double v : f0.flat()) CHECK(std::abs(v) <= 1e-10);

  std::mt19937_64 rng(5);
  for (const auto& game : Presets()) {
    for (int s = 0; s < 20; ++s) {
      const ZState f = ZField(game, RandomZ(game.layout(), rng));
      for (PlayerId i = 0; i < game.players(); ++i) CHECK(f.player(i)[0] == 0.0);
    }
  }
}

TEST_CASE("z field is the pushforward of the replicator field") {
  std::uint64_t seed = 300;
  for (const auto& g : Presets()) {
    for (int s = 0; s < 20; ++s) {
      const StrategyProfile x = StrategyProfile::RandomInterior(g.layout(), seed++);
      const auto xdot = ReplicatorField(g, x);
      const ZState f = ZField(g, ToZ(x));
      const Layout layout = g.layout();
      for (PlayerId i = 0; i < g.players(); ++i) {
        const std::size_t o = layout.offset(i);
        for (std::size_t a = 0; a < layout.actions(i); ++a) {
          const double expect = xdot[o + a] / x.flat()[o + a] - xdot[o] / x.flat()[o];
          CHECK(std::abs(f.flat()[o + a] - expect) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("integrator method names") {
  CHECK(ParseMethod("rk4_x") == Method::kRk4X);
  CHECK(ParseMethod("rk4_z") == Method::kRk4Z);
  CHECK(MethodName(Method::kRk4Z) == "rk4_z");
  CHECK_THROWS_AS(ParseMethod("euler"), Error);
}

TEST_CASE("trajectory times must increase") {
  Trajectory t(Layout({2}), 0.1, Method::kRk4X);
  const std::vector<double> s = {0.5, 0.5};
  t.Append(0.0, s);
  CHECK_THROWS_AS(t.Append(0.0, s), Error);
  CHECK_THROWS_AS(t.Append(1.0, std::vector<double>{1.0}), Error);
}

TEST_CASE("integrator records t=0, every k-th step and the horizon") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const StrategyProfile x0({{0.5, 0.25, 0.25}, {0.5, 0.25, 0.25}});
  const Trajectory tr = Integrate(g, x0, {Method::kRk4X, 0.01, 1.005, 7});
  CHECK(tr.time(0) == 0.0);
  CHECK(tr.time(1) == doctest::Approx(0.07));
  CHECK(tr.times().back() == 1.005);
  CHECK(tr.size() == 1 + 101 / 7 + 1);
  CHECK_THROWS_AS(Integrate(g, x0, {Method::kRk4X, 0.0, 1.0, 1}), Error);
  CHECK_THROWS_AS(Integrate(g, x0, {Method::kRk4X, 0.1, 0.05, 1}), Error);
  CHECK_THROWS_AS(Integrate(g, x0, {Method::kRk4X, 0.1, 1.0, 0}), Error);
  CHECK_THROWS_AS(Integrate(g, StrategyProfile({{1.0, 0.0, 0.0}, {0.5, 0.25, 0.25}}),
                            {Method::kRk4X, 0.01, 1.0, 1}),
                  Error);
}

TEST_CASE("the interior equilibrium is a fixed point of both integrators") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const StrategyProfile nash = StrategyProfile::Uniform(g.layout());
  for (Method m : {Method::kRk4X, Method::kRk4Z}) {
    const Trajectory tr = Integrate(g, nash, {m, 0.01, 100.0, 100});
    for (std::size_t k = 0; k < tr.size(); ++k) CHECK(SupDiff(tr.sample(k), nash.flat()) < 1e-10);
  }
}

TEST_CASE("orbits stay bounded away from the boundary") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const StrategyProfile x0({{0.5, 0.25, 0.25}, {0.5, 0.25, 0.25}});
  const Trajectory tr = Integrate(g, x0, {Method::kRk4X, 0.01, 1000.0, 10});
  double floor_first = 1.0, floor_last = 1.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto s = tr.sample(k);
    const double m = *std::min_element(s.begin(), s.end());
    (tr.time(k) <= 500.0 ? floor_first : floor_last) = std::min(tr.time(k) <= 500.0 ? floor_first : floor_last, m);
  }
  CHECK(floor_first > 0.01);
  CHECK(floor_last == doctest::Approx(floor_first).epsilon(0.05));
}

TEST_CASE("x-space and z-space integrators agree") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const StrategyProfile x0({{0.5, 0.25, 0.25}, {0.5, 0.25, 0.25}});
  const Trajectory a = Integrate(g, x0, {Method::kRk4X, 0.01, 100.0, 10});
  const Trajectory b = Integrate(g, x0, {Method::kRk4Z, 0.01, 100.0, 10});
  REQUIRE(a.size() == b.size());
  CHECK(b.method() == Method::kRk4Z);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, SupDiff(a.sample(k), b.sample(k)));
  CHECK(worst < 1e-6);
}

TEST_CASE("step halving shows fourth-order convergence") {
  const PolymatrixGame g = BuildGeneralizedRpsReduced(3, 0.8);
  const StrategyProfile x0({{0.5, 0.25, 0.25}, {0.5, 0.25, 0.25}});
  auto final_state = [&](double h) {
    const Trajectory t = Integrate(g, x0, {Method::kRk4X, h, 20.0, 1000000});
    const auto s = t.sample(t.size() - 1);
    return std::vector<double>(s.begin(), s.end());
  };
  const auto a = final_state(0.08), b = final_state(0.04), c = final_state(0.02);
  const double ratio = SupDiff(a, b) / SupDiff(b, c);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("boundary escape is an error that names the time") {
  // Action 0 strictly dominates, so action 1 decays like exp(-t).
  PolymatrixGame g;
  g.action_counts = {2, 2};
  g.edges.push_back({0, 1, Matrix{{1, 1}, {0, 0}}, Matrix(2, 2)});
  g.eta = {1.0, 1.0};
  try {
    Integrate(g, StrategyProfile({{0.5, 0.5}, {0.5, 0.5}}), {Method::kRk4X, 0.01, 100.0, 1});
    FAIL("expected a boundary error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBoundary);
    CHECK(std::string(e.what()).find("t=3") != std::string::npos);
  }
}

TEST_CASE("divergence vanishes for rescaled zero-sum games") {
  std::mt19937_64 rng(77);
  const PolymatrixGame rps = BuildGeneralizedRpsReduced(3, 0.8);
  for (int s = 0; s < 100; ++s) CHECK(std::abs(DivergenceEstimate(rps, RandomZ(rps.layout(), rng))) < 1e-6);
  const PolymatrixGame fly = BuildButterfly(1);
  for (int s = 0; s < 20; ++s) CHECK(std::abs(DivergenceEstimate(fly, RandomZ(fly.layout(), rng))) < 1e-5);
}

TEST_CASE("divergence of a symmetric self-loop matches the analytic trace") {
  PolymatrixGame g = SingleSelfLoop(Matrix{{0, 1}, {1, 0}});
  for (double z : {-1.0, 0.0, 0.3, 2.0}) {
    // F = u_1 - u_0 = x_0 - x_1 = (1 - e^z) / (1 + e^z); dF/dz = -2 x_0 x_1.
    const double x1 = std::exp(z) / (1.0 + std::exp(z));
    const double oracle = -2.0 * (1.0 - x1) * x1;
    const double est = DivergenceEstimate(g, ZState(Layout({2}), {0.0, z}));
    CHECK(est == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(std::abs(est) > 1e-2);
  }
  CHECK_THROWS_AS(DivergenceEstimate(g, ZState(Layout({2}), {0.0, 0.0}), 0.0), Error);
  CHECK_THROWS_AS(DivergenceEstimate(g, ZState(Layout({2}), {0.0, 0.0}), 1e-2), Error);
}
