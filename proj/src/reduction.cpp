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

#include "coevo/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "coevo/error.hpp"

namespace coevo {

namespace {

bool IsAntisymmetric(const Matrix& a) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (std::abs(a(r, c) + a(c, r)) > kAntisymmetryTol) return false;
  return true;
}

void RequireSquare(const Matrix& m, std::size_t n, const std::string& what) {
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorKind::kDimensionMismatch, what + " must be n x n");
  if (!m.AllFinite())
    throw Error(ErrorKind::kInvalidArgument, what + " has non-finite entries");
}

void RequireStateShape(const TimeEvolvingSystem& system, const SystemState& s) {
  bool ok = s.y.size() == system.populations().size() &&
            s.w.size() == system.environments();
  for (const auto& v : s.y) ok = ok && v.size() == system.n();
  for (const auto& v : s.w) ok = ok && v.size() == system.n();
  if (!ok)
    throw Error(ErrorKind::kDimensionMismatch,
                "system state shape does not match the system");
}

}  // namespace

TimeEvolvingSystem::TimeEvolvingSystem(std::size_t n,
                                       std::vector<Matrix> populations,
                                       std::size_t environments)
    : n_(n), populations_(std::move(populations)), environments_(environments) {
  if (n_ == 0) throw Error(ErrorKind::kInvalidArgument, "n must be positive");
  for (std::size_t l = 0; l < populations_.size(); ++l) {
    const std::string tag = "population " + std::to_string(l) + " P";
    RequireSquare(populations_[l], n_, tag);
    if (!IsAntisymmetric(populations_[l]))
      throw Error(ErrorKind::kInvalidGame, tag + " is not antisymmetric");
  }
}

void TimeEvolvingSystem::Couple(NodeRef a, NodeRef b, Matrix A_ab,
                                Matrix A_ba) {
  if (a.kind == b.kind) {
    throw Error(ErrorKind::kInvalidGame,
                a.kind == NodeRef::Kind::kPopulation
                    ? "populations may only couple to environments"
                    : "environments may only couple to populations");
  }
  if (a.kind == NodeRef::Kind::kEnvironment) {
    std::swap(a, b);
    std::swap(A_ab, A_ba);
  }
  if (a.index >= populations_.size() || b.index >= environments_)
    throw Error(ErrorKind::kInvalidArgument, "coupling index out of range");
  for (const Coupling& c : couplings_) {
    if (c.pop == a.index && c.env == b.index)
      throw Error(ErrorKind::kInvalidGame, "duplicate coupling");
  }
  RequireSquare(A_ab, n_, "A_pop_env");
  RequireSquare(A_ba, n_, "A_env_pop");
  couplings_.push_back({a.index, b.index, std::move(A_ab), std::move(A_ba)});
}

void TimeEvolvingSystem::set_eta_hint(std::vector<double> eta) {
  if (eta.size() != nodes())
    throw Error(ErrorKind::kDimensionMismatch, "eta needs one entry per node");
  eta_hint_ = std::move(eta);
}

Layout TimeEvolvingSystem::layout() const {
  return Layout(std::vector<std::size_t>(nodes(), n_));
}

SystemState RawField(const TimeEvolvingSystem& system, const SystemState& s) {
  RequireStateShape(system, s);
  const std::size_t n = system.n();
  SystemState d{std::vector<std::vector<double>>(s.y.size(),
                                                 std::vector<double>(n, 0.0)),
                std::vector<std::vector<double>>(s.w.size(),
                                                 std::vector<double>(n, 0.0))};

  // Environments: w_{k,i} sum_l sum_j w_{k,j} ((A y_l)_i - (A y_l)_j).
  for (const Coupling& c : system.couplings()) {
    std::vector<double> ay(n, 0.0);
    c.A_env_pop.MultiplyAdd(s.y[c.pop], ay);
    const auto& w = s.w[c.env];
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += w[j] * (ay[i] - ay[j]);
      d.w[c.env][i] += w[i] * acc;
    }
  }

  // Populations: P_l(w) = P_l + sum_k W^{l,k}, W_ij = (A w_k)_i - (A w_k)_j.
  for (std::size_t l = 0; l < s.y.size(); ++l) {
    Matrix p = system.populations()[l];
    for (const Coupling& c : system.couplings()) {
      if (c.pop != l) continue;
      std::vector<double> aw(n, 0.0);
      c.A_pop_env.MultiplyAdd(s.w[c.env], aw);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) += aw[i] - aw[j];
    }
    const auto& y = s.y[l];
    std::vector<double> py(n, 0.0);
    p.MultiplyAdd(y, py);
    const double ypy = Dot(y, py);
    for (std::size_t i = 0; i < n; ++i) d.y[l][i] = y[i] * (py[i] - ypy);
  }
  return d;
}

TimeEvolvingSystem BuildGeneralizedRpsSystem(std::size_t n, double mu) {
  if (n < 3)
    throw Error(ErrorKind::kInvalidArgument, "generalized RPS needs n >= 3");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw Error(ErrorKind::kInvalidArgument, "mu must be positive");
  TimeEvolvingSystem sys(n, {GeneralizedRpsMatrix(n)}, 1);
  sys.Couple(NodeRef::Population(0), NodeRef::Environment(0),
             Matrix::Identity(n, mu), Matrix::Identity(n, -1.0));
  sys.set_eta_hint({1.0, mu});
  return sys;
}

Reduction ReduceToPolymatrix(const TimeEvolvingSystem& system) {
  Reduction r;
  PolymatrixGame& g = r.game;
  const std::size_t n_pop = system.populations().size();
  g.action_counts.assign(system.nodes(), system.n());
  for (std::size_t l = 0; l < n_pop; ++l)
    g.self_loops.push_back({l, system.populations()[l]});
  for (const Coupling& c : system.couplings())
    g.edges.push_back({c.pop, n_pop + c.env, c.A_pop_env, c.A_env_pop});
  if (system.eta_hint()) {
    g.eta = *system.eta_hint();
    r.eta_from_hint = true;
  } else {
    g.eta.assign(system.nodes(), 1.0);
  }
  r.check = VerifyRescaledZeroSum(g);
  return r;
}

StrategyProfile FlattenState(const SystemState& s) {
  std::vector<std::vector<double>> blocks = s.y;
  blocks.insert(blocks.end(), s.w.begin(), s.w.end());
  return StrategyProfile(blocks);
}

SystemState LiftProfile(const StrategyProfile& x,
                        const TimeEvolvingSystem& system) {
  if (!(x.layout() == system.layout()))
    throw Error(ErrorKind::kDimensionMismatch,
                "profile shape does not match the system");
  SystemState s;
  const std::size_t n_pop = system.populations().size();
  for (PlayerId i = 0; i < x.players(); ++i) {
    const auto b = x.player(i);
    (i < n_pop ? s.y : s.w).emplace_back(b.begin(), b.end());
  }
  return s;
}

Trajectory IntegrateSystem(const TimeEvolvingSystem& system,
                           const SystemState& s0, const IntegratorConfig& cfg) {
  RequireStateShape(system, s0);
  const Layout layout = system.layout();
  const std::size_t n_pop = system.populations().size();
  const std::size_t n = system.n();
  SystemState scratch = s0;
  const VectorField field = [&](std::span<const double> x,
                                std::span<double> out) {
    for (std::size_t i = 0; i < layout.players(); ++i) {
      auto& dst = i < n_pop ? scratch.y[i] : scratch.w[i - n_pop];
      std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(i * n), n, dst.begin());
    }
    const SystemState d = RawField(system, scratch);
    for (std::size_t i = 0; i < layout.players(); ++i) {
      const auto& src = i < n_pop ? d.y[i] : d.w[i - n_pop];
      std::copy(src.begin(), src.end(),
                out.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  };
  return IntegrateField(field, FlattenState(s0), cfg);
}

}  // namespace coevo
