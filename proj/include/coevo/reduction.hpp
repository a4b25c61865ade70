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

#ifndef COEVO_REDUCTION_HPP_
#define COEVO_REDUCTION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/game_model.hpp"
#include "coevo/matrix.hpp"

namespace coevo {

struct NodeRef {
  enum class Kind { kPopulation, kEnvironment };
  Kind kind;
  std::size_t index;

  static NodeRef Population(std::size_t i) { return {Kind::kPopulation, i}; }
  static NodeRef Environment(std::size_t k) { return {Kind::kEnvironment, k}; }
};

// Population l and environment k influence each other: the population's
// game gains rows (A_pop_env w_k)_i - (A_pop_env w_k)_j, the environment
// replicates on payoffs A_env_pop y_l.
struct Coupling {
  std::size_t pop = 0;
  std::size_t env = 0;
  Matrix A_pop_env;
  Matrix A_env_pop;
};

// Populations whose payoff matrices are modulated by environments, all over
// a shared action count n.
class TimeEvolvingSystem {
 public:
  TimeEvolvingSystem(std::size_t n, std::vector<Matrix> populations,
                     std::size_t environments);

  // Links two nodes. Only population-environment pairs are allowed.
  void Couple(NodeRef a, NodeRef b, Matrix A_ab, Matrix A_ba);

  std::size_t n() const { return n_; }
  const std::vector<Matrix>& populations() const { return populations_; }
  std::size_t environments() const { return environments_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  std::size_t nodes() const { return populations_.size() + environments_; }

  // Rescaling weights for the reduced game (populations first), when known.
  const std::optional<std::vector<double>>& eta_hint() const { return eta_hint_; }
  void set_eta_hint(std::vector<double> eta);

  Layout layout() const;

 private:
  std::size_t n_;
  std::vector<Matrix> populations_;
  std::size_t environments_;
  std::vector<Coupling> couplings_;
  std::optional<std::vector<double>> eta_hint_;
};

struct SystemState {
  std::vector<std::vector<double>> y;
  std::vector<std::vector<double>> w;
};

// Direct evaluation of the coupled population / environment equations, with
// the environment-modulated payoff matrices assembled explicitly.
SystemState RawField(const TimeEvolvingSystem& system, const SystemState& s);

TimeEvolvingSystem BuildGeneralizedRpsSystem(std::size_t n, double mu);

struct Reduction {
  PolymatrixGame game;
  ZeroSumCheck check;
  bool eta_from_hint = false;
};

// One player per population (self-loop P_l) and per environment, with the
// coupling matrices as edge games. eta comes from the system's hint when set,
// otherwise all ones; the zero-sum verification is always run.
Reduction ReduceToPolymatrix(const TimeEvolvingSystem& system);

// Populations first, then environments.
StrategyProfile FlattenState(const SystemState& s);
SystemState LiftProfile(const StrategyProfile& x,
                        const TimeEvolvingSystem& system);

// RK4 (strategy-space scheme) on the raw field.
Trajectory IntegrateSystem(const TimeEvolvingSystem& system,
                           const SystemState& s0, const IntegratorConfig& cfg);

}  // namespace coevo

#endif  // COEVO_REDUCTION_HPP_
