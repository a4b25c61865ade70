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

#ifndef COEVO_DYNAMICS_HPP_
#define COEVO_DYNAMICS_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "coevo/game_model.hpp"

namespace coevo {

// Log-ratio coordinates z_{i a} = ln(x_{i a} / x_{i 0}); z_{i 0} == 0.
class ZState {
 public:
  ZState() = default;
  ZState(Layout layout, std::vector<double> values);

  const Layout& layout() const { return layout_; }
  std::span<const double> player(PlayerId i) const {
    return {values_.data() + layout_.offset(i), layout_.actions(i)};
  }
  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }

 private:
  Layout layout_;
  std::vector<double> values_;
};

enum class Method { kRk4X, kRk4Z };

std::string MethodName(Method m);
Method ParseMethod(const std::string& name);

struct IntegratorConfig {
  Method method = Method::kRk4X;
  double step = 0.01;
  double horizon = 100.0;
  std::size_t record_every = 1;
};

// Sampled flow. States are stored flat, one row per recorded time.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(Layout layout, double step, Method method);

  void Append(double t, std::span<const double> state);

  const Layout& layout() const { return layout_; }
  std::size_t size() const { return times_.size(); }
  double time(std::size_t k) const { return times_[k]; }
  const std::vector<double>& times() const { return times_; }
  std::span<const double> sample(std::size_t k) const {
    return {values_.data() + k * layout_.dim(), layout_.dim()};
  }
  StrategyProfile state(std::size_t k) const;
  double step() const { return step_; }
  Method method() const { return method_; }

 private:
  Layout layout_;
  double step_ = 0.0;
  Method method_ = Method::kRk4X;
  std::vector<double> times_;
  std::vector<double> values_;
};

// Right-hand side over a flat state vector: out = f(state).
using VectorField =
    std::function<void(std::span<const double>, std::span<double>)>;

// x_{ia}(u_{ia}(x) - u_i(x)), flat in the game layout.
std::vector<double> ReplicatorField(const PolymatrixGame& game,
                                    const StrategyProfile& x);
void ReplicatorFieldInto(const PolymatrixGame& game, std::span<const double> x,
                         std::span<double> out);

ZState ToZ(const StrategyProfile& x);
StrategyProfile FromZ(const ZState& z);

// Log-ratio field: F_{ia} = u_{ia}(softmax z) - u_{i0}(softmax z).
ZState ZField(const PolymatrixGame& game, const ZState& z);

// Fixed-step RK4 in strategy space (renormalized per step) or in log-ratio
// space. Records t = 0, every record_every steps, and t = horizon.
Trajectory Integrate(const PolymatrixGame& game, const StrategyProfile& x0,
                     const IntegratorConfig& cfg);

// Same strategy-space scheme for an arbitrary simplex-preserving field; used
// to integrate systems that are not stored as games.
Trajectory IntegrateField(const VectorField& field, const StrategyProfile& x0,
                          const IntegratorConfig& cfg);

// Central-difference estimate of the trace of dF/dz over the free
// coordinates (a >= 1).
double DivergenceEstimate(const PolymatrixGame& game, const ZState& z,
                          double h_fd = 1e-5);

}  // namespace coevo

#endif  // COEVO_DYNAMICS_HPP_
