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

#ifndef COEVO_ANALYSIS_HPP_
#define COEVO_ANALYSIS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/game_model.hpp"

namespace coevo {

// A table of rows sampled at increasing times; `width` values per row.
struct Series {
  std::vector<std::string> columns;
  std::vector<double> t;
  std::vector<double> data;

  std::size_t width() const { return columns.size(); }
  std::size_t size() const { return t.size(); }
  std::span<const double> row(std::size_t k) const {
    return {data.data() + k * width(), width()};
  }
  double at(std::size_t k, std::size_t c) const { return data[k * width() + c]; }
};

// Phi(x) = sum_i eta_i sum_a x*_{ia} ln x_{ia}.
double ConstantOfMotion(const PolymatrixGame& game,
                        const StrategyProfile& x_star,
                        const StrategyProfile& x);

struct WeightedKl {
  double total = 0.0;
  // eta_i KL(x*_i || x_i)
  std::vector<double> components;
};

WeightedKl WeightedKlDivergence(const PolymatrixGame& game,
                                const StrategyProfile& x_star,
                                const StrategyProfile& x);

// Shannon entropy with 0 ln 0 = 0.
double Entropy(std::span<const double> p);

// Columns: phi.
Series PhiSeries(const PolymatrixGame& game, const StrategyProfile& x_star,
                 const Trajectory& traj);
// Columns: total, kl_0, kl_1, ... (weighted components).
Series KlSeries(const PolymatrixGame& game, const StrategyProfile& x_star,
                const Trajectory& traj);

// Trapezoidal running averages (1/t) int_0^t x; row 0 is x(0).
Series TimeAverage(const Trajectory& traj);
// Same for u_i(x(t)), one column per player.
Series TimeAverageUtility(const PolymatrixGame& game, const Trajectory& traj);

// Reg_i(t) = max_a (1/t) int_0^t [u_{ia} - u_i] ds, trapezoidal; the t = 0
// row is 0.
Series Regret(const PolymatrixGame& game, const Trajectory& traj, PlayerId i);
// All players at once, one column each.
Series RegretAll(const PolymatrixGame& game, const Trajectory& traj);

// sum_i eta_i u_i at every sample.
std::vector<double> RescaledUtilitySeries(const PolymatrixGame& game,
                                          const Trajectory& traj);

struct RecurrenceStats {
  double epsilon = 0.0;
  double transient = 0.0;
  std::optional<double> first_return_time;
  double min_distance_after_transient = 0.0;
  double min_distance_time = 0.0;
};

// Sup-norm returns to the t = 0 state among samples with t > transient.
RecurrenceStats ComputeRecurrence(const Trajectory& traj, double epsilon,
                                  double transient = 10.0);

struct SectionCrossing {
  double t = 0.0;
  std::vector<double> state;
  int direction = 0;
};

// Crossings of <normal, x> = offset between consecutive samples, linearly
// interpolated. A sample lying on the plane counts only when its neighbours
// sit on opposite sides.
std::vector<SectionCrossing> PoincareSection(const Trajectory& traj,
                                             std::span<const double> normal,
                                             double offset);

struct AnalysisReport {
  Series phi;
  Series kl;
  Series time_avg;
  Series time_avg_utility;
  Series regret;
  RecurrenceStats recurrence;
  std::vector<std::string> notes;
};

struct AnalysisOptions {
  double epsilon = 0.05;
  double transient = 10.0;
};

AnalysisReport Analyze(const PolymatrixGame& game, const StrategyProfile& x_star,
                       const Trajectory& traj, const AnalysisOptions& opts);

}  // namespace coevo

#endif  // COEVO_ANALYSIS_HPP_
