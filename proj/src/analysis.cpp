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

#include "coevo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coevo/equilibrium.hpp"
#include "coevo/error.hpp"

namespace coevo {

namespace {

constexpr double kOnPlaneTol = 1e-12;

void RequireGameLayout(const PolymatrixGame& game, const Layout& layout) {
  if (layout.counts() != game.action_counts)
    throw Error(ErrorKind::kDimensionMismatch,
                "trajectory shape does not match the game");
}

void RequireInterior(const StrategyProfile& x) {
  if (!x.Interior())
    throw Error(ErrorKind::kBoundary,
                "constant-of-motion quantities need an interior profile");
}

void RequireSamples(const Trajectory& traj, std::size_t n) {
  if (traj.size() < n)
    throw Error(ErrorKind::kInvalidArgument,
                "trajectory needs at least " + std::to_string(n) + " samples");
}

std::vector<std::string> Indexed(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

std::vector<std::string> StateColumns(const Layout& layout,
                                      const std::string& prefix) {
  std::vector<std::string> out;
  for (PlayerId i = 0; i < layout.players(); ++i)
    for (std::size_t a = 0; a < layout.actions(i); ++a)
      out.push_back(prefix + std::to_string(i) + "_" + std::to_string(a));
  return out;
}

// Trapezoidal running mean of the per-sample rows in `values`.
Series RunningMean(const std::vector<double>& times,
                   const std::vector<double>& values, std::size_t width,
                   std::vector<std::string> columns) {
  Series s;
  s.columns = std::move(columns);
  s.t = times;
  s.data.resize(values.size());
  std::vector<double> integral(width, 0.0);
  for (std::size_t c = 0; c < width; ++c) s.data[c] = values[c];
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    for (std::size_t c = 0; c < width; ++c) {
      integral[c] += 0.5 * dt * (values[(k - 1) * width + c] + values[k * width + c]);
      s.data[k * width + c] = integral[c] / times[k];
    }
  }
  return s;
}

}  // namespace

double ConstantOfMotion(const PolymatrixGame& game,
                        const StrategyProfile& x_star,
                        const StrategyProfile& x) {
  RequireGameLayout(game, x.layout());
  RequireGameLayout(game, x_star.layout());
  RequireInterior(x);
  double phi = 0.0;
  for (PlayerId i = 0; i < game.players(); ++i) {
    const auto xs = x_star.player(i);
    const auto xi = x.player(i);
    double acc = 0.0;
    for (std::size_t a = 0; a < xi.size(); ++a) acc += xs[a] * std::log(xi[a]);
    phi += game.eta[i] * acc;
  }
  return phi;
}

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

WeightedKl WeightedKlDivergence(const PolymatrixGame& game,
                                const StrategyProfile& x_star,
                                const StrategyProfile& x) {
  RequireGameLayout(game, x.layout());
  RequireGameLayout(game, x_star.layout());
  RequireInterior(x);
  WeightedKl out;
  out.components.resize(game.players());
  for (PlayerId i = 0; i < game.players(); ++i) {
    const auto p = x_star.player(i);
    const auto q = x.player(i);
    double kl = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a)
      if (p[a] > 0.0) kl += p[a] * std::log(p[a] / q[a]);
    out.components[i] = game.eta[i] * kl;
    out.total += out.components[i];
  }
  return out;
}

Series PhiSeries(const PolymatrixGame& game, const StrategyProfile& x_star,
                 const Trajectory& traj) {
  RequireGameLayout(game, traj.layout());
  Series s;
  s.columns = {"phi"};
  s.t = traj.times();
  for (std::size_t k = 0; k < traj.size(); ++k)
    s.data.push_back(ConstantOfMotion(game, x_star, traj.state(k)));
  return s;
}

Series KlSeries(const PolymatrixGame& game, const StrategyProfile& x_star,
                const Trajectory& traj) {
  RequireGameLayout(game, traj.layout());
  Series s;
  s.columns = {"total"};
  for (auto& c : Indexed("kl_", game.players())) s.columns.push_back(c);
  s.t = traj.times();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const WeightedKl kl = WeightedKlDivergence(game, x_star, traj.state(k));
    s.data.push_back(kl.total);
    s.data.insert(s.data.end(), kl.components.begin(), kl.components.end());
  }
  return s;
}

Series TimeAverage(const Trajectory& traj) {
  RequireSamples(traj, 2);
  std::vector<double> values;
  values.reserve(traj.size() * traj.layout().dim());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto row = traj.sample(k);
    values.insert(values.end(), row.begin(), row.end());
  }
  return RunningMean(traj.times(), values, traj.layout().dim(),
                     StateColumns(traj.layout(), "x_"));
}

Series TimeAverageUtility(const PolymatrixGame& game, const Trajectory& traj) {
  RequireGameLayout(game, traj.layout());
  RequireSamples(traj, 2);
  std::vector<double> values;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto u = Utilities(game, traj.state(k));
    values.insert(values.end(), u.begin(), u.end());
  }
  return RunningMean(traj.times(), values, game.players(),
                     Indexed("u_", game.players()));
}

Series RegretAll(const PolymatrixGame& game, const Trajectory& traj) {
  RequireGameLayout(game, traj.layout());
  RequireSamples(traj, 2);
  const Layout& layout = traj.layout();
  const std::size_t dim = layout.dim();
  // Running integral of u_{ia} - u_i for every (i, a).
  std::vector<double> gain_prev(dim), gain(dim), integral(dim, 0.0), ua(dim);
  auto gains = [&](std::size_t k, std::vector<double>& out) {
    const auto x = traj.sample(k);
    AllActionUtilities(game, x, ua);
    for (PlayerId i = 0; i < layout.players(); ++i) {
      const std::size_t off = layout.offset(i);
      double ui = 0.0;
      for (std::size_t a = 0; a < layout.actions(i); ++a)
        ui += x[off + a] * ua[off + a];
      for (std::size_t a = 0; a < layout.actions(i); ++a)
        out[off + a] = ua[off + a] - ui;
    }
  };

  Series s;
  s.columns = Indexed("regret_", layout.players());
  s.t = traj.times();
  s.data.assign(traj.size() * layout.players(), 0.0);
  gains(0, gain_prev);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    gains(k, gain);
    const double dt = traj.time(k) - traj.time(k - 1);
    for (std::size_t c = 0; c < dim; ++c)
      integral[c] += 0.5 * dt * (gain_prev[c] + gain[c]);
    for (PlayerId i = 0; i < layout.players(); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < layout.actions(i); ++a)
        best = std::max(best, integral[layout.offset(i) + a]);
      s.data[k * layout.players() + i] = best / traj.time(k);
    }
    std::swap(gain_prev, gain);
  }
  return s;
}

Series Regret(const PolymatrixGame& game, const Trajectory& traj, PlayerId i) {
  if (i >= game.players())
    throw Error(ErrorKind::kInvalidArgument, "player index out of range");
  const Series all = RegretAll(game, traj);
  Series s;
  s.columns = {"regret_" + std::to_string(i)};
  s.t = all.t;
  for (std::size_t k = 0; k < all.size(); ++k) s.data.push_back(all.at(k, i));
  return s;
}

std::vector<double> RescaledUtilitySeries(const PolymatrixGame& game,
                                          const Trajectory& traj) {
  RequireGameLayout(game, traj.layout());
  std::vector<double> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k)
    out.push_back(RescaledUtilitySum(game, traj.state(k)));
  return out;
}

RecurrenceStats ComputeRecurrence(const Trajectory& traj, double epsilon,
                                  double transient) {
  if (!(epsilon > 0.0))
    throw Error(ErrorKind::kInvalidArgument, "epsilon must be positive");
  if (!(transient >= 0.0))
    throw Error(ErrorKind::kInvalidArgument, "transient must be non-negative");
  RequireSamples(traj, 1);
  if (!(traj.time(traj.size() - 1) > transient))
    throw Error(ErrorKind::kInvalidArgument,
                "trajectory horizon must exceed the transient");
  RecurrenceStats r;
  r.epsilon = epsilon;
  r.transient = transient;
  r.min_distance_after_transient = std::numeric_limits<double>::infinity();
  const auto x0 = traj.sample(0);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    if (!(traj.time(k) > transient)) continue;
    const auto xk = traj.sample(k);
    double d = 0.0;
    for (std::size_t c = 0; c < xk.size(); ++c)
      d = std::max(d, std::abs(xk[c] - x0[c]));
    if (d < r.min_distance_after_transient) {
      r.min_distance_after_transient = d;
      r.min_distance_time = traj.time(k);
    }
    if (!r.first_return_time && d < epsilon) r.first_return_time = traj.time(k);
  }
  return r;
}

std::vector<SectionCrossing> PoincareSection(const Trajectory& traj,
                                             std::span<const double> normal,
                                             double offset) {
  const std::size_t dim = traj.layout().dim();
  if (normal.size() != dim)
    throw Error(ErrorKind::kDimensionMismatch,
                "normal has " + std::to_string(normal.size()) +
                    " entries, state has " + std::to_string(dim));
  if (std::all_of(normal.begin(), normal.end(), [](double v) { return v == 0.0; }))
    throw Error(ErrorKind::kInvalidArgument, "normal must be nonzero");

  std::vector<double> g(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k)
    g[k] = Dot(normal, traj.sample(k)) - offset;
  auto sign = [](double v) { return std::abs(v) <= kOnPlaneTol ? 0 : (v > 0 ? 1 : -1); };

  std::vector<SectionCrossing> out;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const int s0 = sign(g[k]);
    const int s1 = sign(g[k + 1]);
    if (s0 != 0 && s1 != 0 && s0 != s1) {
      const double f = g[k] / (g[k] - g[k + 1]);
      SectionCrossing c;
      c.t = traj.time(k) + f * (traj.time(k + 1) - traj.time(k));
      const auto a = traj.sample(k);
      const auto b = traj.sample(k + 1);
      c.state.resize(dim);
      for (std::size_t d = 0; d < dim; ++d) c.state[d] = a[d] + f * (b[d] - a[d]);
      c.direction = s1;
      out.push_back(std::move(c));
    } else if (s1 == 0 && k + 2 < traj.size()) {
      const int s2 = sign(g[k + 2]);
      if (s0 != 0 && s2 != 0 && s0 != s2) {
        const auto b = traj.sample(k + 1);
        out.push_back({traj.time(k + 1), std::vector<double>(b.begin(), b.end()), s2});
      }
    }
  }
  return out;
}

AnalysisReport Analyze(const PolymatrixGame& game, const StrategyProfile& x_star,
                       const Trajectory& traj, const AnalysisOptions& opts) {
  AnalysisReport r;
  r.phi = PhiSeries(game, x_star, traj);
  r.kl = KlSeries(game, x_star, traj);
  r.time_avg = TimeAverage(traj);
  r.time_avg_utility = TimeAverageUtility(game, traj);
  r.regret = RegretAll(game, traj);
  r.recurrence = ComputeRecurrence(traj, opts.epsilon, opts.transient);

  const double phi0 = r.phi.data.front();
  double spread = 0.0;
  for (double v : r.phi.data) spread = std::max(spread, std::abs(v - phi0));
  std::ostringstream note;
  note.precision(17);
  note << "phi relative drift " << (phi0 != 0.0 ? spread / std::abs(phi0) : spread);
  r.notes.push_back(note.str());
  const double residual = VerifyNash(game, x_star);
  if (residual > kNashObjectiveTol) {
    std::ostringstream warn;
    warn.precision(17);
    warn << "reference profile is not an equilibrium (deviation gain "
         << residual << "); phi and kl need not be constant";
    r.notes.push_back(warn.str());
  }
  return r;
}

}  // namespace coevo
