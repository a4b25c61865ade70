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

#include "coevo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "coevo/error.hpp"

namespace coevo {

namespace {

constexpr double kBoundaryFloor = 1e-15;

std::string FormatTime(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

void CheckConfig(const IntegratorConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step))
    throw Error(ErrorKind::kInvalidArgument, "step must be positive");
  if (!(cfg.horizon >= cfg.step) || !std::isfinite(cfg.horizon))
    throw Error(ErrorKind::kInvalidArgument, "horizon must be >= step");
  if (cfg.record_every == 0)
    throw Error(ErrorKind::kInvalidArgument, "record_every must be positive");
}

std::size_t StepCount(const IntegratorConfig& cfg) {
  const double ratio = cfg.horizon / cfg.step;
  return static_cast<std::size_t>(std::ceil(ratio - 1e-9));
}

// One classical RK4 step of size h; scratch buffers are caller-owned so long
// runs do not allocate.
struct Rk4 {
  explicit Rk4(std::size_t dim)
      : k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}

  void Step(const VectorField& f, std::span<double> y, double h) {
    const std::size_t d = y.size();
    f(y, k1);
    for (std::size_t k = 0; k < d; ++k) tmp[k] = y[k] + 0.5 * h * k1[k];
    f(tmp, k2);
    for (std::size_t k = 0; k < d; ++k) tmp[k] = y[k] + 0.5 * h * k2[k];
    f(tmp, k3);
    for (std::size_t k = 0; k < d; ++k) tmp[k] = y[k] + h * k3[k];
    f(tmp, k4);
    for (std::size_t k = 0; k < d; ++k)
      y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }

  std::vector<double> k1, k2, k3, k4, tmp;
};

void SoftmaxInto(const Layout& layout, std::span<const double> z,
                 std::span<double> x) {
  for (PlayerId i = 0; i < layout.players(); ++i) {
    const std::size_t off = layout.offset(i);
    const std::size_t n = layout.actions(i);
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) zmax = std::max(zmax, z[off + a]);
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      x[off + a] = std::exp(z[off + a] - zmax);
      sum += x[off + a];
    }
    for (std::size_t a = 0; a < n; ++a) x[off + a] /= sum;
  }
}

void ZFieldInto(const PolymatrixGame& game, const Layout& layout,
                std::span<const double> z, std::span<double> x_scratch,
                std::span<double> out) {
  SoftmaxInto(layout, z, x_scratch);
  AllActionUtilities(game, x_scratch, out);
  for (PlayerId i = 0; i < layout.players(); ++i) {
    const std::size_t off = layout.offset(i);
    const double base = out[off];
    for (std::size_t a = 0; a < layout.actions(i); ++a) out[off + a] -= base;
    out[off] = 0.0;
  }
}

void RequireFinite(std::span<const double> y, double t) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNonFinite,
                  "non-finite state at t=" + FormatTime(t));
    }
  }
}

}  // namespace

ZState::ZState(Layout layout, std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (values_.size() != layout_.dim())
    throw Error(ErrorKind::kDimensionMismatch, "z-state length mismatch");
}

std::string MethodName(Method m) {
  return m == Method::kRk4X ? "rk4_x" : "rk4_z";
}

Method ParseMethod(const std::string& name) {
  if (name == "rk4_x") return Method::kRk4X;
  if (name == "rk4_z") return Method::kRk4Z;
  throw Error(ErrorKind::kInvalidArgument, "unknown integrator '" + name + "'");
}

Trajectory::Trajectory(Layout layout, double step, Method method)
    : layout_(std::move(layout)), step_(step), method_(method) {}

void Trajectory::Append(double t, std::span<const double> state) {
  if (state.size() != layout_.dim())
    throw Error(ErrorKind::kDimensionMismatch, "trajectory sample length");
  if (!times_.empty() && !(t > times_.back()))
    throw Error(ErrorKind::kInvalidArgument,
                "trajectory times must be strictly increasing");
  times_.push_back(t);
  values_.insert(values_.end(), state.begin(), state.end());
}

StrategyProfile Trajectory::state(std::size_t k) const {
  const auto s = sample(k);
  return StrategyProfile(layout_, std::vector<double>(s.begin(), s.end()));
}

void ReplicatorFieldInto(const PolymatrixGame& game, std::span<const double> x,
                         std::span<double> out) {
  const Layout layout = game.layout();
  AllActionUtilities(game, x, out);
  for (PlayerId i = 0; i < layout.players(); ++i) {
    const std::size_t off = layout.offset(i);
    const std::size_t n = layout.actions(i);
    double ui = 0.0;
    for (std::size_t a = 0; a < n; ++a) ui += x[off + a] * out[off + a];
    for (std::size_t a = 0; a < n; ++a)
      out[off + a] = x[off + a] * (out[off + a] - ui);
  }
}

std::vector<double> ReplicatorField(const PolymatrixGame& game,
                                    const StrategyProfile& x) {
  if (x.layout().counts() != game.action_counts)
    throw Error(ErrorKind::kDimensionMismatch,
                "strategy profile shape does not match the game");
  std::vector<double> out(x.layout().dim());
  ReplicatorFieldInto(game, x.flat(), out);
  return out;
}

ZState ToZ(const StrategyProfile& x) {
  const Layout& layout = x.layout();
  std::vector<double> z(layout.dim());
  for (PlayerId i = 0; i < layout.players(); ++i) {
    const auto xi = x.player(i);
    for (double v : xi) {
      if (!(v > 0.0))
        throw Error(ErrorKind::kBoundary,
                    "log-ratio coordinates need a strictly interior profile "
                    "(player " + std::to_string(i) + ")");
    }
    const std::size_t off = layout.offset(i);
    z[off] = 0.0;
    for (std::size_t a = 1; a < xi.size(); ++a)
      z[off + a] = std::log(xi[a] / xi[0]);
  }
  return ZState(layout, std::move(z));
}

StrategyProfile FromZ(const ZState& z) {
  RequireFinite(z.flat(), 0.0);
  std::vector<double> x(z.layout().dim());
  SoftmaxInto(z.layout(), z.flat(), x);
  return StrategyProfile(z.layout(), std::move(x));
}

ZState ZField(const PolymatrixGame& game, const ZState& z) {
  if (z.layout().counts() != game.action_counts)
    throw Error(ErrorKind::kDimensionMismatch, "z-state shape mismatch");
  RequireFinite(z.flat(), 0.0);
  std::vector<double> x(z.layout().dim());
  std::vector<double> out(z.layout().dim());
  ZFieldInto(game, z.layout(), z.flat(), x, out);
  return ZState(z.layout(), std::move(out));
}

Trajectory IntegrateField(const VectorField& field, const StrategyProfile& x0,
                          const IntegratorConfig& cfg) {
  CheckConfig(cfg);
  if (!x0.OnSimplex()) {
    throw Error(ErrorKind::kInvalidArgument,
                "initial condition is not a strategy profile");
  }
  if (!x0.Interior()) {
    throw Error(ErrorKind::kBoundary,
                "initial condition must lie in the interior of the simplex");
  }
  const Layout& layout = x0.layout();
  const std::size_t steps = StepCount(cfg);
  Trajectory traj(layout, cfg.step, Method::kRk4X);
  std::vector<double> y(x0.flat().begin(), x0.flat().end());
  traj.Append(0.0, y);

  Rk4 rk(layout.dim());
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t_prev = static_cast<double>(s - 1) * cfg.step;
    const double t = s == steps ? cfg.horizon : static_cast<double>(s) * cfg.step;
    rk.Step(field, y, t - t_prev);
    RequireFinite(y, t);
    for (PlayerId i = 0; i < layout.players(); ++i) {
      const std::size_t off = layout.offset(i);
      double sum = 0.0;
      for (std::size_t a = 0; a < layout.actions(i); ++a) sum += y[off + a];
      for (std::size_t a = 0; a < layout.actions(i); ++a) y[off + a] /= sum;
    }
    for (double v : y) {
      if (v < kBoundaryFloor) {
        throw Error(ErrorKind::kBoundary,
                    "trajectory reached the simplex boundary at t=" +
                        FormatTime(t));
      }
    }
    if (s % cfg.record_every == 0 || s == steps) traj.Append(t, y);
  }
  return traj;
}

Trajectory Integrate(const PolymatrixGame& game, const StrategyProfile& x0,
                     const IntegratorConfig& cfg) {
  RequireValid(game);
  if (x0.layout().counts() != game.action_counts)
    throw Error(ErrorKind::kDimensionMismatch,
                "initial condition shape does not match the game");
  if (cfg.method == Method::kRk4X) {
    return IntegrateField(
        [&game](std::span<const double> x, std::span<double> out) {
          ReplicatorFieldInto(game, x, out);
        },
        x0, cfg);
  }

  CheckConfig(cfg);
  if (!x0.OnSimplex())
    throw Error(ErrorKind::kInvalidArgument,
                "initial condition is not a strategy profile");
  const Layout& layout = x0.layout();
  ZState z0 = ToZ(x0);
  std::vector<double> z(z0.flat().begin(), z0.flat().end());
  std::vector<double> x_scratch(layout.dim());
  std::vector<double> x_rec(layout.dim());
  const VectorField field = [&](std::span<const double> zz,
                                std::span<double> out) {
    ZFieldInto(game, layout, zz, x_scratch, out);
  };

  Trajectory traj(layout, cfg.step, Method::kRk4Z);
  traj.Append(0.0, x0.flat());
  const std::size_t steps = StepCount(cfg);
  Rk4 rk(layout.dim());
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t_prev = static_cast<double>(s - 1) * cfg.step;
    const double t = s == steps ? cfg.horizon : static_cast<double>(s) * cfg.step;
    rk.Step(field, z, t - t_prev);
    RequireFinite(z, t);
    if (s % cfg.record_every == 0 || s == steps) {
      SoftmaxInto(layout, z, x_rec);
      traj.Append(t, x_rec);
    }
  }
  return traj;
}

double DivergenceEstimate(const PolymatrixGame& game, const ZState& z,
                          double h_fd) {
  if (!(h_fd > 0.0) || h_fd > 1e-3)
    throw Error(ErrorKind::kInvalidArgument, "h_fd must lie in (0, 1e-3]");
  if (z.layout().counts() != game.action_counts)
    throw Error(ErrorKind::kDimensionMismatch, "z-state shape mismatch");
  const Layout& layout = z.layout();
  std::vector<double> zp(z.flat().begin(), z.flat().end());
  std::vector<double> scratch(layout.dim());
  std::vector<double> fp(layout.dim());
  std::vector<double> fm(layout.dim());
  double trace = 0.0;
  for (PlayerId i = 0; i < layout.players(); ++i) {
    for (std::size_t a = 1; a < layout.actions(i); ++a) {
      const std::size_t k = layout.offset(i) + a;
      const double orig = zp[k];
      zp[k] = orig + h_fd;
      ZFieldInto(game, layout, zp, scratch, fp);
      zp[k] = orig - h_fd;
      ZFieldInto(game, layout, zp, scratch, fm);
      zp[k] = orig;
      trace += (fp[k] - fm[k]) / (2.0 * h_fd);
    }
  }
  return trace;
}

}  // namespace coevo
