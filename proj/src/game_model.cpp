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

#include "coevo/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "coevo/error.hpp"

namespace coevo {

Layout::Layout(std::vector<std::size_t> action_counts)
    : counts_(std::move(action_counts)) {
  offsets_.reserve(counts_.size() + 1);
  for (std::size_t n : counts_) offsets_.push_back(offsets_.back() + n);
}

StrategyProfile::StrategyProfile(Layout layout, std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (values_.size() != layout_.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "profile has " + std::to_string(values_.size()) +
                    " entries, layout expects " +
                    std::to_string(layout_.dim()));
  }
}

StrategyProfile::StrategyProfile(
    const std::vector<std::vector<double>>& per_player) {
  std::vector<std::size_t> counts;
  for (const auto& p : per_player) {
    counts.push_back(p.size());
    values_.insert(values_.end(), p.begin(), p.end());
  }
  layout_ = Layout(std::move(counts));
}

StrategyProfile StrategyProfile::Uniform(const Layout& layout) {
  std::vector<double> v(layout.dim());
  for (PlayerId i = 0; i < layout.players(); ++i) {
    const double p = 1.0 / static_cast<double>(layout.actions(i));
    std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(layout.offset(i)),
                layout.actions(i), p);
  }
  return StrategyProfile(layout, std::move(v));
}

StrategyProfile StrategyProfile::RandomInterior(const Layout& layout,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(layout.dim());
  for (PlayerId i = 0; i < layout.players(); ++i) {
    double sum = 0.0;
    for (std::size_t a = 0; a < layout.actions(i); ++a) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double e = std::max(-std::log1p(-u), 1e-12);
      v[layout.offset(i) + a] = e;
      sum += e;
    }
    for (std::size_t a = 0; a < layout.actions(i); ++a)
      v[layout.offset(i) + a] /= sum;
  }
  return StrategyProfile(layout, std::move(v));
}

bool StrategyProfile::OnSimplex(double tol) const {
  for (PlayerId i = 0; i < players(); ++i) {
    double sum = 0.0;
    for (double v : player(i)) {
      if (!(v >= 0.0) || !std::isfinite(v)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool StrategyProfile::Interior() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v > 0.0; });
}

double StrategyProfile::MinEntry() const {
  return values_.empty() ? 0.0
                         : *std::min_element(values_.begin(), values_.end());
}

namespace {

bool Antisymmetric(const Matrix& a) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (std::abs(a(r, c) + a(c, r)) > kAntisymmetryTol) return false;
  return true;
}

void RequireLayout(const PolymatrixGame& game, const StrategyProfile& x) {
  if (x.layout().counts() != game.action_counts) {
    throw Error(ErrorKind::kDimensionMismatch,
                "strategy profile shape does not match the game");
  }
}

}  // namespace

std::vector<std::string> Validate(const PolymatrixGame& game) {
  std::vector<std::string> out;
  const std::size_t n_players = game.players();
  for (PlayerId i = 0; i < n_players; ++i) {
    if (game.action_counts[i] == 0)
      out.push_back("player " + std::to_string(i) + ": no actions");
  }
  if (game.eta.size() != n_players) {
    out.push_back("eta has " + std::to_string(game.eta.size()) +
                  " entries for " + std::to_string(n_players) + " players");
  }
  for (std::size_t k = 0; k < game.eta.size(); ++k) {
    if (!(game.eta[k] > 0.0) || !std::isfinite(game.eta[k]))
      out.push_back("eta[" + std::to_string(k) + "] is not a positive finite real");
  }

  std::set<std::pair<PlayerId, PlayerId>> seen_edges;
  for (std::size_t e = 0; e < game.edges.size(); ++e) {
    const EdgeGame& edge = game.edges[e];
    const std::string tag = "edge " + std::to_string(e) + " (" +
                            std::to_string(edge.i) + "," +
                            std::to_string(edge.j) + ")";
    if (edge.i >= n_players || edge.j >= n_players) {
      out.push_back(tag + ": player index out of range");
      continue;
    }
    if (edge.i == edge.j) {
      out.push_back(tag + ": self-loop stored as an edge");
      continue;
    }
    if (!seen_edges.insert(std::minmax(edge.i, edge.j)).second)
      out.push_back(tag + ": duplicate edge for this pair");
    const std::size_t ni = game.action_counts[edge.i];
    const std::size_t nj = game.action_counts[edge.j];
    if (edge.A_ij.rows() != ni || edge.A_ij.cols() != nj)
      out.push_back(tag + ": A_ij shape mismatch");
    if (edge.A_ji.rows() != nj || edge.A_ji.cols() != ni)
      out.push_back(tag + ": A_ji shape mismatch");
    if (!edge.A_ij.AllFinite() || !edge.A_ji.AllFinite())
      out.push_back(tag + ": non-finite entry");
  }

  std::set<PlayerId> seen_loops;
  for (std::size_t s = 0; s < game.self_loops.size(); ++s) {
    const SelfLoop& loop = game.self_loops[s];
    const std::string tag = "self-loop " + std::to_string(s) + " (player " +
                            std::to_string(loop.i) + ")";
    if (loop.i >= n_players) {
      out.push_back(tag + ": player index out of range");
      continue;
    }
    if (!seen_loops.insert(loop.i).second)
      out.push_back(tag + ": duplicate self-loop");
    const std::size_t ni = game.action_counts[loop.i];
    if (loop.A.rows() != ni || loop.A.cols() != ni) {
      out.push_back(tag + ": shape mismatch");
      continue;
    }
    if (!loop.A.AllFinite()) {
      out.push_back(tag + ": non-finite entry");
    } else if (!Antisymmetric(loop.A)) {
      out.push_back(tag + ": not antisymmetric");
    }
  }
  return out;
}

void RequireValid(const PolymatrixGame& game) {
  const auto violations = Validate(game);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid game:";
  for (const auto& v : violations) msg << "\n  " << v;
  throw Error(ErrorKind::kInvalidGame, msg.str());
}

void AllActionUtilities(const PolymatrixGame& game, std::span<const double> x,
                        std::span<double> out) {
  const Layout layout = game.layout();
  if (x.size() != layout.dim() || out.size() != layout.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "state length does not match the game");
  }
  std::fill(out.begin(), out.end(), 0.0);
  auto block = [&](auto s, PlayerId p) {
    return s.subspan(layout.offset(p), layout.actions(p));
  };
  for (const EdgeGame& e : game.edges) {
    e.A_ij.MultiplyAdd(block(x, e.j), block(out, e.i));
    e.A_ji.MultiplyAdd(block(x, e.i), block(out, e.j));
  }
  for (const SelfLoop& s : game.self_loops) {
    s.A.MultiplyAdd(block(x, s.i), block(out, s.i));
  }
}

std::vector<double> ActionUtilities(const PolymatrixGame& game,
                                    const StrategyProfile& x, PlayerId i) {
  RequireLayout(game, x);
  if (i >= game.players())
    throw Error(ErrorKind::kInvalidArgument, "player index out of range");
  std::vector<double> out(game.action_counts[i], 0.0);
  for (const EdgeGame& e : game.edges) {
    if (e.i == i) e.A_ij.MultiplyAdd(x.player(e.j), out);
    if (e.j == i) e.A_ji.MultiplyAdd(x.player(e.i), out);
  }
  for (const SelfLoop& s : game.self_loops) {
    if (s.i == i) s.A.MultiplyAdd(x.player(i), out);
  }
  return out;
}

double Utility(const PolymatrixGame& game, const StrategyProfile& x,
               PlayerId i) {
  return Dot(x.player(i), ActionUtilities(game, x, i));
}

std::vector<double> Utilities(const PolymatrixGame& game,
                              const StrategyProfile& x) {
  RequireLayout(game, x);
  std::vector<double> all(x.layout().dim());
  AllActionUtilities(game, x.flat(), all);
  std::vector<double> u(game.players());
  for (PlayerId i = 0; i < game.players(); ++i) {
    u[i] = Dot(x.player(i), std::span<const double>(all).subspan(
                                x.layout().offset(i), x.layout().actions(i)));
  }
  return u;
}

double RescaledUtilitySum(const PolymatrixGame& game,
                          const StrategyProfile& x) {
  const auto u = Utilities(game, x);
  double s = 0.0;
  for (PlayerId i = 0; i < u.size(); ++i) s += game.eta[i] * u[i];
  return s;
}

ZeroSumCheck VerifyRescaledZeroSum(const PolymatrixGame& game, double tol) {
  RequireValid(game);
  const std::size_t n_players = game.players();

  // incident[i] = (edge index, i is the edge's first endpoint)
  std::vector<std::vector<std::pair<std::size_t, bool>>> incident(n_players);
  for (std::size_t e = 0; e < game.edges.size(); ++e) {
    incident[game.edges[e].i].emplace_back(e, true);
    incident[game.edges[e].j].emplace_back(e, false);
  }

  double residual = 0.0;
  for (PlayerId i = 0; i < n_players; ++i) {
    const std::size_t ni = game.action_counts[i];
    for (std::size_t a = 0; a < ni; ++a) {
      for (std::size_t b = 0; b < ni; ++b) {
        if (a == b) continue;
        // max over x_{-i} of W(b, x_{-i}) - W(a, x_{-i})
        double best = 0.0;
        for (const auto& [e, first] : incident[i]) {
          const EdgeGame& edge = game.edges[e];
          const PlayerId j = first ? edge.j : edge.i;
          const Matrix& mine = first ? edge.A_ij : edge.A_ji;    // n_i x n_j
          const Matrix& theirs = first ? edge.A_ji : edge.A_ij;  // n_j x n_i
          const double eta_i = game.eta[i];
          const double eta_j = game.eta[j];
          double m = -std::numeric_limits<double>::infinity();
          for (std::size_t g = 0; g < game.action_counts[j]; ++g) {
            const double c = eta_i * (mine(b, g) - mine(a, g)) +
                             eta_j * (theirs(g, b) - theirs(g, a));
            m = std::max(m, c);
          }
          best += m;
        }
        residual = std::max(residual, std::abs(best));
      }
    }
  }

  // Anchor: weighted total at the all-first-actions pure profile.
  double anchor = 0.0;
  for (const EdgeGame& e : game.edges) {
    anchor += game.eta[e.i] * e.A_ij(0, 0) + game.eta[e.j] * e.A_ji(0, 0);
  }
  residual = std::max(residual, std::abs(anchor));
  return {residual <= tol, residual};
}

Matrix GeneralizedRpsMatrix(std::size_t n) {
  Matrix p(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    p(r, (r + 1) % n) = -1.0;
    p(r, (r + n - 1) % n) = 1.0;
  }
  return p;
}

PolymatrixGame BuildGeneralizedRpsReduced(std::size_t n, double mu) {
  if (n < 3)
    throw Error(ErrorKind::kInvalidArgument, "generalized RPS needs n >= 3");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw Error(ErrorKind::kInvalidArgument, "mu must be positive");
  PolymatrixGame g;
  g.action_counts = {n, n};
  g.self_loops.push_back({0, GeneralizedRpsMatrix(n)});
  g.edges.push_back({0, 1, Matrix::Identity(n, mu), Matrix::Identity(n, -1.0)});
  g.eta = {1.0, mu};
  return g;
}

PolymatrixGame BuildChain(std::span<const double> mus, std::size_t n) {
  if (mus.empty())
    throw Error(ErrorKind::kInvalidArgument, "chain needs at least one mu");
  if (n < 3)
    throw Error(ErrorKind::kInvalidArgument, "chain needs n >= 3");
  for (double mu : mus) {
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw Error(ErrorKind::kInvalidArgument, "chain mu must be positive");
  }
  const std::size_t players = mus.size() + 1;
  PolymatrixGame g;
  g.action_counts.assign(players, n);
  g.eta.assign(players, 1.0);
  for (PlayerId m = 0; m < players; m += 2) {
    g.self_loops.push_back({m, GeneralizedRpsMatrix(n)});
  }
  for (std::size_t m = 0; m < mus.size(); ++m) {
    g.edges.push_back(
        {m, m + 1, Matrix::Identity(n, mus[m]), Matrix::Identity(n, -1.0)});
    g.eta[m + 1] = g.eta[m] * mus[m];
  }
  return g;
}

PolymatrixGame BuildButterfly(std::size_t n_clusters, std::size_t n) {
  if (n_clusters == 0)
    throw Error(ErrorKind::kInvalidArgument, "butterfly needs >= 1 cluster");
  if (n < 3)
    throw Error(ErrorKind::kInvalidArgument, "butterfly needs n >= 3");
  PolymatrixGame g;
  auto couple = [&](PlayerId pop, PlayerId env) {
    g.edges.push_back(
        {pop, env, Matrix::Identity(n, 1.0), Matrix::Identity(n, -1.0)});
  };
  std::vector<PlayerId> populations;

  if (n_clusters == 1) {
    // y_1..y_7 are players 0..6, w_1 and w_2 are 7 and 8.
    for (PlayerId p = 0; p < 7; ++p) populations.push_back(p);
    for (PlayerId p = 0; p < 4; ++p) couple(p, 7);
    for (PlayerId p = 3; p < 7; ++p) couple(p, 8);
    g.action_counts.assign(9, n);
  } else {
    // Wing c owns [env, pop, pop, shared]; shared also feeds env of c+1.
    const std::size_t per_wing = 4;
    g.action_counts.assign(per_wing * n_clusters, n);
    for (std::size_t c = 0; c < n_clusters; ++c) {
      const PlayerId env = per_wing * c;
      for (PlayerId k = 1; k < per_wing; ++k) {
        populations.push_back(env + k);
        couple(env + k, env);
      }
      const PlayerId next_env = per_wing * ((c + 1) % n_clusters);
      couple(env + per_wing - 1, next_env);
    }
  }
  for (PlayerId p : populations) {
    g.self_loops.push_back({p, GeneralizedRpsMatrix(n)});
  }
  std::sort(g.self_loops.begin(), g.self_loops.end(),
            [](const SelfLoop& a, const SelfLoop& b) { return a.i < b.i; });
  g.eta.assign(g.action_counts.size(), 1.0);
  return g;
}

}  // namespace coevo
