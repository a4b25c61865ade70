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

#ifndef COEVO_GAME_MODEL_HPP_
#define COEVO_GAME_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coevo/matrix.hpp"

namespace coevo {

using PlayerId = std::size_t;

inline constexpr double kAntisymmetryTol = 1e-12;
inline constexpr double kSimplexTol = 1e-10;

// Player-major, action-minor indexing of a flat strategy vector.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<std::size_t> action_counts);

  std::size_t players() const { return counts_.size(); }
  std::size_t actions(PlayerId i) const { return counts_[i]; }
  std::size_t offset(PlayerId i) const { return offsets_[i]; }
  std::size_t dim() const { return offsets_.back(); }
  const std::vector<std::size_t>& counts() const { return counts_; }

  bool operator==(const Layout& other) const { return counts_ == other.counts_; }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> offsets_{0};
};

// One mixed strategy per player, stored flat.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  StrategyProfile(Layout layout, std::vector<double> values);
  explicit StrategyProfile(const std::vector<std::vector<double>>& per_player);

  static StrategyProfile Uniform(const Layout& layout);

  const Layout& layout() const { return layout_; }
  std::size_t players() const { return layout_.players(); }
  std::span<const double> player(PlayerId i) const {
    return {values_.data() + layout_.offset(i), layout_.actions(i)};
  }
  std::span<double> player(PlayerId i) {
    return {values_.data() + layout_.offset(i), layout_.actions(i)};
  }
  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }
  const std::vector<double>& values() const { return values_; }

    // Flat Dirichlet(1, ..., 1) sample per player, seeded (mt19937_64).
  static StrategyProfile RandomInterior(const Layout& layout,
                                        std::uint64_t seed);

  // Entries >= 0 and each block sums to 1 within tol.
  bool OnSimplex(double tol = kSimplexTol) const;
  // Every entry strictly positive.
  bool Interior() const;
  double MinEntry() const;

 private:
  Layout layout_;
  std::vector<double> values_;
};

// Bimatrix game on the edge {i, j}: A_ij is the payoff to i, A_ji to j.
struct EdgeGame {
  PlayerId i = 0;
  PlayerId j = 0;
  Matrix A_ij;
  Matrix A_ji;
};

struct SelfLoop {
  PlayerId i = 0;
  Matrix A;
};

struct PolymatrixGame {
  std::vector<std::size_t> action_counts;
  std::vector<EdgeGame> edges;
  std::vector<SelfLoop> self_loops;
  std::vector<double> eta;

  std::size_t players() const { return action_counts.size(); }
  Layout layout() const { return Layout(action_counts); }
};

// Empty iff the game is structurally well formed.
std::vector<std::string> Validate(const PolymatrixGame& game);

// Throws kInvalidGame with all violations joined when Validate is non-empty.
void RequireValid(const PolymatrixGame& game);

// u_i(x) including the self-loop term.
double Utility(const PolymatrixGame& game, const StrategyProfile& x,
               PlayerId i);
std::vector<double> Utilities(const PolymatrixGame& game,
                              const StrategyProfile& x);

// u_{i alpha}(x) for every action alpha of player i.
std::vector<double> ActionUtilities(const PolymatrixGame& game,
                                    const StrategyProfile& x, PlayerId i);

// Payoff of every pure action of every player, flat in the game layout.
// Hot path for the integrators: no validation beyond the size check.
void AllActionUtilities(const PolymatrixGame& game,
                        std::span<const double> x, std::span<double> out);

// sum_i eta_i u_i(x)
double RescaledUtilitySum(const PolymatrixGame& game, const StrategyProfile& x);

struct ZeroSumCheck {
  bool rescaled_zero_sum = false;
  double residual = 0.0;
};

// Decides whether sum_i eta_i u_i(x) vanishes identically on the strategy
// space. For each player i and action pair (alpha, beta), the change in the
// weighted payoff total when i switches alpha -> beta is linear in the other
// players' strategies and splits over i's neighbours, so its maximum is a sum
// of per-neighbour maxima over pure actions. The game is constant-sum iff all
// of these maxima are zero; one pure-profile evaluation then pins the constant
// to zero. Antisymmetric self-loops are skipped (they contribute nothing).
ZeroSumCheck VerifyRescaledZeroSum(const PolymatrixGame& game,
                                   double tol = 1e-9);

// Circulant generalized rock-paper-scissors matrix: row r has -1 at r+1 and
// +1 at r-1 (mod n).
Matrix GeneralizedRpsMatrix(std::size_t n);

// Population y (self-loop P, payoff mu I against w) and environment w (payoff
// -I against y), eta = (1, mu).
PolymatrixGame BuildGeneralizedRpsReduced(std::size_t n, double mu);

// Line of mus.size()+1 players alternating population / environment. The
// edge (m, m+1) gives mu_m I to m and -I to m+1; eta_{m+1} = eta_m mu_m.
PolymatrixGame BuildChain(std::span<const double> mus, std::size_t n);

// n_clusters == 1: the 9-node butterfly (7 populations, 2 environments,
// population 3 shared between the wings). n_clusters >= 2: a closed ring of
// wings, each an environment with four populations, the last of which is
// also attached to the next wing's environment (4 players per wing). All
// edges are (I, -I) so eta = 1.
PolymatrixGame BuildButterfly(std::size_t n_clusters, std::size_t n = 3);

}  // namespace coevo

#endif  // COEVO_GAME_MODEL_HPP_
