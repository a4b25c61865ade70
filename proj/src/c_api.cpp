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

#include "coevo/coevo.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "coevo/analysis.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/equilibrium.hpp"
#include "coevo/error.hpp"
#include "coevo/game_model.hpp"
#include "coevo/io.hpp"
#include "coevo/reduction.hpp"
#include "coevo/version.hpp"

struct coevo_game {
  coevo::PolymatrixGame game;
};
struct coevo_system {
  coevo::TimeEvolvingSystem system;
};
struct coevo_trajectory {
  coevo::Trajectory traj;
};

namespace {

thread_local std::string last_error;

coevo_status ToStatus(coevo::ErrorKind kind) {
  using coevo::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return COEVO_ERR_INVALID_ARGUMENT;
    case ErrorKind::kDimensionMismatch: return COEVO_ERR_DIMENSION;
    case ErrorKind::kBoundary: return COEVO_ERR_BOUNDARY;
    case ErrorKind::kInvalidGame: return COEVO_ERR_INVALID_GAME;
    case ErrorKind::kNotRescaledZeroSum: return COEVO_ERR_NOT_RESCALED_ZERO_SUM;
    case ErrorKind::kInfeasible: return COEVO_ERR_INFEASIBLE;
    case ErrorKind::kUnbounded: return COEVO_ERR_UNBOUNDED;
    case ErrorKind::kSolverFailure: return COEVO_ERR_SOLVER;
    case ErrorKind::kNonFinite: return COEVO_ERR_NON_FINITE;
    case ErrorKind::kParse: return COEVO_ERR_PARSE;
    case ErrorKind::kIo: return COEVO_ERR_IO;
  }
  return COEVO_ERR_INTERNAL;
}

// Runs `body`, mapping exceptions onto status codes and the thread-local
// message.
template <typename F>
coevo_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return COEVO_OK;
  } catch (const coevo::Error& e) {
    last_error = e.what();
    return ToStatus(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return COEVO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return COEVO_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw coevo::Error(coevo::ErrorKind::kInvalidArgument, what);
}

std::string Header(const char* header) { return header ? header : ""; }

coevo::StrategyProfile Profile(const coevo::PolymatrixGame& game,
                               const double* x, size_t len) {
  Require(x != nullptr, "null strategy vector");
  const coevo::Layout layout = game.layout();
  if (len != layout.dim())
    throw coevo::Error(coevo::ErrorKind::kDimensionMismatch,
                       "expected " + std::to_string(layout.dim()) +
                           " strategy entries, got " + std::to_string(len));
  return coevo::StrategyProfile(layout, std::vector<double>(x, x + len));
}

template <typename T>
void Emit(T* value, T** out) {
  *out = value;
}

}  // namespace

extern "C" {

const char* coevo_version(void) { return coevo::kVersion; }

const char* coevo_last_error(void) { return last_error.c_str(); }

const char* coevo_status_name(coevo_status status) {
  switch (status) {
    case COEVO_OK: return "ok";
    case COEVO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case COEVO_ERR_DIMENSION: return "dimension mismatch";
    case COEVO_ERR_BOUNDARY: return "simplex boundary";
    case COEVO_ERR_INVALID_GAME: return "invalid game";
    case COEVO_ERR_NOT_RESCALED_ZERO_SUM: return "not rescaled zero-sum";
    case COEVO_ERR_INFEASIBLE: return "infeasible";
    case COEVO_ERR_UNBOUNDED: return "unbounded";
    case COEVO_ERR_SOLVER: return "solver failure";
    case COEVO_ERR_NON_FINITE: return "non-finite state";
    case COEVO_ERR_PARSE: return "parse error";
    case COEVO_ERR_IO: return "i/o failure";
    case COEVO_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

coevo_status coevo_game_load(const char* path, coevo_game** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    Emit(new coevo_game{coevo::io::LoadGame(path)}, out);
  });
}

coevo_status coevo_game_parse(const char* text, coevo_game** out) {
  return Guard([&] {
    Require(text && out, "null argument");
    Emit(new coevo_game{coevo::io::ParseGame(text, "<memory>")}, out);
  });
}

coevo_status coevo_game_save(const coevo_game* game, const char* path,
                             const char* header) {
  return Guard([&] {
    Require(game && path, "null argument");
    coevo::io::WriteFile(path, coevo::io::SerializeGame(game->game, Header(header)));
  });
}

void coevo_game_free(coevo_game* game) { delete game; }

coevo_status coevo_preset_rps_reduced(size_t n, double mu, coevo_game** out) {
  return Guard([&] {
    Require(out, "null argument");
    Emit(new coevo_game{coevo::BuildGeneralizedRpsReduced(n, mu)}, out);
  });
}

coevo_status coevo_preset_chain(const double* mus, size_t count, size_t n,
                                coevo_game** out) {
  return Guard([&] {
    Require(out && (mus || count == 0), "null argument");
    Emit(new coevo_game{coevo::BuildChain(std::span<const double>(mus, count), n)},
         out);
  });
}

coevo_status coevo_preset_butterfly(size_t clusters, coevo_game** out) {
  return Guard([&] {
    Require(out, "null argument");
    Emit(new coevo_game{coevo::BuildButterfly(clusters)}, out);
  });
}

size_t coevo_game_players(const coevo_game* game) {
  return game ? game->game.players() : 0;
}

size_t coevo_game_dimension(const coevo_game* game) {
  return game ? game->game.layout().dim() : 0;
}

size_t coevo_game_actions(const coevo_game* game, size_t player) {
  if (!game || player >= game->game.players()) return 0;
  return game->game.action_counts[player];
}

coevo_status coevo_game_validate(const coevo_game* game, size_t* violation_count,
                                 char* buf, size_t buflen) {
  return Guard([&] {
    Require(game, "null game");
    const auto v = coevo::Validate(game->game);
    if (violation_count) *violation_count = v.size();
    if (buf && buflen) {
      std::string joined;
      for (const auto& s : v) joined += s + "\n";
      const size_t n = std::min(joined.size(), buflen - 1);
      std::memcpy(buf, joined.data(), n);
      buf[n] = '\0';
    }
  });
}

coevo_status coevo_game_verify_zero_sum(const coevo_game* game, int* is_zero_sum,
                                        double* residual) {
  return Guard([&] {
    Require(game, "null game");
    const auto r = coevo::VerifyRescaledZeroSum(game->game);
    if (is_zero_sum) *is_zero_sum = r.rescaled_zero_sum ? 1 : 0;
    if (residual) *residual = r.residual;
  });
}

coevo_status coevo_game_utilities(const coevo_game* game, const double* x,
                                  size_t len, double* utilities) {
  return Guard([&] {
    Require(game && utilities, "null argument");
    const auto u = coevo::Utilities(game->game, Profile(game->game, x, len));
    std::copy(u.begin(), u.end(), utilities);
  });
}

coevo_status coevo_replicator_field(const coevo_game* game, const double* x,
                                    size_t len, double* out) {
  return Guard([&] {
    Require(game && out, "null argument");
    const auto f = coevo::ReplicatorField(game->game, Profile(game->game, x, len));
    std::copy(f.begin(), f.end(), out);
  });
}

coevo_status coevo_divergence_estimate(const coevo_game* game, const double* z,
                                       size_t len, double h_fd, double* out) {
  return Guard([&] {
    Require(game && z && out, "null argument");
    const coevo::Layout layout = game->game.layout();
    if (len != layout.dim())
      throw coevo::Error(coevo::ErrorKind::kDimensionMismatch, "z length");
    *out = coevo::DivergenceEstimate(
        game->game, coevo::ZState(layout, std::vector<double>(z, z + len)), h_fd);
  });
}

coevo_status coevo_random_interior(const coevo_game* game, uint64_t seed,
                                   double* x, size_t len) {
  return Guard([&] {
    Require(game && x, "null argument");
    const coevo::Layout layout = game->game.layout();
    if (len != layout.dim())
      throw coevo::Error(coevo::ErrorKind::kDimensionMismatch, "profile length");
    const auto p = coevo::StrategyProfile::RandomInterior(layout, seed);
    std::copy(p.flat().begin(), p.flat().end(), x);
  });
}

coevo_status coevo_nash(const coevo_game* game, double* profile, double* values,
                        double* objective, int* interior, double* margin) {
  return Guard([&] {
    Require(game, "null game");
    const coevo::NashResult r = coevo::ComputeNash(game->game);
    if (profile) std::copy(r.profile.flat().begin(), r.profile.flat().end(), profile);
    if (values) std::copy(r.values.begin(), r.values.end(), values);
    if (objective) *objective = r.objective;
    if (interior) *interior = r.interior ? 1 : 0;
    if (margin) *margin = r.interiority_margin;
  });
}

coevo_status coevo_nash_write(const coevo_game* game, const char* path,
                              const char* header) {
  return Guard([&] {
    Require(game && path, "null argument");
    const coevo::NashResult r = coevo::ComputeNash(game->game);
    coevo::io::WriteFile(path, coevo::io::SerializeNash(r, Header(header)));
  });
}

coevo_status coevo_system_load(const char* path, coevo_system** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    Emit(new coevo_system{coevo::io::LoadSystem(path)}, out);
  });
}

coevo_status coevo_system_save(const coevo_system* system, const char* path,
                               const char* header) {
  return Guard([&] {
    Require(system && path, "null argument");
    coevo::io::WriteFile(path,
                         coevo::io::SerializeSystem(system->system, Header(header)));
  });
}

coevo_status coevo_preset_rps_system(size_t n, double mu, coevo_system** out) {
  return Guard([&] {
    Require(out, "null argument");
    Emit(new coevo_system{coevo::BuildGeneralizedRpsSystem(n, mu)}, out);
  });
}

void coevo_system_free(coevo_system* system) { delete system; }

coevo_status coevo_reduce(const coevo_system* system, coevo_game** out,
                          int* is_zero_sum, double* residual) {
  return Guard([&] {
    Require(system && out, "null argument");
    coevo::Reduction r = coevo::ReduceToPolymatrix(system->system);
    if (is_zero_sum) *is_zero_sum = r.check.rescaled_zero_sum ? 1 : 0;
    if (residual) *residual = r.check.residual;
    Emit(new coevo_game{std::move(r.game)}, out);
  });
}

coevo_status coevo_simulate(const coevo_game* game, const double* x0, size_t len,
                            coevo_method method, double step, double horizon,
                            size_t record_every, coevo_trajectory** out) {
  return Guard([&] {
    Require(game && out, "null argument");
    Require(method == COEVO_RK4_X || method == COEVO_RK4_Z, "unknown method");
    coevo::IntegratorConfig cfg;
    cfg.method = method == COEVO_RK4_X ? coevo::Method::kRk4X : coevo::Method::kRk4Z;
    cfg.step = step;
    cfg.horizon = horizon;
    cfg.record_every = record_every;
    Emit(new coevo_trajectory{
             coevo::Integrate(game->game, Profile(game->game, x0, len), cfg)},
         out);
  });
}

coevo_status coevo_trajectory_load(const char* path, coevo_trajectory** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    Emit(new coevo_trajectory{coevo::io::LoadTrajectory(path)}, out);
  });
}

coevo_status coevo_trajectory_save(const coevo_trajectory* traj, const char* path,
                                   const char* header) {
  return Guard([&] {
    Require(traj && path, "null argument");
    coevo::io::WriteFile(path,
                         coevo::io::SerializeTrajectory(traj->traj, Header(header)));
  });
}

size_t coevo_trajectory_samples(const coevo_trajectory* traj) {
  return traj ? traj->traj.size() : 0;
}

size_t coevo_trajectory_dimension(const coevo_trajectory* traj) {
  return traj ? traj->traj.layout().dim() : 0;
}

coevo_status coevo_trajectory_sample(const coevo_trajectory* traj, size_t k,
                                     double* t, double* x) {
  return Guard([&] {
    Require(traj, "null trajectory");
    Require(k < traj->traj.size(), "sample index out of range");
    if (t) *t = traj->traj.time(k);
    if (x) {
      const auto s = traj->traj.sample(k);
      std::copy(s.begin(), s.end(), x);
    }
  });
}

void coevo_trajectory_free(coevo_trajectory* traj) { delete traj; }

coevo_status coevo_analyze_write(const coevo_game* game,
                                 const coevo_trajectory* traj,
                                 const double* x_star, size_t len,
                                 double epsilon, double transient,
                                 const char* out_dir, const char* header) {
  return Guard([&] {
    Require(game && traj && out_dir, "null argument");
    const coevo::StrategyProfile ref =
        x_star ? Profile(game->game, x_star, len)
               : coevo::ComputeNash(game->game).profile;
    coevo::AnalysisOptions opts;
    opts.epsilon = epsilon;
    opts.transient = transient;
    const coevo::AnalysisReport rep = coevo::Analyze(game->game, ref, traj->traj, opts);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
      throw coevo::Error(coevo::ErrorKind::kIo, "cannot create directory '" +
                                                    std::string(out_dir) + "'");
    const std::filesystem::path dir(out_dir);
    const std::string h = Header(header);
    namespace io = coevo::io;
    io::WriteFile((dir / "phi.csv").string(), io::SerializeSeries(rep.phi, h));
    io::WriteFile((dir / "kl.csv").string(), io::SerializeSeries(rep.kl, h));
    io::WriteFile((dir / "timeavg.csv").string(), io::SerializeSeries(rep.time_avg, h));
    io::WriteFile((dir / "timeavg_utility.csv").string(),
                  io::SerializeSeries(rep.time_avg_utility, h));
    io::WriteFile((dir / "regret.csv").string(), io::SerializeSeries(rep.regret, h));
    std::string rec = io::SerializeRecurrence(rep.recurrence, h);
    for (const auto& note : rep.notes) rec += "note = " + note + "\n";
    io::WriteFile((dir / "recurrence.txt").string(), rec);
  });
}

coevo_status coevo_section_write(const coevo_trajectory* traj,
                                 const double* normal, size_t len, double offset,
                                 const char* path, const char* header,
                                 size_t* crossings) {
  return Guard([&] {
    Require(traj && normal && path, "null argument");
    const auto c = coevo::PoincareSection(
        traj->traj, std::span<const double>(normal, len), offset);
    coevo::io::WriteFile(
        path, coevo::io::SerializeSection(c, traj->traj.layout(), Header(header)));
    if (crossings) *crossings = c.size();
  });
}

}  // extern "C"
