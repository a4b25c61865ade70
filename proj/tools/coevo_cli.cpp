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

// Command-line front end. Talks to the library exclusively through the C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coevo/coevo.h"

namespace {

enum ExitCode { kSuccess = 0, kValidationFailure = 2, kSolverFailure = 3, kIoFailure = 4 };

struct GameDeleter {
  void operator()(coevo_game* g) const { coevo_game_free(g); }
};
struct SystemDeleter {
  void operator()(coevo_system* s) const { coevo_system_free(s); }
};
struct TrajectoryDeleter {
  void operator()(coevo_trajectory* t) const { coevo_trajectory_free(t); }
};
using GamePtr = std::unique_ptr<coevo_game, GameDeleter>;
using SystemPtr = std::unique_ptr<coevo_system, SystemDeleter>;
using TrajectoryPtr = std::unique_ptr<coevo_trajectory, TrajectoryDeleter>;

int ExitFor(coevo_status s) {
  switch (s) {
    case COEVO_OK:
      return kSuccess;
    case COEVO_ERR_INFEASIBLE:
    case COEVO_ERR_UNBOUNDED:
    case COEVO_ERR_SOLVER:
    case COEVO_ERR_INTERNAL:
      return kSolverFailure;
    case COEVO_ERR_IO:
      return kIoFailure;
    default:
      return kValidationFailure;
  }
}

// Prints the library's message and returns the exit code for `s`.
int Report(coevo_status s, const std::string& context) {
  std::fprintf(stderr, "coevo %s: %s: %s\n", context.c_str(),
               coevo_status_name(s), coevo_last_error());
  return ExitFor(s);
}

std::string Real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> ParseList(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    while (end && *end == ' ') ++end;
    if (cell.empty() || !end || *end != '\0')
      throw CLI::ValidationError(flag, "'" + cell + "' is not a number");
    out.push_back(v);
  }
  return out;
}

struct Options {
  std::string input;
  std::string second_input;
  std::string out;
  double horizon = 100.0;
  double step = 0.01;
  std::size_t record_every = 1;
  std::string method = "rk4_x";
  double epsilon = 0.05;
  double transient = 10.0;
  std::string normal;
  double offset = 0.0;
  std::string mu = "0.8";
  std::size_t n = 3;
  std::size_t clusters = 1;
  std::string x0;
  std::string x_star;
  std::uint64_t seed = 0;
  std::string preset;
};

// Leading comment line of every output file.
std::string Header(const std::string& command, const Options& o,
                   const std::string& params) {
  std::string h = std::string("coevo ") + coevo_version() + " " + command;
  if (!params.empty()) h += " " + params;
  h += " seed=" + std::to_string(o.seed);
  return h;
}

int RunValidate(const Options& o) {
  coevo_game* raw = nullptr;
  if (auto s = coevo_game_load(o.input.c_str(), &raw)) return Report(s, "validate");
  GamePtr game(raw);
  size_t count = 0;
  std::vector<char> buf(1 << 16);
  if (auto s = coevo_game_validate(game.get(), &count, buf.data(), buf.size()))
    return Report(s, "validate");
  if (count) {
    std::printf("valid = false\nviolations = %zu\n%s", count, buf.data());
    return kValidationFailure;
  }
  int zero_sum = 0;
  double residual = 0.0;
  if (auto s = coevo_game_verify_zero_sum(game.get(), &zero_sum, &residual))
    return Report(s, "validate");
  std::printf("valid = true\nrescaled_zero_sum = %s\nresidual = %s\n",
              zero_sum ? "true" : "false", Real(residual).c_str());
  return zero_sum ? kSuccess : kValidationFailure;
}

int RunNash(const Options& o) {
  coevo_game* raw = nullptr;
  if (auto s = coevo_game_load(o.input.c_str(), &raw)) return Report(s, "nash");
  GamePtr game(raw);
  const std::string out = o.out.empty() ? "nash.txt" : o.out;
  if (auto s = coevo_nash_write(game.get(), out.c_str(),
                                Header("nash", o, "input=" + o.input).c_str())) {
    return Report(s, "nash");
  }
  return kSuccess;
}

int RunReduce(const Options& o) {
  coevo_system* raw = nullptr;
  if (auto s = coevo_system_load(o.input.c_str(), &raw)) return Report(s, "reduce");
  SystemPtr system(raw);
  coevo_game* graw = nullptr;
  int zero_sum = 0;
  double residual = 0.0;
  if (auto s = coevo_reduce(system.get(), &graw, &zero_sum, &residual))
    return Report(s, "reduce");
  GamePtr game(graw);
  const std::string out = o.out.empty() ? "game.json" : o.out;
  const std::string params = "input=" + o.input +
                             " rescaled_zero_sum=" + (zero_sum ? "true" : "false") +
                             " residual=" + Real(residual);
  if (auto s = coevo_game_save(game.get(), out.c_str(),
                               Header("reduce", o, params).c_str()))
    return Report(s, "reduce");
  std::printf("rescaled_zero_sum = %s\nresidual = %s\n",
              zero_sum ? "true" : "false", Real(residual).c_str());
  return kSuccess;
}

int RunSimulate(const Options& o) {
  coevo_game* raw = nullptr;
  if (auto s = coevo_game_load(o.input.c_str(), &raw)) return Report(s, "simulate");
  GamePtr game(raw);
  const size_t dim = coevo_game_dimension(game.get());
  std::vector<double> x0;
  std::string x0_param;
  if (!o.x0.empty()) {
    x0 = ParseList(o.x0, "--x0");
    x0_param = "x0=" + o.x0;
  } else {
    x0.resize(dim);
    if (auto s = coevo_random_interior(game.get(), o.seed, x0.data(), x0.size()))
      return Report(s, "simulate");
    x0_param = "x0=random";
  }
  coevo_method method = COEVO_RK4_X;
  if (o.method == "rk4_z") {
    method = COEVO_RK4_Z;
  } else if (o.method != "rk4_x") {
    std::fprintf(stderr, "coevo simulate: unknown method '%s'\n", o.method.c_str());
    return kValidationFailure;
  }
  coevo_trajectory* traw = nullptr;
  if (auto s = coevo_simulate(game.get(), x0.data(), x0.size(), method, o.step,
                              o.horizon, o.record_every, &traw))
    return Report(s, "simulate");
  TrajectoryPtr traj(traw);
  const std::string params = "input=" + o.input + " method=" + o.method +
                             " step=" + Real(o.step) + " horizon=" +
                             Real(o.horizon) + " record_every=" +
                             std::to_string(o.record_every) + " " + x0_param;
  const std::string out = o.out.empty() ? "trajectory.csv" : o.out;
  if (auto s = coevo_trajectory_save(traj.get(), out.c_str(),
                                     Header("simulate", o, params).c_str()))
    return Report(s, "simulate");
  return kSuccess;
}

int RunAnalyze(const Options& o) {
  coevo_game* raw = nullptr;
  if (auto s = coevo_game_load(o.input.c_str(), &raw)) return Report(s, "analyze");
  GamePtr game(raw);
  coevo_trajectory* traw = nullptr;
  if (auto s = coevo_trajectory_load(o.second_input.c_str(), &traw))
    return Report(s, "analyze");
  TrajectoryPtr traj(traw);
  std::vector<double> x_star;
  if (!o.x_star.empty()) x_star = ParseList(o.x_star, "--x-star");
  const std::string out = o.out.empty() ? "analysis" : o.out;
  const std::string params = "game=" + o.input + " trajectory=" + o.second_input +
                             " epsilon=" + Real(o.epsilon) +
                             " transient=" + Real(o.transient) +
                             " x_star=" + (o.x_star.empty() ? "nash" : o.x_star);
  if (auto s = coevo_analyze_write(game.get(), traj.get(),
                                   x_star.empty() ? nullptr : x_star.data(),
                                   x_star.size(), o.epsilon, o.transient,
                                   out.c_str(), Header("analyze", o, params).c_str()))
    return Report(s, "analyze");
  return kSuccess;
}

int RunSection(const Options& o) {
  coevo_trajectory* traw = nullptr;
  if (auto s = coevo_trajectory_load(o.input.c_str(), &traw)) return Report(s, "section");
  TrajectoryPtr traj(traw);
  const std::vector<double> normal = ParseList(o.normal, "--normal");
  const std::string out = o.out.empty() ? "section.csv" : o.out;
  const std::string params = "trajectory=" + o.input + " normal=" + o.normal +
                             " offset=" + Real(o.offset);
  size_t crossings = 0;
  if (auto s = coevo_section_write(traj.get(), normal.data(), normal.size(),
                                   o.offset, out.c_str(),
                                   Header("section", o, params).c_str(), &crossings))
    return Report(s, "section");
  std::printf("crossings = %zu\n", crossings);
  return kSuccess;
}

int RunPreset(const Options& o) {
  const std::string header_params = "name=" + o.preset + " n=" + std::to_string(o.n) +
                                    " mu=" + o.mu +
                                    (o.preset == "butterfly"
                                         ? " clusters=" + std::to_string(o.clusters)
                                         : std::string());
  const std::string header = Header("preset", o, header_params);
  const std::vector<double> mus = ParseList(o.mu, "--mu");
  if (o.preset == "rps-system") {
    if (mus.size() != 1) throw CLI::ValidationError("--mu", "expects one value");
    coevo_system* raw = nullptr;
    if (auto s = coevo_preset_rps_system(o.n, mus[0], &raw)) return Report(s, "preset");
    SystemPtr system(raw);
    const std::string out = o.out.empty() ? "system.json" : o.out;
    if (auto s = coevo_system_save(system.get(), out.c_str(), header.c_str()))
      return Report(s, "preset");
    return kSuccess;
  }
  coevo_game* raw = nullptr;
  coevo_status s = COEVO_OK;
  if (o.preset == "rps-reduced") {
    if (mus.size() != 1) throw CLI::ValidationError("--mu", "expects one value");
    s = coevo_preset_rps_reduced(o.n, mus[0], &raw);
  } else if (o.preset == "chain") {
    s = coevo_preset_chain(mus.data(), mus.size(), o.n, &raw);
  } else if (o.preset == "butterfly") {
    s = coevo_preset_butterfly(o.clusters, &raw);
  } else {
    std::fprintf(stderr, "coevo preset: unknown preset '%s'\n", o.preset.c_str());
    return kValidationFailure;
  }
  if (s) return Report(s, "preset");
  GamePtr game(raw);
  const std::string out = o.out.empty() ? "game.json" : o.out;
  if (auto st = coevo_game_save(game.get(), out.c_str(), header.c_str()))
    return Report(st, "preset");
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicator dynamics on rescaled zero-sum polymatrix games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", coevo_version());
  Options o;

  auto common_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed recorded in output headers and used "
                                      "for random initial conditions");
  };

  auto* validate = app.add_subcommand("validate", "Check game structure and the rescaled zero-sum property");
  validate->add_option("game", o.input, "Game file")->required();
  common_seed(validate);

  auto* nash = app.add_subcommand("nash", "Compute a Nash equilibrium by linear programming");
  nash->add_option("game", o.input, "Game file")->required();
  nash->add_option("--out", o.out, "Output file (default nash.txt)");
  common_seed(nash);

  auto* reduce = app.add_subcommand("reduce", "Reduce a time-evolving system to a polymatrix game");
  reduce->add_option("system", o.input, "System file")->required();
  reduce->add_option("--out", o.out, "Output game file (default game.json)");
  common_seed(reduce);

  auto* simulate = app.add_subcommand("simulate", "Integrate replicator dynamics");
  simulate->add_option("game", o.input, "Game file")->required();
  simulate->add_option("--horizon", o.horizon, "Final time T");
  simulate->add_option("--step", o.step, "Step size h");
  simulate->add_option("--record-every", o.record_every, "Record every k-th step");
  simulate->add_option("--method", o.method, "rk4_x or rk4_z");
  simulate->add_option("--x0", o.x0, "Initial profile, comma separated, player-major");
  simulate->add_option("--out", o.out, "Trajectory CSV (default trajectory.csv)");
  common_seed(simulate);

  auto* analyze = app.add_subcommand("analyze", "Conservation, time-average, regret and recurrence diagnostics");
  analyze->add_option("game", o.input, "Game file")->required();
  analyze->add_option("trajectory", o.second_input, "Trajectory CSV")->required();
  analyze->add_option("--epsilon", o.epsilon, "Recurrence radius (sup-norm)");
  analyze->add_option("--transient", o.transient, "Recurrence transient cutoff");
  analyze->add_option("--x-star", o.x_star, "Reference profile (default: LP equilibrium)");
  analyze->add_option("--out", o.out, "Output directory (default analysis)");
  common_seed(analyze);

  auto* section = app.add_subcommand("section", "Poincare section crossings of a trajectory");
  section->add_option("trajectory", o.input, "Trajectory CSV")->required();
  section->add_option("--normal", o.normal, "Hyperplane normal over flattened coordinates")
      ->required();
  section->add_option("--offset", o.offset, "Hyperplane offset");
  section->add_option("--out", o.out, "Output CSV (default section.csv)");
  common_seed(section);

  auto* preset = app.add_subcommand("preset", "Emit a preset game or system");
  preset->add_option("name", o.preset, "rps-reduced | rps-system | chain | butterfly")
      ->required();
  preset->add_option("--n", o.n, "Actions per player");
  preset->add_option("--mu", o.mu, "mu (chain: comma separated list)");
  preset->add_option("--clusters", o.clusters, "Butterfly clusters");
  preset->add_option("--out", o.out, "Output file");
  common_seed(preset);

  try {
    app.parse(argc, argv);
    if (*validate) return RunValidate(o);
    if (*nash) return RunNash(o);
    if (*reduce) return RunReduce(o);
    if (*simulate) return RunSimulate(o);
    if (*analyze) return RunAnalyze(o);
    if (*section) return RunSection(o);
    if (*preset) return RunPreset(o);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationFailure;
  }
  return kValidationFailure;
}
