/*
 * Copyright 2026 The coevo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the coevo library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible call
 * returns a coevo_status; the message for the most recent failure on the
 * calling thread is available from coevo_last_error(). */

#ifndef COEVO_COEVO_H_
#define COEVO_COEVO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define COEVO_API __declspec(dllexport)
#else
#define COEVO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coevo_status {
  COEVO_OK = 0,
  COEVO_ERR_INVALID_ARGUMENT = 1,
  COEVO_ERR_DIMENSION = 2,
  COEVO_ERR_BOUNDARY = 3,
  COEVO_ERR_INVALID_GAME = 4,
  COEVO_ERR_NOT_RESCALED_ZERO_SUM = 5,
  COEVO_ERR_INFEASIBLE = 6,
  COEVO_ERR_UNBOUNDED = 7,
  COEVO_ERR_SOLVER = 8,
  COEVO_ERR_NON_FINITE = 9,
  COEVO_ERR_PARSE = 10,
  COEVO_ERR_IO = 11,
  COEVO_ERR_INTERNAL = 12
} coevo_status;

typedef enum coevo_method { COEVO_RK4_X = 0, COEVO_RK4_Z = 1 } coevo_method;

typedef struct coevo_game coevo_game;
typedef struct coevo_system coevo_system;
typedef struct coevo_trajectory coevo_trajectory;

COEVO_API const char* coevo_version(void);
COEVO_API const char* coevo_last_error(void);
COEVO_API const char* coevo_status_name(coevo_status status);

/* Games. */
COEVO_API coevo_status coevo_game_load(const char* path, coevo_game** out);
COEVO_API coevo_status coevo_game_parse(const char* text, coevo_game** out);
/* `header` becomes the leading comment line; may be NULL. */
COEVO_API coevo_status coevo_game_save(const coevo_game* game, const char* path,
                                       const char* header);
COEVO_API void coevo_game_free(coevo_game* game);

COEVO_API coevo_status coevo_preset_rps_reduced(size_t n, double mu,
                                                coevo_game** out);
COEVO_API coevo_status coevo_preset_chain(const double* mus, size_t count,
                                          size_t n, coevo_game** out);
COEVO_API coevo_status coevo_preset_butterfly(size_t clusters,
                                              coevo_game** out);

COEVO_API size_t coevo_game_players(const coevo_game* game);
/* Total number of strategy coordinates. */
COEVO_API size_t coevo_game_dimension(const coevo_game* game);
COEVO_API size_t coevo_game_actions(const coevo_game* game, size_t player);

/* Writes the structural violations, newline separated, into buf (truncated
 * to buflen, always NUL terminated when buflen > 0). */
COEVO_API coevo_status coevo_game_validate(const coevo_game* game,
                                           size_t* violation_count, char* buf,
                                           size_t buflen);
COEVO_API coevo_status coevo_game_verify_zero_sum(const coevo_game* game,
                                                  int* is_zero_sum,
                                                  double* residual);

/* x and the outputs are flat, player-major, of length coevo_game_dimension
 * (utilities: one entry per player). */
COEVO_API coevo_status coevo_game_utilities(const coevo_game* game,
                                            const double* x, size_t len,
                                            double* utilities);
COEVO_API coevo_status coevo_replicator_field(const coevo_game* game,
                                              const double* x, size_t len,
                                              double* out);
COEVO_API coevo_status coevo_divergence_estimate(const coevo_game* game,
                                                 const double* z, size_t len,
                                                 double h_fd, double* out);

/* Uniformly distributed interior profile from a seeded generator. */
COEVO_API coevo_status coevo_random_interior(const coevo_game* game,
                                             uint64_t seed, double* x,
                                             size_t len);

/* Equilibrium. profile has coevo_game_dimension entries, values one per
 * player; either may be NULL. */
COEVO_API coevo_status coevo_nash(const coevo_game* game, double* profile,
                                  double* values, double* objective,
                                  int* interior, double* margin);
COEVO_API coevo_status coevo_nash_write(const coevo_game* game,
                                        const char* path, const char* header);

/* Time-evolving systems. */
COEVO_API coevo_status coevo_system_load(const char* path, coevo_system** out);
COEVO_API coevo_status coevo_system_save(const coevo_system* system,
                                         const char* path, const char* header);
COEVO_API coevo_status coevo_preset_rps_system(size_t n, double mu,
                                               coevo_system** out);
COEVO_API void coevo_system_free(coevo_system* system);
COEVO_API coevo_status coevo_reduce(const coevo_system* system,
                                    coevo_game** out, int* is_zero_sum,
                                    double* residual);

/* Dynamics. */
COEVO_API coevo_status coevo_simulate(const coevo_game* game, const double* x0,
                                      size_t len, coevo_method method,
                                      double step, double horizon,
                                      size_t record_every,
                                      coevo_trajectory** out);
COEVO_API coevo_status coevo_trajectory_load(const char* path,
                                             coevo_trajectory** out);
COEVO_API coevo_status coevo_trajectory_save(const coevo_trajectory* traj,
                                             const char* path,
                                             const char* header);
COEVO_API size_t coevo_trajectory_samples(const coevo_trajectory* traj);
COEVO_API size_t coevo_trajectory_dimension(const coevo_trajectory* traj);
/* Copies sample k: time into *t, state into x (dimension entries). */
COEVO_API coevo_status coevo_trajectory_sample(const coevo_trajectory* traj,
                                               size_t k, double* t, double* x);
COEVO_API void coevo_trajectory_free(coevo_trajectory* traj);

/* Analysis. Writes phi.csv, kl.csv, timeavg.csv, timeavg_utility.csv,
 * regret.csv and recurrence.txt into out_dir, using the LP equilibrium as
 * the reference profile unless x_star is non-NULL. */
COEVO_API coevo_status coevo_analyze_write(const coevo_game* game,
                                           const coevo_trajectory* traj,
                                           const double* x_star, size_t len,
                                           double epsilon, double transient,
                                           const char* out_dir,
                                           const char* header);
COEVO_API coevo_status coevo_section_write(const coevo_trajectory* traj,
                                           const double* normal, size_t len,
                                           double offset, const char* path,
                                           const char* header,
                                           size_t* crossings);

#ifdef __cplusplus
}
#endif

#endif /* COEVO_COEVO_H_ */
