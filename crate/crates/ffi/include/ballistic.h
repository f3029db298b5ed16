#ifndef BALLISTIC_H
#define BALLISTIC_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum BallisticStatus {
  BALLISTIC_STATUS_OK = 0,
  BALLISTIC_STATUS_NULL_POINTER = 1,
  BALLISTIC_STATUS_INVALID_PARAMETER = 2,
  BALLISTIC_STATUS_DOMAIN = 3,
  BALLISTIC_STATUS_STABILITY = 4,
  BALLISTIC_STATUS_NORM_DRIFT = 5,
  BALLISTIC_STATUS_SOLVER = 6,
  BALLISTIC_STATUS_CONFIG = 7,
  BALLISTIC_STATUS_IO = 8,
  BALLISTIC_STATUS_INVALID_UTF8 = 9,
  BALLISTIC_STATUS_NOT_FOUND = 10,
  BALLISTIC_STATUS_BUFFER_TOO_SMALL = 11,
  BALLISTIC_STATUS_PANIC = 12,
} BallisticStatus;

/**
 * Outputs of a scenario run.
 */
typedef struct BallisticRun BallisticRun;

/**
 * Parsed scenario.
 */
typedef struct BallisticScenario BallisticScenario;

/**
 * Two-slit system.
 */
typedef struct BallisticSystem BallisticSystem;

/**
 * Physical constants; `{1, 1}` gives natural units.
 */
typedef struct BallisticParams {
  double hbar;
  double mass;
} BallisticParams;

/**
 * One Gaussian slit source.
 */
typedef struct BallisticSlit {
  double center;
  double sigma0;
  double drift;
} BallisticSlit;

/**
 * Lattice description. Fields have `nt + 1` rows of `nx` values.
 */
typedef struct BallisticGrid {
  double x_min;
  double x_max;
  size_t nx;
  double t_max;
  size_t nt;
} BallisticGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ballistic_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ballistic_version(void);

enum BallisticStatus ballistic_kink_time(struct BallisticParams params,
                                         struct BallisticSlit slit,
                                         double *out_value);

enum BallisticStatus ballistic_sigma_at(struct BallisticParams params,
                                        struct BallisticSlit slit,
                                        double t,
                                        double *out_value);

enum BallisticStatus ballistic_uncertainty_norm(struct BallisticParams params,
                                                struct BallisticSlit slit,
                                                double *out_value);

/**
 * Single-slit density `P(x, t)`.
 */
enum BallisticStatus ballistic_density(struct BallisticParams params,
                                       struct BallisticSlit slit,
                                       double x,
                                       double t,
                                       double *out_value);

/**
 * Single-slit total velocity `v + u0^2 t xi / sigma^2`.
 */
enum BallisticStatus ballistic_total_velocity(struct BallisticParams params,
                                              struct BallisticSlit slit,
                                              double x,
                                              double t,
                                              double *out_value);

/**
 * Builds a two-slit system. `total_shift` is ramped linearly over
 * `[t1, t2]`; pass `0, 0, 0` for no shifter.
 */
enum BallisticStatus ballistic_system_new(struct BallisticParams params,
                                          struct BallisticSlit slit1,
                                          struct BallisticSlit slit2,
                                          double total_shift,
                                          double t1,
                                          double t2,
                                          struct BallisticSystem **out_system);

void ballistic_system_free(struct BallisticSystem *system);

/**
 * Closes slit 1 or 2.
 */
enum BallisticStatus ballistic_system_block_slit(struct BallisticSystem *system, uint32_t slit);

/**
 * Toggles the drift-energy contribution to the phase difference.
 */
enum BallisticStatus ballistic_system_set_energy_term(struct BallisticSystem *system, bool on);

enum BallisticStatus ballistic_system_density(const struct BallisticSystem *system,
                                              double x,
                                              double t,
                                              double *out_value);

enum BallisticStatus ballistic_system_current(const struct BallisticSystem *system,
                                              double x,
                                              double t,
                                              double *out_value);

enum BallisticStatus ballistic_system_entangling_current(const struct BallisticSystem *system,
                                                         double x,
                                                         double t,
                                                         double *out_value);

enum BallisticStatus ballistic_system_phase_difference(const struct BallisticSystem *system,
                                                       double x,
                                                       double t,
                                                       double *out_value);

/**
 * `J / P`; fails with `DOMAIN` where the density vanishes.
 */
enum BallisticStatus ballistic_system_field_velocity(const struct BallisticSystem *system,
                                                     double x,
                                                     double t,
                                                     double *out_value);

/**
 * Parses scenario text or a preset name, then applies `count` overrides of
 * the form `section.key=value` (`overrides` may be NULL when `count` is 0).
 */
enum BallisticStatus ballistic_scenario_parse(const char *config,
                                              const char *const *overrides,
                                              size_t count,
                                              struct BallisticScenario **out_scenario);

void ballistic_scenario_free(struct BallisticScenario *scenario);

/**
 * Serialized scenario; release with [`ballistic_string_free`].
 */
enum BallisticStatus ballistic_scenario_to_text(const struct BallisticScenario *scenario,
                                                char **out_text);

void ballistic_string_free(char *s);

enum BallisticStatus ballistic_scenario_grid(const struct BallisticScenario *scenario,
                                             struct BallisticGrid *out_grid);

enum BallisticStatus ballistic_scenario_run(const struct BallisticScenario *scenario,
                                            struct BallisticRun **out_run);

void ballistic_run_free(struct BallisticRun *run);

enum BallisticStatus ballistic_run_grid(const struct BallisticRun *run,
                                        struct BallisticGrid *out_grid);

/**
 * Copies field `name` (e.g. "density") into `buffer` in row-major order,
 * `t` outermost. `length` must be at least `nx * (nt + 1)`.
 */
enum BallisticStatus ballistic_run_copy_field(const struct BallisticRun *run,
                                              const char *name,
                                              double *buffer,
                                              size_t length);

/**
 * Number of trajectories (0 when none were requested) and of output times.
 */
enum BallisticStatus ballistic_run_trajectory_shape(const struct BallisticRun *run,
                                                    size_t *out_count,
                                                    size_t *out_times);

/**
 * Copies trajectory `index` into `buffer` and reports how many samples were
 * written; a truncated path has fewer samples than output times.
 */
enum BallisticStatus ballistic_run_copy_trajectory(const struct BallisticRun *run,
                                                   size_t index,
                                                   double *buffer,
                                                   size_t length,
                                                   size_t *out_written);

/**
 * Writes the run's CSV and/or PGM files into `directory`.
 */
enum BallisticStatus ballistic_run_write(const struct BallisticRun *run,
                                         const char *directory,
                                         bool csv,
                                         bool pgm);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLISTIC_H */
