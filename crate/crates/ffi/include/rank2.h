#ifndef RANK2_H
#define RANK2_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of every fallible entry point.
 */
typedef enum Rank2Status {
  RANK2_STATUS_OK = 0,
  RANK2_STATUS_INVALID_ARGUMENT = 1,
  RANK2_STATUS_IDENTITY_FAILURE = 2,
  RANK2_STATUS_NUMERIC_ABORT = 3,
  RANK2_STATUS_INTERNAL = 4,
} Rank2Status;

/**
 * Opaque simulator handle.
 */
typedef struct Rank2Sim Rank2Sim;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Borrowed pointer,
 * valid until the next failing call on the same thread.
 */
const char *rank2_last_error(void);

/**
 * Releases a string returned through an out-parameter.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library, or null.
 */
void rank2_string_free(char *s);

/**
 * Constructs the spectral curve of a family instance; writes curve +
 * verification JSON to `out_json`.
 *
 * # Safety
 * `family` and `params_json` are NUL-terminated C strings; `out_json`
 * is a valid writable pointer.
 */
enum Rank2Status rank2_curve_json(const char *family,
                                  uint32_t genus,
                                  const char *params_json,
                                  char **out_json);

/**
 * Runs the full pair verification for a family instance.
 *
 * # Safety
 * See `rank2_curve_json`.
 */
enum Rank2Status rank2_pair_verify_json(const char *family,
                                        uint32_t genus,
                                        const char *params_json,
                                        char **out_json);

/**
 * Jet-ring certification of the Lax form of the evolution system.
 *
 * # Safety
 * `out_json` is a valid writable pointer.
 */
enum Rank2Status rank2_lax_check_json(char **out_json);

/**
 * Traveling-wave solver; all numeric arguments are "p/q" strings.
 *
 * # Safety
 * All pointers must be valid; strings NUL-terminated.
 */
enum Rank2Status rank2_traveling_wave_json(const char *b,
                                           const char *g2,
                                           const char *g1,
                                           const char *g0,
                                           char **out_json);

/**
 * Creates a simulator from the JSON config used by the CLI.
 *
 * # Safety
 * `config_json` is a NUL-terminated C string; `out` is writable.
 */
enum Rank2Status rank2_sim_new(const char *config_json, struct Rank2Sim **out);

/**
 * Advances the simulation by `steps` steps of size `dt`.
 *
 * # Safety
 * `sim` must be a live handle from `rank2_sim_new`.
 */
enum Rank2Status rank2_sim_step(struct Rank2Sim *sim, double dt, uint32_t steps);

/**
 * Current simulation time; NaN for a null handle.
 *
 * # Safety
 * `sim` must be a live handle or null.
 */
double rank2_sim_time(const struct Rank2Sim *sim);

/**
 * Number of grid points.
 *
 * # Safety
 * `sim` must be a live handle or null.
 */
uint32_t rank2_sim_grid_len(const struct Rank2Sim *sim);

/**
 * Copies a field into `out` (length `len` must equal the grid length):
 * field 0 = x, 1 = V, 2 = W, 3+j = q_j.
 *
 * # Safety
 * `sim` live handle; `out` points to at least `len` doubles.
 */
enum Rank2Status rank2_sim_get_field(const struct Rank2Sim *sim,
                                     uint32_t field,
                                     double *out,
                                     uint32_t len);

/**
 * Destroys a simulator handle.
 *
 * # Safety
 * `sim` must come from `rank2_sim_new` and not be used afterwards.
 */
void rank2_sim_free(struct Rank2Sim *sim);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RANK2_H */
