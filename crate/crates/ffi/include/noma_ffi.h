#ifndef NOMA_FFI_H
#define NOMA_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NomaStatus {
  NOMA_STATUS_OK = 0,
  NOMA_STATUS_NULL_POINTER = 1,
  NOMA_STATUS_INVALID_UTF8 = 2,
  NOMA_STATUS_DOMAIN = 3,
  NOMA_STATUS_CONFIG = 4,
  NOMA_STATUS_DIMENSION = 5,
  NOMA_STATUS_UNKNOWN_SCHEME = 6,
  NOMA_STATUS_IO = 7,
  NOMA_STATUS_OUT_OF_RANGE = 8,
  NOMA_STATUS_PANIC = 9,
} NomaStatus;

/**
 * Experiment configuration.
 */
typedef struct NomaConfig NomaConfig;

/**
 * Per-scheme throughput summaries of one simulation run.
 */
typedef struct NomaResults NomaResults;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *noma_last_error(void);

/**
 * Default configuration. Never NULL.
 */
struct NomaConfig *noma_config_default(void);

/**
 * Parses a TOML configuration.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NomaStatus noma_config_from_toml(const char *text, struct NomaConfig **out);

/**
 * # Safety
 * `cfg` must come from this library and not be used afterwards. NULL is
 * ignored.
 */
void noma_config_free(struct NomaConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum NomaStatus noma_config_set_trials(struct NomaConfig *cfg, uint64_t trials);

/**
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum NomaStatus noma_config_set_seed(struct NomaConfig *cfg, uint64_t seed);

/**
 * `0` uses one worker per core.
 *
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum NomaStatus noma_config_set_workers(struct NomaConfig *cfg, uint32_t workers);

/**
 * Comma-separated scheme names; an empty list enables every scheme.
 *
 * # Safety
 * `cfg` must be a live configuration handle and `list` NUL-terminated.
 */
enum NomaStatus noma_config_set_schemes(struct NomaConfig *cfg, const char *list);

/**
 * Runs the Monte Carlo experiment described by `cfg`.
 *
 * # Safety
 * `cfg` must be a live configuration handle and `out` a valid pointer.
 */
enum NomaStatus noma_simulate(const struct NomaConfig *cfg, struct NomaResults **out);

/**
 * # Safety
 * `res` must come from [`noma_simulate`] and not be used afterwards. NULL
 * is ignored.
 */
void noma_results_free(struct NomaResults *res);

/**
 * Number of schemes in `res`; 0 for NULL.
 *
 * # Safety
 * `res` must be NULL or a live results handle.
 */
size_t noma_results_scheme_count(const struct NomaResults *res);

/**
 * Trials dropped because a scheme failed on them; 0 for NULL.
 *
 * # Safety
 * `res` must be NULL or a live results handle.
 */
size_t noma_results_skipped(const struct NomaResults *res);

/**
 * Name of scheme `index`, or NULL when out of range. Owned by `res`.
 *
 * # Safety
 * `res` must be NULL or a live results handle.
 */
const char *noma_results_scheme_name(const struct NomaResults *res, size_t index);

/**
 * Mean, 5th percentile and sample count of the user throughput
 * (bits/s/Hz) of scheme `index`. Output pointers may be NULL.
 *
 * # Safety
 * `res` must be a live results handle; non-NULL outputs must be writable.
 */
enum NomaStatus noma_results_summary(const struct NomaResults *res,
                                     size_t index,
                                     double *mean,
                                     double *p05,
                                     size_t *samples);

/**
 * `½·log2(1 + snr)`; NaN for negative or non-finite input.
 */
double noma_capacity(double snr);

/**
 * NOMA-JT rates of two center users and one common edge user.
 * `gains` holds `g11, g12, g21, g22, ge1, ge2`.
 *
 * # Safety
 * `gains` must point to 6 readable doubles and the outputs must be
 * writable.
 */
enum NomaStatus noma_jt(const double *gains,
                        double p_center,
                        double p_edge,
                        double *r1,
                        double *r2,
                        double *r_edge);

/**
 * Users supported by `scheme` with `antennas` per node. Writes `-1` for a
 * scheme that only has an upper bound.
 *
 * # Safety
 * `scheme` must be NUL-terminated and `out` writable.
 */
enum NomaStatus noma_supported_users(const char *scheme,
                                     uint32_t antennas,
                                     bool jt_4k,
                                     int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOMA_FFI_H */
