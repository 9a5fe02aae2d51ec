#ifndef SWKB_H
#define SWKB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum SwkbStatus {
  SWKB_STATUS_OK = 0,
  SWKB_STATUS_NULL_POINTER = 1,
  SWKB_STATUS_INVALID_STRING = 2,
  SWKB_STATUS_UNKNOWN_ENTRY = 3,
  SWKB_STATUS_PARAMETER = 4,
  SWKB_STATUS_DOMAIN = 5,
  SWKB_STATUS_RANGE = 6,
  SWKB_STATUS_SPECTRUM_EXHAUSTED = 7,
  SWKB_STATUS_CLASSIFICATION = 8,
  SWKB_STATUS_NO_CLASSICAL_MOTION = 9,
  SWKB_STATUS_NUMERIC = 10,
  SWKB_STATUS_CONVERGENCE = 11,
  SWKB_STATUS_CONFIGURATION = 12,
  SWKB_STATUS_TRUNCATION = 13,
  SWKB_STATUS_PANIC = 14,
} SwkbStatus;

/**
 * Selects the curve under the action integral.
 */
typedef enum SwkbTarget {
  /**
   * `V1 = W^2 - gamma W'`
   */
  SWKB_TARGET_V1 = 0,
  /**
   * `W^2`
   */
  SWKB_TARGET_WSQ = 1,
} SwkbTarget;

/**
 * Opaque catalog entry.
 */
typedef struct SwkbEntry SwkbEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *swkb_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *swkb_version(void);

/**
 * Create an entry by catalog name with `n_params` overrides given as
 * parallel arrays of keys and values (both may be null when `n_params` is 0).
 *
 * # Safety
 * `name` and every key must be nul-terminated strings; `keys` and `values`
 * must hold `n_params` elements; `out` must be writable.
 */
enum SwkbStatus swkb_entry_new(const char *name,
                               const char *const *keys,
                               const double *values,
                               size_t n_params,
                               double hbar,
                               double mass,
                               struct SwkbEntry **out);

/**
 * Release an entry; null is ignored.
 *
 * # Safety
 * `entry` must come from [`swkb_entry_new`] and not be used afterwards.
 */
void swkb_entry_free(struct SwkbEntry *entry);

/**
 * Number of bound states, or 0 when the bound spectrum is infinite.
 *
 * # Safety
 * `entry` must be a live handle and `out` writable.
 */
enum SwkbStatus swkb_bound_state_count(const struct SwkbEntry *entry, size_t *out);

/**
 * Exact level `E_n` of `V1`.
 *
 * # Safety
 * `entry` must be a live handle and `out` writable.
 */
enum SwkbStatus swkb_spectrum_level(const struct SwkbEntry *entry, size_t n, double *out);

/**
 * Counting function `F(E)`.
 *
 * # Safety
 * `entry` must be a live handle and `out` writable.
 */
enum SwkbStatus swkb_counting_value(const struct SwkbEntry *entry, double energy, double *out);

/**
 * Smooth density `dF/dE`.
 *
 * # Safety
 * `entry` must be a live handle and `out` writable.
 */
enum SwkbStatus swkb_counting_derivative(const struct SwkbEntry *entry, double energy, double *out);

/**
 * Classical action `2 sqrt(2m) int sqrt(E - curve) dx`; `abs_error` may be null.
 *
 * # Safety
 * `entry` must be a live handle, `value` writable, `abs_error` null or writable.
 */
enum SwkbStatus swkb_action_integral(const struct SwkbEntry *entry,
                                     double energy,
                                     enum SwkbTarget target,
                                     double *value,
                                     double *abs_error);

/**
 * Maslov constant from the closed form.
 *
 * # Safety
 * `entry` must be a live handle and `out` writable.
 */
enum SwkbStatus swkb_eta_closed(const struct SwkbEntry *entry, double *out);

/**
 * Maslov constant `S1(0)/h` by quadrature.
 *
 * # Safety
 * `entry` must be a live handle and `out` writable.
 */
enum SwkbStatus swkb_eta_from_action(const struct SwkbEntry *entry, double *out);

/**
 * Lowest `n_levels` finite-difference eigenvalues of `V1` on a Dirichlet
 * box of `points` interior nodes, written to `out[0..n_levels]`.
 *
 * # Safety
 * `entry` must be a live handle and `out` must hold `n_levels` doubles.
 */
enum SwkbStatus swkb_fd_spectrum(const struct SwkbEntry *entry,
                                 double x_lo,
                                 double x_hi,
                                 size_t points,
                                 size_t n_levels,
                                 double *out);

/**
 * Smoothed trace-formula density on `samples` points of `[e_min, e_max]`.
 * Any of the output arrays may be null; non-null ones must hold `samples`
 * doubles.
 *
 * # Safety
 * `entry` must be a live handle; output arrays as described.
 */
enum SwkbStatus swkb_density_curve(const struct SwkbEntry *entry,
                                   double e_min,
                                   double e_max,
                                   size_t samples,
                                   double sigma,
                                   size_t k_max,
                                   double *energies,
                                   double *smooth,
                                   double *oscillating,
                                   double *total);

/**
 * Run one named check. `passed` and `worst_residual` may be null.
 *
 * # Safety
 * `entry` must be a live handle and `kind` a nul-terminated string.
 */
enum SwkbStatus swkb_run_check(const struct SwkbEntry *entry,
                               const char *kind,
                               double tol,
                               uint64_t seed,
                               bool *passed,
                               double *worst_residual);

/**
 * JSON array of reports for every check with default tolerances, on one
 * entry or, when `entry` is null, on the whole default catalog. The string
 * must be released with [`swkb_string_free`].
 *
 * # Safety
 * `entry` must be null or a live handle; `out` must be writable.
 */
enum SwkbStatus swkb_verify_json(const struct SwkbEntry *entry, uint64_t seed, char **out);

/**
 * Release a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void swkb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWKB_H */
