/* C interface to the epdensity error-density estimators. */

#ifndef EPDENSITY_H
#define EPDENSITY_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  EP_STATUS_OK = 0,
  /**
   * A pointer argument was null or a length was zero/invalid.
   */
  EP_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Too few observations for the requested fit.
   */
  EP_STATUS_SAMPLE_TOO_SMALL = 2,
  /**
   * A predictor fell outside [0, 1].
   */
  EP_STATUS_PREDICTOR_OUT_OF_RANGE = 3,
  /**
   * A scalar argument fell outside the formula's domain.
   */
  EP_STATUS_DOMAIN_ERROR = 4,
  /**
   * Any other library error.
   */
  EP_STATUS_INTERNAL = 5,
} EpStatus;

/**
 * Opaque fitted estimate.
 */
typedef struct EpEstimate EpEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Short static description of a status code.
 */
const char *ep_status_message(EpStatus status);

/**
 * Fits the finite-support density estimator to `len` values in `sample`.
 *
 * # Safety
 * `sample` must point to `len` readable doubles and `out` must be a valid
 * pointer to receive the handle.
 */
EpStatus ep_fit_finite(const double *sample, uintptr_t len, EpEstimate **out);

/**
 * Fits the infinite-support density estimator to `len` values in `sample`.
 *
 * # Safety
 * Same contract as [`ep_fit_finite`].
 */
EpStatus ep_fit_infinite(const double *sample, uintptr_t len, EpEstimate **out);

/**
 * End-to-end plug-in estimate for errors supported on `[a, a + b]`.
 *
 * # Safety
 * `xs` and `ys` must each point to `n` readable doubles; `out` must be valid.
 */
EpStatus ep_estimate_finite(const double *xs,
                            const double *ys,
                            uintptr_t n,
                            double a,
                            double b,
                            EpEstimate **out);

/**
 * End-to-end plug-in estimate for errors supported on the real line.
 *
 * # Safety
 * Same contract as [`ep_estimate_finite`].
 */
EpStatus ep_estimate_infinite(const double *xs, const double *ys, uintptr_t n, EpEstimate **out);

/**
 * Benchmark fit on the full true error vector (finite support when
 * `infinite` is 0).
 *
 * # Safety
 * `errors` must point to `n` readable doubles; `out` must be valid.
 */
EpStatus ep_pinsker_oracle(const double *errors, uintptr_t n, int32_t infinite, EpEstimate **out);

/**
 * Evaluates the estimate at one point.
 *
 * # Safety
 * `estimate` must be a live handle; `out` must be valid.
 */
EpStatus ep_estimate_eval(const EpEstimate *estimate, double z, double *out);

/**
 * Evaluates the estimate on `len` points, writing into `out`.
 *
 * # Safety
 * `zs` and `out` must each point to `len` doubles; `estimate` must be live.
 */
EpStatus ep_estimate_eval_grid(const EpEstimate *estimate,
                               const double *zs,
                               uintptr_t len,
                               double *out);

/**
 * Number of shrinkage blocks in the fitted scheme.
 *
 * # Safety
 * `estimate` must be a live handle; `out` must be valid.
 */
EpStatus ep_estimate_block_count(const EpEstimate *estimate, uintptr_t *out);

/**
 * Copies the per-block shrinkage weights into `out` (length from
 * [`ep_estimate_block_count`]).
 *
 * # Safety
 * `out` must point to at least `len` writable doubles.
 */
EpStatus ep_estimate_weights(const EpEstimate *estimate, double *out, uintptr_t len);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `estimate` must be a handle from this library, released at most once.
 */
void ep_estimate_free(EpEstimate *estimate);

/**
 * Sharp Sobolev risk constant.
 *
 * # Safety
 * `out` must be valid.
 */
EpStatus ep_pinsker_constant(double alpha, double q, double *out);

/**
 * Sobolev normalizing factor.
 *
 * # Safety
 * `out` must be valid.
 */
EpStatus ep_sobolev_rate_factor(uintptr_t n, double alpha, double q, double *out);

/**
 * Analytic-class normalizing factor.
 *
 * # Safety
 * `out` must be valid.
 */
EpStatus ep_analytic_rate_factor(uintptr_t n, double gamma, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPDENSITY_H */
