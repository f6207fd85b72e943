#ifndef EPD_H
#define EPD_H

/* Generated by cbindgen from the epd-ffi crate; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Model family selector for evaluation, sampling, and fitting.
 */
typedef enum EpdFamily {
  /**
   * Two-parameter family on (0, 1]; params are [alpha0, alpha1].
   */
  EPD_FAMILY_EPD2 = 0,
  /**
   * Generalized polynomial-order family; params are the r coefficients.
   */
  EPD_FAMILY_GEPD = 1,
  /**
   * Complementary family; params are [alpha0, alpha1].
   */
  EPD_FAMILY_CEPD = 2,
  /**
   * Two-shape baseline; params are [a, b].
   */
  EPD_FAMILY_KUMARASWAMY = 3,
} EpdFamily;

/**
 * Outcome of a call. Zero is success; everything else is a failure whose
 * text is available from `epd_last_error_message`.
 */
typedef enum EpdStatus {
  /**
   * The call succeeded and all outputs are valid.
   */
  EPD_STATUS_OK = 0,
  /**
   * A pointer was null, a buffer too small, or a value outside its
   * documented domain (parameters, probabilities, support points).
   */
  EPD_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The requested quantity does not exist for this input, e.g. a
   * likelihood that is unbounded on the given data.
   */
  EPD_STATUS_UNDEFINED = 2,
  /**
   * An iterative numeric routine (quadrature, root finding,
   * optimization) failed to reach its accuracy target.
   */
  EPD_STATUS_NUMERIC = 3,
  /**
   * An unexpected internal failure; the library state is still sound.
   */
  EPD_STATUS_INTERNAL = 4,
} EpdStatus;

/**
 * Opaque immutable dataset of observations in (0, 1].
 */
typedef struct EpdDataset EpdDataset;

/**
 * Opaque maximum-likelihood fit: estimates, uncertainty, and the
 * penalized comparison criteria.
 */
typedef struct EpdFitResult EpdFitResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message for the most recent failure on this thread into
 * `buf` (NUL-terminated, truncated to `cap` bytes including the NUL) and
 * returns the full message length in bytes, excluding the NUL. Passing a
 * null `buf` or zero `cap` just queries the length. The message is only
 * meaningful directly after a call returned non-zero.
 */
size_t epd_last_error_message(char *buf, size_t cap);

/**
 * Density at `t` in (0, 1].
 *
 * # Safety
 * `params` must point to `n_params` readable doubles and `out` to one
 * writable double.
 */
enum EpdStatus epd_pdf(enum EpdFamily family,
                       const double *params,
                       size_t n_params,
                       double t,
                       double *out);

/**
 * Distribution function at `t` in (0, 1].
 *
 * # Safety
 * `params` must point to `n_params` readable doubles and `out` to one
 * writable double.
 */
enum EpdStatus epd_cdf(enum EpdFamily family,
                       const double *params,
                       size_t n_params,
                       double t,
                       double *out);

/**
 * Quantile transform at probability `p` in (0, 1]. For the polynomial and
 * complementary families this is the exact inverse used by the sampler.
 *
 * # Safety
 * `params` must point to `n_params` readable doubles and `out` to one
 * writable double.
 */
enum EpdStatus epd_quantile(enum EpdFamily family,
                            const double *params,
                            size_t n_params,
                            double p,
                            double *out);

/**
 * Raw moment E[T^k] for integer order `k >= 1`: closed form where one
 * exists (the two-parameter and complementary families), adaptive
 * quadrature otherwise.
 *
 * # Safety
 * `params` must point to `n_params` readable doubles and `out` to one
 * writable double.
 */
enum EpdStatus epd_moment(enum EpdFamily family,
                          const double *params,
                          size_t n_params,
                          uint32_t k,
                          double *out);

/**
 * Fills `out` with `n` draws from the family. The stream is fully
 * determined by `seed`: the same arguments always produce the same bytes.
 *
 * # Safety
 * `params` must point to `n_params` readable doubles and `out` to `n`
 * writable doubles.
 */
enum EpdStatus epd_sample(enum EpdFamily family,
                          const double *params,
                          size_t n_params,
                          size_t n,
                          uint64_t seed,
                          double *out);

/**
 * Builds a dataset from `n` values, validating every observation lies in
 * (0, 1]. On success `*out` owns the copy; release it with
 * `epd_dataset_free`.
 *
 * # Safety
 * `values` must point to `n` readable doubles and `out` to a writable
 * pointer slot.
 */
enum EpdStatus epd_dataset_new(const double *values, size_t n, struct EpdDataset **out);

/**
 * Number of observations, or 0 for a null handle.
 *
 * # Safety
 * `data` must be null or a live handle from `epd_dataset_new`.
 */
size_t epd_dataset_len(const struct EpdDataset *data);

/**
 * Releases a dataset handle. Null is ignored; freeing twice is undefined.
 *
 * # Safety
 * `data` must be null or an unreleased handle from `epd_dataset_new`.
 */
void epd_dataset_free(struct EpdDataset *data);

/**
 * Fits `family` to `data` by maximum likelihood. `order` is the
 * coefficient count for the polynomial family and ignored otherwise. On
 * success `*out` owns the result; release it with `epd_fit_free`.
 *
 * Returns `EPD_STATUS_UNDEFINED` when the likelihood is unbounded for the
 * whole family on this data (the baseline with observations equal to 1).
 *
 * # Safety
 * `data` must be a live handle from `epd_dataset_new` and `out` a
 * writable pointer slot.
 */
enum EpdStatus epd_fit(enum EpdFamily family,
                       uint32_t order,
                       const struct EpdDataset *data,
                       struct EpdFitResult **out);

/**
 * Releases a fit handle. Null is ignored; freeing twice is undefined.
 *
 * # Safety
 * `fit` must be null or an unreleased handle from `epd_fit`.
 */
void epd_fit_free(struct EpdFitResult *fit);

/**
 * Number of fitted parameters, or 0 for a null handle.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
size_t epd_fit_num_params(const struct EpdFitResult *fit);

/**
 * Copies the parameter estimates into `out` (capacity `cap` doubles;
 * `epd_fit_num_params` gives the required length).
 *
 * # Safety
 * `fit` must be a live handle from `epd_fit` and `out` must point to
 * `cap` writable doubles.
 */
enum EpdStatus epd_fit_estimates(const struct EpdFitResult *fit, double *out, size_t cap);

/**
 * True when asymptotic standard errors are available. They are withheld
 * when an estimate sits on a constraint boundary or the information
 * matrix is singular.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
bool epd_fit_has_std_errors(const struct EpdFitResult *fit);

/**
 * Copies the per-parameter standard errors into `out`. Fails with
 * `EPD_STATUS_UNDEFINED` when `epd_fit_has_std_errors` is false.
 *
 * # Safety
 * `fit` must be a live handle from `epd_fit` and `out` must point to
 * `cap` writable doubles.
 */
enum EpdStatus epd_fit_std_errors(const struct EpdFitResult *fit, double *out, size_t cap);

/**
 * Per-parameter flags marking estimates pinned at a constraint boundary.
 *
 * # Safety
 * `fit` must be a live handle from `epd_fit` and `out` must point to
 * `cap` writable booleans.
 */
enum EpdStatus epd_fit_boundary_flags(const struct EpdFitResult *fit, bool *out, size_t cap);

/**
 * Maximized log likelihood, or NaN for a null handle.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
double epd_fit_loglik(const struct EpdFitResult *fit);

/**
 * Akaike criterion (smaller is better), or NaN for a null handle.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
double epd_fit_aic(const struct EpdFitResult *fit);

/**
 * Bayesian criterion (smaller is better), or NaN for a null handle.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
double epd_fit_bic(const struct EpdFitResult *fit);

/**
 * Small-sample corrected Akaike criterion. Fails with
 * `EPD_STATUS_UNDEFINED` when the sample is too small for the correction
 * (n <= k + 1).
 *
 * # Safety
 * `fit` must be a live handle from `epd_fit` and `out` must point to one
 * writable double.
 */
enum EpdStatus epd_fit_aicc(const struct EpdFitResult *fit, double *out);

/**
 * Whether the optimizer met its convergence tolerances.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
bool epd_fit_converged(const struct EpdFitResult *fit);

/**
 * Number of observations the fit used, or 0 for a null handle.
 *
 * # Safety
 * `fit` must be null or a live handle from `epd_fit`.
 */
size_t epd_fit_sample_size(const struct EpdFitResult *fit);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* EPD_H */
