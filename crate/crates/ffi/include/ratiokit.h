#ifndef RATIOKIT_H
#define RATIOKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `mode` values accepted by [`rk_spacing_ratios`].
 */
#define RK_MODE_SLIDING 0

#define RK_MODE_STRIDED 1

/**
 * Status codes; the nonzero values match the CLI exit codes.
 */
typedef enum RkStatus {
  RK_STATUS_OK = 0,
  RK_STATUS_USAGE = 2,
  RK_STATUS_DATA = 3,
  RK_STATUS_NUMERICAL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  RK_STATUS_INTERNAL = 5,
} RkStatus;

/**
 * Opaque result of a fit.
 */
typedef struct RkFit RkFit;

/**
 * Opaque experiment report.
 */
typedef struct RkReport RkReport;

/**
 * Opaque normalized ratio surmise.
 */
typedef struct RkSurmise RkSurmise;

/**
 * Fixed-size view of one order of a report.
 */
typedef struct RkOrderSummary {
  size_t k;
  /**
   * -1 when the source has no symmetry class.
   */
  int64_t predicted_beta_prime;
  double beta_fit;
  double ks_stat;
  double ks_p;
  double mean_r;
  size_t n;
  bool at_boundary;
} RkOrderSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *rk_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rk_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum RkStatus rk_predicted_beta_prime(uint32_t beta, uint32_t k, uint32_t *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum RkStatus rk_surmise_new(double beta_eff, struct RkSurmise **out);

/**
 * # Safety
 * `h` must come from [`rk_surmise_new`] and not have been freed.
 */
void rk_surmise_free(struct RkSurmise *h);

/**
 * # Safety
 * `h` must be a live surmise handle and `out` valid for writes.
 */
enum RkStatus rk_surmise_pdf(const struct RkSurmise *h, double r, double *out);

/**
 * # Safety
 * `h` must be a live surmise handle and `out` valid for writes.
 */
enum RkStatus rk_surmise_cdf(const struct RkSurmise *h, double r, double *out);

/**
 * # Safety
 * `h` must be a live surmise handle and `out` valid for writes.
 */
enum RkStatus rk_surmise_mean(const struct RkSurmise *h, double *out);

/**
 * Computes k-th order spacing ratios of `n` sorted levels into `out`.
 * `out_len` receives the number of ratios; when it exceeds `out_cap`
 * nothing is written and `RK_STATUS_USAGE` is returned, so callers can
 * query the size with `out = NULL, out_cap = 0`.
 *
 * # Safety
 * `levels` must point to `n` readable doubles, `out` to `out_cap` writable
 * doubles (or be NULL when `out_cap` is 0), and `out_len` must be valid.
 */
enum RkStatus rk_spacing_ratios(const double *levels,
                                size_t n,
                                size_t k,
                                uint32_t mode,
                                double *out,
                                size_t out_cap,
                                size_t *out_len);

/**
 * Fits the effective index on the grid `lo, lo + step, ..., hi`.
 *
 * # Safety
 * `values` must point to `n` readable doubles and `out` be valid for writes.
 */
enum RkStatus rk_fit(const double *values,
                     size_t n,
                     double lo,
                     double hi,
                     double step,
                     struct RkFit **out);

/**
 * # Safety
 * `h` must come from [`rk_fit`] and not have been freed.
 */
void rk_fit_free(struct RkFit *h);

/**
 * # Safety
 * `h` must be a live fit handle.
 */
double rk_fit_beta(const struct RkFit *h);

/**
 * # Safety
 * `h` must be a live fit handle.
 */
double rk_fit_mean(const struct RkFit *h);

/**
 * # Safety
 * `h` must be a live fit handle; `stat` and `p` valid for writes.
 */
enum RkStatus rk_fit_ks(const struct RkFit *h, double *stat, double *p);

/**
 * Number of grid points in the distance curve.
 *
 * # Safety
 * `h` must be a live fit handle.
 */
size_t rk_fit_curve_len(const struct RkFit *h);

/**
 * Copies up to `cap` points of the distance curve; returns the count copied.
 *
 * # Safety
 * `h` must be a live fit handle; `betas` and `distances` must each hold `cap` doubles.
 */
size_t rk_fit_curve(const struct RkFit *h, double *betas, double *distances, size_t cap);

/**
 * Runs an experiment described by a JSON config (the `config` object of a report).
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` valid for writes.
 */
enum RkStatus rk_experiment_run(const char *config_json, struct RkReport **out);

/**
 * Parses a JSON report.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum RkStatus rk_report_from_json(const char *json, struct RkReport **out);

/**
 * # Safety
 * `h` must come from this library and not have been freed.
 */
void rk_report_free(struct RkReport *h);

/**
 * JSON encoding of the report; free with [`rk_string_free`]. NULL on failure.
 *
 * # Safety
 * `h` must be a live report handle.
 */
char *rk_report_to_json(const struct RkReport *h);

/**
 * # Safety
 * `h` must be a live report handle.
 */
size_t rk_report_order_count(const struct RkReport *h);

/**
 * # Safety
 * `h` must be a live report handle and `out` valid for writes.
 */
enum RkStatus rk_report_order(const struct RkReport *h, size_t index, struct RkOrderSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RATIOKIT_H */
