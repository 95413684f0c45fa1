/* C API for the oscibayes numerical laboratory. */

#ifndef OSCIBAYES_H
#define OSCIBAYES_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  /**
   * Success.
   */
  OSCB_STATUS_OK = 0,
  /**
   * A search finished without finding a qualifying result.
   */
  OSCB_STATUS_NOT_FOUND = 1,
  /**
   * Invalid parameters (bad family constants, out-of-support points, ...).
   */
  OSCB_STATUS_VALIDATION = 2,
  /**
   * Quadrature non-convergence or a degenerate posterior.
   */
  OSCB_STATUS_NUMERICAL = 3,
  /**
   * A required pointer argument was null.
   */
  OSCB_STATUS_NULL_ARGUMENT = 4,
} OscbStatus;

/**
 * Prior selector for `oscb_posterior_build`. `p1`/`p2` hold the two
 * hyperparameters in declaration order; unused slots are ignored.
 */
typedef enum {
  /**
   * Uniform on [p1, p2].
   */
  OSCB_PRIOR_TRUNCATED_UNIFORM = 0,
  /**
   * Rate p1.
   */
  OSCB_PRIOR_EXPONENTIAL = 1,
  /**
   * Tail exponent p1, scale p2.
   */
  OSCB_PRIOR_PARETO_TAIL = 2,
  /**
   * Tail log-power p1, scale p2.
   */
  OSCB_PRIOR_LOG_POLY_TAIL = 3,
} OscbPrior;

/**
 * Opaque family handle.
 */
typedef struct OscbFamily OscbFamily;

/**
 * Opaque posterior handle.
 */
typedef struct OscbPosterior OscbPosterior;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The cosine family on [0, 1].
 */
OscbFamily *oscb_family_cosine(void);

/**
 * The extended cosine family on [0, lambda]; returns null when the
 * structural constants are invalid (lambda outside [1, 2], mu outside
 * (0, 1/lambda]).
 */
OscbFamily *oscb_family_extended_cosine(double lambda, double mu);

/**
 * The uniform family on [0, theta].
 */
OscbFamily *oscb_family_uniform_scale(void);

/**
 * Release a family handle. Null is ignored.
 *
 * # Safety
 * `family` must be a pointer returned by one of the `oscb_family_*`
 * constructors and must not be used afterwards.
 */
void oscb_family_free(OscbFamily *family);

/**
 * Density of the family at `x`.
 *
 * # Safety
 * `family` must be a live family handle; `out` must point to writable
 * memory for one f64.
 */
OscbStatus oscb_density(const OscbFamily *family, double theta, double x, double *out);

/**
 * CDF of the family at `x`.
 *
 * # Safety
 * As for [`oscb_density`].
 */
OscbStatus oscb_cdf(const OscbFamily *family, double theta, double x, double *out);

/**
 * Maximum of the cosine density over [0, 1]: 2 theta / (theta + sin theta).
 *
 * # Safety
 * `out` must point to writable memory for one f64.
 */
OscbStatus oscb_sup_density(double theta, double *out);

/**
 * Fill `buf` with `n` deterministic draws from the family (inverse-CDF
 * sampling of the stream identified by `seed`).
 *
 * # Safety
 * `family` must be a live handle and `buf` must point to at least `n`
 * writable f64 slots.
 */
OscbStatus oscb_sample(const OscbFamily *family,
                       double theta,
                       uintptr_t n,
                       uint64_t seed,
                       double *buf);

/**
 * Hellinger distance between two model points.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
OscbStatus oscb_hellinger(const OscbFamily *family_a,
                          double theta_a,
                          const OscbFamily *family_b,
                          double theta_b,
                          double *out);

/**
 * Kullback-Leibler divergence from the first model point to the second.
 *
 * # Safety
 * As for [`oscb_hellinger`].
 */
OscbStatus oscb_kl_divergence(const OscbFamily *family_a,
                              double theta_a,
                              const OscbFamily *family_b,
                              double theta_b,
                              double *out);

/**
 * Total variation distance between two model points.
 *
 * # Safety
 * As for [`oscb_hellinger`].
 */
OscbStatus oscb_total_variation(const OscbFamily *family_a,
                                double theta_a,
                                const OscbFamily *family_b,
                                double theta_b,
                                double *out);

/**
 * One-dimensional Levy metric between the two model CDFs.
 *
 * # Safety
 * As for [`oscb_hellinger`].
 */
OscbStatus oscb_levy_distance(const OscbFamily *family_a,
                              double theta_a,
                              const OscbFamily *family_b,
                              double theta_b,
                              double *out);

/**
 * Closed-form cross-correlation of two cosine densities.
 *
 * # Safety
 * `out` must be writable.
 */
OscbStatus oscb_cross_correlation(double theta, double theta_star, double *out);

/**
 * Number of intervals in the minimal decomposition of `{ f_a > f_b }`.
 *
 * # Safety
 * Both handles must be live; `out` must point to a writable u64.
 */
OscbStatus oscb_oscillation_count(const OscbFamily *family_a,
                                  double theta_a,
                                  const OscbFamily *family_b,
                                  double theta_b,
                                  uint64_t *out);

/**
 * Build a posterior over theta from `n` observations.
 *
 * # Safety
 * `family` must be live, `points` must hold `n` readable f64 values, and
 * `out` must point to a writable handle slot. On success the caller owns the
 * returned posterior and must release it with [`oscb_posterior_free`].
 */
OscbStatus oscb_posterior_build(const OscbFamily *family,
                                OscbPrior prior,
                                double p1,
                                double p2,
                                const double *points,
                                uintptr_t n,
                                double theta_max,
                                OscbPosterior **out);

/**
 * Posterior mass of `[lo, hi]`.
 *
 * # Safety
 * `posterior` must be a live posterior handle; `out` must be writable.
 */
OscbStatus oscb_posterior_mass(const OscbPosterior *posterior, double lo, double hi, double *out);

/**
 * Posterior mean of theta.
 *
 * # Safety
 * As for [`oscb_posterior_mass`].
 */
OscbStatus oscb_posterior_mean(const OscbPosterior *posterior, double *out);

/**
 * Posterior predictive density at `x`.
 *
 * # Safety
 * As for [`oscb_posterior_mass`].
 */
OscbStatus oscb_posterior_predictive(const OscbPosterior *posterior, double x, double *out);

/**
 * Log of the evidence integral over `[0, theta_max]`.
 *
 * # Safety
 * As for [`oscb_posterior_mass`].
 */
OscbStatus oscb_posterior_log_normalizer(const OscbPosterior *posterior, double *out);

/**
 * Release a posterior handle. Null is ignored.
 *
 * # Safety
 * `posterior` must come from [`oscb_posterior_build`] and must not be used
 * afterwards.
 */
void oscb_posterior_free(OscbPosterior *posterior);

/**
 * Restricted MLE of the cosine family over `[0, m]` for the given points.
 *
 * # Safety
 * `points` must hold `n` readable f64 values in [0, 1]; both out pointers
 * must be writable.
 */
OscbStatus oscb_restricted_mle(const double *points,
                               uintptr_t n,
                               double m,
                               double *out_theta,
                               double *out_log_lik);

/**
 * Integer scan for a simultaneous likelihood peak; returns `NotFound` (with
 * the best candidate written through the out pointers) when no integer below
 * `scan_bound` qualifies.
 *
 * # Safety
 * As for [`oscb_restricted_mle`].
 */
OscbStatus oscb_peak_search(const double *points,
                            uintptr_t n,
                            double delta,
                            uint64_t scan_bound,
                            double *out_theta,
                            double *out_min_density);

/**
 * `integral f_theta ln f_theta` over [0, 1] for the cosine family.
 *
 * # Safety
 * `out` must be writable.
 */
OscbStatus oscb_entropy_diagnostic(double theta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCIBAYES_H */
