#ifndef SPECTRAL_BOUNDS_H
#define SPECTRAL_BOUNDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_INVALID_UTF8 = 2,
  SB_STATUS_PARSE = 3,
  SB_STATUS_INVALID_PARAMETER = 4,
  SB_STATUS_DOMAIN = 5,
  SB_STATUS_DIMENSION_MISMATCH = 6,
  SB_STATUS_INVALID_POLYGON = 7,
  SB_STATUS_INCOMPLETE = 8,
  SB_STATUS_TOLERANCE_NOT_MET = 9,
  SB_STATUS_BRACKET_FAILURE = 10,
  SB_STATUS_NON_CONVERGENCE = 11,
  SB_STATUS_IO = 12,
  SB_STATUS_OUT_OF_RANGE = 13,
  SB_STATUS_PANIC = 14,
} SbStatus;

typedef enum SbTraceMethod {
  SB_TRACE_METHOD_BEREZIN = 0,
  SB_TRACE_METHOD_IMPROVED = 1,
  SB_TRACE_METHOD_INTEGRAL = 2,
  SB_TRACE_METHOD_CURVATURE = 3,
  SB_TRACE_METHOD_PRODUCT = 4,
} SbTraceMethod;

typedef enum SbEigenMethod {
  SB_EIGEN_METHOD_LI_YAU = 0,
  SB_EIGEN_METHOD_KRAHN_SZEGO = 1,
  SB_EIGEN_METHOD_IMPLICIT = 2,
  SB_EIGEN_METHOD_EXPLICIT2D = 3,
} SbEigenMethod;

/**
 * A parsed domain with its metrics and, where available, its exact spectrum.
 */
typedef struct SbDomain SbDomain;

/**
 * A finite list of eigenvalues, complete up to its cutoff.
 */
typedef struct SbSpectrum SbSpectrum;

typedef struct SbMetrics {
  size_t dim;
  double volume;
  double surface;
  double inradius;
  double width;
  /**
   * Lower bound on the principal curvature radii, or NaN for domains with corners.
   */
  double curvature_radius;
} SbMetrics;

typedef struct SbConstants {
  double lower;
  double upper;
  double quad_error;
} SbConstants;

typedef struct SbTraceBound {
  double value;
  double leading_term;
  double remainder_term;
  /**
   * True when Λ lies below the first eigenvalue and the bound is zero.
   */
  bool zero_region;
} SbTraceBound;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a domain description such as `box:1,2`, `disk:1`, `ball3:1`,
 * `polygon:path.json` or `product:(box:1,1)x(box:2)`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` writable.
 */
enum SbStatus sb_domain_parse(const char *spec, struct SbDomain **out);

/**
 * # Safety
 * `d` must come from [`sb_domain_parse`] and not be used afterwards. Null is ignored.
 */
void sb_domain_free(struct SbDomain *d);

/**
 * # Safety
 * `d` must be a live domain handle and `out` writable.
 */
enum SbStatus sb_domain_metrics(const struct SbDomain *d, struct SbMetrics *out);

/**
 * The semiclassical constant L_{σ,n}.
 *
 * # Safety
 * `out` must be writable.
 */
enum SbStatus sb_lieb_thirring(double sigma, size_t dim, double *out);

/**
 * Rigorous lower and upper bounds on the boundary constant C(σ, n).
 *
 * # Safety
 * `out` must be writable.
 */
enum SbStatus sb_c_bounds(double sigma, size_t dim, struct SbConstants *out);

/**
 * Upper bound on the Riesz mean Σ(Λ − λ_k)₊^σ.
 *
 * `c` is only read by the improved and product methods. The curvature method
 * uses the domain's own curvature radius.
 *
 * # Safety
 * `d` must be a live domain handle and `out` writable.
 */
enum SbStatus sb_trace_bound(const struct SbDomain *d,
                             enum SbTraceMethod method,
                             double sigma,
                             double lambda,
                             double c,
                             struct SbTraceBound *out);

/**
 * Lower bound on the k-th eigenvalue (k ≥ 1).
 *
 * `alpha` and `c` are only read by the implicit and explicit methods.
 *
 * # Safety
 * `d` must be a live domain handle and `out` writable.
 */
enum SbStatus sb_eigen_bound(const struct SbDomain *d,
                             enum SbEigenMethod method,
                             size_t k,
                             double alpha,
                             double c,
                             double *out);

/**
 * Exact eigenvalues up to `lambda_max`, for boxes, balls and their products.
 *
 * # Safety
 * `d` must be a live domain handle and `out` writable.
 */
enum SbStatus sb_domain_spectrum(const struct SbDomain *d,
                                 double lambda_max,
                                 struct SbSpectrum **out);

/**
 * Number of eigenvalues (with multiplicity), or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live spectrum handle.
 */
size_t sb_spectrum_len(const struct SbSpectrum *s);

/**
 * The eigenvalue at zero-based position `index`, in increasing order.
 *
 * # Safety
 * `s` must be a live spectrum handle and `out` writable.
 */
enum SbStatus sb_spectrum_get(const struct SbSpectrum *s, size_t index, double *out);

/**
 * # Safety
 * `s` must be a live spectrum handle and `out` writable.
 */
enum SbStatus sb_spectrum_riesz_mean(const struct SbSpectrum *s,
                                     double sigma,
                                     double lambda,
                                     double *out);

/**
 * # Safety
 * `s` must come from [`sb_domain_spectrum`] and not be used afterwards. Null is ignored.
 */
void sb_spectrum_free(struct SbSpectrum *s);

/**
 * Message for the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_BOUNDS_H */
