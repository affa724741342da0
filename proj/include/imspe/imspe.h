/*
 * imspe - Copyright 2026 imspe authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the IMSPE evaluation and design-search library.
 *
 * Objects are opaque handles created by *_create / returned through out
 * parameters and released with the matching *_destroy. Every fallible call
 * returns an imspe_status; on failure imspe_last_error() describes the most
 * recent error on the calling thread. Arrays returned by accessors are owned
 * by the handle and stay valid until it is destroyed.
 */

#ifndef IMSPE_IMSPE_H
#define IMSPE_IMSPE_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#  ifdef IMSPE_BUILDING_LIBRARY
#    define IMSPE_API __declspec(dllexport)
#  else
#    define IMSPE_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define IMSPE_API __attribute__((visibility("default")))
#else
#  define IMSPE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum imspe_status {
  IMSPE_OK = 0,
  IMSPE_ERR_INVALID_ARGUMENT = 1,
  IMSPE_ERR_INVALID_HYPERPARAMETER = 2,
  IMSPE_ERR_OUT_OF_DOMAIN = 3,
  IMSPE_ERR_SINGULAR_DESIGN = 4,
  IMSPE_ERR_ORACLE_DIVERGENCE = 5,
  IMSPE_ERR_NO_CONVERGENCE = 6,
  IMSPE_ERR_INTERNAL = 99
} imspe_status;

typedef enum imspe_kernel {
  IMSPE_KERNEL_EXPONENTIAL = 0,
  IMSPE_KERNEL_GAUSSIAN = 1,
  IMSPE_KERNEL_MATERN32 = 2,
  IMSPE_KERNEL_MATERN52 = 3
} imspe_kernel;

typedef enum imspe_method {
  IMSPE_METHOD_CLOSED_FORM = 0,
  IMSPE_METHOD_QUADRATURE = 1
} imspe_method;

typedef struct imspe_family imspe_family;
typedef struct imspe_evaluation imspe_evaluation;
typedef struct imspe_search_result imspe_search_result;

typedef struct imspe_search_config {
  int starts;
  double feasibility_tolerance;
  double optimality_tolerance;
  double fd_step;
  int max_iterations;
  uint64_t seed;
  int threads;
} imspe_search_config;

IMSPE_API const char *imspe_version(void);
IMSPE_API const char *imspe_last_error(void);
IMSPE_API const char *imspe_status_name(imspe_status status);

/* Accepts "exponential", "gaussian", "matern32", "matern52". */
IMSPE_API imspe_status imspe_kernel_from_name(const char *name,
                                              imspe_kernel *out);
IMSPE_API const char *imspe_kernel_name(imspe_kernel kernel);

/* ---- covariance family ------------------------------------------------ */

/* One theta per input dimension; dim >= 1. */
IMSPE_API imspe_status imspe_family_create(imspe_kernel kernel,
                                           const double *theta, size_t dim,
                                           imspe_family **out);
IMSPE_API void imspe_family_destroy(imspe_family *family);
IMSPE_API size_t imspe_family_dim(const imspe_family *family);

/* x and y hold imspe_family_dim() coordinates each. */
IMSPE_API imspe_status imspe_correlation(const imspe_family *family,
                                         const double *x, const double *y,
                                         double *out);

/* ---- one-dimensional integrals ---------------------------------------- */

/* 1/2 int_{-1}^{1} rho(|a-x|) dx */
IMSPE_API imspe_status imspe_single_integral(imspe_kernel kernel,
                                             double theta, double a,
                                             imspe_method method,
                                             double *out);

/* 1/2 int_{-1}^{1} rho(|a-x|) rho(|b-x|) dx */
IMSPE_API imspe_status imspe_pair_integral(imspe_kernel kernel, double theta,
                                           double a, double b,
                                           imspe_method method, double *out);

/* ---- IMSPE evaluation ------------------------------------------------- */

/* points: n rows of imspe_family_dim() coordinates, row-major. */
IMSPE_API imspe_status imspe_evaluate(const imspe_family *family,
                                      const double *points, size_t n,
                                      imspe_evaluation **out);
IMSPE_API void imspe_evaluation_destroy(imspe_evaluation *eval);
IMSPE_API double imspe_evaluation_value(const imspe_evaluation *eval);
IMSPE_API size_t imspe_evaluation_size(const imspe_evaluation *eval);
/* n*n row-major correlation matrix R. */
IMSPE_API const double *
imspe_evaluation_correlation(const imspe_evaluation *eval);
/* n*n row-major pair-integral matrix W. */
IMSPE_API const double *imspe_evaluation_pair(const imspe_evaluation *eval);
/* length-n single-integral vector v. */
IMSPE_API const double *imspe_evaluation_single(const imspe_evaluation *eval);
IMSPE_API double imspe_evaluation_rcond(const imspe_evaluation *eval);

/* Direct quadrature of the pointwise MSPE profile (dim == 1 only). */
IMSPE_API imspe_status imspe_evaluate_quadrature(const imspe_family *family,
                                                 const double *points,
                                                 size_t n, double *out);

/* Last singular-design condition estimate on this thread, 0 if none. */
IMSPE_API double imspe_last_rcond(void);

/* ---- design search ---------------------------------------------------- */

IMSPE_API void imspe_search_config_default(imspe_search_config *config);

/* gradient receives n*dim values. */
IMSPE_API imspe_status imspe_fd_gradient(const imspe_family *family,
                                         const double *points, size_t n,
                                         double fd_step, double *gradient);

/* Single projected quasi-Newton descent. design_out receives n*dim values. */
IMSPE_API imspe_status imspe_local_search(const imspe_family *family,
                                          const double *start, size_t n,
                                          const imspe_search_config *config,
                                          double *design_out,
                                          double *imspe_out,
                                          int *converged_out,
                                          int *iterations_out);

/* Returns IMSPE_ERR_NO_CONVERGENCE (and still fills *out) when no start
 * converged; the result then has no best design. */
IMSPE_API imspe_status imspe_search(const imspe_family *family, size_t n,
                                    const imspe_search_config *config,
                                    imspe_search_result **out);
IMSPE_API void imspe_search_result_destroy(imspe_search_result *result);
IMSPE_API int imspe_search_result_converged(const imspe_search_result *r);
IMSPE_API size_t imspe_search_result_points(const imspe_search_result *r);
IMSPE_API size_t imspe_search_result_dim(const imspe_search_result *r);
/* NULL when no start converged. */
IMSPE_API const double *
imspe_search_result_best_design(const imspe_search_result *r);
IMSPE_API double imspe_search_result_best_imspe(const imspe_search_result *r);
IMSPE_API int imspe_search_result_starts_run(const imspe_search_result *r);
IMSPE_API int
imspe_search_result_starts_converged(const imspe_search_result *r);
IMSPE_API int
imspe_search_result_iterations_total(const imspe_search_result *r);
IMSPE_API size_t imspe_search_result_minima_count(const imspe_search_result *r);
IMSPE_API const double *
imspe_search_result_minimum_design(const imspe_search_result *r, size_t i);
IMSPE_API double
imspe_search_result_minimum_imspe(const imspe_search_result *r, size_t i);
IMSPE_API size_t
imspe_search_result_minimum_hits(const imspe_search_result *r, size_t i);

#ifdef __cplusplus
}
#endif

#endif /* IMSPE_IMSPE_H */
