//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "imspe/imspe.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "imspe/closed_form.hpp"
#include "imspe/design_search.hpp"
#include "imspe/error.hpp"
#include "imspe/imspe_core.hpp"
#include "imspe/quadrature.hpp"
#include "imspe/version.hpp"

struct imspe_family {
  imspe::CovarianceFamily impl;
};

struct imspe_evaluation {
  double value;
  std::size_t n;
  std::vector<double> correlation, pair, single;
  double rcond;
};

struct imspe_search_result {
  imspe::SearchResult impl;
  std::size_t n, d;
};

namespace {
  thread_local std::string last_error;
  thread_local double last_rcond = 0;

  imspe_status to_status(imspe::ErrorCode code) {
    switch (code) {
    case imspe::ErrorCode::kInvalidArgument:
      return IMSPE_ERR_INVALID_ARGUMENT;
    case imspe::ErrorCode::kInvalidHyperparameter:
      return IMSPE_ERR_INVALID_HYPERPARAMETER;
    case imspe::ErrorCode::kOutOfDomain:
      return IMSPE_ERR_OUT_OF_DOMAIN;
    case imspe::ErrorCode::kSingularDesign:
      return IMSPE_ERR_SINGULAR_DESIGN;
    case imspe::ErrorCode::kOracleDivergence:
      return IMSPE_ERR_ORACLE_DIVERGENCE;
    case imspe::ErrorCode::kNoConvergence:
      return IMSPE_ERR_NO_CONVERGENCE;
    }
    return IMSPE_ERR_INTERNAL;
  }

  template <class F>
  imspe_status guarded(F &&f) {
    try {
      last_error.clear();
      return f();
    } catch (const imspe::SingularDesignError &e) {
      last_error = e.what();
      last_rcond = e.rcond();
      return IMSPE_ERR_SINGULAR_DESIGN;
    } catch (const imspe::Error &e) {
      last_error = e.what();
      return to_status(e.code());
    } catch (const std::bad_alloc &) {
      last_error = "out of memory";
    } catch (const std::exception &e) {
      last_error = e.what();
    } catch (...) {
      last_error = "unknown error";
    }
    return IMSPE_ERR_INTERNAL;
  }

  imspe_status null_argument(const char *what) {
    last_error = std::string("null argument: ") + what;
    return IMSPE_ERR_INVALID_ARGUMENT;
  }

  imspe::KernelKind to_kind(imspe_kernel kernel) {
    switch (kernel) {
    case IMSPE_KERNEL_EXPONENTIAL:
      return imspe::KernelKind::kExponential;
    case IMSPE_KERNEL_GAUSSIAN:
      return imspe::KernelKind::kGaussian;
    case IMSPE_KERNEL_MATERN32:
      return imspe::KernelKind::kMatern32;
    case IMSPE_KERNEL_MATERN52:
      return imspe::KernelKind::kMatern52;
    }
    throw imspe::Error(imspe::ErrorCode::kInvalidArgument,
                       "unknown kernel enumerator");
  }

  imspe::Design make_design(const imspe_family *family, const double *points,
                            std::size_t n) {
    const std::size_t d = family->impl.dim();
    return imspe::Design(n, d, std::vector<double>(points, points + n * d));
  }

  imspe::SearchConfig to_config(const imspe_search_config *c) {
    imspe::SearchConfig cfg;
    if (c) {
      cfg.starts = c->starts;
      cfg.feasibility_tolerance = c->feasibility_tolerance;
      cfg.optimality_tolerance = c->optimality_tolerance;
      cfg.fd_step = c->fd_step;
      cfg.max_iterations = c->max_iterations;
      cfg.seed = c->seed;
      cfg.threads = c->threads;
    }
    cfg.validate();
    return cfg;
  }

  std::vector<double> row_major(const imspe::Matrix &m) {
    std::vector<double> out(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out[i * m.cols() + j] = m(i, j);
    return out;
  }
}  // namespace

extern "C" {

const char *imspe_version(void) { return IMSPE_VERSION_STRING; }

const char *imspe_last_error(void) { return last_error.c_str(); }

double imspe_last_rcond(void) { return last_rcond; }

const char *imspe_status_name(imspe_status status) {
  switch (status) {
  case IMSPE_OK:
    return "ok";
  case IMSPE_ERR_INVALID_ARGUMENT:
    return "invalid-argument";
  case IMSPE_ERR_INVALID_HYPERPARAMETER:
    return "invalid-hyperparameter";
  case IMSPE_ERR_OUT_OF_DOMAIN:
    return "out-of-domain";
  case IMSPE_ERR_SINGULAR_DESIGN:
    return "singular-design";
  case IMSPE_ERR_ORACLE_DIVERGENCE:
    return "oracle-divergence";
  case IMSPE_ERR_NO_CONVERGENCE:
    return "no-convergence";
  case IMSPE_ERR_INTERNAL:
    return "internal";
  }
  return "unknown";
}

imspe_status imspe_kernel_from_name(const char *name, imspe_kernel *out) {
  if (!name || !out)
    return null_argument("name/out");
  return guarded([&] {
    *out = static_cast<imspe_kernel>(imspe::parse_kernel_kind(name));
    return IMSPE_OK;
  });
}

const char *imspe_kernel_name(imspe_kernel kernel) {
  try {
    return imspe::kernel_name(to_kind(kernel)).data();
  } catch (...) {
    return "unknown";
  }
}

imspe_status imspe_family_create(imspe_kernel kernel, const double *theta,
                                 size_t dim, imspe_family **out) {
  if (!theta || !out)
    return null_argument("theta/out");
  *out = nullptr;
  return guarded([&] {
    *out = new imspe_family { imspe::CovarianceFamily(
        to_kind(kernel), std::vector<double>(theta, theta + dim)) };
    return IMSPE_OK;
  });
}

void imspe_family_destroy(imspe_family *family) { delete family; }

size_t imspe_family_dim(const imspe_family *family) {
  return family ? family->impl.dim() : 0;
}

imspe_status imspe_correlation(const imspe_family *family, const double *x,
                               const double *y, double *out) {
  if (!family || !x || !y || !out)
    return null_argument("family/x/y/out");
  return guarded([&] {
    const std::size_t d = family->impl.dim();
    *out = imspe::correlation(family->impl, { x, d }, { y, d });
    return IMSPE_OK;
  });
}

imspe_status imspe_single_integral(imspe_kernel kernel, double theta,
                                   double a, imspe_method method,
                                   double *out) {
  if (!out)
    return null_argument("out");
  return guarded([&] {
    const auto kind = to_kind(kernel);
    if (method == IMSPE_METHOD_QUADRATURE) {
      imspe::single_integral(kind, theta, a);  // domain and theta checks
      *out = imspe::integrate_single(kind, theta, a);
    } else {
      *out = imspe::single_integral(kind, theta, a);
    }
    return IMSPE_OK;
  });
}

imspe_status imspe_pair_integral(imspe_kernel kernel, double theta, double a,
                                 double b, imspe_method method, double *out) {
  if (!out)
    return null_argument("out");
  return guarded([&] {
    const auto kind = to_kind(kernel);
    if (method == IMSPE_METHOD_QUADRATURE) {
      imspe::pair_integral(kind, theta, a, b);
      *out = imspe::integrate_pair(kind, theta, a, b);
    } else {
      *out = imspe::pair_integral(kind, theta, a, b);
    }
    return IMSPE_OK;
  });
}

imspe_status imspe_evaluate(const imspe_family *family, const double *points,
                            size_t n, imspe_evaluation **out) {
  if (!family || !points || !out)
    return null_argument("family/points/out");
  *out = nullptr;
  last_rcond = 0;
  return guarded([&] {
    const auto ev = imspe::evaluate_imspe(family->impl,
                                          make_design(family, points, n));
    *out = new imspe_evaluation { ev.value,
                                  n,
                                  row_major(ev.correlation),
                                  row_major(ev.pair),
                                  std::vector<double>(ev.single.begin(),
                                                      ev.single.end()),
                                  ev.rcond };
    return IMSPE_OK;
  });
}

void imspe_evaluation_destroy(imspe_evaluation *eval) { delete eval; }

double imspe_evaluation_value(const imspe_evaluation *eval) {
  return eval->value;
}

size_t imspe_evaluation_size(const imspe_evaluation *eval) { return eval->n; }

const double *imspe_evaluation_correlation(const imspe_evaluation *eval) {
  return eval->correlation.data();
}

const double *imspe_evaluation_pair(const imspe_evaluation *eval) {
  return eval->pair.data();
}

const double *imspe_evaluation_single(const imspe_evaluation *eval) {
  return eval->single.data();
}

double imspe_evaluation_rcond(const imspe_evaluation *eval) {
  return eval->rcond;
}

imspe_status imspe_evaluate_quadrature(const imspe_family *family,
                                       const double *points, size_t n,
                                       double *out) {
  if (!family || !points || !out)
    return null_argument("family/points/out");
  return guarded([&] {
    *out = imspe::integrate_mspe(family->impl,
                                 make_design(family, points, n));
    return IMSPE_OK;
  });
}

void imspe_search_config_default(imspe_search_config *config) {
  if (!config)
    return;
  const imspe::SearchConfig d;
  *config = { d.starts,         d.feasibility_tolerance,
              d.optimality_tolerance, d.fd_step,
              d.max_iterations, d.seed,
              d.threads };
}

imspe_status imspe_fd_gradient(const imspe_family *family,
                               const double *points, size_t n, double fd_step,
                               double *gradient) {
  if (!family || !points || !gradient)
    return null_argument("family/points/gradient");
  return guarded([&] {
    if (!(fd_step > 0))
      throw imspe::Error(imspe::ErrorCode::kInvalidArgument,
                         "fd-step must be positive");
    const auto g = imspe::fd_gradient(family->impl,
                                      make_design(family, points, n), fd_step);
    std::copy(g.begin(), g.end(), gradient);
    return IMSPE_OK;
  });
}

imspe_status imspe_local_search(const imspe_family *family,
                                const double *start, size_t n,
                                const imspe_search_config *config,
                                double *design_out, double *imspe_out,
                                int *converged_out, int *iterations_out) {
  if (!family || !start || !design_out || !imspe_out)
    return null_argument("family/start/design_out/imspe_out");
  return guarded([&] {
    const auto r = imspe::local_search(
        family->impl, make_design(family, start, n), to_config(config));
    std::copy(r.design.coords().begin(), r.design.coords().end(),
              design_out);
    *imspe_out = r.imspe;
    if (converged_out)
      *converged_out = r.converged ? 1 : 0;
    if (iterations_out)
      *iterations_out = r.iterations;
    return IMSPE_OK;
  });
}

imspe_status imspe_search(const imspe_family *family, size_t n,
                          const imspe_search_config *config,
                          imspe_search_result **out) {
  if (!family || !out)
    return null_argument("family/out");
  *out = nullptr;
  return guarded([&] {
    auto r = imspe::multistart_search(family->impl, n, to_config(config));
    const bool ok = r.converged();
    *out = new imspe_search_result { std::move(r), n, family->impl.dim() };
    if (!ok) {
      last_error = "no local search converged";
      return IMSPE_ERR_NO_CONVERGENCE;
    }
    return IMSPE_OK;
  });
}

void imspe_search_result_destroy(imspe_search_result *result) {
  delete result;
}

int imspe_search_result_converged(const imspe_search_result *r) {
  return r->impl.converged() ? 1 : 0;
}

size_t imspe_search_result_points(const imspe_search_result *r) {
  return r->n;
}

size_t imspe_search_result_dim(const imspe_search_result *r) { return r->d; }

const double *imspe_search_result_best_design(const imspe_search_result *r) {
  return r->impl.best_design ? r->impl.best_design->coords().data()
                             : nullptr;
}

double imspe_search_result_best_imspe(const imspe_search_result *r) {
  return r->impl.best_imspe;
}

int imspe_search_result_starts_run(const imspe_search_result *r) {
  return r->impl.starts_run;
}

int imspe_search_result_starts_converged(const imspe_search_result *r) {
  return r->impl.starts_converged;
}

int imspe_search_result_iterations_total(const imspe_search_result *r) {
  return r->impl.iterations_total;
}

size_t imspe_search_result_minima_count(const imspe_search_result *r) {
  return r->impl.local_minima.size();
}

const double *imspe_search_result_minimum_design(const imspe_search_result *r,
                                                 size_t i) {
  if (i >= r->impl.local_minima.size())
    return nullptr;
  return r->impl.local_minima[i].design.coords().data();
}

double imspe_search_result_minimum_imspe(const imspe_search_result *r,
                                         size_t i) {
  if (i >= r->impl.local_minima.size())
    return 0;
  return r->impl.local_minima[i].imspe;
}

size_t imspe_search_result_minimum_hits(const imspe_search_result *r,
                                        size_t i) {
  if (i >= r->impl.local_minima.size())
    return 0;
  return r->impl.local_minima[i].starts.size();
}

}  // extern "C"
