//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "imspe/imspe_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "imspe/closed_form.hpp"
#include "imspe/error.hpp"

namespace imspe {
namespace {
  void check_dims(const CovarianceFamily &family, const Design &design) {
    if (family.dim() != design.dim())
      throw Error(ErrorCode::kInvalidArgument,
                  "design dimension " + std::to_string(design.dim())
                      + " does not match the " + std::to_string(family.dim())
                      + " theta value(s) of the covariance family");
  }

  Eigen::LLT<Matrix> factorize(const Matrix &r, double &rcond) {
    Eigen::LLT<Matrix> llt(r);
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(r, Eigen::EigenvaluesOnly);
      const auto &ev = eig.eigenvalues();
      rcond = ev.size() ? std::max(ev.minCoeff(), 0.0) / ev.maxCoeff() : 0;
      std::ostringstream msg;
      msg << "correlation matrix is not positive definite "
             "(coincident or near-coincident design points; "
             "eigenvalue ratio "
          << rcond << ")";
      throw SingularDesignError(msg.str(), rcond);
    }
    rcond = llt.rcond();
    return llt;
  }

  bool lex_less(const Design &x, const Design &y) {
    auto a = x.coords(), b = y.coords();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                        b.end());
  }

  double imspe_value(const Eigen::LLT<Matrix> &llt, const Matrix &w,
                     const Vector &v) {
    const Eigen::Index n = w.rows();
    const Matrix rinv_w = llt.solve(w);
    double trace = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      trace += rinv_w(i, i);
    const Vector u = llt.solve(Vector::Ones(n));
    const double denom = u.sum();
    const double num = 1 - 2 * u.dot(v) + u.dot(w * u);
    return 1 - trace + num / denom;
  }
}  // namespace

Matrix build_correlation_matrix(const CovarianceFamily &family,
                                const Design &design) {
  check_dims(family, design);
  const auto n = static_cast<Eigen::Index>(design.size());
  Matrix r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1;
    for (Eigen::Index j = 0; j < i; ++j)
      r(i, j) = r(j, i) = correlation(family, design.point(i),
                                      design.point(j));
  }
  return r;
}

Matrix build_pair_matrix(const CovarianceFamily &family,
                         const Design &design) {
  check_dims(family, design);
  const auto n = static_cast<Eigen::Index>(design.size());
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double p = 1;
      for (std::size_t k = 0; k < design.dim(); ++k)
        p *= pair_integral(family.kind(), family.theta(k), design(i, k),
                           design(j, k));
      w(i, j) = w(j, i) = p;
    }
  }
  return w;
}

Vector build_single_vector(const CovarianceFamily &family,
                           const Design &design) {
  check_dims(family, design);
  const auto n = static_cast<Eigen::Index>(design.size());
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1;
    for (std::size_t k = 0; k < design.dim(); ++k)
      p *= single_integral(family.kind(), family.theta(k), design(i, k));
    v(i) = p;
  }
  return v;
}

Design canonical_representative(const Design &design) {
  Design fwd = design.sorted();
  Design rev = design.reflected().sorted();
  return lex_less(rev, fwd) ? rev : fwd;
}

double compute_imspe(const CovarianceFamily &family, const Design &design) {
  check_dims(family, design);
  const Design canon = canonical_representative(design);
  double rcond = 0;
  const auto llt = factorize(build_correlation_matrix(family, canon), rcond);
  const double value = imspe_value(llt, build_pair_matrix(family, canon),
                                   build_single_vector(family, canon));
  if (!std::isfinite(value))
    throw SingularDesignError("IMSPE evaluation produced a non-finite value",
                              rcond);
  return value;
}

ImspeEvaluation evaluate_imspe(const CovarianceFamily &family,
                               const Design &design) {
  ImspeEvaluation ev;
  ev.correlation = build_correlation_matrix(family, design);
  ev.pair = build_pair_matrix(family, design);
  ev.single = build_single_vector(family, design);
  ev.value = compute_imspe(family, design);
  factorize(ev.correlation, ev.rcond);
  ev.cholesky_ok = true;
  return ev;
}

OrdinaryKriging::OrdinaryKriging(const CovarianceFamily &family,
                                 const Design &design)
    : family_(family), design_(design) {
  check_dims(family, design);
  llt_ = factorize(build_correlation_matrix(family, design), rcond_);
  ones_solved_ = llt_.solve(Vector::Ones(design.size()));
  ones_quad_ = ones_solved_.sum();
}

double OrdinaryKriging::mspe(std::span<const double> x) const {
  const auto n = static_cast<Eigen::Index>(design_.size());
  Vector r(n);
  for (Eigen::Index i = 0; i < n; ++i)
    r(i) = correlation(family_, design_.point(i), x);
  const double explained = r.dot(llt_.solve(r));
  const double bias = 1 - ones_solved_.dot(r);
  return 1 - explained + bias * bias / ones_quad_;
}

}  // namespace imspe
