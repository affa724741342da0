//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "imspe/kernels.hpp"

namespace imspe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// R_ij = correlation(x_i, x_j).
Matrix build_correlation_matrix(const CovarianceFamily &family,
                                const Design &design);

// W_ij = prod_k pair_integral(theta_k, x_ik, x_jk), the domain average of
// r_i(x) r_j(x).
Matrix build_pair_matrix(const CovarianceFamily &family, const Design &design);

// v_i = prod_k single_integral(theta_k, x_ik), the domain average of r_i(x).
Vector build_single_vector(const CovarianceFamily &family,
                           const Design &design);

struct ImspeEvaluation {
  double value = 0;
  Matrix correlation;  // R
  Matrix pair;         // W
  Vector single;       // v
  bool cholesky_ok = false;
  double rcond = 0;  // reciprocal L1 condition estimate of R
};

/*
 * Ordinary-kriging (constant mean) IMSPE with unit process variance:
 *
 *   IMSPE = 1 - tr(R^-1 W)
 *           + (1 - 2 1'R^-1 v + 1'R^-1 W R^-1 1) / (1'R^-1 1).
 *
 * The value is computed on a canonical representative of the design (the
 * lexicographically smaller of the sorted design and its sorted reflection),
 * so point permutations and reflection through the origin give bit-identical
 * results. The diagnostic matrices are reported in input order.
 *
 * Throws SingularDesignError when R has a non-positive Cholesky pivot.
 */
ImspeEvaluation evaluate_imspe(const CovarianceFamily &family,
                               const Design &design);

// Value-only variant used by the optimizer.
double compute_imspe(const CovarianceFamily &family, const Design &design);

// The design that evaluate_imspe() actually evaluates.
Design canonical_representative(const Design &design);

/// Pointwise ordinary-kriging predictor variance for a fixed design:
///
///   MSPE(x) = 1 - r'R^-1 r + (1 - 1'R^-1 r)^2 / (1'R^-1 1).
class OrdinaryKriging {
public:
  OrdinaryKriging(const CovarianceFamily &family, const Design &design);

  double mspe(std::span<const double> x) const;
  double rcond() const { return rcond_; }

private:
  CovarianceFamily family_;
  Design design_;
  Eigen::LLT<Matrix> llt_;
  Vector ones_solved_;  // R^-1 1
  double ones_quad_;    // 1'R^-1 1
  double rcond_;
};

}  // namespace imspe
