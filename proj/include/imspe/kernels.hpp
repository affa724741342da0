//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace imspe {

enum class KernelKind {
  kExponential,  // exp(-theta h)
  kGaussian,     // exp(-theta h^2)
  kMatern32,     // (1 + sqrt(3 theta) h) exp(-sqrt(3 theta) h)
  kMatern52,     // (1 + sqrt(5 theta) h + 5 theta h^2 / 3) exp(-sqrt(5 theta) h)
};

std::string_view kernel_name(KernelKind kind);

// Accepts "exponential", "gaussian", "matern32", "matern52". Throws
// Error(kInvalidArgument) otherwise.
KernelKind parse_kernel_kind(std::string_view name);

// One-dimensional correlation at distance h >= 0.
double kernel_value(KernelKind kind, double theta, double h);

// Throws Error(kInvalidHyperparameter) unless theta is finite and positive.
void check_theta(double theta);

/// A stationary product covariance family with one hyperparameter per
/// input dimension. The number of thetas fixes the dimension d.
class CovarianceFamily {
public:
  CovarianceFamily(KernelKind kind, std::vector<double> theta);

  KernelKind kind() const { return kind_; }
  std::size_t dim() const { return theta_.size(); }
  double theta(std::size_t k) const { return theta_[k]; }
  std::span<const double> thetas() const { return theta_; }

private:
  KernelKind kind_;
  std::vector<double> theta_;
};

/// n points in [-1,1]^d stored row-major; point i occupies
/// coords[i*d, (i+1)*d).
class Design {
public:
  Design(std::size_t n, std::size_t d, std::vector<double> coords);

  // Convenience for d = 1.
  static Design line(std::vector<double> xs);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }

  std::span<const double> point(std::size_t i) const {
    return { coords_.data() + i * d_, d_ };
  }
  double operator()(std::size_t i, std::size_t k) const {
    return coords_[i * d_ + k];
  }
  std::span<const double> coords() const { return coords_; }

  Design reflected() const;

  // Points sorted lexicographically.
  Design sorted() const;

private:
  std::size_t n_, d_;
  std::vector<double> coords_;
};

// Product over dimensions of kernel_value at |x_k - y_k|. Points are not
// domain-checked so that quadrature abscissae may be passed directly.
double correlation(const CovarianceFamily &family, std::span<const double> x,
                   std::span<const double> y);

}  // namespace imspe
