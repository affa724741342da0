//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "imspe/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "imspe/error.hpp"

namespace imspe {
namespace {
  void check_coordinate(double a) {
    if (!(a >= -1.0 && a <= 1.0))
      throw Error(ErrorCode::kOutOfDomain,
                  "integral abscissa " + std::to_string(a)
                      + " lies outside [-1, 1]");
  }

  void check_inputs(double theta, double a, double b) {
    check_theta(theta);
    check_coordinate(a);
    check_coordinate(b);
  }

  template <std::size_t N>
  double horner(const std::array<std::int64_t, N> &coef, double u) {
    double acc = 0;
    for (std::size_t i = N; i-- > 0;)
      acc = acc * u + static_cast<double>(coef[i]);
    return acc;
  }
}  // namespace

double pair_integral_exponential(double theta, double a, double b) {
  check_inputs(theta, a, b);
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double delta = hi - lo;
  // Left tail x < lo, middle plateau, right tail x > hi.
  const double tails = -std::expm1(-2 * theta * (1 + lo))
                       - std::expm1(-2 * theta * (1 - hi));
  return 0.5 * std::exp(-theta * delta) * (delta + tails / (2 * theta));
}

double pair_integral_gaussian(double theta, double a, double b) {
  check_inputs(theta, a, b);
  const double mid = (a + b) / 2;
  const double delta = a - b;
  const double c = std::sqrt(2 * theta);
  const double mass = std::erf(c * (1 - mid)) + std::erf(c * (1 + mid));
  return 0.25 * std::sqrt(std::numbers::pi / (2 * theta))
         * std::exp(-theta * delta * delta / 2) * mass;
}

double pair_integral_matern32(double theta, double a, double b) {
  check_inputs(theta, a, b);
  const double s = std::sqrt(3 * theta);
  const double delta = std::fabs(b - a);
  const double stationary = 2
                            * horner(BesselCoefficientTable::nu32, delta * s)
                            * std::exp(-s * delta);
  const double prod = a * b;
  auto boundary = [s, prod](double x, double y) {
    const double sum = x + y;
    return (5 + 3 * (2 + sum) * s + 2 * (1 + sum + prod) * s * s)
           * std::exp(-s * (2 + sum));
  };
  return (stationary - 3 * symmetrize_plus(boundary, a, b)) / (24 * s);
}

double pair_integral_matern52(double theta, double a, double b) {
  check_inputs(theta, a, b);
  const double s = std::sqrt(5 * theta);
  const double delta = std::fabs(b - a);
  const double stationary = 2
                            * horner(BesselCoefficientTable::nu52, delta * s)
                            * std::exp(-s * delta);
  const double prod = a * b;
  auto boundary = [s, prod](double x, double y) {
    const double sum = x + y;
    const double sq = sum * sum;  // a^2 + b^2 = sq - 2 prod
    const double c1 = 45 * (2 + sum);
    const double c2 = 2 * (27 + 27 * sum + 5 * sq + 7 * prod);
    const double c3 = 8 * (2 + 3 * sum + sq + 2 * prod + prod * sum);
    const double c4 = 2
                      * (1 + 2 * sum + sq + 2 * prod + 2 * prod * sum
                         + prod * prod);
    return (63 + s * (c1 + s * (c2 + s * (c3 + s * c4))))
           * std::exp(-s * (2 + sum));
  };
  return (stationary - 15 * symmetrize_plus(boundary, a, b)) / (1080 * s);
}

double pair_integral(KernelKind kind, double theta, double a, double b) {
  switch (kind) {
  case KernelKind::kExponential:
    return pair_integral_exponential(theta, a, b);
  case KernelKind::kGaussian:
    return pair_integral_gaussian(theta, a, b);
  case KernelKind::kMatern32:
    return pair_integral_matern32(theta, a, b);
  case KernelKind::kMatern52:
    return pair_integral_matern52(theta, a, b);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown covariance family");
}

double single_integral(KernelKind kind, double theta, double a) {
  check_theta(theta);
  check_coordinate(a);
  // Each family integrates rho over [0, 1 + a] and [0, 1 - a].
  const double left = 1 + a, right = 1 - a;
  switch (kind) {
  case KernelKind::kExponential:
    return (-std::expm1(-theta * left) - std::expm1(-theta * right))
           / (2 * theta);
  case KernelKind::kGaussian: {
    const double c = std::sqrt(theta);
    return 0.25 * std::sqrt(std::numbers::pi / theta)
           * (std::erf(c * left) + std::erf(c * right));
  }
  case KernelKind::kMatern32: {
    const double s = std::sqrt(3 * theta);
    auto g = [](double u) { return -2 * std::expm1(-u) - u * std::exp(-u); };
    return (g(s * left) + g(s * right)) / (2 * s);
  }
  case KernelKind::kMatern52: {
    const double s = std::sqrt(5 * theta);
    auto g = [](double u) {
      return -8 * std::expm1(-u) / 3 - (5 * u + u * u) / 3 * std::exp(-u);
    };
    return (g(s * left) + g(s * right)) / (2 * s);
  }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown covariance family");
}

}  // namespace imspe
