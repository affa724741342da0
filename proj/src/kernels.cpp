//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "imspe/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "imspe/error.hpp"

namespace imspe {

std::string_view kernel_name(KernelKind kind) {
  switch (kind) {
  case KernelKind::kExponential:
    return "exponential";
  case KernelKind::kGaussian:
    return "gaussian";
  case KernelKind::kMatern32:
    return "matern32";
  case KernelKind::kMatern52:
    return "matern52";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  for (auto kind: { KernelKind::kExponential, KernelKind::kGaussian,
                    KernelKind::kMatern32, KernelKind::kMatern52 }) {
    if (kernel_name(kind) == name)
      return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown covariance family '" + std::string(name) + "'");
}

void check_theta(double theta) {
  if (!(std::isfinite(theta) && theta > 0))
    throw Error(ErrorCode::kInvalidHyperparameter,
                "theta must be finite and positive, got "
                    + std::to_string(theta));
}

double kernel_value(KernelKind kind, double theta, double h) {
  switch (kind) {
  case KernelKind::kExponential:
    return std::exp(-theta * h);
  case KernelKind::kGaussian:
    return std::exp(-theta * h * h);
  case KernelKind::kMatern32: {
    const double u = std::sqrt(3 * theta) * h;
    return (1 + u) * std::exp(-u);
  }
  case KernelKind::kMatern52: {
    const double u = std::sqrt(5 * theta) * h;
    return (1 + u + u * u / 3) * std::exp(-u);
  }
  }
  return 0;
}

CovarianceFamily::CovarianceFamily(KernelKind kind, std::vector<double> theta)
    : kind_(kind), theta_(std::move(theta)) {
  if (theta_.empty())
    throw Error(ErrorCode::kInvalidArgument,
                "covariance family needs at least one theta");
  for (double t: theta_)
    check_theta(t);
}

Design::Design(std::size_t n, std::size_t d, std::vector<double> coords)
    : n_(n), d_(d), coords_(std::move(coords)) {
  if (n_ < 1 || d_ < 1)
    throw Error(ErrorCode::kInvalidArgument, "design needs n >= 1 and d >= 1");
  if (coords_.size() != n_ * d_)
    throw Error(ErrorCode::kInvalidArgument,
                "design coordinate count does not match n*d");
  for (double c: coords_) {
    if (!(c >= -1.0 && c <= 1.0))
      throw Error(ErrorCode::kOutOfDomain,
                  "design coordinate " + std::to_string(c)
                      + " lies outside [-1, 1]");
  }
}

Design Design::line(std::vector<double> xs) {
  const std::size_t n = xs.size();
  return Design(n, 1, std::move(xs));
}

Design Design::reflected() const {
  std::vector<double> c(coords_);
  for (double &x: c)
    x = -x;
  return Design(n_, d_, std::move(c));
}

Design Design::sorted() const {
  std::vector<std::size_t> order(n_);
  for (std::size_t i = 0; i < n_; ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) {
                     auto pa = point(a), pb = point(b);
                     return std::lexicographical_compare(
                         pa.begin(), pa.end(), pb.begin(), pb.end());
                   });
  std::vector<double> c;
  c.reserve(coords_.size());
  for (std::size_t i: order) {
    auto p = point(i);
    c.insert(c.end(), p.begin(), p.end());
  }
  return Design(n_, d_, std::move(c));
}

double correlation(const CovarianceFamily &family, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != family.dim() || y.size() != family.dim())
    throw Error(ErrorCode::kInvalidArgument,
                "point dimension does not match covariance family");
  double r = 1;
  for (std::size_t k = 0; k < x.size(); ++k)
    r *= kernel_value(family.kind(), family.theta(k), std::fabs(x[k] - y[k]));
  return r;
}

}  // namespace imspe
