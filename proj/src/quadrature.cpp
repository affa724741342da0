//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "imspe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "imspe/error.hpp"
#include "imspe/imspe_core.hpp"

namespace imspe {

GaussLegendreRule::GaussLegendreRule(int nodes) {
  if (nodes < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "Gauss-Legendre rule needs at least 2 nodes");
  const int n = nodes;
  nodes_.resize(n);
  weights_.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-17)
        break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const double w = 2 / ((1 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    nodes_[n / 2] = 0;
}

void QuadratureSpec::validate() const {
  if (nodes_per_panel < 2)
    throw Error(ErrorCode::kInvalidArgument, "nodes-per-panel must be >= 2");
  if (!(relative_tolerance > 0) || !(absolute_tolerance >= 0))
    throw Error(ErrorCode::kInvalidArgument,
                "quadrature tolerances must be positive");
  if (max_refinements < 1)
    throw Error(ErrorCode::kInvalidArgument, "max-refinements must be >= 1");
}

namespace {
  std::vector<double> segment_bounds(const std::vector<double> &splits) {
    std::vector<double> b { -1.0, 1.0 };
    for (double s: splits)
      if (s > -1.0 && s < 1.0)
        b.push_back(s);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

  double composite(const std::function<double(double)> &f,
                   const GaussLegendreRule &rule,
                   const std::vector<double> &bounds, int panels) {
    double total = 0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      const double width = (bounds[s + 1] - bounds[s]) / panels;
      for (int p = 0; p < panels; ++p) {
        const double lo = bounds[s] + p * width;
        const double half = width / 2, mid = lo + half;
        double acc = 0;
        for (int i = 0; i < rule.size(); ++i)
          acc += rule.weights()[i] * f(mid + half * rule.nodes()[i]);
        total += acc * half;
      }
    }
    return total / 2;
  }
}  // namespace

double integrate_average(const std::function<double(double)> &f,
                         const QuadratureSpec &spec) {
  spec.validate();
  const GaussLegendreRule rule(spec.nodes_per_panel);
  const auto bounds = segment_bounds(spec.split_points);
  int panels = 1;
  double prev = composite(f, rule, bounds, panels);
  for (int level = 0; level < spec.max_refinements; ++level) {
    panels *= 2;
    const double cur = composite(f, rule, bounds, panels);
    if (std::fabs(cur - prev)
        <= spec.relative_tolerance * std::fabs(cur) + spec.absolute_tolerance)
      return cur;
    prev = cur;
  }
  throw Error(ErrorCode::kOracleDivergence,
              "quadrature did not converge after "
                  + std::to_string(spec.max_refinements) + " refinements");
}

double integrate_pair(KernelKind kind, double theta, double a, double b,
                      QuadratureSpec spec) {
  check_theta(theta);
  spec.split_points.push_back(a);
  spec.split_points.push_back(b);
  return integrate_average(
      [&](double x) {
        return kernel_value(kind, theta, std::fabs(a - x))
               * kernel_value(kind, theta, std::fabs(b - x));
      },
      spec);
}

double integrate_single(KernelKind kind, double theta, double a,
                        QuadratureSpec spec) {
  check_theta(theta);
  spec.split_points.push_back(a);
  return integrate_average(
      [&](double x) { return kernel_value(kind, theta, std::fabs(a - x)); },
      spec);
}

double integrate_mspe(const CovarianceFamily &family, const Design &design,
                      QuadratureSpec spec) {
  if (family.dim() != 1 || design.dim() != 1)
    throw Error(ErrorCode::kInvalidArgument,
                "MSPE quadrature oracle supports d = 1 only");
  const OrdinaryKriging model(family, design);
  for (std::size_t i = 0; i < design.size(); ++i)
    spec.split_points.push_back(design(i, 0));
  // The pointwise MSPE cancels O(1) terms; its rounding floor scales with
  // the condition number of R.
  spec.absolute_tolerance = std::max(
      spec.absolute_tolerance,
      16 * std::numeric_limits<double>::epsilon() / model.rcond());
  return integrate_average(
      [&](double x) { return model.mspe(std::span<const double>(&x, 1)); },
      spec);
}

}  // namespace imspe
