//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <vector>

#include "imspe/kernels.hpp"

namespace imspe {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
class GaussLegendreRule {
public:
  explicit GaussLegendreRule(int nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double> &nodes() const { return nodes_; }
  const std::vector<double> &weights() const { return weights_; }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct QuadratureSpec {
  int nodes_per_panel = 64;
  // Kink locations; the interval [-1, 1] is always split at these.
  std::vector<double> split_points;
  double relative_tolerance = 1e-13;
  // Floor below which successive estimates are considered noise.
  double absolute_tolerance = 0;
  // Each segment is refined 1, 2, 4, ... 2^max_refinements panels.
  int max_refinements = 12;

  void validate() const;
};

// 1/2 int_{-1}^{1} f(x) dx by composite Gauss-Legendre on panels split at
// spec.split_points, refined by panel doubling until two successive totals
// agree. Throws Error(kOracleDivergence) when the refinement cap is hit.
double integrate_average(const std::function<double(double)> &f,
                         const QuadratureSpec &spec = {});

double integrate_pair(KernelKind kind, double theta, double a, double b,
                      QuadratureSpec spec = {});

double integrate_single(KernelKind kind, double theta, double a,
                        QuadratureSpec spec = {});

class Design;
class CovarianceFamily;

// Domain average of the pointwise ordinary-kriging MSPE, integrated
// directly (d = 1 only). Bypasses the pair/single closed forms.
double integrate_mspe(const CovarianceFamily &family, const Design &design,
                      QuadratureSpec spec = {});

}  // namespace imspe
