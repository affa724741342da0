//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <functional>

#include <doctest.h>

#include "imspe/error.hpp"
#include "imspe/quadrature.hpp"

using namespace imspe;

namespace {
double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

// Test-only oracle: adaptive Simpson in long double.
long double simpson(const std::function<long double(long double)> &f,
                    long double a, long double b, long double fa,
                    long double fm, long double fb, long double whole,
                    int depth) {
  const long double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const long double flm = f(lm), frm = f(rm);
  const long double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const long double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 1e-17L)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, depth - 1)
         + simpson(f, m, b, fm, frm, fb, right, depth - 1);
}

long double simpson(const std::function<long double(long double)> &f,
                    long double a, long double b) {
  const long double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 40);
}
}  // namespace

TEST_CASE("Gauss-Legendre rule is exact for low-degree polynomials") {
  for (int n: { 2, 5, 16, 64 }) {
    GaussLegendreRule rule(n);
    double wsum = 0;
    for (double w: rule.weights())
      wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg <= 2 * n - 1 && deg <= 20; ++deg) {
      double q = 0;
      for (int i = 0; i < n; ++i)
        q += rule.weights()[i] * std::pow(rule.nodes()[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1));
    }
  }
  CHECK_THROWS_AS(GaussLegendreRule(1), Error);
}

TEST_CASE("kink-aware pair quadrature agrees with adaptive Simpson") {
  struct Case {
    KernelKind kind;
    double theta, a, b;
  };
  const Case cases[] = { { KernelKind::kExponential, 10, -0.3, 0.6 },
                         { KernelKind::kMatern32, 1, 0.3, -0.2 },
                         { KernelKind::kMatern52, 0.1, 0.9, -0.9 },
                         { KernelKind::kGaussian, 10, 0.0, 0.0 } };
  for (const auto &c: cases) {
    auto f = [&](long double x) -> long double {
      return kernel_value(c.kind, c.theta, std::fabs(c.a - (double)x))
             * kernel_value(c.kind, c.theta, std::fabs(c.b - (double)x));
    };
    const double lo = std::min(c.a, c.b), hi = std::max(c.a, c.b);
    const long double ref = (simpson(f, -1, lo) + simpson(f, lo, hi)
                             + simpson(f, hi, 1))
                            / 2;
    CHECK(rel(integrate_pair(c.kind, c.theta, c.a, c.b), (double)ref)
          <= 1e-12);
  }
}

TEST_CASE("Gaussian coincident pair at the origin has an erf form") {
  // int exp(-2 theta x^2) / 2 = sqrt(pi / (2 theta)) erf(sqrt(2 theta)) / 2.
  const double theta = 10;
  const double ref = 0.5 * std::sqrt(M_PI / (2 * theta))
                     * std::erf(std::sqrt(2 * theta));
  CHECK(std::fabs(integrate_pair(KernelKind::kGaussian, theta, 0, 0) - ref)
        <= 1e-13);
  CHECK(std::fabs(integrate_single(KernelKind::kGaussian, theta, 0)
                  - 0.5 * std::sqrt(M_PI / theta) * std::erf(std::sqrt(theta)))
        <= 1e-13);
}

TEST_CASE("reflection and refinement self-consistency") {
  for (auto kind: { KernelKind::kExponential, KernelKind::kGaussian,
                    KernelKind::kMatern32, KernelKind::kMatern52 }) {
    CHECK(rel(integrate_pair(kind, 1, 1, 1), integrate_pair(kind, 1, -1, -1))
          <= 1e-14);
    const double base = integrate_pair(kind, 3, -0.2, 0.45);
    QuadratureSpec fine;
    fine.nodes_per_panel = 128;
    CHECK(rel(integrate_pair(kind, 3, -0.2, 0.45, fine), base) <= 1e-13);
  }
}

TEST_CASE("refinement cap raises oracle divergence") {
  QuadratureSpec spec;
  spec.nodes_per_panel = 2;
  spec.max_refinements = 1;
  try {
    integrate_average([](double x) { return std::sqrt(std::fabs(x)); }, spec);
    FAIL("expected divergence");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kOracleDivergence);
  }
  spec.nodes_per_panel = 1;
  CHECK_THROWS_AS(integrate_average([](double) { return 1.0; }, spec), Error);
}

TEST_CASE("MSPE profile quadrature reproduces reference IMSPE values") {
  CovarianceFamily gau1(KernelKind::kGaussian, { 1.0 });
  CHECK(std::fabs(integrate_mspe(gau1, Design::line({ 0.0 }))
                  - 0.50635173437514594921)
        <= 1e-13);

  CovarianceFamily exp10(KernelKind::kExponential, { 10.0 });
  const double s = 0.42884307650;
  CHECK(std::fabs(integrate_mspe(exp10, Design::line({ -s, s }))
                  - 1.250506107131920)
        <= 1e-12);

  CovarianceFamily m32(KernelKind::kMatern32, { 2.0 });
  CHECK(rel(integrate_mspe(m32, Design::line({ -0.7, 0.1, 0.5 })),
            integrate_mspe(m32, Design::line({ 0.7, -0.1, -0.5 })))
        <= 1e-12);

  CovarianceFamily two(KernelKind::kGaussian, { 1.0, 1.0 });
  CHECK_THROWS_AS(integrate_mspe(two, Design(1, 2, { 0, 0 })), Error);
}
