//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "imspe/closed_form.hpp"
#include "imspe/error.hpp"
#include "imspe/imspe_core.hpp"
#include "imspe/quadrature.hpp"

using namespace imspe;

namespace {
constexpr KernelKind kAll[] = { KernelKind::kExponential, KernelKind::kGaussian,
                                KernelKind::kMatern32, KernelKind::kMatern52 };

double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

Design random_line(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> xs(n);
  for (double &x: xs)
    x = u(rng);
  return Design::line(xs);
}
}  // namespace

TEST_CASE("correlation matrix") {
  CovarianceFamily f(KernelKind::kMatern32, { 2.0 });
  CHECK(build_correlation_matrix(f, Design::line({ 0.4 }))(0, 0) == 1.0);

  const double s = 0.3;
  auto r = build_correlation_matrix(f, Design::line({ -s, s }));
  CHECK(r(0, 1) == kernel_value(KernelKind::kMatern32, 2.0, 2 * s));
  CHECK(r(1, 0) == r(0, 1));

  const Design d = Design::line({ -0.9, 0.1, 0.8 });
  r = build_correlation_matrix(f, d);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(r(i, j) == correlation(f, d.point(i), d.point(j)));
}

TEST_CASE("pair matrix and single vector") {
  CovarianceFamily g(KernelKind::kGaussian, { 10.0 });
  auto w = build_pair_matrix(g, Design::line({ 0.0 }));
  CHECK(w(0, 0) == pair_integral_gaussian(10, 0, 0));

  std::mt19937_64 rng(3);
  for (auto kind: kAll) {
    CovarianceFamily f(kind, { 0.7 });
    const Design d = random_line(rng, 4);
    w = build_pair_matrix(f, d);
    CHECK(w == w.transpose());
  }

  CovarianceFamily f2(KernelKind::kMatern52, { 0.5, 4.0 });
  const Design d2(2, 2, { 0.1, -0.6, 0.7, 0.2 });
  w = build_pair_matrix(f2, d2);
  CHECK(w(0, 1)
        == pair_integral_matern52(0.5, 0.1, 0.7)
               * pair_integral_matern52(4.0, -0.6, 0.2));
  auto v = build_single_vector(f2, d2);
  CHECK(v(1)
        == single_integral(KernelKind::kMatern52, 0.5, 0.7)
               * single_integral(KernelKind::kMatern52, 4.0, 0.2));
}

TEST_CASE("reference IMSPE values") {
  CovarianceFamily g10(KernelKind::kGaussian, { 10.0 });
  CHECK(rel(compute_imspe(g10, Design::line({ 0.0 })), 1.4395052189867145188)
        <= 1e-13);
  CovarianceFamily g01(KernelKind::kGaussian, { 0.1 });
  CHECK(rel(compute_imspe(g01, Design::line({ 0.0 })), 0.064713374728816338)
        <= 1e-13);

  const double s = 0.5479848421867;
  CovarianceFamily g1(KernelKind::kGaussian, { 1.0 });
  CHECK(std::fabs(compute_imspe(g1, Design::line({ -s, s })) - 0.1043380536937864)
        <= 1e-12);

  // 50-digit MSPE-profile quadrature references.
  const double e = 0.5953720850983;
  CovarianceFamily e01(KernelKind::kExponential, { 0.1 });
  CHECK(rel(compute_imspe(e01, Design::line({ -e, e })), 0.03975156744848409547)
        <= 1e-12);
  CovarianceFamily m32(KernelKind::kMatern32, { 1.0 });
  CHECK(rel(compute_imspe(m32, Design::line({ 0.3, -0.2 })), 0.2260453976656759758)
        <= 1e-12);
  CovarianceFamily m52(KernelKind::kMatern52, { 0.5 });
  CHECK(rel(compute_imspe(m52, Design::line({ -0.8, 0.05, 0.6 })),
            0.007553530465727583385)
        <= 1e-10);
  CovarianceFamily e10(KernelKind::kExponential, { 10.0 });
  CHECK(rel(compute_imspe(e10, Design::line({ -0.9, -0.2, 0.3, 0.75 })),
            0.9186681908684022385)
        <= 1e-13);
}

TEST_CASE("single-point reduction is 2 - 2 v") {
  for (auto kind: kAll)
    for (double theta: { 0.1, 1.0, 10.0 })
      for (double x: { -1.0, -0.4, 0.0, 0.9 }) {
        CovarianceFamily f(kind, { theta });
        CHECK(rel(compute_imspe(f, Design::line({ x })),
                  2 - 2 * single_integral(kind, theta, x))
              <= 1e-14);
      }
}

TEST_CASE("permutation and reflection invariance are exact") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    for (auto kind: kAll) {
      CovarianceFamily f(kind, { 1.0 });
      const Design d = random_line(rng, 1 + trial % 4);
      std::vector<double> xs(d.coords().begin(), d.coords().end());
      std::shuffle(xs.begin(), xs.end(), rng);
      const double v = compute_imspe(f, d);
      CHECK(v == compute_imspe(f, Design::line(xs)));
      CHECK(v == compute_imspe(f, d.reflected()));
    }
  }
}

TEST_CASE("closed form equals MSPE-profile quadrature") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 12; ++trial)
    for (auto kind: kAll) {
      CovarianceFamily f(kind, { 10.0 });
      const Design d = random_line(rng, 1 + trial % 4);
      CHECK(rel(compute_imspe(f, d), integrate_mspe(f, d)) <= 1e-11);
    }
}

TEST_CASE("adding a design point never increases IMSPE") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 40; ++trial)
    for (auto kind: kAll) {
      CovarianceFamily f(kind, { 10.0 });
      const Design d = random_line(rng, 1 + trial % 3);
      std::vector<double> xs(d.coords().begin(), d.coords().end());
      xs.push_back(u(rng));
      CHECK(compute_imspe(f, Design::line(xs)) <= compute_imspe(f, d) + 1e-12);
    }
}

TEST_CASE("evaluation diagnostics") {
  CovarianceFamily f(KernelKind::kMatern52, { 3.0 });
  const Design d = Design::line({ 0.5, -0.5, 0.1 });
  const auto ev = evaluate_imspe(f, d);
  CHECK(ev.cholesky_ok);
  CHECK(ev.rcond > 0);
  CHECK(ev.value > 0);
  CHECK(ev.value == compute_imspe(f, d));
  CHECK(ev.correlation == build_correlation_matrix(f, d));
  CHECK(ev.pair == build_pair_matrix(f, d));
  CHECK(ev.single == build_single_vector(f, d));
  // Input order is preserved in the diagnostics.
  CHECK(ev.single(0) == single_integral(KernelKind::kMatern52, 3.0, 0.5));
  // W is positive semidefinite.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ev.pair);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-14);
}

TEST_CASE("coincident points are a singular design") {
  CovarianceFamily f(KernelKind::kGaussian, { 10.0 });
  try {
    compute_imspe(f, Design::line({ 0.0, 0.0 }));
    FAIL("expected singular design");
  } catch (const SingularDesignError &e) {
    CHECK(e.code() == ErrorCode::kSingularDesign);
    CHECK(e.rcond() <= 1e-15);
  }
  CovarianceFamily f2(KernelKind::kGaussian, { 1.0, 1.0 });
  CHECK_THROWS_AS(compute_imspe(f2, Design::line({ 0.1 })), Error);
}
