//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "imspe/kernels.hpp"

// Closed forms for the domain averages
//
//   single(a)  = 1/2 int_{-1}^{1} rho(|a - x|) dx
//   pair(a, b) = 1/2 int_{-1}^{1} rho(|a - x|) rho(|b - x|) dx
//
// for the four one-dimensional kernels. The Matern forms are written as
//
//   pair = [ 2 S(|b - a| s) exp(-s |b - a|)
//            - c J+ { B(a, b; s) exp(-s (2 + a + b)) } ] / (N s)
//
// with s = sqrt(3 theta), c = 3, N = 24 for nu = 3/2 and s = sqrt(5 theta),
// c = 15, N = 1080 for nu = 5/2. S is the stationary polynomial whose
// coefficients are the reversed Bessel-polynomial coefficients (OEIS A001498
// rows 3 and 5), B is the boundary polynomial, and J+ f(a, b) =
// f(a, b) + f(-a, -b).
//
// All polynomials are evaluated through the symmetric functions a + b and
// a * b, so interchanging a and b is bit-exact, and the J+ sum makes joint
// reflection (a, b) -> (-a, -b) bit-exact as well.

namespace imspe {

namespace detail {
  // Coefficients of the Bessel polynomial y_m(x) = sum_k a(m, k) x^k built by
  // the three-term recurrence y_m = (2m - 1) x y_{m-1} + y_{m-2}.
  template <std::size_t M>
  constexpr std::array<std::int64_t, M + 1> bessel_polynomial() {
    std::array<std::int64_t, M + 1> prev {}, cur {};
    prev[0] = 1;  // y_0
    cur[0] = 1;   // y_1
    if constexpr (M >= 1)
      cur[1] = 1;
    if constexpr (M == 0)
      return prev;
    for (std::size_t m = 2; m <= M; ++m) {
      std::array<std::int64_t, M + 1> next {};
      for (std::size_t k = 0; k <= M; ++k) {
        next[k] = prev[k];
        if (k > 0)
          next[k] += static_cast<std::int64_t>(2 * m - 1) * cur[k - 1];
      }
      prev = cur;
      cur = next;
    }
    return cur;
  }

  template <std::size_t N>
  constexpr bool is_reversed_of(const std::array<std::int64_t, N> &lhs,
                                const std::array<std::int64_t, N> &rhs) {
    for (std::size_t i = 0; i < N; ++i)
      if (lhs[i] != rhs[N - 1 - i])
        return false;
    return true;
  }
}  // namespace detail

/// Stationary-bracket coefficients, lowest power first.
struct BesselCoefficientTable {
  static constexpr std::array<std::int64_t, 4> nu32 { 15, 15, 6, 1 };
  static constexpr std::array<std::int64_t, 6> nu52 { 945, 945, 420,
                                                      105, 15,  1 };
};

static_assert(detail::is_reversed_of(BesselCoefficientTable::nu32,
                                     detail::bessel_polynomial<3>()));
static_assert(detail::is_reversed_of(BesselCoefficientTable::nu52,
                                     detail::bessel_polynomial<5>()));

/// J+ applied to f at (a, b): f(a, b) + f(-a, -b).
template <class F>
double symmetrize_plus(F &&f, double a, double b) {
  return f(a, b) + f(-a, -b);
}

double pair_integral_exponential(double theta, double a, double b);
double pair_integral_gaussian(double theta, double a, double b);
double pair_integral_matern32(double theta, double a, double b);
double pair_integral_matern52(double theta, double a, double b);

double pair_integral(KernelKind kind, double theta, double a, double b);

double single_integral(KernelKind kind, double theta, double a);

}  // namespace imspe
