//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imspe/kernels.hpp"

namespace imspe {

struct SearchConfig {
  int starts = 32;
  double feasibility_tolerance = 1e-7;
  // Threshold on the infinity norm of the projected gradient.
  double optimality_tolerance = 1e-9;
  // Central-difference step, scaled by max(1, |x|).
  double fd_step = 1e-6;
  int max_iterations = 500;
  std::uint64_t seed = 0;
  // Local searches run on this many worker threads; results do not depend
  // on it.
  int threads = 1;
  // Designs closer than this (max-abs, after sorting) share a cluster.
  double cluster_radius = 1e-5;

  void validate() const;
};

struct LocalResult {
  Design design;
  double imspe = 0;
  bool converged = false;
  int iterations = 0;
  double projected_gradient_norm = 0;
};

struct LocalMinimum {
  Design design;  // canonical: points sorted lexicographically
  double imspe = 0;
  double projected_gradient_norm = 0;
  std::vector<int> starts;  // start indices that landed here
};

struct SearchResult {
  std::optional<Design> best_design;
  double best_imspe = 0;
  int starts_run = 0;
  int starts_converged = 0;
  int iterations_total = 0;
  // Sorted by value, then lexicographically by design.
  std::vector<LocalMinimum> local_minima;

  bool converged() const { return best_design.has_value(); }
};

// Finite-difference gradient of compute_imspe() with respect to the n*d
// coordinates (row-major). Central differences in the interior, one-sided
// within fd_step of a bound.
std::vector<double> fd_gradient(const CovarianceFamily &family,
                                const Design &design, double fd_step);

// Infinity norm of P(x - g) - x, P the projection onto [-1, 1]^{n d}.
double projected_gradient_norm(std::span<const double> x,
                               std::span<const double> gradient);

// Projected BFGS with Armijo backtracking along the projection arc.
LocalResult local_search(const CovarianceFamily &family, const Design &start,
                         const SearchConfig &config = {});

// The deterministic start designs used by multistart_search: the equispaced
// design, a few perturbations of it, then uniform random designs.
std::vector<Design> start_designs(std::size_t n, std::size_t d,
                                  const SearchConfig &config);

SearchResult multistart_search(const CovarianceFamily &family, std::size_t n,
                               const SearchConfig &config = {});

}  // namespace imspe
