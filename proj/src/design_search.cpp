//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "imspe/design_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "imspe/error.hpp"
#include "imspe/imspe_core.hpp"

namespace imspe {

void SearchConfig::validate() const {
  if (starts < 1)
    throw Error(ErrorCode::kInvalidArgument, "starts must be >= 1");
  if (!(feasibility_tolerance > 0) || !(optimality_tolerance > 0)
      || !(fd_step > 0) || !(cluster_radius > 0))
    throw Error(ErrorCode::kInvalidArgument,
                "search tolerances and steps must be positive");
  if (max_iterations < 1)
    throw Error(ErrorCode::kInvalidArgument, "max-iterations must be >= 1");
  if (threads < 1)
    throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1");
}

namespace {
  constexpr double kNoiseDecrease = 1e-12;

  using Point = std::vector<double>;

  double evaluate(const CovarianceFamily &family, std::size_t n,
                  std::size_t d, const Point &x) {
    return compute_imspe(family, Design(n, d, x));
  }

  double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

  double dot(const Point &a, const Point &b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += a[i] * b[i];
    return s;
  }

  double max_abs(const Point &a) {
    double m = 0;
    for (double v: a)
      m = std::max(m, std::fabs(v));
    return m;
  }

  // Row-major dense inverse-Hessian approximation.
  struct InverseHessian {
    std::size_t dim;
    std::vector<double> h;

    explicit InverseHessian(std::size_t m): dim(m), h(m * m, 0) { reset(1); }

    void reset(double scale) {
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        h[i * dim + i] = scale;
    }

    double &at(std::size_t i, std::size_t j) { return h[i * dim + j]; }

    // H <- (I - rho s y') H (I - rho y s') + rho s s'
    void update(const Point &s, const Point &y) {
      const double rho = 1 / dot(s, y);
      Point hy(dim, 0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          hy[i] += at(i, j) * y[j];
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          at(i, j) += -rho * (hy[i] * s[j] + s[i] * hy[j])
                      + (rho * rho * yhy + rho) * s[i] * s[j];
    }
  };

  bool is_free(double x, double g, double feas) {
    return !((x <= -1 + feas && g > 0) || (x >= 1 - feas && g < 0));
  }

  bool design_less(const Design &a, const Design &b) {
    auto x = a.coords(), y = b.coords();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(),
                                        y.end());
  }

  double design_distance(const Design &a, const Design &b) {
    double m = 0;
    for (std::size_t i = 0; i < a.coords().size(); ++i)
      m = std::max(m, std::fabs(a.coords()[i] - b.coords()[i]));
    return m;
  }

  struct Member {
    Design design;
    double imspe;
    double pg;
    int start;
  };

  // Cluster members whose values agree to within rounding noise are
  // indistinguishable by value. On flat minima they scatter around the
  // valley floor, so the representative is the medoid of that tied set.
  LocalMinimum representative(const std::vector<Member> &members) {
    double lowest = members.front().imspe;
    for (const auto &m: members)
      lowest = std::min(lowest, m.imspe);
    const double noise = 8 * std::numeric_limits<double>::epsilon()
                         * std::fabs(lowest);
    std::vector<const Member *> tied;
    for (const auto &m: members)
      if (m.imspe - lowest <= noise)
        tied.push_back(&m);

    const std::size_t len = tied.front()->design.coords().size();
    std::vector<double> centroid(len, 0);
    for (const Member *m: tied)
      for (std::size_t j = 0; j < len; ++j)
        centroid[j] += m->design.coords()[j] / tied.size();

    const Member *best = nullptr;
    double best_dist = 0;
    for (const Member *m: tied) {
      double dist = 0;
      for (std::size_t j = 0; j < len; ++j)
        dist = std::max(dist, std::fabs(m->design.coords()[j] - centroid[j]));
      if (!best || dist < best_dist
          || (dist == best_dist && design_less(m->design, best->design))) {
        best = m;
        best_dist = dist;
      }
    }
    LocalMinimum out { best->design, best->imspe, best->pg, {} };
    for (const auto &m: members)
      out.starts.push_back(m.start);
    return out;
  }

  double unit_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
}  // namespace

std::vector<double> fd_gradient(const CovarianceFamily &family,
                                const Design &design, double fd_step) {
  const std::size_t n = design.size(), d = design.dim();
  Point x(design.coords().begin(), design.coords().end());
  Point g(x.size());
  const double f0 = evaluate(family, n, d, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = fd_step * std::max(1.0, std::fabs(x[j]));
    const double xj = x[j];
    if (xj + h <= 1 && xj - h >= -1) {
      x[j] = xj + h;
      const double fp = evaluate(family, n, d, x);
      x[j] = xj - h;
      const double fm = evaluate(family, n, d, x);
      g[j] = (fp - fm) / ((xj + h) - (xj - h));
    } else if (xj + h > 1) {
      x[j] = xj - h;
      g[j] = (f0 - evaluate(family, n, d, x)) / (xj - x[j]);
    } else {
      x[j] = xj + h;
      g[j] = (evaluate(family, n, d, x) - f0) / (x[j] - xj);
    }
    x[j] = xj;
  }
  return g;
}

double projected_gradient_norm(std::span<const double> x,
                               std::span<const double> gradient) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m = std::max(m, std::fabs(clamp_unit(x[i] - gradient[i]) - x[i]));
  return m;
}

LocalResult local_search(const CovarianceFamily &family, const Design &start,
                         const SearchConfig &config) {
  config.validate();
  const std::size_t n = start.size(), d = start.dim(), m = n * d;
  Point x(start.coords().begin(), start.coords().end());
  for (double &v: x)
    v = clamp_unit(v);

  double f = evaluate(family, n, d, x);
  Point g = fd_gradient(family, Design(n, d, x), config.fd_step);
  InverseHessian hess(m);
  bool scaled = false;

  LocalResult out { Design(n, d, x), f, false, 0, 0 };
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    const double pg = projected_gradient_norm(x, g);
    out.projected_gradient_norm = pg;
    if (pg <= config.optimality_tolerance) {
      out.converged = true;
      break;
    }

    std::vector<bool> free(m);
    for (std::size_t i = 0; i < m; ++i)
      free[i] = is_free(x[i], g[i], config.feasibility_tolerance);

    auto direction = [&]() {
      Point dir(m, 0);
      for (std::size_t i = 0; i < m; ++i) {
        if (!free[i])
          continue;
        for (std::size_t j = 0; j < m; ++j)
          if (free[j])
            dir[i] -= hess.at(i, j) * g[j];
      }
      return dir;
    };
    Point dir = direction();
    if (!(dot(dir, g) < 0)) {
      hess.reset(1);
      scaled = false;
      dir = direction();
    }
    const Point newton_dir = dir;

    // Backtrack along the projection arc x(alpha) = P(x + alpha dir).
    bool accepted = false;
    bool retried = false;
    Point xt(m);
    double ft = f;
    for (;;) {
      double alpha = std::min(1.0, 1.0 / max_abs(dir));
      for (int k = 0; k < 60; ++k, alpha /= 2) {
        for (std::size_t i = 0; i < m; ++i)
          xt[i] = clamp_unit(x[i] + alpha * dir[i]);
        if (xt == x)
          break;
        Point step(m);
        for (std::size_t i = 0; i < m; ++i)
          step[i] = xt[i] - x[i];
        try {
          ft = evaluate(family, n, d, xt);
        } catch (const SingularDesignError &) {
          continue;
        }
        const double decrease = std::min(dot(g, step), 0.0);
        if (ft <= f + 1e-4 * decrease && ft <= f) {
          accepted = true;
          break;
        }
      }
      if (accepted || retried)
        break;
      // Fall back to steepest descent once before giving up.
      retried = true;
      hess.reset(1);
      scaled = false;
      dir = direction();
    }
    Point gt;
    if (!accepted) {
      // Below the resolution of f, judge the full step by its gradient.
      const double noise = kNoiseDecrease * std::max(1.0, std::fabs(f));
      if (-dot(g, newton_dir) > noise)
        break;
      for (std::size_t i = 0; i < m; ++i)
        xt[i] = clamp_unit(x[i] + newton_dir[i]);
      try {
        ft = evaluate(family, n, d, xt);
        gt = fd_gradient(family, Design(n, d, xt), config.fd_step);
      } catch (const SingularDesignError &) {
        break;
      }
      if (!(projected_gradient_norm(xt, gt) < pg) || ft > f + noise)
        break;
    } else {
      try {
        gt = fd_gradient(family, Design(n, d, xt), config.fd_step);
      } catch (const SingularDesignError &) {
        break;
      }
    }
    Point s(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = xt[i] - x[i];
      y[i] = gt[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (!scaled) {
        hess.reset(sy / dot(y, y));
        scaled = true;
      }
      hess.update(s, y);
    }
    x = xt;
    f = ft;
    g = std::move(gt);
    out.design = Design(n, d, x);
    out.imspe = f;
  }
  out.iterations = iter;
  if (!out.converged)
    out.projected_gradient_norm = projected_gradient_norm(x, g);
  return out;
}

std::vector<Design> start_designs(std::size_t n, std::size_t d,
                                  const SearchConfig &config) {
  config.validate();
  if (n < 1 || d < 1)
    throw Error(ErrorCode::kInvalidArgument, "n and d must be >= 1");
  std::mt19937_64 rng(config.seed);
  std::vector<Design> out;
  out.reserve(config.starts);

  Point equi(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      equi[i * d + k] = -1.0 + (2.0 * ((i + k) % n) + 1.0) / n;
  out.emplace_back(n, d, equi);

  const int perturbed = std::min(config.starts - 1, 3);
  for (int s = 0; s < perturbed; ++s) {
    Point p(equi);
    for (double &v: p)
      v = clamp_unit(v + (2 * unit_uniform(rng) - 1) * 0.2 / n);
    out.emplace_back(n, d, std::move(p));
  }
  while (static_cast<int>(out.size()) < config.starts) {
    Point p(n * d);
    for (double &v: p)
      v = 0.98 * (2 * unit_uniform(rng) - 1);
    out.emplace_back(n, d, std::move(p));
  }
  return out;
}

SearchResult multistart_search(const CovarianceFamily &family, std::size_t n,
                               const SearchConfig &config) {
  const auto starts = start_designs(n, family.dim(), config);
  std::vector<std::optional<LocalResult>> results(starts.size());

  auto run = [&](std::size_t i) {
    try {
      results[i] = local_search(family, starts[i], config);
    } catch (const SingularDesignError &) {
      results[i].reset();
    }
  };
  if (config.threads == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i)
      run(i);
  } else {
    std::atomic<std::size_t> next { 0 };
    std::vector<std::exception_ptr> errors(config.threads);
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < config.threads; ++t)
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i; (i = next++) < starts.size();)
              run(i);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
    }
    for (auto &e: errors)
      if (e)
        std::rethrow_exception(e);
  }

  SearchResult out;
  out.starts_run = static_cast<int>(starts.size());
  std::vector<std::vector<Member>> clusters;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i])
      continue;
    const LocalResult &r = *results[i];
    out.iterations_total += r.iterations;
    if (!r.converged)
      continue;
    ++out.starts_converged;
    Member m { r.design.sorted(), r.imspe, r.projected_gradient_norm,
               static_cast<int>(i) };
    // A design joins the first cluster whose founding member is close.
    auto hit = std::find_if(clusters.begin(), clusters.end(),
                            [&](const std::vector<Member> &c) {
                              return design_distance(c.front().design,
                                                     m.design)
                                     <= config.cluster_radius;
                            });
    if (hit == clusters.end())
      clusters.push_back({ std::move(m) });
    else
      hit->push_back(std::move(m));
  }
  for (const auto &c: clusters)
    out.local_minima.push_back(representative(c));
  std::sort(out.local_minima.begin(), out.local_minima.end(),
            [](const LocalMinimum &a, const LocalMinimum &b) {
              if (a.imspe != b.imspe)
                return a.imspe < b.imspe;
              return design_less(a.design, b.design);
            });
  if (!out.local_minima.empty()) {
    out.best_design = out.local_minima.front().design;
    out.best_imspe = out.local_minima.front().imspe;
  }
  return out;
}

}  // namespace imspe
