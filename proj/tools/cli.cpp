//
// imspe - Copyright 2026 imspe authors.
// SPDX-License-Identifier: Apache-2.0
//

// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imspe/imspe.h"
#include "reference_tables.hpp"

using json = nlohmann::ordered_json;

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitReproductionFail = 1,
  kExitUsage = 2,
  kExitSingular = 3,
  kExitNoConvergence = 4,
};

struct FamilyDeleter {
  void operator()(imspe_family *f) const { imspe_family_destroy(f); }
};
struct EvaluationDeleter {
  void operator()(imspe_evaluation *e) const { imspe_evaluation_destroy(e); }
};
struct SearchDeleter {
  void operator()(imspe_search_result *r) const {
    imspe_search_result_destroy(r);
  }
};
using FamilyPtr = std::unique_ptr<imspe_family, FamilyDeleter>;
using EvaluationPtr = std::unique_ptr<imspe_evaluation, EvaluationDeleter>;
using SearchPtr = std::unique_ptr<imspe_search_result, SearchDeleter>;

class CommandError: public std::runtime_error {
public:
  CommandError(int exit_code, const std::string &what)
      : std::runtime_error(what), exit_code_(exit_code) { }
  int exit_code() const { return exit_code_; }

private:
  int exit_code_;
};

int exit_code_for(imspe_status st) {
  switch (st) {
  case IMSPE_OK:
    return kExitOk;
  case IMSPE_ERR_SINGULAR_DESIGN:
    return kExitSingular;
  case IMSPE_ERR_NO_CONVERGENCE:
    return kExitNoConvergence;
  default:
    return kExitUsage;
  }
}

void check(imspe_status st) {
  if (st != IMSPE_OK)
    throw CommandError(exit_code_for(st), std::string(imspe_status_name(st))
                                              + ": " + imspe_last_error());
}

// 17 significant digits always round-trips binary64.
std::string decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex_bits(double v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
  return buf;
}

std::string join(const std::vector<std::string> &parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> decimals(const double *v, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(decimal(v[i]));
  return out;
}

double relative_error(double value, double ref) {
  return ref == 0 ? std::fabs(value) : std::fabs(value - ref) / std::fabs(ref);
}

struct GlobalOptions {
  std::string format = "json";
  std::uint64_t seed = 0;
  double tol_opt = 1e-9;
  double tol_feas = 1e-7;
  int starts = 32;
  bool quiet = false;
};

struct FamilyOptions {
  std::string family;
  std::vector<double> theta;

  FamilyPtr create() const {
    imspe_kernel kernel;
    check(imspe_kernel_from_name(family.c_str(), &kernel));
    imspe_family *raw = nullptr;
    check(imspe_family_create(kernel, theta.data(), theta.size(), &raw));
    return FamilyPtr(raw);
  }

  json echo() const {
    return { { "family", family }, { "theta", theta } };
  }
};

void add_family_options(CLI::App *cmd, FamilyOptions &f) {
  cmd->add_option("--family", f.family,
                  "exponential | gaussian | matern32 | matern52")
      ->required();
  cmd->add_option("--theta", f.theta,
                  "hyperparameter; repeat once per dimension")
      ->required();
}

imspe_search_config search_config(const GlobalOptions &g) {
  imspe_search_config cfg;
  imspe_search_config_default(&cfg);
  cfg.starts = g.starts;
  cfg.seed = g.seed;
  cfg.optimality_tolerance = g.tol_opt;
  cfg.feasibility_tolerance = g.tol_feas;
  return cfg;
}

json config_echo(const imspe_search_config &cfg) {
  return { { "starts", cfg.starts },
           { "seed", cfg.seed },
           { "optimality_tolerance", decimal(cfg.optimality_tolerance) },
           { "feasibility_tolerance", decimal(cfg.feasibility_tolerance) },
           { "fd_step", decimal(cfg.fd_step) },
           { "max_iterations", cfg.max_iterations },
           { "threads", cfg.threads } };
}

// A point is a comma-separated coordinate list ("0.1" or "0.1,-0.4").
std::vector<double> parse_points(const std::vector<std::string> &points,
                                 std::size_t dim) {
  std::vector<double> out;
  for (const auto &p: points) {
    std::stringstream ss(p);
    std::string item;
    std::size_t count = 0;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != item.size())
        throw CommandError(kExitUsage, "cannot parse coordinate '" + item
                                           + "' in point '" + p + "'");
      out.push_back(v);
      ++count;
    }
    if (count != dim)
      throw CommandError(kExitUsage,
                         "point '" + p + "' has " + std::to_string(count)
                             + " coordinate(s); expected "
                             + std::to_string(dim));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Record {
  std::string command;
  json inputs;
  json outputs;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

void emit(const Record &rec, const GlobalOptions &g, double elapsed_ms) {
  if (g.format == "csv") {
    std::cout << join(rec.csv_header, ',') << '\n';
    for (const auto &row: rec.csv_rows)
      std::cout << join(row, ',') << '\n';
    return;
  }
  json out;
  out["command"] = rec.command;
  out["inputs"] = rec.inputs;
  out["outputs"] = rec.outputs;
  out["timing_ms"] = g.quiet ? json(nullptr) : json(elapsed_ms);
  out["version"] = imspe_version();
  std::cout << out.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  FamilyOptions family;
  std::vector<std::string> points;
  bool diagnostics = false;
  bool quadrature = false;
};

Record run_eval(const EvalOptions &o) {
  auto family = o.family.create();
  const std::size_t d = imspe_family_dim(family.get());
  const auto coords = parse_points(o.points, d);
  const std::size_t n = o.points.size();

  imspe_evaluation *raw = nullptr;
  check(imspe_evaluate(family.get(), coords.data(), n, &raw));
  EvaluationPtr ev(raw);
  const double value = imspe_evaluation_value(ev.get());

  Record rec;
  rec.command = "eval";
  rec.inputs = o.family.echo();
  rec.inputs["points"] = o.points;
  rec.outputs["imspe"] = decimal(value);
  rec.outputs["imspe_hex"] = hex_bits(value);
  rec.outputs["method"] = "closed-form";
  rec.outputs["rcond"] = decimal(imspe_evaluation_rcond(ev.get()));
  std::string quad_value, discrepancy;
  if (o.quadrature) {
    double q = 0;
    check(imspe_evaluate_quadrature(family.get(), coords.data(), n, &q));
    quad_value = decimal(q);
    discrepancy = decimal(relative_error(value, q));
    rec.outputs["quadrature"] = quad_value;
    rec.outputs["relative_discrepancy"] = discrepancy;
  }
  if (o.diagnostics) {
    json r = json::array(), w = json::array();
    const double *rp = imspe_evaluation_correlation(ev.get());
    const double *wp = imspe_evaluation_pair(ev.get());
    for (std::size_t i = 0; i < n; ++i) {
      r.push_back(decimals(rp + i * n, n));
      w.push_back(decimals(wp + i * n, n));
    }
    rec.outputs["R"] = r;
    rec.outputs["W"] = w;
    rec.outputs["v"] = decimals(imspe_evaluation_single(ev.get()), n);
  }
  rec.csv_header = { "command", "family",     "theta",      "n",
                     "imspe",   "imspe_hex",  "rcond",      "quadrature",
                     "relative_discrepancy" };
  std::vector<std::string> thetas;
  for (double t: o.family.theta)
    thetas.push_back(decimal(t));
  rec.csv_rows.push_back({ "eval", o.family.family, join(thetas, ';'),
                           std::to_string(n), decimal(value), hex_bits(value),
                           decimal(imspe_evaluation_rcond(ev.get())),
                           quad_value, discrepancy });
  return rec;
}

// ---------------------------------------------------------------------------

struct IntegralOptions {
  std::string family;
  double theta = 0;
  double a = 0;
  std::optional<double> b;
  std::string method = "closed";
};

Record run_integral(const IntegralOptions &o) {
  imspe_kernel kernel;
  check(imspe_kernel_from_name(o.family.c_str(), &kernel));

  auto compute = [&](imspe_method m) {
    double v = 0;
    if (o.b)
      check(imspe_pair_integral(kernel, o.theta, o.a, *o.b, m, &v));
    else
      check(imspe_single_integral(kernel, o.theta, o.a, m, &v));
    return v;
  };

  Record rec;
  rec.command = "integral";
  rec.inputs = { { "family", o.family },
                  { "theta", o.theta },
                  { "a", o.a },
                  { "b", o.b ? json(*o.b) : json(nullptr) },
                  { "method", o.method } };
  rec.outputs["kind"] = o.b ? "pair" : "single";

  std::string closed, quad, disc;
  if (o.method == "closed" || o.method == "both") {
    const double v = compute(IMSPE_METHOD_CLOSED_FORM);
    closed = decimal(v);
    rec.outputs["closed_form"] = closed;
    rec.outputs["closed_form_hex"] = hex_bits(v);
  }
  if (o.method == "quadrature" || o.method == "both") {
    const double v = compute(IMSPE_METHOD_QUADRATURE);
    quad = decimal(v);
    rec.outputs["quadrature"] = quad;
    rec.outputs["quadrature_hex"] = hex_bits(v);
  }
  if (o.method == "both") {
    disc = decimal(relative_error(std::stod(closed), std::stod(quad)));
    rec.outputs["relative_discrepancy"] = disc;
  }
  rec.csv_header = { "command",     "family",     "theta",
                     "a",           "b",          "closed_form",
                     "quadrature",  "relative_discrepancy" };
  rec.csv_rows.push_back({ "integral", o.family, decimal(o.theta),
                           decimal(o.a), o.b ? decimal(*o.b) : "", closed,
                           quad, disc });
  return rec;
}

// ---------------------------------------------------------------------------

struct SearchOptions {
  FamilyOptions family;
  std::size_t n = 1;
  int threads = 1;
  int max_iterations = 500;
  double fd_step = 1e-6;
};

json design_json(const double *coords, std::size_t n, std::size_t d) {
  json pts = json::array();
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back(decimals(coords + i * d, d));
  return pts;
}

std::string design_csv(const double *coords, std::size_t n, std::size_t d) {
  std::vector<std::string> pts;
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back(join(decimals(coords + i * d, d), ' '));
  return join(pts, ';');
}

Record run_search(const SearchOptions &o, const GlobalOptions &g,
                  int &exit_code) {
  auto family = o.family.create();
  auto cfg = search_config(g);
  cfg.threads = o.threads;
  cfg.max_iterations = o.max_iterations;
  cfg.fd_step = o.fd_step;

  imspe_search_result *raw = nullptr;
  const imspe_status st = imspe_search(family.get(), o.n, &cfg, &raw);
  if (!raw)
    check(st);
  SearchPtr res(raw);
  exit_code = st == IMSPE_OK ? kExitOk : exit_code_for(st);

  const std::size_t n = imspe_search_result_points(res.get());
  const std::size_t d = imspe_search_result_dim(res.get());

  Record rec;
  rec.command = "search";
  rec.inputs = o.family.echo();
  rec.inputs["n"] = o.n;
  rec.inputs["config"] = config_echo(cfg);
  rec.outputs["converged"] = imspe_search_result_converged(res.get()) != 0;
  if (const double *best = imspe_search_result_best_design(res.get())) {
    const double v = imspe_search_result_best_imspe(res.get());
    rec.outputs["best_design"] = design_json(best, n, d);
    rec.outputs["best_imspe"] = decimal(v);
    rec.outputs["best_imspe_hex"] = hex_bits(v);
  } else {
    rec.outputs["best_design"] = nullptr;
    rec.outputs["best_imspe"] = nullptr;
    rec.outputs["best_imspe_hex"] = nullptr;
  }
  rec.outputs["starts_run"] = imspe_search_result_starts_run(res.get());
  rec.outputs["starts_converged"] =
      imspe_search_result_starts_converged(res.get());
  rec.outputs["iterations_total"] =
      imspe_search_result_iterations_total(res.get());

  rec.csv_header = { "command", "family", "theta",     "n",
                     "rank",    "imspe",  "imspe_hex", "hits",
                     "design" };
  std::vector<std::string> thetas;
  for (double t: o.family.theta)
    thetas.push_back(decimal(t));

  json minima = json::array();
  const std::size_t count = imspe_search_result_minima_count(res.get());
  for (std::size_t i = 0; i < count; ++i) {
    const double *x = imspe_search_result_minimum_design(res.get(), i);
    const double v = imspe_search_result_minimum_imspe(res.get(), i);
    const std::size_t hits = imspe_search_result_minimum_hits(res.get(), i);
    minima.push_back({ { "design", design_json(x, n, d) },
                       { "imspe", decimal(v) },
                       { "imspe_hex", hex_bits(v) },
                       { "hits", hits } });
    rec.csv_rows.push_back({ "search", o.family.family, join(thetas, ';'),
                             std::to_string(n), std::to_string(i),
                             decimal(v), hex_bits(v), std::to_string(hits),
                             design_csv(x, n, d) });
  }
  rec.outputs["local_minima"] = minima;
  rec.outputs["method"] = "closed-form";
  return rec;
}

// ---------------------------------------------------------------------------

struct ReproduceOptions {
  std::string table = "all";
  std::string reference;
};

Record run_reproduce(const ReproduceOptions &o, const GlobalOptions &g,
                     int &exit_code) {
  json ref;
  try {
    if (o.reference.empty()) {
      ref = json::parse(kReferenceTablesJson);
    } else {
      std::ifstream in(o.reference);
      if (!in)
        throw CommandError(kExitUsage,
                           "cannot open reference file " + o.reference);
      ref = json::parse(in);
    }
  } catch (const json::exception &e) {
    throw CommandError(kExitUsage,
                       std::string("malformed reference tables: ") + e.what());
  }

  const auto cfg = search_config(g);
  Record rec;
  rec.command = "reproduce-tables";
  rec.inputs = { { "table", o.table },
                 { "reference", o.reference.empty() ? "built-in"
                                                    : o.reference },
                 { "config", config_echo(cfg) } };
  rec.csv_header = { "table",     "family",    "theta",    "quantity",
                     "reference", "computed",  "abs_error", "rel_error",
                     "tolerance", "status" };

  json rows = json::array();
  bool all_pass = true;
  auto add_row = [&](int table, const std::string &family, double theta,
                     const std::string &quantity, double reference,
                     double computed, double err, double tol) {
    const bool pass = err <= tol;
    all_pass = all_pass && pass;
    const double abs_err = std::fabs(computed - reference);
    rows.push_back({ { "table", table },
                     { "family", family },
                     { "theta", theta },
                     { "quantity", quantity },
                     { "reference", decimal(reference) },
                     { "computed", decimal(computed) },
                     { "abs_error", decimal(abs_err) },
                     { "rel_error", decimal(relative_error(computed,
                                                           reference)) },
                     { "tolerance", decimal(tol) },
                     { "status", pass ? "PASS" : "FAIL" } });
    rec.csv_rows.push_back(
        { std::to_string(table), family, decimal(theta), quantity,
          decimal(reference), decimal(computed), decimal(abs_err),
          decimal(relative_error(computed, reference)), decimal(tol),
          pass ? "PASS" : "FAIL" });
  };

  for (const auto &tbl: ref.at("tables")) {
    const int id = tbl.at("table").get<int>();
    if (o.table != "all" && o.table != std::to_string(id))
      continue;
    const std::size_t n = tbl.at("n").get<std::size_t>();
    const double tol_imspe =
        tbl.at("tolerances").at("imspe_relative").get<double>();
    const double tol_coord =
        tbl.at("tolerances").at("coordinate_absolute").get<double>();

    for (const auto &cell: tbl.at("cells")) {
      FamilyOptions fam { cell.at("family").get<std::string>(),
                          { cell.at("theta").get<double>() } };
      auto family = fam.create();
      std::vector<double> ref_design;
      for (const auto &c: cell.at("design"))
        ref_design.push_back(std::stod(c.get<std::string>()));
      std::sort(ref_design.begin(), ref_design.end());
      const double ref_value = std::stod(cell.at("imspe").get<std::string>());

      imspe_search_result *raw = nullptr;
      const imspe_status st = imspe_search(family.get(), n, &cfg, &raw);
      SearchPtr res(raw);
      const double *best = res ? imspe_search_result_best_design(res.get())
                               : nullptr;

      if (id == 1) {
        // Closed-form value at the known optimum, plus the search location.
        imspe_evaluation *ev_raw = nullptr;
        check(imspe_evaluate(family.get(), ref_design.data(), n, &ev_raw));
        EvaluationPtr ev(ev_raw);
        const double v = imspe_evaluation_value(ev.get());
        add_row(id, fam.family, fam.theta[0], "imspe", ref_value, v,
                relative_error(v, ref_value), tol_imspe);
      } else {
        const double v = best ? imspe_search_result_best_imspe(res.get())
                              : NAN;
        add_row(id, fam.family, fam.theta[0], "imspe", ref_value, v,
                best ? relative_error(v, ref_value) : INFINITY, tol_imspe);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double x = best ? best[i] : NAN;
        add_row(id, fam.family, fam.theta[0], "x" + std::to_string(i + 1),
                ref_design[i], x,
                best ? std::fabs(x - ref_design[i]) : INFINITY, tol_coord);
      }
      if (st != IMSPE_OK && !g.quiet)
        std::cerr << "warning: search for " << fam.family
                  << " theta=" << fam.theta[0] << " did not converge\n";
    }
  }
  rec.outputs["rows"] = rows;
  rec.outputs["status"] = all_pass ? "PASS" : "FAIL";
  exit_code = all_pass ? kExitOk : kExitReproductionFail;
  return rec;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "IMSPE evaluation and optimal-design search" };
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({ "json", "csv" }));
  app.add_option("--seed", g.seed, "seed for multistart starting designs");
  app.add_option("--tol-opt", g.tol_opt,
                 "projected-gradient optimality tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-feas", g.tol_feas, "bound feasibility tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--starts", g.starts, "number of multistart starts")
      ->check(CLI::Range(1, 1000000));
  app.add_flag("--quiet", g.quiet,
               "no stderr chatter; timing_ms is null so output is "
               "reproducible byte-for-byte");

  EvalOptions eval;
  auto *eval_cmd = app.add_subcommand("eval", "evaluate the IMSPE of a design");
  add_family_options(eval_cmd, eval.family);
  eval_cmd->add_option("--points", eval.points,
                       "design point, comma-separated coordinates; repeat")
      ->required();
  eval_cmd->add_flag("--diagnostics", eval.diagnostics,
                     "also print R, W and v");
  eval_cmd->add_flag("--quadrature", eval.quadrature,
                     "also integrate the MSPE profile numerically (d = 1)");

  IntegralOptions integral;
  auto *int_cmd = app.add_subcommand(
      "integral", "single (no --b) or pair domain-averaged kernel integral");
  int_cmd->add_option("--family", integral.family)->required();
  int_cmd->add_option("--theta", integral.theta)->required();
  int_cmd->add_option("--a", integral.a)->required();
  int_cmd->add_option("--b", integral.b);
  int_cmd->add_option("--method", integral.method)
      ->check(CLI::IsMember({ "closed", "quadrature", "both" }));

  SearchOptions search;
  auto *search_cmd = app.add_subcommand(
      "search", "multistart search for an IMSPE-optimal design");
  add_family_options(search_cmd, search.family);
  search_cmd->add_option("--n", search.n, "number of design points")
      ->required()
      ->check(CLI::Range(1, 10000));
  search_cmd->add_option("--threads", search.threads)
      ->check(CLI::Range(1, 1024));
  search_cmd->add_option("--max-iterations", search.max_iterations)
      ->check(CLI::Range(1, 100000000));
  search_cmd->add_option("--fd-step", search.fd_step)
      ->check(CLI::PositiveNumber);

  ReproduceOptions repro;
  auto *repro_cmd = app.add_subcommand(
      "reproduce-tables", "recompute the reference optimal-design tables");
  repro_cmd->add_option("--table", repro.table)
      ->check(CLI::IsMember({ "1", "2", "all" }));
  repro_cmd->add_option("--reference", repro.reference,
                        "reference tables JSON (default: built-in copy)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    Record rec;
    int exit_code = kExitOk;
    if (*eval_cmd)
      rec = run_eval(eval);
    else if (*int_cmd)
      rec = run_integral(integral);
    else if (*search_cmd)
      rec = run_search(search, g, exit_code);
    else
      rec = run_reproduce(repro, g, exit_code);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    emit(rec, g, ms);
    return exit_code;
  } catch (const CommandError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
