#include "fdw/fdw.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "fdw/acceptance.hpp"
#include "fdw/cq.hpp"
#include "fdw/error.hpp"
#include "fdw/fraccalc.hpp"
#include "fdw/harness.hpp"
#include "fdw/oracle.hpp"

struct fdw_cq_scheme {
  fdw::CQScheme scheme;
};

struct fdw_ode_solution {
  fdw::VolterraProblem problem;
  fdw::VolterraSolution solution;
};

struct fdw_convergence_report {
  fdw::ConvergenceReport report;
  std::string norm;
  std::string summary;
};

struct fdw_damping_report {
  fdw::DampingReport report;
};

struct fdw_solve_report {
  fdw::SolveReport report;
};

struct fdw_acceptance {
  std::vector<fdw::CriterionResult> results;
  std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;

fdw_status to_status(fdw::ErrorCode code) {
  switch (code) {
    case fdw::ErrorCode::domain: return FDW_ERR_DOMAIN;
    case fdw::ErrorCode::index: return FDW_ERR_INDEX;
    case fdw::ErrorCode::solver: return FDW_ERR_SOLVER;
    case fdw::ErrorCode::convergence: return FDW_ERR_CONVERGENCE;
    case fdw::ErrorCode::io: return FDW_ERR_IO;
    case fdw::ErrorCode::config: return FDW_ERR_CONFIG;
  }
  return FDW_ERR_INTERNAL;
}

fdw_status fail(fdw_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
fdw_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FDW_OK;
  } catch (const fdw::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FDW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FDW_ERR_INTERNAL, e.what());
  }
}

#define FDW_NOT_NULL(ptr) \
  if ((ptr) == nullptr) return fail(FDW_ERR_NULL, std::string(__func__) + ": " #ptr " is NULL")

}  // namespace

extern "C" {

const char* fdw_version(void) { return "1.0.0"; }

const char* fdw_status_name(fdw_status status) {
  switch (status) {
    case FDW_OK: return "ok";
    case FDW_ERR_DOMAIN: return "domain error";
    case FDW_ERR_INDEX: return "index error";
    case FDW_ERR_SOLVER: return "solver error";
    case FDW_ERR_CONVERGENCE: return "convergence error";
    case FDW_ERR_IO: return "io error";
    case FDW_ERR_CONFIG: return "config error";
    case FDW_ERR_NULL: return "null argument";
    case FDW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fdw_last_error(void) { return g_last_error.c_str(); }

fdw_status fdw_a_gamma(double gamma, double alpha0, double* out) {
  FDW_NOT_NULL(out);
  return guarded([&] { *out = fdw::FracParams(gamma, alpha0).a_gamma(); });
}

fdw_status fdw_caputo_monomial(double order, double mu, double t, double* out) {
  FDW_NOT_NULL(out);
  return guarded([&] { *out = fdw::caputo_monomial(order, mu, t); });
}

fdw_status fdw_positivity_constants(double gamma, double final_time, double* c1, double* c2) {
  FDW_NOT_NULL(c1);
  FDW_NOT_NULL(c2);
  return guarded([&] {
    const fdw::PositivityConstants pc = fdw::positivity_constants(gamma, final_time);
    *c1 = pc.c1;
    *c2 = pc.c2;
  });
}

fdw_status fdw_constants_csv(int grid, double final_time, const char* path, int* all_strict) {
  FDW_NOT_NULL(path);
  return guarded([&] {
    const auto rows = fdw::run_constants_figure(grid, final_time);
    fdw::write_constants_csv(rows, path);
    if (all_strict) {
      *all_strict = 1;
      for (const auto& r : rows)
        if (!(r.c2 > r.c1)) *all_strict = 0;
    }
  });
}

fdw_status fdw_bdf2_weights(double gamma, double kappa, size_t steps, double* out) {
  FDW_NOT_NULL(out);
  return guarded([&] {
    const std::vector<double> w = fdw::bdf2_weights(gamma, kappa, steps);
    std::copy(w.begin(), w.end(), out);
  });
}

fdw_status fdw_cq_scheme_create(double gamma, double kappa, size_t steps, fdw_cq_scheme** out) {
  FDW_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] { *out = new fdw_cq_scheme{fdw::CQScheme(gamma, kappa, steps)}; });
}

void fdw_cq_scheme_destroy(fdw_cq_scheme* scheme) { delete scheme; }

fdw_status fdw_cq_scheme_weights(const fdw_cq_scheme* scheme, size_t n, double* omega, double* w0,
                                 double* w1) {
  FDW_NOT_NULL(scheme);
  if (n > scheme->scheme.steps())
    return fail(FDW_ERR_INDEX, "fdw_cq_scheme_weights: n = " + std::to_string(n) +
                                   " exceeds steps = " + std::to_string(scheme->scheme.steps()));
  if (omega) *omega = scheme->scheme.omega()[n];
  if (w0) *w0 = scheme->scheme.w0()[n];
  if (w1) *w1 = scheme->scheme.w1()[n];
  g_last_error.clear();
  return FDW_OK;
}

fdw_status fdw_cq_scheme_write_csv(const fdw_cq_scheme* scheme, const char* path) {
  FDW_NOT_NULL(scheme);
  FDW_NOT_NULL(path);
  return guarded([&] { scheme->scheme.write_csv(path); });
}

void fdw_ode_problem_init(fdw_ode_problem* problem) {
  if (!problem) return;
  *problem = fdw_ode_problem{};
  problem->gamma = 0.5;
  problem->final_time = 1.0;
  problem->substeps = 256;
}

fdw_status fdw_ode_solve(const fdw_ode_problem* problem, fdw_ode_solution** out) {
  FDW_NOT_NULL(problem);
  FDW_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    fdw::VolterraProblem p;
    p.gamma = problem->gamma;
    p.lambda = problem->lambda;
    p.a_gamma = problem->a_gamma;
    p.u0 = problem->u0;
    p.v0 = problem->v0;
    p.final_time = problem->final_time;
    p.substeps = problem->substeps;
    if (problem->f) {
      const fdw_time_fn fn = problem->f;
      void* user = problem->user;
      p.f = [fn, user](double t) { return fn(t, user); };
    } else {
      const double c = problem->f_const, s = problem->f_slope;
      p.f = [c, s](double t) { return c + s * t; };
    }
    auto sol = std::make_unique<fdw_ode_solution>();
    sol->solution = fdw::solve_volterra(p);
    sol->problem = std::move(p);
    *out = sol.release();
  });
}

void fdw_ode_solution_destroy(fdw_ode_solution* solution) { delete solution; }

size_t fdw_ode_solution_size(const fdw_ode_solution* solution) {
  return solution ? solution->solution.t.size() : 0;
}

fdw_status fdw_ode_solution_sample(const fdw_ode_solution* solution, size_t i, double* t,
                                   double* u, double* v) {
  FDW_NOT_NULL(solution);
  const auto& s = solution->solution;
  if (i >= s.t.size())
    return fail(FDW_ERR_INDEX, "fdw_ode_solution_sample: index " + std::to_string(i) +
                                   " out of range");
  if (t) *t = s.t[i];
  if (u) *u = s.u[i];
  if (v) *v = s.v[i];
  g_last_error.clear();
  return FDW_OK;
}

fdw_status fdw_ode_solution_fit(const fdw_ode_solution* solution, fdw_asymptotic_fit* out) {
  FDW_NOT_NULL(solution);
  FDW_NOT_NULL(out);
  return guarded([&] {
    const fdw::AsymptoticFit fit = fdw::asymptotic_check(solution->problem, solution->solution);
    out->exponent = fit.exponent;
    out->coefficient = fit.coefficient;
    out->expected_exponent = fit.expected_exponent;
    out->expected_coefficient = fit.expected_coefficient;
    out->monotone = fit.monotone ? 1 : 0;
    out->samples = fit.samples;
  });
}

fdw_status fdw_ode_solution_write_csv(const fdw_ode_solution* solution, const char* path) {
  FDW_NOT_NULL(solution);
  FDW_NOT_NULL(path);
  return guarded([&] { solution->solution.write_csv(path); });
}

void fdw_convergence_options_init(fdw_convergence_options* options) {
  if (!options) return;
  const fdw::ConvergenceOptions d;
  *options = fdw_convergence_options{};
  options->case_name = "smooth1d";
  options->gamma = d.gamma;
  options->alpha0 = d.alpha0;
  options->corrected = d.corrected ? 1 : 0;
  options->levels = d.levels;
  options->final_time = d.final_time;
  options->parallel = d.parallel ? 1 : 0;
}

fdw_status fdw_convergence_run(const fdw_convergence_options* options,
                               fdw_convergence_report** out) {
  FDW_NOT_NULL(options);
  FDW_NOT_NULL(options->case_name);
  FDW_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    fdw::ConvergenceOptions o;
    o.case_name = options->case_name;
    o.gamma = options->gamma;
    o.alpha0 = options->alpha0;
    o.corrected = options->corrected != 0;
    o.levels = options->levels;
    if (options->coupling > 0.0) o.coupling = options->coupling;
    if (options->kappa0 > 0.0) o.kappa0 = options->kappa0;
    o.final_time = options->final_time;
    o.parallel = options->parallel != 0;
    auto r = std::make_unique<fdw_convergence_report>();
    r->report = fdw::run_convergence(o);
    r->norm = r->report.primary_norm();
    r->summary = r->report.summary();
    *out = r.release();
  });
}

void fdw_convergence_destroy(fdw_convergence_report* report) { delete report; }

size_t fdw_convergence_level_count(const fdw_convergence_report* report) {
  return report ? report->report.levels.size() : 0;
}

fdw_status fdw_convergence_level(const fdw_convergence_report* report, size_t i, fdw_level* out) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(out);
  const auto& levels = report->report.levels;
  if (i >= levels.size())
    return fail(FDW_ERR_INDEX, "fdw_convergence_level: index " + std::to_string(i) +
                                   " out of range");
  const auto& l = levels[i];
  *out = fdw_level{l.level, l.n_per_side, l.h, l.kappa, l.error_energy, l.error_l2max};
  g_last_error.clear();
  return FDW_OK;
}

fdw_status fdw_convergence_rates(const fdw_convergence_report* report, fdw_rate* primary,
                                 fdw_rate* energy, fdw_rate* l2max) {
  FDW_NOT_NULL(report);
  const auto conv = [](const fdw::RateFit& f) {
    return fdw_rate{f.global, f.last_pair, f.pre_asymptotic ? 1 : 0};
  };
  return guarded([&] {
    if (primary) *primary = conv(report->report.primary());
    if (energy) *energy = conv(report->report.energy);
    if (l2max) *l2max = conv(report->report.l2max);
  });
}

const char* fdw_convergence_primary_norm(const fdw_convergence_report* report) {
  return report ? report->norm.c_str() : "";
}

const char* fdw_convergence_summary(const fdw_convergence_report* report) {
  return report ? report->summary.c_str() : "";
}

fdw_status fdw_convergence_write_csv(const fdw_convergence_report* report, const char* path) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(path);
  return guarded([&] { report->report.write_csv(path); });
}

fdw_status fdw_expected_rate(const char* case_name, double gamma, int corrected, double* out) {
  FDW_NOT_NULL(case_name);
  FDW_NOT_NULL(out);
  return guarded([&] { *out = fdw::expected_rate(case_name, gamma, corrected != 0); });
}

void fdw_damping_options_init(fdw_damping_options* options) {
  if (!options) return;
  const fdw::DampingOptions d;
  *options = fdw_damping_options{};
  options->alpha0 = d.alpha0;
  options->n_per_side = d.n_per_side;
  options->kappa_over_h = d.kappa_over_h;
  options->final_time = d.final_time;
  options->corrected = d.corrected ? 1 : 0;
  options->parallel = d.parallel ? 1 : 0;
}

fdw_status fdw_damping_run(const fdw_damping_options* options, fdw_damping_report** out) {
  FDW_NOT_NULL(options);
  FDW_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    fdw::DampingOptions o;
    if (options->gammas && options->gamma_count > 0)
      o.gammas.assign(options->gammas, options->gammas + options->gamma_count);
    o.alpha0 = options->alpha0;
    o.n_per_side = options->n_per_side;
    o.kappa_over_h = options->kappa_over_h;
    o.final_time = options->final_time;
    o.corrected = options->corrected != 0;
    o.parallel = options->parallel != 0;
    auto r = std::make_unique<fdw_damping_report>();
    r->report = fdw::run_damping_demo(o);
    *out = r.release();
  });
}

void fdw_damping_destroy(fdw_damping_report* report) { delete report; }

size_t fdw_damping_trace_count(const fdw_damping_report* report) {
  return report ? report->report.traces.size() : 0;
}

fdw_status fdw_damping_trace_info(const fdw_damping_report* report, size_t i,
                                  fdw_damping_trace* out) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(out);
  const auto& traces = report->report.traces;
  if (i >= traces.size())
    return fail(FDW_ERR_INDEX, "fdw_damping_trace_info: index " + std::to_string(i) +
                                   " out of range");
  const auto& tr = traces[i];
  *out = fdw_damping_trace{tr.label.c_str(), tr.gamma, tr.a_gamma, tr.late_amplitude,
                           tr.energy.empty() ? 0.0 : tr.energy.back()};
  g_last_error.clear();
  return FDW_OK;
}

fdw_status fdw_damping_write_csv(const fdw_damping_report* report, const char* path) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(path);
  return guarded([&] { report->report.write_csv(path); });
}

void fdw_solve_options_init(fdw_solve_options* options) {
  if (!options) return;
  const fdw::SolveOptions d;
  *options = fdw_solve_options{};
  options->case_name = "smooth1d";
  options->gamma = d.gamma;
  options->alpha0 = d.alpha0;
  options->corrected = d.corrected ? 1 : 0;
  options->n_per_side = d.n_per_side;
  options->kappa = d.kappa;
  options->final_time = d.final_time;
  options->snapshot_every = d.snapshot_every;
  options->allow_cfl_violation = d.allow_cfl_violation ? 1 : 0;
}

fdw_status fdw_solve_run(const fdw_solve_options* options, fdw_solve_report** out) {
  FDW_NOT_NULL(options);
  FDW_NOT_NULL(options->case_name);
  FDW_NOT_NULL(out);
  *out = nullptr;
  return guarded([&] {
    fdw::SolveOptions o;
    o.case_name = options->case_name;
    o.gamma = options->gamma;
    o.alpha0 = options->alpha0;
    o.corrected = options->corrected != 0;
    o.n_per_side = options->n_per_side;
    o.kappa = options->kappa;
    o.final_time = options->final_time;
    o.snapshot_every = options->snapshot_every;
    o.allow_cfl_violation = options->allow_cfl_violation != 0;
    auto r = std::make_unique<fdw_solve_report>();
    r->report = fdw::run_solve(o);
    *out = r.release();
  });
}

void fdw_solve_destroy(fdw_solve_report* report) { delete report; }

fdw_status fdw_solve_get_summary(const fdw_solve_report* report, fdw_solve_summary* out) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(out);
  const auto& r = report->report;
  *out = fdw_solve_summary{r.steps,
                           r.a_gamma,
                           r.h,
                           r.c_inv,
                           r.cfl_limit,
                           r.error_energy,
                           r.error_l2max,
                           r.energy.empty() ? 0.0 : r.energy.front(),
                           r.energy.empty() ? 0.0 : r.energy.back()};
  g_last_error.clear();
  return FDW_OK;
}

fdw_status fdw_solve_write_snapshots_csv(const fdw_solve_report* report, const char* path) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(path);
  return guarded([&] { report->report.write_snapshots_csv(path); });
}

fdw_status fdw_solve_write_energy_csv(const fdw_solve_report* report, const char* path) {
  FDW_NOT_NULL(report);
  FDW_NOT_NULL(path);
  return guarded([&] { report->report.write_energy_csv(path); });
}

int fdw_acceptance_criterion_count(void) { return fdw::kCriterionCount; }

fdw_status fdw_acceptance_run(const int* ids, size_t count, fdw_acceptance** out) {
  FDW_NOT_NULL(out);
  *out = nullptr;
  std::vector<int> list;
  if (ids) list.assign(ids, ids + count);
  for (int id : list)
    if (id < 1 || id > fdw::kCriterionCount)
      return fail(FDW_ERR_DOMAIN, "fdw_acceptance_run: no criterion " + std::to_string(id));
  return guarded([&] {
    auto r = std::make_unique<fdw_acceptance>();
    r->results = fdw::run_acceptance(list);
    for (const auto& c : r->results) r->lines.push_back(fdw::format_result(c));
    *out = r.release();
  });
}

void fdw_acceptance_destroy(fdw_acceptance* results) { delete results; }

size_t fdw_acceptance_size(const fdw_acceptance* results) {
  return results ? results->results.size() : 0;
}

fdw_status fdw_acceptance_get(const fdw_acceptance* results, size_t i, fdw_criterion* out) {
  FDW_NOT_NULL(results);
  FDW_NOT_NULL(out);
  if (i >= results->results.size())
    return fail(FDW_ERR_INDEX, "fdw_acceptance_get: index " + std::to_string(i) + " out of range");
  const auto& c = results->results[i];
  *out = fdw_criterion{c.id, c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), c.seconds};
  g_last_error.clear();
  return FDW_OK;
}

const char* fdw_acceptance_line(const fdw_acceptance* results, size_t i) {
  if (!results || i >= results->lines.size()) return "";
  return results->lines[i].c_str();
}

}  // extern "C"
