#include "fdw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

#include "fdw/cq.hpp"
#include "fdw/csv.hpp"
#include "fdw/error.hpp"
#include "fdw/fraccalc.hpp"
#include "fdw/solver.hpp"
#include "fdw/special.hpp"

namespace fdw {
namespace {

TimeFunction smooth_frac_theta(double order) {
  // Theta' for orders in (0,1), Theta'' for orders in (1,2).
  TimeFunction deriv;
  if (order < 1.0) {
    deriv = [](double t) { return 24.0 * std::cos(24.0 * t) - 12.0 * std::sin(12.0 * t); };
  } else {
    deriv = [](double t) { return -576.0 * std::sin(24.0 * t) - 144.0 * std::cos(12.0 * t); };
  }
  return [deriv, order](double t) { return caputo_quadrature(order, deriv, t); };
}

void set_smooth_time(ManufacturedCase& c) {
  c.theta = [](double t) { return std::sin(24.0 * t) + std::cos(12.0 * t); };
  c.dtheta = [](double t) { return 24.0 * std::cos(24.0 * t) - 12.0 * std::sin(12.0 * t); };
  c.ddtheta = [](double t) { return -576.0 * std::sin(24.0 * t) - 144.0 * std::cos(12.0 * t); };
  c.frac_theta = smooth_frac_theta(c.gamma + 1.0);
  c.smooth = true;
  c.alpha = std::numeric_limits<double>::infinity();
}

void set_nonsmooth_time(ManufacturedCase& c, bool printed) {
  const double up = c.gamma > 0.0 ? 1.0 : 0.0;  // ceil(gamma)
  const double mu = 2.0 + up - c.gamma;
  const double coef = c.a_gamma * (printed ? 1.0 : 1.0 + up) / gamma_fn(mu + 1.0);
  const double order = c.gamma + 1.0;
  c.theta = [=](double t) { return 1.0 + t + t * t - coef * std::pow(t, mu); };
  c.dtheta = [=](double t) { return 1.0 + 2.0 * t - coef * mu * std::pow(t, mu - 1.0); };
  c.ddtheta = [=](double t) { return 2.0 - coef * mu * (mu - 1.0) * std::pow(t, mu - 2.0); };
  c.frac_theta = [=](double t) {
    if (t <= 0.0) return 0.0;
    return caputo_monomial(order, 0.0, t) + caputo_monomial(order, 1.0, t) +
           caputo_monomial(order, 2.0, t) - coef * caputo_monomial(order, mu, t);
  };
  c.smooth = false;
  c.alpha = up - c.gamma;
}

void set_space_1d(ManufacturedCase& c) {
  c.domain = Domain::interval(0.0, 1.0);
  c.lambda_s = kPi * kPi;
  c.spatial = [](const Point& p) { return std::sin(kPi * p.x); };
  c.spatial_grad = [](const Point& p) { return Point{kPi * std::cos(kPi * p.x), 0.0}; };
  c.coupling = 6.0;
  c.kappa0 = 1.0 / 64.0;
}

void set_space_2d(ManufacturedCase& c) {
  c.domain = Domain::rectangle(-1.0, 1.0, -1.0, 1.0);
  c.lambda_s = 2.0 * kPi * kPi;
  c.spatial = [](const Point& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  c.spatial_grad = [](const Point& p) {
    return Point{kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y),
                 kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
  };
  c.coupling = 10.0;
  c.kappa0 = 1.0 / 40.0;
}

template <class Fn>
auto launch(bool parallel, Fn&& fn) {
  return std::async(parallel ? std::launch::async : std::launch::deferred, std::forward<Fn>(fn));
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string gamma_label(double g) {
  std::ostringstream os;
  os << "gamma=" << g;
  return os.str();
}

}  // namespace

double ManufacturedCase::source_time(double t) const {
  double s = ddtheta(t) + lambda_s * theta(t);
  if (a_gamma != 0.0) s += a_gamma * frac_theta(t);
  return s;
}

std::vector<std::string> case_names() {
  return {"smooth1d", "smooth2d", "nonsmooth1d", "nonsmooth1d_printed"};
}

ManufacturedCase build_case(const std::string& name, double gamma, double alpha0) {
  ManufacturedCase c;
  c.name = name;
  c.gamma = gamma;
  c.alpha0 = alpha0;
  c.a_gamma = a_gamma(gamma, alpha0);
  if (name == "smooth1d") {
    set_space_1d(c);
    set_smooth_time(c);
  } else if (name == "smooth2d") {
    set_space_2d(c);
    set_smooth_time(c);
  } else if (name == "nonsmooth1d" || name == "nonsmooth1d_printed") {
    set_space_1d(c);
    set_nonsmooth_time(c, name == "nonsmooth1d_printed");
  } else {
    std::string valid;
    for (const auto& n : case_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown case '" + name + "' (valid: " + valid + ")");
  }
  return c;
}

namespace {

using CaseObserver = std::function<void(std::size_t, double, const Vector&)>;

CaseRun run_case_observed(const ManufacturedCase& c, std::shared_ptr<const FemSystem> fem,
                          double kappa, double final_time, bool corrected, bool allow_cfl,
                          const CaseObserver& extra) {
  const Vector shape = fem->interpolate(c.spatial);
  const Vector ritz = ritz_projection(*fem, c.spatial_grad);
  const Vector shape_load = load_vector(*fem, c.spatial);

  SimConfig cfg;
  cfg.gamma = c.gamma;
  cfg.a_gamma = c.a_gamma;
  cfg.final_time = final_time;
  cfg.kappa = kappa;
  cfg.corrected = corrected;
  cfg.fem = fem;
  cfg.u0 = c.theta(0.0) * ritz;
  cfg.v0 = c.dtheta(0.0) * ritz;
  cfg.load = [&c, shape_load](double t) -> Vector { return c.source_time(t) * shape_load; };
  cfg.allow_cfl_violation = allow_cfl;

  Simulation sim(cfg);
  CaseRun out;
  Vector prev;
  auto observer = [&](std::size_t n, double t, const Vector& u) {
    out.error_l2max = std::max(out.error_l2max, l2_norm(*fem, u - c.theta(t) * shape));
    if (n > 0) {
      const double mid = t - 0.5 * kappa;
      const Vector de = (u - prev) / kappa - c.dtheta(mid) * shape;
      const Vector me = 0.5 * (u + prev) - c.theta(mid) * shape;
      out.error_energy = std::max(out.error_energy, l2_norm(*fem, de) + l2_norm(*fem, me));
    }
    prev = u;
    if (extra) extra(n, t, u);
  };
  RunResult result = sim.run(observer);
  out.steps = result.steps;
  out.energy = std::move(result.energy);
  return out;
}

}  // namespace

CaseRun run_case(const ManufacturedCase& c, int n_per_side, double kappa, double final_time,
                 bool corrected) {
  auto fem = std::make_shared<const FemSystem>(build_mesh(c.domain, n_per_side));
  return run_case_observed(c, fem, kappa, final_time, corrected, false, {});
}

SolveReport run_solve(const SolveOptions& options) {
  FDW_REQUIRE(options.n_per_side >= 2, DomainError, "solve: n_per_side must be at least 2");
  FDW_REQUIRE(options.kappa > 0.0, DomainError, "solve: kappa must be positive");
  FDW_REQUIRE(options.final_time > 0.0, DomainError, "solve: final_time must be positive");
  FDW_REQUIRE(options.snapshot_every >= 1, DomainError, "solve: snapshot_every must be >= 1");
  const ManufacturedCase c = build_case(options.case_name, options.gamma, options.alpha0);
  auto fem = std::make_shared<const FemSystem>(build_mesh(c.domain, options.n_per_side));

  SolveReport report;
  report.options = options;
  report.a_gamma = c.a_gamma;
  report.h = fem->mesh().h;
  report.c_inv = inverse_constant(*fem);
  report.cfl_limit = cfl_limit(report.h, report.c_inv);
  report.nodes = fem->mesh().nodes;

  const auto snapshot = [&](std::size_t n, double t, const Vector& u) {
    if (n % static_cast<std::size_t>(options.snapshot_every) != 0) return;
    report.snapshot_steps.push_back(n);
    report.snapshot_times.push_back(t);
    report.snapshots.push_back(fem->extend(u));
    report.exact.push_back(fem->extend(fem->interpolate([&](const Point& x) { return c.u(x, t); })));
  };
  CaseRun run = run_case_observed(c, fem, options.kappa, options.final_time, options.corrected,
                                  options.allow_cfl_violation, snapshot);
  report.steps = run.steps;
  report.error_energy = run.error_energy;
  report.error_l2max = run.error_l2max;
  report.energy = std::move(run.energy);
  return report;
}

void SolveReport::write_snapshots_csv(const std::string& path) const {
  CsvWriter csv(path, {"n", "t", "node", "x", "y", "u", "u_exact"});
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      csv.row({static_cast<double>(snapshot_steps[s]), snapshot_times[s], static_cast<double>(i),
               nodes[i].x, nodes[i].y, snapshots[s][static_cast<Eigen::Index>(i)],
               exact[s][static_cast<Eigen::Index>(i)]});
    }
  }
}

void SolveReport::write_energy_csv(const std::string& path) const {
  CsvWriter csv(path, {"n", "t", "energy"});
  for (std::size_t k = 0; k < energy.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    csv.row({n, n * options.kappa, energy[k]});
  }
}

RateFit fit_rate(const std::vector<double>& errors) {
  FDW_REQUIRE(errors.size() >= 2, DomainError, "rate fit needs at least two levels");
  std::vector<double> x, y;
  for (std::size_t l = 0; l < errors.size(); ++l) {
    FDW_REQUIRE(errors[l] > 0.0, DomainError, "rate fit needs positive errors");
    x.push_back(static_cast<double>(l));
    y.push_back(std::log2(errors[l]));
  }
  RateFit fit;
  fit.global = -least_squares_slope(x, y);
  fit.last_pair = y[y.size() - 2] - y.back();
  fit.pre_asymptotic = std::fabs(fit.global - fit.last_pair) >= 0.2;
  return fit;
}

const RateFit& ConvergenceReport::primary() const {
  return build_case(options.case_name, options.gamma, options.alpha0).domain.dimension == 2
             ? l2max
             : energy;
}

std::string ConvergenceReport::primary_norm() const {
  return &primary() == &l2max ? "l2max" : "energy";
}

void ConvergenceReport::write_csv(const std::string& path) const {
  CsvWriter csv(path, {"level", "n_per_side", "h", "kappa", "error_energy", "error_l2max"});
  for (const LevelResult& l : levels) {
    csv.row({static_cast<double>(l.level), static_cast<double>(l.n_per_side), l.h, l.kappa,
             l.error_energy, l.error_l2max});
  }
}

std::string ConvergenceReport::summary() const {
  const RateFit& r = primary();
  std::ostringstream os;
  os << "case=" << options.case_name << " gamma=" << format_real(options.gamma)
     << " alpha0=" << format_real(options.alpha0) << " corrected=" << (options.corrected ? 1 : 0)
     << " norm=" << primary_norm() << " rate=" << format_real(r.global)
     << " last_pair=" << format_real(r.last_pair)
     << " expected=" << format_real(expected_rate(options.case_name, options.gamma, options.corrected));
  if (r.pre_asymptotic) os << " pre-asymptotic";
  return os.str();
}

ConvergenceReport run_convergence(const ConvergenceOptions& options) {
  FDW_REQUIRE(options.levels >= 3, ConfigError, "a convergence study needs at least 3 levels");
  const ManufacturedCase c = build_case(options.case_name, options.gamma, options.alpha0);

  ConvergenceReport report;
  report.options = options;
  report.coupling = options.coupling.value_or(c.coupling);
  report.kappa0 = options.kappa0.value_or(c.kappa0 * options.final_time);
  FDW_REQUIRE(report.coupling > 0.0 && report.kappa0 > 0.0, ConfigError,
              "coupling and kappa0 must be positive");

  const double side = c.domain.b - c.domain.a;
  std::vector<std::future<CaseRun>> jobs;
  for (int l = 0; l < options.levels; ++l) {
    LevelResult level;
    level.level = l;
    level.kappa = report.kappa0 / std::ldexp(1.0, l);
    level.n_per_side =
        std::max(2, static_cast<int>(std::lround(side / (report.coupling * level.kappa))));
    level.h = side / level.n_per_side;
    report.levels.push_back(level);
    jobs.push_back(launch(options.parallel, [&c, level, &options] {
      return run_case(c, level.n_per_side, level.kappa, options.final_time, options.corrected);
    }));
  }
  std::vector<double> energy, l2;
  for (std::size_t l = 0; l < jobs.size(); ++l) {
    CaseRun run;
    try {
      run = jobs[l].get();
    } catch (const Error& e) {
      throw Error(e.code(), "level " + std::to_string(l) + ": " + e.what());
    }
    report.levels[l].error_energy = run.error_energy;
    report.levels[l].error_l2max = run.error_l2max;
    energy.push_back(run.error_energy);
    l2.push_back(run.error_l2max);
  }
  report.energy = fit_rate(energy);
  report.l2max = fit_rate(l2);
  return report;
}

double expected_rate(const std::string& case_name, double gamma, bool corrected) {
  const ManufacturedCase c = build_case(case_name, gamma);
  double rate = std::min(2.0, 1.0 + c.alpha);
  if (!corrected) rate = std::min(rate, gamma < 0.0 ? 1.0 : 2.0 - gamma);
  return rate;
}

void DampingReport::write_csv(const std::string& path) const {
  std::vector<std::string> header{"t"};
  for (const auto& tr : traces) header.push_back(tr.label);
  CsvWriter csv(path, header);
  std::vector<double> row(traces.size() + 1);
  for (std::size_t n = 0; n < t.size(); ++n) {
    row[0] = t[n];
    for (std::size_t k = 0; k < traces.size(); ++k) row[k + 1] = traces[k].values[n];
    csv.row(std::span<const double>(row));
  }
}

DampingReport run_damping_demo(const DampingOptions& options) {
  FDW_REQUIRE(options.n_per_side >= 2 && options.n_per_side % 2 == 0, ConfigError,
              "damping demo needs an even n_per_side so that (0,0) is a node");
  FDW_REQUIRE(options.kappa_over_h > 0.0 && options.final_time > 0.0, ConfigError,
              "damping demo needs positive kappa_over_h and final time");

  auto fem = std::make_shared<const FemSystem>(
      build_mesh(Domain::rectangle(-1.0, 1.0, -1.0, 1.0), options.n_per_side));
  const Mesh& mesh = fem->mesh();
  const int center = mesh.interior_index[mesh.node_at(options.n_per_side / 2,
                                                      options.n_per_side / 2)];
  const Vector u0 = ritz_projection(*fem, [](const Point& p) {
    const double e = std::exp(-10.0 * (p.x * p.x + p.y * p.y));
    return Point{-20.0 * p.x * e, -20.0 * p.y * e};
  });
  const double c_inv = inverse_constant(*fem);

  DampingReport report;
  report.options = options;
  report.kappa = options.kappa_over_h * mesh.h;

  auto trace_run = [&](double gamma, double a) {
    SimConfig cfg;
    cfg.gamma = gamma;
    cfg.a_gamma = a;
    cfg.final_time = options.final_time;
    cfg.kappa = report.kappa;
    cfg.corrected = options.corrected;
    cfg.fem = fem;
    cfg.u0 = u0;
    cfg.v0 = Vector::Zero(u0.size());
    cfg.c_inv = c_inv;
    DampingTrace tr;
    tr.gamma = gamma;
    tr.a_gamma = a;
    Simulation sim(cfg);
    RunResult r = sim.run([&](std::size_t, double, const Vector& u) {
      tr.values.push_back(u[center]);
    });
    tr.energy = std::move(r.energy);
    const std::size_t half = tr.values.size() / 2;
    for (std::size_t n = half; n < tr.values.size(); ++n) {
      tr.late_amplitude = std::max(tr.late_amplitude, std::fabs(tr.values[n]));
    }
    return tr;
  };

  std::vector<std::future<DampingTrace>> jobs;
  jobs.push_back(launch(options.parallel, [&] {
    DampingTrace tr = trace_run(0.5, 0.0);
    tr.gamma = std::numeric_limits<double>::quiet_NaN();
    tr.label = "undamped";
    return tr;
  }));
  for (double g : options.gammas) {
    jobs.push_back(launch(options.parallel, [&, g] {
      DampingTrace tr = trace_run(g, a_gamma(g, options.alpha0));
      tr.label = gamma_label(g);
      return tr;
    }));
  }
  for (auto& j : jobs) report.traces.push_back(j.get());
  for (std::size_t n = 0; n < report.traces.front().values.size(); ++n) {
    report.t.push_back(static_cast<double>(n) * report.kappa);
  }
  return report;
}

std::vector<ConstantsRow> run_constants_figure(int grid_points, double final_time) {
  FDW_REQUIRE(grid_points >= 1, ConfigError, "constants grid needs at least one point");
  std::vector<ConstantsRow> rows;
  for (int i = 1; i <= grid_points; ++i) {
    const double g = static_cast<double>(i) / (grid_points + 1);
    const PositivityConstants pc = positivity_constants(g, final_time);
    rows.push_back({g, pc.c1, pc.c2});
  }
  return rows;
}

void write_constants_csv(const std::vector<ConstantsRow>& rows, const std::string& path) {
  CsvWriter csv(path, {"gamma", "C1", "C2"});
  for (const auto& r : rows) csv.row({r.gamma, r.c1, r.c2});
}

std::string to_string(CQOperator op) {
  switch (op) {
    case CQOperator::plain: return "plain";
    case CQOperator::corrected: return "corrected";
    case CQOperator::mixed: return "mixed";
    case CQOperator::mixed_corrected: return "mixed_corrected";
  }
  return "?";
}

std::optional<double> lemma_order(CQOperator op, double gamma, double beta) {
  FDW_REQUIRE(beta >= 0.0, DomainError, "lemma_order: beta must be non-negative");
  const bool pos = gamma > 0.0;
  const bool fractional_between = beta > 2.0 && beta < 3.0;
  switch (op) {
    case CQOperator::plain:
      if (beta == 0.0) return pos ? std::nullopt : std::optional<double>(1.0);
      FDW_REQUIRE(beta >= 1.0, DomainError, "lemma_order: beta in (0,1) is not covered");
      return 2.0;
    case CQOperator::corrected:
      if (beta == 0.0 || (beta == 1.0 && pos)) return std::nullopt;
      FDW_REQUIRE(beta >= 1.0, DomainError, "lemma_order: beta in (0,1) is not covered");
      return 2.0;
    case CQOperator::mixed:
      if (beta == 0.0 || (beta == 1.0 && pos)) return std::nullopt;
      if (beta == 1.0) return 1.0;
      FDW_REQUIRE(beta >= 2.0, DomainError, "lemma_order: beta in (1,2) is not covered");
      if (fractional_between && pos) return 2.0 - gamma;
      return 2.0;
    case CQOperator::mixed_corrected:
      if (beta == 0.0 || beta == 1.0 || (beta == 2.0 && pos)) return std::nullopt;
      FDW_REQUIRE(beta >= 2.0, DomainError, "lemma_order: beta in (1,2) is not covered");
      if (fractional_between && pos) return std::min(beta, 2.0 - gamma);
      return 2.0;
  }
  return 2.0;
}

MonomialStudy monomial_study(CQOperator op, double gamma, double beta, double t, int k_first,
                             int k_last) {
  FDW_REQUIRE(t > 0.0 && k_first <= k_last && k_first >= 0, DomainError,
              "monomial_study: bad arguments");
  MonomialStudy s;
  s.op = op;
  s.gamma = gamma;
  s.beta = beta;
  const bool mixed = op == CQOperator::mixed || op == CQOperator::mixed_corrected;
  const bool corrected = op == CQOperator::corrected || op == CQOperator::mixed_corrected;
  s.reference = caputo_monomial(mixed ? gamma + 1.0 : gamma, beta, t);
  const double scale = std::max(1.0, std::fabs(s.reference));

  s.exact = true;
  std::vector<double> lx, ly;
  for (int k = k_first; k <= k_last; ++k) {
    const std::size_t n = std::size_t{1} << k;
    const double kappa = t / static_cast<double>(n);
    const CQScheme scheme(gamma, kappa, n);
    Sequence<double> g;
    for (std::size_t j = 0; j <= n + 1; ++j) {
      g.values.push_back(beta == 0.0 ? 1.0 : std::pow(static_cast<double>(j) * kappa, beta));
    }
    g.t0_derivative = beta == 1.0 ? 1.0 : 0.0;
    double approx = 0.0;
    if (mixed) {
      approx = mixed_operator(scheme, g, n, corrected);
    } else {
      const std::span<const double> view(g.values);
      approx = corrected ? scheme.apply_corrected(view, n) : scheme.apply(view, n);
    }
    const double err = std::fabs(approx - s.reference);
    s.kappas.push_back(kappa);
    s.errors.push_back(err);
    if (err > 1e-10 * scale) s.exact = false;
    if (err > 0.0) {
      lx.push_back(std::log(kappa));
      ly.push_back(std::log(err));
    }
  }
  s.order = lx.size() >= 2 ? least_squares_slope(lx, ly) : std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace fdw
