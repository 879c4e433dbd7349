#pragma once

// Manufactured-solution experiments: convergence studies, the damping demo,
// the positivity-constant table and monomial rate studies for the CQ operators.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fdw/fem.hpp"
#include "fdw/oracle.hpp"

namespace fdw {

/// Separable exact solution u(x,t) = Theta(t) S(x) with -Laplace S = lambda_s S.
struct ManufacturedCase {
  std::string name;
  Domain domain;
  double gamma = 0.0;
  double alpha0 = 1.0;
  double a_gamma = 0.0;
  double lambda_s = 0.0;
  ScalarField spatial;
  GradientField spatial_grad;
  TimeFunction theta;
  TimeFunction dtheta;
  TimeFunction ddtheta;
  /// Caputo derivative of order gamma+1 of Theta.
  TimeFunction frac_theta;
  bool smooth = true;
  /// Regularity index ceil(gamma) - gamma of the nonsmooth cases.
  double alpha = 0.0;
  /// Default coupling h = coupling * kappa and first step of the refinement ladder.
  double coupling = 6.0;
  double kappa0 = 1.0 / 64.0;

  /// Temporal factor of f = Theta'' + lambda_s Theta + a D^{gamma+1} Theta.
  double source_time(double t) const;
  double u(const Point& x, double t) const { return theta(t) * spatial(x); }
  double f(const Point& x, double t) const { return source_time(t) * spatial(x); }
};

/// smooth1d, smooth2d, nonsmooth1d, nonsmooth1d_printed.
std::vector<std::string> case_names();

/// The nonsmooth cases use Theta = 1 + t + t^2 - c t^{2+ceil(gamma)-gamma}.
/// "nonsmooth1d" takes c = a (1+ceil(gamma)) / Gamma(3-gamma+ceil(gamma)),
/// which removes the leading singular term of f for both signs of gamma;
/// "nonsmooth1d_printed" takes c = a / Gamma(3-gamma+ceil(gamma)), which
/// leaves a t^{1-gamma} term in f when gamma > 0.
ManufacturedCase build_case(const std::string& name, double gamma, double alpha0 = 1.0);

/// Discrete solution for a case on a given mesh and step.
struct CaseRun {
  double error_energy = 0.0;
  double error_l2max = 0.0;
  std::size_t steps = 0;
  std::vector<double> energy;
};

CaseRun run_case(const ManufacturedCase& c, int n_per_side, double kappa, double final_time,
                 bool corrected);

/// Single run of a case with nodal snapshots.
struct SolveOptions {
  std::string case_name = "smooth1d";
  double gamma = 0.5;
  double alpha0 = 1.0;
  bool corrected = false;
  int n_per_side = 64;
  double kappa = 1.0 / 640.0;
  double final_time = 1.0;
  /// Snapshot every k-th step, including n = 0.
  int snapshot_every = 10;
  bool allow_cfl_violation = false;
};

struct SolveReport {
  SolveOptions options;
  double a_gamma = 0.0;
  double h = 0.0;
  double c_inv = 0.0;
  double cfl_limit = 0.0;
  std::size_t steps = 0;
  double error_energy = 0.0;
  double error_l2max = 0.0;
  /// energy[k] is E_{k+1}.
  std::vector<double> energy;
  std::vector<Point> nodes;
  std::vector<std::size_t> snapshot_steps;
  std::vector<double> snapshot_times;
  /// Values on all nodes, boundary included.
  std::vector<Vector> snapshots;
  std::vector<Vector> exact;

  /// Long format: n, t, node, x, y, u, u_exact.
  void write_snapshots_csv(const std::string& path) const;
  /// n, t, energy.
  void write_energy_csv(const std::string& path) const;
};

SolveReport run_solve(const SolveOptions& options);

struct ConvergenceOptions {
  std::string case_name = "smooth1d";
  double gamma = 0.5;
  double alpha0 = 1.0;
  bool corrected = false;
  int levels = 4;
  /// Defaults to the case's coupling and first step.
  std::optional<double> coupling;
  std::optional<double> kappa0;
  double final_time = 1.0;
  bool parallel = true;
};

struct LevelResult {
  int level = 0;
  int n_per_side = 0;
  double h = 0.0;
  double kappa = 0.0;
  double error_energy = 0.0;
  double error_l2max = 0.0;
};

struct RateFit {
  /// Least-squares slope of -log2(error) against the level index.
  double global = 0.0;
  /// Rate between the two finest levels.
  double last_pair = 0.0;
  /// Set when global and last_pair differ by 0.2 or more.
  bool pre_asymptotic = false;
};

RateFit fit_rate(const std::vector<double>& errors);

struct ConvergenceReport {
  ConvergenceOptions options;
  double coupling = 0.0;
  double kappa0 = 0.0;
  std::vector<LevelResult> levels;
  RateFit energy;
  RateFit l2max;
  /// The norm used for the case: energy in 1D, max-L2 in 2D.
  const RateFit& primary() const;
  std::string primary_norm() const;

  /// CSV columns level, n_per_side, h, kappa, error_energy, error_l2max.
  void write_csv(const std::string& path) const;
  std::string summary() const;
};

/// Runs the levels kappa_l = kappa0 / 2^l with n_per_side = round(side/(coupling kappa_l)).
/// Rates are fitted against the level, i.e. against kappa, which halves exactly.
ConvergenceReport run_convergence(const ConvergenceOptions& options);

/// Rate predicted by the error theorems: corrected min(2, 1+alpha);
/// uncorrected additionally capped by 1 (gamma < 0) or 2-gamma (gamma > 0).
/// Smooth cases have alpha = infinity.
double expected_rate(const std::string& case_name, double gamma, bool corrected);

struct DampingOptions {
  std::vector<double> gammas{-0.75, -0.25, 0.25, 0.75};
  double alpha0 = 1.0;
  int n_per_side = 64;
  /// kappa = kappa_over_h * h.
  double kappa_over_h = 0.1;
  double final_time = 2.0;
  bool corrected = false;
  bool parallel = true;
};

struct DampingTrace {
  std::string label;
  /// NaN for the undamped baseline.
  double gamma = 0.0;
  double a_gamma = 0.0;
  std::vector<double> values;
  std::vector<double> energy;
  /// max |u(0,0)| over t >= T/2.
  double late_amplitude = 0.0;
};

struct DampingReport {
  DampingOptions options;
  double kappa = 0.0;
  std::vector<double> t;
  /// Undamped baseline first, then one trace per gamma.
  std::vector<DampingTrace> traces;

  /// CSV columns t, undamped, gamma=<g>...
  void write_csv(const std::string& path) const;
};

/// Gaussian pulse u0 = exp(-10(x^2+y^2)), v0 = 0, f = 0 on [-1,1]^2, traced at (0,0).
DampingReport run_damping_demo(const DampingOptions& options);

struct ConstantsRow {
  double gamma = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// gamma_i = i/(n+1), i = 1..n.
std::vector<ConstantsRow> run_constants_figure(int grid_points, double final_time = 1.0);
void write_constants_csv(const std::vector<ConstantsRow>& rows, const std::string& path);

/// The four CQ operators whose monomial errors the rate lemmas describe.
enum class CQOperator { plain, corrected, mixed, mixed_corrected };

std::string to_string(CQOperator op);

/// Predicted order of the error at fixed t for g = t^beta; nullopt where the
/// operator is exact.
std::optional<double> lemma_order(CQOperator op, double gamma, double beta);

struct MonomialStudy {
  CQOperator op = CQOperator::plain;
  double gamma = 0.0;
  double beta = 0.0;
  std::vector<double> kappas;
  std::vector<double> errors;
  double reference = 0.0;
  /// Least-squares slope of log error against log kappa.
  double order = 0.0;
  /// Every error below 1e-10 relative to the reference.
  bool exact = false;
};

/// Errors of the operator applied to t^beta at t, for kappa = t 2^{-k},
/// k = k_first..k_last.
MonomialStudy monomial_study(CQOperator op, double gamma, double beta, double t = 1.0,
                             int k_first = 4, int k_last = 10);

}  // namespace fdw
