#include "fdw/solver.hpp"

#include <cmath>
#include <limits>

#include "fdw/csv.hpp"
#include "fdw/error.hpp"

namespace fdw {

double cfl_limit(double h, double c_inv) { return std::sqrt(2.0) * h / c_inv; }

double discrete_energy(const FemSystem& fem, const Vector& u_prev, const Vector& u_curr,
                       double kappa) {
  const Vector diff = (u_curr - u_prev) / kappa;
  return 0.5 * diff.dot(fem.mass() * diff) + 0.5 * u_curr.dot(fem.stiffness() * u_prev);
}

Simulation::Simulation(SimConfig config) : config_(std::move(config)) {
  const SimConfig& c = config_;
  FDW_REQUIRE(c.fem != nullptr, ConfigError, "simulation needs a finite element system");
  FDW_REQUIRE(c.kappa > 0.0 && std::isfinite(c.kappa), DomainError, "kappa must be positive");
  FDW_REQUIRE(c.final_time > 0.0 && std::isfinite(c.final_time), DomainError,
              "final time must be positive");
  FDW_REQUIRE(c.a_gamma >= 0.0 && std::isfinite(c.a_gamma), DomainError,
              "a_gamma must be non-negative");
  const auto dofs = static_cast<Eigen::Index>(c.fem->dofs());
  FDW_REQUIRE(c.u0.size() == dofs && c.v0.size() == dofs, DomainError,
              "initial vectors do not match the number of interior nodes");
  FDW_REQUIRE(!c.load0 || c.load0->size() == dofs, DomainError,
              "initial load vector has the wrong length");

  steps_ = static_cast<std::size_t>(std::ceil(c.final_time / c.kappa - 1e-9));
  if (steps_ < 2) steps_ = 2;

  c_inv_ = c.c_inv ? *c.c_inv : inverse_constant(*c.fem);
  const double limit = cfl_limit(c.fem->mesh().h, c_inv_);
  if (c.kappa > limit && !c.allow_cfl_violation) {
    throw DomainError("CFL violated: kappa = " + format_real(c.kappa) + " exceeds sqrt(2) h/C_inv = " +
                      format_real(limit));
  }
  if (c.a_gamma > 0.0) scheme_.emplace(c.gamma, c.kappa, steps_);
}

void Simulation::initialize() {
  const SimConfig& c = config_;
  const FemSystem& fem = *c.fem;
  const double k = c.kappa;

  Vector load0 = c.load0 ? *c.load0 : (c.load ? c.load(0.0) : Vector::Zero(c.u0.size()));
  // (P_h u''(0), v) = (f(0), v) - (grad u0, grad v); the Ritz projection
  // reproduces the stiffness term exactly, so K R_h u0 stands in for it.
  const Vector w = fem.solve_mass(load0 - fem.stiffness() * c.u0);

  u_prev_ = c.u0;
  u_curr_ = c.u0 + k * c.v0 + 0.5 * k * k * w;
  history_.resize(c.u0.size(), static_cast<Eigen::Index>(steps_ + 1));
  history_.col(0) = c.v0;
  n_ = 1;
  initialized_ = true;
}

void Simulation::advance() {
  FDW_REQUIRE(initialized_, SolverError, "advance() before initialize()");
  FDW_REQUIRE(n_ < steps_, IndexError, "simulation already reached the final step");
  const SimConfig& c = config_;
  const FemSystem& fem = *c.fem;
  const double k = c.kappa;
  const std::size_t n = n_;

  Vector rhs = (2.0 * u_curr_ - u_prev_) / (k * k);
  Vector force = -(fem.stiffness() * u_curr_);
  if (c.load) force += c.load(static_cast<double>(n) * k);

  double shift = 1.0 / (k * k);
  if (scheme_) {
    const CQScheme& s = *scheme_;
    const auto omega = s.omega();
    // The d_n entry of the convolution contains u_{n+1}; its weight moves
    // into the scalar shift. For the corrected scheme at n = 1 the w1 term
    // multiplies the same d_1.
    double implicit = omega[0];
    Vector coeff(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) coeff[static_cast<Eigen::Index>(j)] = omega[n - j];
    if (c.corrected) {
      coeff[0] += s.w0()[n];
      if (n == 1) {
        implicit += s.w1()[1];
      } else {
        coeff[1] += s.w1()[n];
      }
    } else {
      coeff[0] -= s.chi() * s.omega_prefix()[n];
    }
    const Vector hist = history_.leftCols(static_cast<Eigen::Index>(n)) * coeff;
    const double damp = c.a_gamma * implicit / (2.0 * k);
    rhs += damp * u_prev_ - c.a_gamma * hist;
    shift += damp;
  }
  rhs += fem.solve_mass(force);
  Vector next = rhs / shift;

  history_.col(static_cast<Eigen::Index>(n)) = (next - u_prev_) / (2.0 * k);
  u_prev_ = std::move(u_curr_);
  u_curr_ = std::move(next);
  ++n_;
}

Vector Simulation::history(std::size_t j) const {
  FDW_REQUIRE(initialized_ && j < n_, IndexError,
              "history entry " + std::to_string(j) + " not yet available");
  return history_.col(static_cast<Eigen::Index>(j));
}

double Simulation::energy() const {
  FDW_REQUIRE(initialized_, SolverError, "energy() before initialize()");
  return discrete_energy(*config_.fem, u_prev_, u_curr_, config_.kappa);
}

void Simulation::check_growth(double e1, double en) const {
  if (!u_curr_.allFinite() || !std::isfinite(en)) {
    throw SolverError("non-finite iterate at step " + std::to_string(n_) +
                      " (unstable run, check the CFL condition)");
  }
  if (std::fabs(en) > 1e6 * std::max(std::fabs(e1), std::numeric_limits<double>::min())) {
    throw SolverError("energy grew by more than 1e6 at step " + std::to_string(n_) +
                      " (unstable run, check the CFL condition)");
  }
}

RunResult Simulation::run(const StepObserver& observer) {
  initialize();
  RunResult result;
  result.steps = steps_;
  result.energy.reserve(steps_);
  if (observer) {
    observer(0, 0.0, u_prev_);
    observer(1, config_.kappa, u_curr_);
  }
  const double e1 = energy();
  result.energy.push_back(e1);
  // Zero data stays zero; there is no energy scale to compare against.
  const bool watch_growth = e1 != 0.0;
  while (n_ < steps_) {
    advance();
    const double en = energy();
    if (watch_growth || !u_curr_.allFinite()) check_growth(e1, en);
    result.energy.push_back(en);
    if (observer) observer(n_, time(), u_curr_);
  }
  return result;
}

void Simulation::write_energy_csv(const RunResult& result, double kappa, const std::string& path) {
  CsvWriter csv(path, {"n", "t_n", "E_n"});
  for (std::size_t k = 0; k < result.energy.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    csv.row({n, n * kappa, result.energy[k]});
  }
}

}  // namespace fdw
