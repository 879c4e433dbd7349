#pragma once

// Leapfrog in time for the wave part, BDF2 convolution quadrature for the
// fractional damping term acting on central differences of the iterates.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fdw/cq.hpp"
#include "fdw/fem.hpp"

namespace fdw {

/// Interior load vector of the source at time t.
using LoadFunction = std::function<Vector(double t)>;

struct SimConfig {
  double gamma = 0.5;
  /// Damping coefficient; 0 removes the fractional term (gamma is then unused).
  double a_gamma = 0.0;
  double final_time = 1.0;
  double kappa = 0.01;
  bool corrected = false;
  std::shared_ptr<const FemSystem> fem;
  /// Empty means f = 0.
  LoadFunction load;
  /// Ritz projections of the initial displacement and velocity.
  Vector u0;
  Vector v0;
  /// Load of f(0) when it needs special treatment; load(0) otherwise.
  std::optional<Vector> load0;
  /// Lets a run violate the CFL bound (instability demonstrations).
  bool allow_cfl_violation = false;
  /// Inverse-inequality constant of the mesh; computed when absent.
  std::optional<double> c_inv;
};

/// Largest stable step kappa <= sqrt(2) h / C_inv.
double cfl_limit(double h, double c_inv);

/// Discrete energy 1/2 |(u_n - u_{n-1})/kappa|_M^2 + 1/2 u_n' K u_{n-1}.
double discrete_energy(const FemSystem& fem, const Vector& u_prev, const Vector& u_curr,
                       double kappa);

/// Called with (n, t_n, u_n) for n = 0..N.
using StepObserver = std::function<void(std::size_t, double, const Vector&)>;

struct RunResult {
  std::size_t steps = 0;
  /// energy[k] is E_{k+1}, k = 0..N-1.
  std::vector<double> energy;
};

class Simulation {
 public:
  /// Validates the configuration and checks the CFL bound.
  explicit Simulation(SimConfig config);

  const SimConfig& config() const noexcept { return config_; }
  std::size_t steps() const noexcept { return steps_; }
  double c_inv() const noexcept { return c_inv_; }
  const CQScheme* scheme() const noexcept { return scheme_ ? &*scheme_ : nullptr; }

  /// Sets u_0, u_1 and the first history entry. Called by run().
  void initialize();
  /// Computes u_{n+1} from u_{n-1}, u_n and the stored history, n >= 1.
  void advance();

  std::size_t step_index() const noexcept { return n_; }
  double time() const noexcept { return static_cast<double>(n_) * config_.kappa; }
  const Vector& previous() const noexcept { return u_prev_; }
  const Vector& current() const noexcept { return u_curr_; }
  /// Central difference d_j = (u_{j+1} - u_{j-1})/(2 kappa), d_0 = R_h v0.
  Vector history(std::size_t j) const;
  double energy() const;

  /// initialize() and advance() up to t_N. Aborts with SolverError on a
  /// non-finite iterate or energy growth beyond 1e6 E_1.
  RunResult run(const StepObserver& observer = {});

  /// Energy log CSV: n, t_n, E_n.
  static void write_energy_csv(const RunResult& result, double kappa, const std::string& path);

 private:
  void check_growth(double e1, double en) const;

  SimConfig config_;
  std::size_t steps_ = 0;
  double c_inv_ = 0.0;
  std::optional<CQScheme> scheme_;
  Eigen::MatrixXd history_;
  Vector u_prev_;
  Vector u_curr_;
  std::size_t n_ = 0;
  bool initialized_ = false;
};

}  // namespace fdw
