#pragma once

// Scalar reference solvers for one eigenmode of the damped fractional wave
// equation:  u'' + lambda u + a D^{gamma+1} u = f,  u(0) = u0, u'(0) = v0.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fdw {

using TimeFunction = std::function<double(double)>;

struct VolterraProblem {
  double gamma = 0.5;
  /// Modal stiffness, real and non-negative.
  double lambda = 0.0;
  double a_gamma = 0.0;
  TimeFunction f;
  double u0 = 0.0;
  double v0 = 0.0;
  double final_time = 1.0;
  /// Number of uniform substeps, at least 8.
  std::size_t substeps = 256;
};

struct VolterraSolution {
  std::vector<double> t;
  /// Samples of u''.
  std::vector<double> v;
  std::vector<double> u;

  /// CSV columns t, u, v.
  void write_csv(const std::string& path) const;
};

/// Second-kind Volterra equation for v = u'':
///   v(t) + int_0^t K(t - s) v(s) ds = g(t),  K(s) = lambda s + a s^{-gamma}/Gamma(1-gamma),
///   g(t) = f(t) - lambda u0 - lambda t v0 [- a t^{-gamma} v0/Gamma(1-gamma) if gamma < 0].
/// Product integration: v is piecewise linear and the kernel is integrated
/// against each hat exactly (closed form on the adjacent interval, Gauss
/// quadrature where the kernel is smooth). u = u0 + t v0 + int (t-s) v(s) ds.
VolterraSolution solve_volterra(const VolterraProblem& problem);

struct AsymptoticFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  /// Values predicted by the small-t expansion of v.
  double expected_exponent = 0.0;
  double expected_coefficient = 0.0;
  /// False when the residual changes sign or is not monotone on the window;
  /// the fitted numbers are still filled in.
  bool monotone = true;
  std::size_t samples = 0;
};

/// Least-squares fit of log|v(t) - (f(t) - lambda u0)| against log t on the
/// window t in [4H, 64H], H = T/M. The expected leading term is
/// -a t^{1-gamma} (f(0) - lambda u0)/Gamma(2-gamma) for gamma > 0 and
/// -a t^{-gamma} v0/Gamma(1-gamma) for gamma < 0 with v0 != 0.
AsymptoticFit asymptotic_check(const VolterraProblem& problem, const VolterraSolution& solution);

/// A function with its second, third and fourth derivatives.
struct SmoothFunction {
  TimeFunction g;
  TimeFunction d2;
  TimeFunction d3;
  TimeFunction d4;
};

struct SecondDifferenceCheck {
  /// |g''(t) - (g(t+k) - 2g(t) + g(t-k))/k^2|
  double error = 0.0;
  /// k int_{t-k}^{t+k} |g''''| for t >= 2k, int_0^{2k} |g'''| at t = k.
  double bound = 0.0;
  /// error / bound, the constant needed for the inequality.
  double constant = 0.0;
};

/// Evaluates both sides of the second-difference error bound; t must be k or
/// at least 2k. Integrals use adaptive Gauss-Kronrod quadrature.
SecondDifferenceCheck second_difference_error(const SmoothFunction& fn, double t, double kappa);

struct ModalRecurrence {
  double gamma = 0.5;
  double lambda = 0.0;
  double a_gamma = 0.0;
  bool corrected = false;
  double kappa = 0.01;
  std::size_t steps = 100;
  double u0 = 0.0;
  double v0 = 0.0;
  /// Source at t; empty means zero.
  TimeFunction f;
};

/// The fully discrete scheme restricted to one scalar mode, written as a
/// plain scalar loop. Returns u_0..u_N.
std::vector<double> modal_recurrence(const ModalRecurrence& problem);

}  // namespace fdw
