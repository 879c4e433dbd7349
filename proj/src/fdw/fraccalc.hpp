#pragma once

// Closed-form fractional calculus of monomials and the damping coefficient of
// the fractional wave model. Everything here is a pure function.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fdw {

/// Fractional order and media constant of the damping term, with the derived
/// damping coefficient a_gamma.
class FracParams {
 public:
  /// Throws DomainError unless gamma is in (-1,0) u (0,1) and alpha0 > 0.
  FracParams(double gamma, double alpha0);

  double gamma() const noexcept { return gamma_; }
  double alpha0() const noexcept { return alpha0_; }
  double a_gamma() const noexcept { return a_gamma_; }

 private:
  double gamma_;
  double alpha0_;
  double a_gamma_;
};

/// a_gamma = -alpha0 (4/pi) Gamma(-gamma-1) Gamma(gamma+2) cos((gamma+1) pi/2).
double a_gamma(double gamma, double alpha0);

/// Riemann-Liouville integral of order beta > 0 of t^mu (mu > -1), evaluated at t.
double rl_integral_monomial(double beta, double mu, double t);

/// Caputo derivative of order `order` (> -1, any magnitude) of t^mu at t > 0.
/// Negative orders are Riemann-Liouville integrals. For a positive order with
/// n = ceil(order), the monomial must either be a polynomial term (mu in N0)
/// or satisfy mu > n - 1 so that its n-th derivative is integrable.
double caputo_monomial(double order, double mu, double t);

/// One term c * t^mu of a power series.
struct MonomialTerm {
  double mu = 0.0;
  long double coefficient = 0.0L;
};

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t terms_used = 0;
};

inline constexpr double kDefaultSeriesTol = 1e-12;

/// Whether a term list is a truncated infinite expansion or a complete finite sum.
enum class SeriesKind { truncated, finite };

/// Termwise Caputo derivative of a power series sorted by increasing mu.
/// A truncated series is summed until the ratio-test tail bound of the
/// remaining terms drops below `tol`; a finite one is summed in full. A
/// truncated series that runs out of terms first throws
/// ConvergenceError. Terms whose exponents differ by an integer reuse the
/// previous Gamma ratio by recurrence, in extended precision, which keeps the
/// cancellation in oscillatory series under control.
SeriesValue caputo_series(std::span<const MonomialTerm> terms, double order, double t,
                          double tol = kDefaultSeriesTol,
                          SeriesKind kind = SeriesKind::truncated);

/// Caputo derivative of order `order` in (0,2), order != 1, of a function
/// whose ceil(order)-th derivative is `derivative`:
///   (1/Gamma(n-order)) int_0^t (t-s)^{n-order-1} derivative(s) ds,  n = ceil(order).
/// The weakly singular integral is evaluated by tanh-sinh quadrature, which
/// avoids the cancellation of termwise series for oscillatory functions.
double caputo_quadrature(double order, const std::function<double(double)>& derivative, double t,
                         double tol = 1e-14);

enum class TrigKind { sine, cosine };

/// Taylor coefficients of amplitude * sin(omega t) or amplitude * cos(omega t).
std::vector<MonomialTerm> trig_taylor_terms(TrigKind kind, double omega, double amplitude,
                                            std::size_t max_terms = 400);

struct PositivityConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// The two lower-bound constants of the continuous positivity estimate for
/// gamma in (0,1). Both scale like T^(gamma-1).
PositivityConstants positivity_constants(double gamma, double final_time);

}  // namespace fdw
