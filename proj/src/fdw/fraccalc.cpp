#include "fdw/fraccalc.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fdw/error.hpp"
#include "fdw/special.hpp"

namespace fdw {
namespace {

void check_gamma(double gamma) {
  FDW_REQUIRE(std::isfinite(gamma) && gamma > -1.0 && gamma < 1.0 && gamma != 0.0, DomainError,
              "fractional order gamma must lie in (-1,0) or (0,1), got " + std::to_string(gamma));
}

bool is_natural(double mu) { return mu >= 0.0 && mu == std::floor(mu); }

// True when the Caputo derivative of t^mu of this order is the zero branch.
bool caputo_vanishes(double order, double mu) { return order > 0.0 && is_natural(mu) && mu < order; }

void check_caputo_args(double order, double mu) {
  FDW_REQUIRE(std::isfinite(order) && order > -1.0, DomainError,
              "caputo_monomial: order must exceed -1");
  if (order < 0.0) {
    FDW_REQUIRE(mu > -1.0, DomainError, "caputo_monomial: need mu > -1 for a fractional integral");
    return;
  }
  if (order == 0.0) {
    FDW_REQUIRE(mu > -1.0, DomainError, "caputo_monomial: need mu > -1");
    return;
  }
  const double n = std::ceil(order);
  FDW_REQUIRE(is_natural(mu) || mu > n - 1.0, DomainError,
              "caputo_monomial: t^mu is not regular enough for this order");
}

}  // namespace

FracParams::FracParams(double gamma, double alpha0)
    : gamma_(gamma), alpha0_(alpha0), a_gamma_(fdw::a_gamma(gamma, alpha0)) {}

double a_gamma(double gamma, double alpha0) {
  check_gamma(gamma);
  FDW_REQUIRE(std::isfinite(alpha0) && alpha0 > 0.0, DomainError, "alpha0 must be positive");
  // Gamma(-gamma-1) sits at a negative non-integer argument for gamma in (-1,0)
  // and (0,1); gamma_fn goes through the reflection formula there.
  return -alpha0 * (4.0 / kPi) * gamma_fn(-gamma - 1.0) * gamma_fn(gamma + 2.0) *
         std::cos((gamma + 1.0) * kPi / 2.0);
}

double rl_integral_monomial(double beta, double mu, double t) {
  FDW_REQUIRE(std::isfinite(beta) && beta > 0.0, DomainError,
              "rl_integral_monomial: beta must be positive");
  FDW_REQUIRE(mu > -1.0, DomainError, "rl_integral_monomial: mu must exceed -1");
  FDW_REQUIRE(t >= 0.0, DomainError, "rl_integral_monomial: t must be non-negative");
  if (t == 0.0) return 0.0;
  return gamma_ratio(mu + 1.0, mu + beta + 1.0) * std::pow(t, beta + mu);
}

double caputo_monomial(double order, double mu, double t) {
  check_caputo_args(order, mu);
  FDW_REQUIRE(t > 0.0, DomainError, "caputo_monomial: t must be positive");
  if (order < 0.0) return rl_integral_monomial(-order, mu, t);
  if (caputo_vanishes(order, mu)) return 0.0;
  return gamma_ratio(mu + 1.0, mu + 1.0 - order) * std::pow(t, mu - order);
}

SeriesValue caputo_series(std::span<const MonomialTerm> terms, double order, double t,
                          double tol, SeriesKind kind) {
  FDW_REQUIRE(tol > 0.0, DomainError, "caputo_series: tol must be positive");
  FDW_REQUIRE(t > 0.0, DomainError, "caputo_series: t must be positive");

  CompensatedSum<long double> sum;
  SeriesValue out;

  // Gamma(mu+1)/Gamma(mu+1-order) of the previous non-vanishing term.
  long double prev_ratio = 0.0L;
  double prev_mu = 0.0;
  bool have_ratio = false;

  long double prev_abs = 0.0L;
  long double prev_r = 0.0L;
  bool have_prev_abs = false;
  bool have_prev_r = false;

  for (std::size_t k = 0; k < terms.size(); ++k) {
    const MonomialTerm& term = terms[k];
    check_caputo_args(order, term.mu);
    ++out.terms_used;

    if (caputo_vanishes(order, term.mu)) {
      have_ratio = false;
      continue;
    }

    long double ratio = 0.0L;
    const double step = term.mu - prev_mu;
    if (have_ratio && step >= 1.0 && step <= 16.0 && step == std::floor(step)) {
      ratio = prev_ratio;
      for (int i = 1; i <= static_cast<int>(step); ++i) {
        const long double m = static_cast<long double>(prev_mu) + i;
        ratio *= m / (m - static_cast<long double>(order));
      }
    } else {
      ratio = gamma_ratio(term.mu + 1.0, term.mu + 1.0 - order);
    }
    prev_ratio = ratio;
    prev_mu = term.mu;
    have_ratio = true;

    const long double value =
        term.coefficient * ratio *
        std::pow(static_cast<long double>(t), static_cast<long double>(term.mu - order));
    sum.add(value);

    const long double abs_value = std::fabs(value);
    if (abs_value == 0.0L) continue;
    if (have_prev_abs) {
      const long double r = abs_value / prev_abs;
      // Ratios of factorial-type series decrease monotonically past the peak,
      // so the remaining terms are dominated by a geometric series.
      if (r < 1.0L && (!have_prev_r || r <= prev_r * (1.0L + 1e-12L))) {
        const long double tail = abs_value * r / (1.0L - r);
        out.tail_bound = static_cast<double>(tail);
        if (kind == SeriesKind::truncated && tail < tol) {
          out.value = static_cast<double>(sum.value());
          return out;
        }
      } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
      }
      prev_r = r;
      have_prev_r = true;
    }
    prev_abs = abs_value;
    have_prev_abs = true;
  }

  if (kind == SeriesKind::finite) {
    out.tail_bound = 0.0;
    out.value = static_cast<double>(sum.value());
    return out;
  }
  throw ConvergenceError("caputo_series: tail bound did not fall below tol within " +
                         std::to_string(terms.size()) + " terms");
}

double caputo_quadrature(double order, const std::function<double(double)>& derivative, double t,
                         double tol) {
  FDW_REQUIRE(order > 0.0 && order < 2.0 && order != 1.0, DomainError,
              "caputo_quadrature: order must lie in (0,1) or (1,2)");
  FDW_REQUIRE(t >= 0.0, DomainError, "caputo_quadrature: t must be non-negative");
  if (t == 0.0) return 0.0;
  const double power = std::ceil(order) - order - 1.0;  // in (-1, 0)
  boost::math::quadrature::tanh_sinh<double> rule;
  // xc is b - x on the right half (a - x <= 0 on the left), so t - s stays exact
  // next to the singularity.
  auto integrand = [&](double s, double xc) {
    const double gap = xc > 0.0 ? xc : t - s;
    return std::pow(gap, power) * derivative(s);
  };
  const double integral = rule.integrate(integrand, 0.0, t, tol);
  return integral * recip_gamma(std::ceil(order) - order);
}

std::vector<MonomialTerm> trig_taylor_terms(TrigKind kind, double omega, double amplitude,
                                            std::size_t max_terms) {
  std::vector<MonomialTerm> out;
  out.reserve(max_terms);
  const long double w = omega;
  long double c = amplitude;
  int mu = 0;
  if (kind == TrigKind::sine) {
    c *= w;
    mu = 1;
  }
  for (std::size_t k = 0; k < max_terms; ++k) {
    out.push_back({static_cast<double>(mu), c});
    c *= -w * w / (static_cast<long double>(mu + 1) * static_cast<long double>(mu + 2));
    mu += 2;
  }
  return out;
}

PositivityConstants positivity_constants(double gamma, double final_time) {
  FDW_REQUIRE(gamma > 0.0 && gamma < 1.0, DomainError,
              "positivity_constants: gamma must lie in (0,1)");
  FDW_REQUIRE(final_time > 0.0, DomainError, "positivity_constants: T must be positive");
  const double tpow = std::pow(final_time, gamma - 1.0);
  PositivityConstants c;
  c.c1 = std::pow(kPi, 1.0 - gamma) * std::pow(1.0 - gamma, 1.0 - gamma) /
         std::pow(2.0 - gamma, 2.0 - gamma) * std::sin(0.5 * kPi * gamma) * tpow;
  c.c2 = std::pow(0.5 * final_time, gamma - 1.0) / gamma_fn(gamma);
  return c;
}

}  // namespace fdw
