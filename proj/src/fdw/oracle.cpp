#include "fdw/oracle.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fdw/cq.hpp"
#include "fdw/csv.hpp"
#include "fdw/error.hpp"
#include "fdw/special.hpp"

namespace fdw {
namespace {

// Moments of s^p against the two linear pieces on an interval at distance d,
// in units of H:  A_d = int_0^1 (d-1+r)^p r dr,  B_d = int_0^1 (d-1+r)^p (1-r) dr.
struct Moments {
  std::vector<double> left;   // A_d, multiplies the node farther from t_i
  std::vector<double> right;  // B_d, multiplies the node closer to t_i
};

Moments kernel_moments(double p, std::size_t count) {
  Moments m;
  m.left.resize(count + 1);
  m.right.resize(count + 1);
  m.left[1] = 1.0 / (p + 2.0);
  m.right[1] = 1.0 / (p + 1.0) - 1.0 / (p + 2.0);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  for (std::size_t d = 2; d <= count; ++d) {
    const double shift = static_cast<double>(d) - 1.0;
    m.left[d] = Rule::integrate([&](double r) { return std::pow(shift + r, p) * r; }, 0.0, 1.0);
    m.right[d] =
        Rule::integrate([&](double r) { return std::pow(shift + r, p) * (1.0 - r); }, 0.0, 1.0);
  }
  return m;
}

// int_0^{t_i} s^p-kernel(t_i - tau) v(tau) dtau without the H^{p+1} factor and
// without the implicit v_i term.
double convolve_explicit(const Moments& m, const std::vector<double>& v, std::size_t i) {
  CompensatedSum<> acc;
  for (std::size_t k = 1; k <= i; ++k) {
    const std::size_t d = i - k + 1;
    acc.add(m.left[d] * v[k - 1]);
    if (k < i) acc.add(m.right[d] * v[k]);
  }
  return acc.value();
}

}  // namespace

void VolterraSolution::write_csv(const std::string& path) const {
  CsvWriter csv(path, {"t", "u", "v"});
  for (std::size_t i = 0; i < t.size(); ++i) csv.row({t[i], u[i], v[i]});
}

VolterraSolution solve_volterra(const VolterraProblem& p) {
  FDW_REQUIRE(p.gamma > -1.0 && p.gamma < 1.0 && p.gamma != 0.0, DomainError,
              "solve_volterra: gamma must lie in (-1,0) or (0,1)");
  FDW_REQUIRE(p.lambda >= 0.0 && p.a_gamma >= 0.0, DomainError,
              "solve_volterra: lambda and a_gamma must be non-negative");
  FDW_REQUIRE(p.substeps >= 8, DomainError, "solve_volterra: need at least 8 substeps");
  FDW_REQUIRE(p.final_time > 0.0, DomainError, "solve_volterra: final time must be positive");

  const std::size_t m = p.substeps;
  const double h = p.final_time / static_cast<double>(m);
  const double b = p.a_gamma * recip_gamma(1.0 - p.gamma);
  const double sing_pow = -p.gamma;

  auto forcing = [&](double t) {
    double g = (p.f ? p.f(t) : 0.0) - p.lambda * p.u0 - p.lambda * t * p.v0;
    if (p.gamma < 0.0) g -= b * p.v0 * std::pow(t, -p.gamma);
    return g;
  };

  const Moments sing = kernel_moments(sing_pow, m);
  const Moments lin = kernel_moments(1.0, m);
  const double sing_scale = b * std::pow(h, sing_pow + 1.0);
  const double lin_scale = p.lambda * h * h;
  const double diag = 1.0 + sing_scale * sing.right[1] + lin_scale * lin.right[1];
  FDW_REQUIRE(diag != 0.0 && std::isfinite(diag), ConvergenceError,
              "solve_volterra: degenerate implicit step");

  VolterraSolution out;
  out.t.resize(m + 1);
  out.v.resize(m + 1);
  out.u.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) out.t[i] = static_cast<double>(i) * h;

  out.v[0] = forcing(0.0);
  for (std::size_t i = 1; i <= m; ++i) {
    const double hist = sing_scale * convolve_explicit(sing, out.v, i) +
                        lin_scale * convolve_explicit(lin, out.v, i);
    out.v[i] = (forcing(out.t[i]) - hist) / diag;
  }

  out.u[0] = p.u0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double integral = h * h * (convolve_explicit(lin, out.v, i) + lin.right[1] * out.v[i]);
    out.u[i] = p.u0 + out.t[i] * p.v0 + integral;
  }
  return out;
}

AsymptoticFit asymptotic_check(const VolterraProblem& p, const VolterraSolution& s) {
  FDW_REQUIRE(s.t.size() > 64, DomainError, "asymptotic_check: need at least 64 substeps");
  AsymptoticFit fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double prev_abs = 0.0;
  int sign = 0;
  for (std::size_t i = 4; i <= 64; ++i) {
    const double r = s.v[i] - ((p.f ? p.f(s.t[i]) : 0.0) - p.lambda * p.u0);
    const int si = r > 0 ? 1 : (r < 0 ? -1 : 0);
    if (si == 0 || (sign != 0 && si != sign) || std::fabs(r) < prev_abs) fit.monotone = false;
    if (si == 0) continue;
    if (sign == 0) sign = si;
    prev_abs = std::fabs(r);
    const double x = std::log(s.t[i]);
    const double y = std::log(std::fabs(r));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.samples;
  }
  FDW_REQUIRE(fit.samples >= 2, ConvergenceError, "asymptotic_check: residual vanishes");
  const double n = static_cast<double>(fit.samples);
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.coefficient = sign * std::exp((sy - fit.exponent * sx) / n);

  const double g0 = (p.f ? p.f(0.0) : 0.0) - p.lambda * p.u0;
  if (p.gamma < 0.0 && p.v0 != 0.0) {
    fit.expected_exponent = -p.gamma;
    fit.expected_coefficient = -p.a_gamma * p.v0 * recip_gamma(1.0 - p.gamma);
  } else {
    fit.expected_exponent = 1.0 - p.gamma;
    fit.expected_coefficient = -p.a_gamma * g0 * recip_gamma(2.0 - p.gamma);
  }
  return fit;
}

SecondDifferenceCheck second_difference_error(const SmoothFunction& fn, double t, double kappa) {
  FDW_REQUIRE(kappa > 0.0, DomainError, "second_difference_error: kappa must be positive");
  const bool first_step = std::fabs(t - kappa) <= 1e-14 * kappa;
  FDW_REQUIRE(first_step || t >= 2.0 * kappa * (1.0 - 1e-14), DomainError,
              "second_difference_error: t must equal kappa or be at least 2 kappa");

  SecondDifferenceCheck out;
  const double second = (fn.g(t + kappa) - 2.0 * fn.g(t) + fn.g(t - kappa)) / (kappa * kappa);
  out.error = std::fabs(fn.d2(t) - second);

  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (first_step) {
    out.bound = Rule::integrate([&](double s) { return std::fabs(fn.d3(s)); }, 0.0, 2.0 * kappa,
                                15, 1e-13);
  } else {
    out.bound = kappa * Rule::integrate([&](double s) { return std::fabs(fn.d4(s)); }, t - kappa,
                                        t + kappa, 15, 1e-13);
  }
  out.constant = out.bound > 0.0 ? out.error / out.bound : 0.0;
  return out;
}

std::vector<double> modal_recurrence(const ModalRecurrence& p) {
  FDW_REQUIRE(p.kappa > 0.0 && p.steps >= 2, DomainError,
              "modal_recurrence: need kappa > 0 and at least 2 steps");
  const double k = p.kappa;
  const std::size_t n_steps = p.steps;
  auto source = [&](double t) { return p.f ? p.f(t) : 0.0; };

  std::vector<double> u(n_steps + 1);
  std::vector<double> d(n_steps + 1);  // central differences, d[0] = v0
  u[0] = p.u0;
  u[1] = p.u0 + k * p.v0 + 0.5 * k * k * (source(0.0) - p.lambda * p.u0);
  d[0] = p.v0;

  std::vector<double> omega, w0, w1;
  double chi = 0.0;
  if (p.a_gamma > 0.0) {
    const CQScheme scheme(p.gamma, k, n_steps);
    omega.assign(scheme.omega().begin(), scheme.omega().end());
    w0.assign(scheme.w0().begin(), scheme.w0().end());
    w1.assign(scheme.w1().begin(), scheme.w1().end());
    chi = scheme.chi();
  }

  for (std::size_t n = 1; n < n_steps; ++n) {
    // Damping term written as known + c * d_n with d_n = (u_{n+1} - u_{n-1})/(2k).
    double known = 0.0;
    double c = 0.0;
    if (p.a_gamma > 0.0) {
      for (std::size_t j = 0; j < n; ++j) {
        const double shifted = p.corrected ? d[j] : d[j] - chi * d[0];
        known += omega[n - j] * shifted;
      }
      c = omega[0];
      if (p.corrected) {
        known += w0[n] * d[0];
        if (n == 1) {
          c += w1[1];
        } else {
          known += w1[n] * d[1];
        }
      } else {
        known -= omega[0] * chi * d[0];
      }
    }
    const double lhs = 1.0 / (k * k) + p.a_gamma * c / (2.0 * k);
    const double rhs = source(static_cast<double>(n) * k) - p.lambda * u[n] - p.a_gamma * known +
                       (2.0 * u[n] - u[n - 1]) / (k * k) + p.a_gamma * c * u[n - 1] / (2.0 * k);
    u[n + 1] = rhs / lhs;
    d[n] = (u[n + 1] - u[n - 1]) / (2.0 * k);
  }
  return u;
}

}  // namespace fdw
