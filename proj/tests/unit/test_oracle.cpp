#include <doctest.h>

#include <cmath>

#include "fdw/oracle.hpp"
#include "fdw/special.hpp"

using namespace fdw;

namespace {

// Mittag-Leffler E_alpha(z) by its power series (fine for moderate |z|).
double mittag_leffler(double alpha, double z) {
  double sum = 0, term_pow = 1;
  for (int k = 0; k < 200; ++k) {
    sum += term_pow / std::tgamma(alpha * k + 1);
    term_pow *= z;
    if (std::abs(term_pow) < 1e-300) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("undamped problem reduces to the harmonic oscillator") {
  VolterraProblem p;
  p.lambda = 4.0;
  p.u0 = 1.0;
  p.v0 = 0.5;
  p.final_time = 2.0;
  p.substeps = 2000;
  p.f = [](double) { return 0.0; };
  const auto s = solve_volterra(p);
  for (std::size_t i = 0; i < s.t.size(); i += 250) {
    const double t = s.t[i];
    CHECK(s.u[i] == doctest::Approx(std::cos(2 * t) + 0.25 * std::sin(2 * t)).epsilon(1e-5));
    CHECK(s.v[i] == doctest::Approx(-4 * std::cos(2 * t) - std::sin(2 * t)).epsilon(1e-5));
  }
}

TEST_CASE("pure damping: u'' = f E_{1-gamma}(-a t^{1-gamma})") {
  for (double g : {-0.5, 0.5}) {
    VolterraProblem p;
    p.gamma = g;
    p.a_gamma = 1.0;
    p.final_time = 1.0;
    p.substeps = 2000;
    p.f = [](double) { return 2.0; };
    const auto s = solve_volterra(p);
    for (std::size_t i = 200; i < s.t.size(); i += 300) {
      const double ref = 2.0 * mittag_leffler(1 - g, -std::pow(s.t[i], 1 - g));
      CAPTURE(g);
      CHECK(s.v[i] == doctest::Approx(ref).epsilon(1e-5));
    }
  }
}

TEST_CASE("second-order convergence in the substep count") {
  VolterraProblem p;
  p.gamma = 0.5;
  p.lambda = 3.0;
  p.a_gamma = 1.5;
  p.u0 = 1.0;
  p.f = [](double t) { return std::cos(t); };
  p.final_time = 1.0;
  p.substeps = 4096;
  const double ref = solve_volterra(p).u.back();
  double prev = 0;
  for (std::size_t m : {64, 128, 256}) {
    p.substeps = m;
    const double err = std::abs(solve_volterra(p).u.back() - ref);
    if (prev > 0) CHECK(std::log2(prev / err) > 1.4);
    prev = err;
  }
}

TEST_CASE("small-t singular behaviour of u''") {
  VolterraProblem p;
  p.lambda = 1.0;
  p.a_gamma = 1.0;
  p.f = [](double) { return 1.0; };
  p.final_time = 0.01;
  p.substeps = 1024;
  p.gamma = 0.5;
  const auto fit_pos = asymptotic_check(p, solve_volterra(p));
  CHECK(fit_pos.expected_exponent == 0.5);
  CHECK(fit_pos.exponent == doctest::Approx(0.5).epsilon(0.1));
  p.gamma = -0.5;
  p.v0 = 1.0;
  const auto fit_neg = asymptotic_check(p, solve_volterra(p));
  CHECK(fit_neg.expected_exponent == 0.5);
  CHECK(fit_neg.expected_coefficient == doctest::Approx(-1.0 / std::tgamma(1.5)));
  CHECK(std::abs(fit_neg.exponent - 0.5) < 0.05);
}

TEST_CASE("second-difference bound on a quartic") {
  SmoothFunction q{[](double t) { return t * t * t * t; }, [](double t) { return 12 * t * t; },
                   [](double t) { return 24 * t; }, [](double) { return 24.0; }};
  const double k = 0.01;
  const auto c = second_difference_error(q, 0.5, k);
  CHECK(c.error == doctest::Approx(2 * k * k).epsilon(1e-6));
  CHECK(c.bound == doctest::Approx(48 * k * k).epsilon(1e-10));
  CHECK(c.constant == doctest::Approx(1.0 / 24).epsilon(1e-6));
  // At t = k the bound uses the third derivative on [0, 2k].
  const auto first = second_difference_error(q, k, k);
  CHECK(first.bound == doctest::Approx(48 * k * k).epsilon(1e-10));
}

TEST_CASE("modal recurrence without damping is leapfrog for an oscillator") {
  ModalRecurrence m;
  m.lambda = 9.0;
  m.kappa = 0.01;
  m.steps = 300;
  m.u0 = 1.0;
  m.v0 = 0.0;
  const auto u = modal_recurrence(m);
  // u_{n+1} = (2 - lambda k^2) u_n - u_{n-1}: u_n = A cos(n th) + B sin(n th).
  const double th = std::acos(1 - m.lambda * m.kappa * m.kappa / 2);
  const double u1 = 1 - m.kappa * m.kappa / 2 * m.lambda;
  const double B = (u1 - std::cos(th)) / std::sin(th);
  for (std::size_t n = 0; n < u.size(); n += 37) {
    CHECK(u[n] == doctest::Approx(std::cos(n * th) + B * std::sin(n * th)).epsilon(1e-11));
  }
}
