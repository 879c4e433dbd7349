#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fdw/error.hpp"
#include "fdw/fraccalc.hpp"
#include "fdw/special.hpp"

using namespace fdw;

namespace {

// (1/Gamma(n-order)) int_0^t (t-s)^{n-order-1} d(s) ds by tanh-sinh, independent of the library.
template <class F>
double caputo_reference(double order, F d, double t) {
  const double n = std::ceil(order);
  boost::math::quadrature::tanh_sinh<double> q;
  const double v = q.integrate(
      [&](double s, double gap) {
        const double r = gap > 0 ? gap : t - s;
        return std::pow(r, n - order - 1) * d(s);
      },
      0.0, t);
  return v / std::tgamma(n - order);
}

}  // namespace

TEST_CASE("a_gamma reduces to 2 alpha0 / cos(pi gamma / 2)") {
  for (double g : {-0.75, -0.25, 0.25, 0.5, 0.75}) {
    CAPTURE(g);
    CHECK(a_gamma(g, 1.0) == doctest::Approx(2.0 / std::cos(kPi * g / 2)).epsilon(1e-13));
    CHECK(FracParams(g, 3.0).a_gamma() == doctest::Approx(6.0 / std::cos(kPi * g / 2)));
  }
}

TEST_CASE("FracParams rejects orders outside (-1,0) u (0,1)") {
  CHECK_THROWS_AS(FracParams(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(FracParams(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(FracParams(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(FracParams(0.5, 0.0), DomainError);
}

TEST_CASE("Riemann-Liouville integral of a monomial") {
  boost::math::quadrature::tanh_sinh<double> q;
  for (auto [beta, mu] : {std::pair{0.5, 0.0}, {0.25, 1.5}, {1.5, -0.5}, {2.0, 2.0}}) {
    const double t = 0.7;
    const double ref = q.integrate(
                           [&](double s, double gap) {
                             const double r = gap > 0 ? gap : t - s;
                             return std::pow(r, beta - 1) * std::pow(s, mu);
                           },
                           0.0, t) /
                       std::tgamma(beta);
    CAPTURE(beta);
    CAPTURE(mu);
    CHECK(rl_integral_monomial(beta, mu, t) == doctest::Approx(ref).epsilon(1e-10));
    if (beta < 1) CHECK(caputo_monomial(-beta, mu, t) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("Caputo derivative of monomials against the integral definition") {
  const double t = 0.8;
  CHECK(caputo_monomial(0.5, 2.0, t) ==
        doctest::Approx(caputo_reference(0.5, [](double s) { return 2 * s; }, t)).epsilon(1e-10));
  CHECK(caputo_monomial(1.5, 3.0, t) ==
        doctest::Approx(caputo_reference(1.5, [](double s) { return 6 * s; }, t)).epsilon(1e-10));
  CHECK(caputo_monomial(1.25, 2.5, t) ==
        doctest::Approx(caputo_reference(1.25, [](double s) { return 3.75 * std::sqrt(s); }, t))
            .epsilon(1e-9));
  // Polynomial terms below the order vanish.
  CHECK(caputo_monomial(0.5, 0.0, t) == 0.0);
  CHECK(caputo_monomial(1.5, 1.0, t) == 0.0);
}

TEST_CASE("caputo_quadrature agrees with the monomial formula") {
  for (double order : {0.3, 0.75, 1.25, 1.7}) {
    CAPTURE(order);
    const double mu = 3.0;
    const auto d = [order, mu](double s) {
      return order < 1 ? mu * std::pow(s, mu - 1) : mu * (mu - 1) * std::pow(s, mu - 2);
    };
    CHECK(caputo_quadrature(order, d, 0.9) ==
          doctest::Approx(caputo_monomial(order, mu, 0.9)).epsilon(1e-12));
  }
}

TEST_CASE("caputo_series of exp(t) matches quadrature") {
  std::vector<MonomialTerm> terms;
  long double c = 1.0L;
  for (int k = 0; k < 60; ++k) {
    terms.push_back({static_cast<double>(k), c});
    c /= (k + 1);
  }
  for (double order : {0.4, 1.6}) {
    const SeriesValue s = caputo_series(terms, order, 1.3);
    const double ref = caputo_quadrature(order, [](double x) { return std::exp(x); }, 1.3);
    CHECK(s.value == doctest::Approx(ref).epsilon(1e-12));
    CHECK(s.tail_bound < kDefaultSeriesTol);
  }
}

TEST_CASE("caputo_series: truncated series that does not converge throws") {
  std::vector<MonomialTerm> terms;
  for (int k = 0; k < 5; ++k) terms.push_back({static_cast<double>(k), 1.0L});
  CHECK_THROWS_AS(caputo_series(terms, 0.5, 3.0), ConvergenceError);
  // The same terms as a complete finite sum are fine.
  double ref = 0;
  for (int k = 1; k < 5; ++k) ref += caputo_monomial(0.5, k, 3.0);
  CHECK(caputo_series(terms, 0.5, 3.0, kDefaultSeriesTol, SeriesKind::finite).value ==
        doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("trig Taylor terms sum to sine and cosine") {
  const double t = 0.4, w = 6.0;
  for (auto kind : {TrigKind::sine, TrigKind::cosine}) {
    long double sum = 0;
    for (const auto& term : trig_taylor_terms(kind, w, 2.0)) sum += term.coefficient * std::pow(t, term.mu);
    const double ref = kind == TrigKind::sine ? 2 * std::sin(w * t) : 2 * std::cos(w * t);
    CHECK(static_cast<double>(sum) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("positivity constants scale like T^(gamma-1) and C2 > C1") {
  for (double g : {0.1, 0.5, 0.9}) {
    const auto p1 = positivity_constants(g, 1.0);
    const auto p2 = positivity_constants(g, 2.0);
    CHECK(p2.c1 / p1.c1 == doctest::Approx(std::pow(2.0, g - 1)).epsilon(1e-12));
    CHECK(p2.c2 / p1.c2 == doctest::Approx(std::pow(2.0, g - 1)).epsilon(1e-12));
    CHECK(p1.c2 > p1.c1);
    CHECK(p1.c1 > 0);
  }
}
