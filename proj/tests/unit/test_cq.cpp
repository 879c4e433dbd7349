#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdw/cq.hpp"
#include "fdw/error.hpp"
#include "fdw/fraccalc.hpp"
#include "fdw/special.hpp"

using namespace fdw;

namespace {

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(std::min(a.size(), b.size()), 0.0);
  for (std::size_t n = 0; n < c.size(); ++n)
    for (std::size_t j = 0; j <= n; ++j) c[n] += a[j] * b[n - j];
  return c;
}

}  // namespace

TEST_CASE("integer orders give the BDF2 polynomial and its powers") {
  const auto w1 = bdf2_weights(1.0, 1.0, 4);
  const std::vector<double> delta{1.5, -2.0, 0.5, 0.0, 0.0};
  for (std::size_t i = 0; i < delta.size(); ++i) CHECK(w1[i] == doctest::Approx(delta[i]).epsilon(1e-15));

  const auto w2 = bdf2_weights(2.0, 0.5, 6);
  const auto sq = convolve(delta, delta);
  for (std::size_t i = 0; i < sq.size(); ++i) CHECK(w2[i] == doctest::Approx(sq[i] / 0.25).epsilon(1e-14));
  CHECK(std::abs(w2[5]) < 1e-14);
}

TEST_CASE("order -1 inverts the difference polynomial") {
  const double k = 0.1;
  const auto c = convolve(bdf2_weights(1.0, k, 40), bdf2_weights(-1.0, k, 40));
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t n = 1; n < c.size(); ++n) CHECK(std::abs(c[n]) < 1e-13);
}

TEST_CASE("weights compose: omega^a * omega^b = omega^(a+b)") {
  const double k = 0.05;
  const auto c = convolve(bdf2_weights(0.3, k, 200), bdf2_weights(-0.7, k, 200));
  const auto d = bdf2_weights(-0.4, k, 200);
  for (std::size_t n = 0; n < c.size(); ++n) CHECK(c[n] == doctest::Approx(d[n]).epsilon(1e-11));
}

TEST_CASE("weights decay like kappa^-gamma n^(-gamma-1) / Gamma(-gamma)") {
  for (double g : {-0.5, 0.5}) {
    const double k = 0.01;
    const std::size_t n = 4000;
    const auto w = bdf2_weights(g, k, n);
    const double ref = std::pow(k, -g) * std::pow(static_cast<double>(n), -g - 1) / std::tgamma(-g);
    CHECK(w[n] == doctest::Approx(ref).epsilon(2e-3));
  }
}

TEST_CASE("CQScheme validation") {
  CHECK_THROWS_AS(CQScheme(0.0, 0.1, 10), DomainError);
  CHECK_THROWS_AS(CQScheme(1.0, 0.1, 10), DomainError);
  CHECK_THROWS_AS(CQScheme(0.5, -0.1, 10), DomainError);
  const CQScheme s(0.5, 0.1, 10);
  const std::vector<double> g(5, 1.0);
  CHECK_THROWS_AS(s.apply(std::span<const double>(g), 5), IndexError);
  CHECK(s.chi() == 1.0);
  CHECK(CQScheme(-0.5, 0.1, 10).chi() == 0.0);
}

TEST_CASE("Caputo shift: CQ of a constant vanishes for gamma > 0") {
  const CQScheme s(0.4, 0.01, 50);
  const std::vector<double> g(51, 3.0);
  for (std::size_t n = 0; n <= 50; n += 7) CHECK(std::abs(s.apply(std::span<const double>(g), n)) < 1e-13);
}

TEST_CASE("corrected CQ reproduces the low-order monomials exactly") {
  const double k = 1.0 / 64;
  const std::size_t N = 64;
  for (double g : {-0.75, -0.25}) {
    const CQScheme s(g, k, N);
    const std::vector<double> one(N + 1, 1.0);
    for (std::size_t n = 1; n <= N; n += 9) {
      const double t = n * k;
      CHECK(s.apply_corrected(std::span<const double>(one), n) ==
            doctest::Approx(caputo_monomial(g, 0.0, t)).epsilon(1e-10));
    }
  }
  for (double g : {0.25, 0.75}) {
    const CQScheme s(g, k, N);
    std::vector<double> lin(N + 1);
    for (std::size_t j = 0; j <= N; ++j) lin[j] = 2.0 + j * k;
    for (std::size_t n = 1; n <= N; n += 9) {
      CHECK(s.apply_corrected(std::span<const double>(lin), n) ==
            doctest::Approx(caputo_monomial(g, 1.0, n * k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("vector-valued apply equals componentwise scalar apply") {
  const CQScheme s(-0.3, 0.1, 8);
  std::vector<Eigen::VectorXd> g;
  std::vector<double> g0, g1;
  for (int j = 0; j <= 8; ++j) {
    Eigen::VectorXd v(2);
    v << std::sin(j), std::cos(0.5 * j);
    g.push_back(v);
    g0.push_back(v[0]);
    g1.push_back(v[1]);
  }
  const Eigen::VectorXd r = s.apply(std::span<const Eigen::VectorXd>(g), 8);
  CHECK(r[0] == doctest::Approx(s.apply(std::span<const double>(g0), 8)).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(s.apply(std::span<const double>(g1), 8)).epsilon(1e-15));
}

TEST_CASE("central differences") {
  Sequence<double> g;
  for (int j = 0; j <= 4; ++j) g.values.push_back(j * j * 0.01);
  CHECK_THROWS_AS(central_diff(g, 0.1, 0), DomainError);
  g.t0_derivative = 0.0;
  CHECK(central_diff(g, 0.1, 0) == 0.0);
  CHECK(central_diff(g, 0.1, 2) == doctest::Approx((0.09 - 0.01) / 0.2));
  CHECK_THROWS_AS(central_diff(g, 0.1, 4), IndexError);
}
