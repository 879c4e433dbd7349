#include <doctest.h>

#include <cmath>

#include "fdw/error.hpp"
#include "fdw/special.hpp"

using namespace fdw;

TEST_CASE("gamma_fn agrees with std::tgamma") {
  for (double x : {0.1, 0.5, 0.75, 1.0, 1.25, 2.5, 3.7, 7.2, 15.5, -0.25, -0.75, -1.5, -2.3}) {
    CAPTURE(x);
    CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(log_abs_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("poles") {
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-2.0), DomainError);
  CHECK(recip_gamma(0.0) == 0.0);
  CHECK(recip_gamma(-3.0) == 0.0);
  CHECK(is_nonpositive_integer(-4.0));
  CHECK_FALSE(is_nonpositive_integer(-0.5));
  CHECK(gamma_ratio(1.5, -1.0) == 0.0);
}

TEST_CASE("gamma_ratio matches a quotient of tgamma") {
  for (auto [a, b] : {std::pair{2.5, 1.25}, {0.3, 3.3}, {-0.5, 1.5}, {10.5, 9.5}}) {
    CHECK(gamma_ratio(a, b) == doctest::Approx(std::tgamma(a) / std::tgamma(b)).epsilon(1e-12));
  }
}

TEST_CASE("sin_pi is exact at integers and half-integers") {
  for (int k = -5; k <= 5; ++k) CHECK(sin_pi(k) == 0.0);
  CHECK(sin_pi(0.5) == 1.0);
  CHECK(sin_pi(-1.5) == 1.0);
  CHECK(sin_pi(0.3) == doctest::Approx(std::sin(kPi * 0.3)).epsilon(1e-15));
}

TEST_CASE("compensated sum keeps the small terms") {
  CompensatedSum<> s;
  for (double x : {1.0, 1e100, 1.0, -1e100}) s.add(x);
  CHECK(s.value() == 2.0);
}
