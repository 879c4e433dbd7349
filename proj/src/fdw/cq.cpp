#include "fdw/cq.hpp"

#include <cmath>

#include "fdw/csv.hpp"
#include "fdw/special.hpp"

namespace fdw {

std::vector<double> bdf2_weights(double gamma, double kappa, std::size_t steps) {
  FDW_REQUIRE(std::isfinite(gamma), DomainError, "bdf2_weights: gamma must be finite");
  FDW_REQUIRE(kappa > 0.0, DomainError, "bdf2_weights: kappa must be positive");

  // Binomial coefficients of (1-z)^gamma; those of (1-z/3)^gamma are c_j 3^{-j}.
  std::vector<double> c(steps + 1);
  std::vector<double> d(steps + 1);
  c[0] = 1.0;
  d[0] = 1.0;
  double third_pow = 1.0;
  for (std::size_t j = 1; j <= steps; ++j) {
    const auto jd = static_cast<double>(j);
    c[j] = c[j - 1] * (jd - 1.0 - gamma) / jd;
    third_pow /= 3.0;
    d[j] = c[j] * third_pow;
  }

  const double scale = std::pow(1.5 / kappa, gamma);
  std::vector<double> omega(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) {
    CompensatedSum<> acc;
    for (std::size_t j = 0; j <= n; ++j) {
      if (d[j] == 0.0) break;
      acc.add(d[j] * c[n - j]);
    }
    omega[n] = scale * acc.value();
  }
  return omega;
}

CQScheme::CQScheme(double gamma, double kappa, std::size_t steps)
    : gamma_(gamma), kappa_(kappa), steps_(steps), chi_(gamma > 0.0 ? 1.0 : 0.0) {
  FDW_REQUIRE(gamma > -1.0 && gamma < 1.0 && gamma != 0.0, DomainError,
              "CQScheme: gamma must lie in (-1,0) or (0,1)");
  FDW_REQUIRE(kappa > 0.0, DomainError, "CQScheme: kappa must be positive");

  omega_ = bdf2_weights(gamma, kappa, steps);
  prefix_.resize(steps + 1);
  w0_.resize(steps + 1);
  w1_.assign(steps + 1, 0.0);

  CompensatedSum<> s0;
  // s1[n] = sum_{j<=n} (n-j) omega_j = sum_{m<n} s0[m].
  CompensatedSum<> s1;
  for (std::size_t n = 0; n <= steps; ++n) {
    s0.add(omega_[n]);
    prefix_[n] = s0.value();
    const double t = static_cast<double>(n) * kappa;
    if (gamma < 0.0) {
      w0_[n] = std::pow(t, -gamma) * recip_gamma(1.0 - gamma) - prefix_[n];
    } else {
      const double moment = kappa * s1.value();
      w1_[n] = (std::pow(t, 1.0 - gamma) * recip_gamma(2.0 - gamma) - moment) / kappa;
      w0_[n] = -prefix_[n] - w1_[n];
    }
    s1.add(prefix_[n]);
  }
}

void CQScheme::check_index(std::size_t n, std::size_t available) const {
  FDW_REQUIRE(n <= steps_, IndexError,
              "CQ step " + std::to_string(n) + " exceeds scheme length " + std::to_string(steps_));
  FDW_REQUIRE(n < available, IndexError,
              "CQ step " + std::to_string(n) + " needs history through index n");
}

void CQScheme::write_csv(const std::string& path) const {
  CsvWriter csv(path, {"n", "t_n", "omega_n", "w0_n", "w1_n"});
  for (std::size_t n = 0; n <= steps_; ++n) {
    csv.row({static_cast<double>(n), static_cast<double>(n) * kappa_, omega_[n], w0_[n], w1_[n]});
  }
}

}  // namespace fdw
