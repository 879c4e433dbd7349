#include "fdw/special.hpp"

#include <array>
#include <cmath>

#include "fdw/error.hpp"

namespace fdw {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};
constexpr double kHalfLogTwoPi = 0.91893853320467274178;

// Lanczos series A_g(x) for Gamma(x + 1) with x = z - 1.
double lanczos_series(double x) {
  double a = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    a += kLanczosCoeffs[i] / (x + static_cast<double>(i));
  }
  return a;
}

}  // namespace

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::nan("");
  const double n = std::round(x);
  const double r = x - n;  // r in [-0.5, 0.5], exact
  const double s = std::sin(kPi * r);
  const auto parity = static_cast<long long>(std::fmod(std::fabs(n), 2.0));
  return parity == 0 ? s : -s;
}

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    throw DomainError("gamma_fn: pole at non-positive integer");
  }
  if (x < 0.5) {
    return kPi / (sin_pi(x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  const double a = lanczos_series(z);
  if (x < 140.0) {
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
  }
  return std::exp(kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(a));
}

double log_abs_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw DomainError("log_abs_gamma: pole at non-positive integer");
  }
  if (x < 0.5) {
    return std::log(kPi / std::fabs(sin_pi(x))) - log_abs_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(lanczos_series(z));
}

double recip_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 170.0) return std::exp(-log_abs_gamma(x));
  return 1.0 / gamma_fn(x);
}

double gamma_ratio(double a, double b) {
  if (is_nonpositive_integer(b)) {
    if (is_nonpositive_integer(a)) {
      throw DomainError("gamma_ratio: both arguments at poles");
    }
    return 0.0;
  }
  if (a > 0.0 && b > 0.0 && (a > 100.0 || b > 100.0)) {
    return std::exp(log_abs_gamma(a) - log_abs_gamma(b));
  }
  return gamma_fn(a) * recip_gamma(b);
}

}  // namespace fdw
