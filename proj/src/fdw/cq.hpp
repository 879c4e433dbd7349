#pragma once

// BDF2 convolution quadrature for Caputo derivatives of order gamma in (-1,1),
// its startup correction weights, and the central difference operator. The
// mixed operator (CQ applied to central differences) approximates
// d^{gamma+1}/dt^{gamma+1}.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "fdw/error.hpp"

namespace fdw {

/// First steps+1 Taylor coefficients of (delta(z)/kappa)^gamma with
/// delta(z) = 3/2 - 2z + z^2/2 = (3/2)(1-z)(1-z/3).
std::vector<double> bdf2_weights(double gamma, double kappa, std::size_t steps);

/// A time series g_0, g_1, ... on the uniform grid t_j = j*kappa, optionally
/// carrying the exact derivative at t = 0.
template <class Value>
struct Sequence {
  std::vector<Value> values;
  std::optional<Value> t0_derivative;
};

/// Convolution and correction weights for a fixed (gamma, kappa, steps).
/// Immutable once built.
class CQScheme {
 public:
  CQScheme(double gamma, double kappa, std::size_t steps);

  double gamma() const noexcept { return gamma_; }
  double kappa() const noexcept { return kappa_; }
  std::size_t steps() const noexcept { return steps_; }
  /// 1 for gamma in (0,1): the Caputo shift subtracts g(0) inside the sum.
  double chi() const noexcept { return chi_; }

  std::span<const double> omega() const noexcept { return omega_; }
  std::span<const double> w0() const noexcept { return w0_; }
  std::span<const double> w1() const noexcept { return w1_; }
  /// Partial sums sum_{j<=n} omega_j.
  std::span<const double> omega_prefix() const noexcept { return prefix_; }

  /// sum_{j=0}^{n} omega_{n-j} (g_j - chi g_0)
  template <class Value>
  Value apply(std::span<const Value> g, std::size_t n) const;

  /// sum_{j=0}^{n} omega_{n-j} g_j + w0[n] g_0 + w1[n] g_1
  template <class Value>
  Value apply_corrected(std::span<const Value> g, std::size_t n) const;

  /// CSV with columns n, t_n, omega_n, w0_n, w1_n.
  void write_csv(const std::string& path) const;

 private:
  void check_index(std::size_t n, std::size_t available) const;

  double gamma_;
  double kappa_;
  std::size_t steps_;
  double chi_;
  std::vector<double> omega_;
  std::vector<double> prefix_;
  std::vector<double> w0_;
  std::vector<double> w1_;
};

namespace detail {

template <class Value>
Value zero_like(const Value& v) {
  if constexpr (std::is_arithmetic_v<Value>) {
    return Value{0};
  } else {
    return Value::Zero(v.size());
  }
}

}  // namespace detail

template <class Value>
Value CQScheme::apply(std::span<const Value> g, std::size_t n) const {
  check_index(n, g.size());
  Value acc = detail::zero_like(g[0]);
  for (std::size_t j = 0; j <= n; ++j) acc += omega_[n - j] * g[j];
  if (chi_ != 0.0) acc -= (chi_ * prefix_[n]) * g[0];
  return acc;
}

template <class Value>
Value CQScheme::apply_corrected(std::span<const Value> g, std::size_t n) const {
  check_index(n, g.size());
  Value acc = detail::zero_like(g[0]);
  for (std::size_t j = 0; j <= n; ++j) acc += omega_[n - j] * g[j];
  acc += w0_[n] * g[0];
  if (w1_[n] != 0.0) {
    FDW_REQUIRE(g.size() > 1, IndexError, "apply_corrected: needs g_1 for gamma in (0,1)");
    acc += w1_[n] * g[1];
  }
  return acc;
}

/// Central difference of the sequence at step n: the stored derivative at
/// n = 0, (g_{n+1} - g_{n-1})/(2 kappa) otherwise.
template <class Value>
Value central_diff(const Sequence<Value>& g, double kappa, std::size_t n) {
  if (n == 0) {
    FDW_REQUIRE(g.t0_derivative.has_value(), DomainError,
                "central_diff: the derivative at t = 0 was not supplied");
    return *g.t0_derivative;
  }
  FDW_REQUIRE(n + 1 < g.values.size(), IndexError,
              "central_diff: step " + std::to_string(n) + " needs g_{n+1}");
  return Value((g.values[n + 1] - g.values[n - 1]) / (2.0 * kappa));
}

/// CQ (plain or corrected) of the central-difference sequence at step n.
template <class Value>
Value mixed_operator(const CQScheme& scheme, const Sequence<Value>& g, std::size_t n,
                     bool corrected) {
  std::vector<Value> diffs;
  diffs.reserve(n + 2);
  for (std::size_t j = 0; j <= n; ++j) diffs.push_back(central_diff(g, scheme.kappa(), j));
  const std::span<const Value> view(diffs);
  return corrected ? scheme.apply_corrected(view, n) : scheme.apply(view, n);
}

}  // namespace fdw
