#pragma once

namespace fdw {

inline constexpr double kPi = 3.14159265358979323846;

/// sin(pi * x) with the argument reduced exactly, so integers give an exact zero.
double sin_pi(double x);

/// Gamma function: Lanczos approximation (g = 7, 9 terms) for x >= 0.5 and the
/// reflection formula below that. Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// log|Gamma(x)|; Lanczos form for x >= 0.5, reflection below.
double log_abs_gamma(double x);

/// 1/Gamma(x), zero at the poles.
double recip_gamma(double x);

/// Gamma(a) / Gamma(b). Returns 0 when b is a pole and a is not.
double gamma_ratio(double a, double b);

bool is_nonpositive_integer(double x);

/// Neumaier's compensated summation.
template <class Real = double>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if ((sum_ < 0 ? -sum_ : sum_) >= (x < 0 ? -x : x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

}  // namespace fdw
