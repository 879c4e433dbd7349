#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fdw/error.hpp"
#include "fdw/harness.hpp"
#include "fdw/special.hpp"

using namespace fdw;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Caputo derivative of order gamma+1 of Theta from the case's own Theta' or Theta''.
double frac_reference(const ManufacturedCase& c, double t) {
  const double order = c.gamma + 1;
  const double n = std::ceil(order);
  const TimeFunction& d = order < 1 ? c.dtheta : c.ddtheta;
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(
             [&](double s, double gap) {
               const double r = gap > 0 ? gap : t - s;
               return std::pow(r, n - order - 1) * d(s);
             },
             0.0, t) /
         std::tgamma(n - order);
}

}  // namespace

TEST_CASE("manufactured sources use the right fractional derivative") {
  for (const std::string name : {"smooth1d", "nonsmooth1d"}) {
    for (double g : {-0.75, -0.25, 0.25, 0.75}) {
      const ManufacturedCase c = build_case(name, g);
      for (double t : {0.1, 0.5, 1.0}) {
        CAPTURE(name);
        CAPTURE(g);
        CAPTURE(t);
        CHECK(c.frac_theta(t) == doctest::Approx(frac_reference(c, t)).epsilon(1e-9));
        CHECK(c.source_time(t) ==
              doctest::Approx(c.ddtheta(t) + c.lambda_s * c.theta(t) + c.a_gamma * c.frac_theta(t)));
      }
    }
  }
}

TEST_CASE("spatial factors are Dirichlet eigenfunctions") {
  for (const std::string name : {"smooth1d", "smooth2d"}) {
    const ManufacturedCase c = build_case(name, 0.5);
    const Point p{0.3 * c.domain.b + 0.7 * c.domain.a, 0.6 * c.domain.d + 0.4 * c.domain.c};
    const double e = 1e-4;
    double lap = (c.spatial({p.x + e, p.y}) - 2 * c.spatial(p) + c.spatial({p.x - e, p.y})) / (e * e);
    if (c.domain.dimension == 2)
      lap += (c.spatial({p.x, p.y + e}) - 2 * c.spatial(p) + c.spatial({p.x, p.y - e})) / (e * e);
    CHECK(-lap == doctest::Approx(c.lambda_s * c.spatial(p)).epsilon(1e-6));
    CHECK(c.spatial({c.domain.a, p.y}) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("nonsmooth coefficient removes the t^(1-gamma) term of the source") {
  for (double g : {0.25, 0.75}) {
    const double t = 1e-12;
    const double scale = std::pow(t, 1 - g);
    const ManufacturedCase fixed = build_case("nonsmooth1d", g);
    const ManufacturedCase printed = build_case("nonsmooth1d_printed", g);
    const double r_fixed = std::abs(fixed.source_time(t) - fixed.source_time(0)) / scale;
    const double r_printed = std::abs(printed.source_time(t) - printed.source_time(0)) / scale;
    CAPTURE(g);
    CHECK(r_printed == doctest::Approx(printed.a_gamma / std::tgamma(2 - g)).epsilon(0.05));
    CHECK(r_fixed < 0.05 * r_printed);
  }
}

TEST_CASE("unknown case names") {
  CHECK_THROWS_AS(build_case("smooth3d", 0.5), ConfigError);
  CHECK(case_names().size() == 4);
}

TEST_CASE("rate fits") {
  const RateFit clean = fit_rate({1.0, 0.25, 0.0625, 0.015625});
  CHECK(clean.global == doctest::Approx(2.0));
  CHECK(clean.last_pair == doctest::Approx(2.0));
  CHECK_FALSE(clean.pre_asymptotic);
  const RateFit bent = fit_rate({1.0, 0.125, 0.03125, 0.015625});
  CHECK(bent.last_pair == doctest::Approx(1.0));
  CHECK(bent.pre_asymptotic);
  CHECK_THROWS_AS(fit_rate({1.0}), DomainError);
  CHECK_THROWS_AS(fit_rate({1.0, 0.0}), DomainError);
}

TEST_CASE("expected rates") {
  CHECK(expected_rate("smooth1d", -0.5, false) == 1.0);
  CHECK(expected_rate("smooth1d", 0.75, false) == doctest::Approx(1.25));
  CHECK(expected_rate("smooth1d", 0.25, false) == doctest::Approx(1.75));
  CHECK(expected_rate("smooth2d", 0.7, true) == 2.0);
  CHECK(expected_rate("nonsmooth1d", 0.75, true) == doctest::Approx(1.25));
  CHECK(expected_rate("nonsmooth1d", -0.75, true) == doctest::Approx(1.75));
  CHECK(expected_rate("nonsmooth1d", -0.25, false) == 1.0);
}

TEST_CASE("lemma orders") {
  CHECK_FALSE(lemma_order(CQOperator::corrected, 0.5, 1.0).has_value());
  CHECK(lemma_order(CQOperator::corrected, -0.5, 1.0) == 2.0);
  CHECK(lemma_order(CQOperator::mixed, 0.5, 2.5) == doctest::Approx(1.5));
  CHECK(lemma_order(CQOperator::mixed_corrected, 0.75, 2.5) == doctest::Approx(1.25));
  CHECK_FALSE(lemma_order(CQOperator::mixed_corrected, -0.5, 1.0).has_value());
}

TEST_CASE("monomial study: exact cases stay at rounding level") {
  const MonomialStudy s = monomial_study(CQOperator::corrected, -0.5, 0.0);
  CHECK(s.exact);
  const MonomialStudy p = monomial_study(CQOperator::plain, -0.5, 3.0);
  CHECK_FALSE(p.exact);
  CHECK(p.order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("convergence study, CSV and determinism") {
  ConvergenceOptions o;
  o.case_name = "smooth1d";
  o.gamma = -0.75;
  o.corrected = true;
  o.levels = 3;
  const ConvergenceReport r = run_convergence(o);
  REQUIRE(r.levels.size() == 3);
  CHECK(r.levels[0].n_per_side == 11);
  CHECK(r.levels[1].kappa == r.levels[0].kappa / 2);
  CHECK(r.primary_norm() == "energy");
  CHECK(r.primary().global > 1.8);
  CHECK(r.summary().find("rate=") != std::string::npos);

  r.write_csv("conv_a.csv");
  o.parallel = false;
  run_convergence(o).write_csv("conv_b.csv");
  const std::string a = slurp("conv_a.csv");
  CHECK(a.rfind("level,n_per_side,h,kappa,error_energy,error_l2max\n", 0) == 0);
  CHECK(a == slurp("conv_b.csv"));
  std::remove("conv_a.csv");
  std::remove("conv_b.csv");

  o.levels = 2;
  CHECK_THROWS_AS(run_convergence(o), ConfigError);
}

TEST_CASE("constants table") {
  const auto rows = run_constants_figure(9);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0].gamma == doctest::Approx(0.1));
  for (const auto& r : rows) CHECK(r.c2 > r.c1);
  CHECK_THROWS_AS(run_constants_figure(0), ConfigError);
}

TEST_CASE("single run with snapshots") {
  SolveOptions o;
  o.n_per_side = 16;
  o.kappa = 0.01;
  o.final_time = 0.2;
  o.snapshot_every = 5;
  const SolveReport r = run_solve(o);
  CHECK(r.steps == 20);
  CHECK(r.snapshots.size() == 5);
  CHECK(r.snapshot_steps.back() == 20);
  CHECK(r.snapshots[0].size() == 17);
  CHECK(r.error_l2max < 0.05);
  CHECK(r.cfl_limit > o.kappa);
  o.kappa = 0.2;
  CHECK_THROWS_AS(run_solve(o), DomainError);
}
