// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fdw/fdw.h"

TEST_CASE("status names and version") {
  CHECK(std::string(fdw_status_name(FDW_OK)) == "ok");
  CHECK(std::string(fdw_status_name(FDW_ERR_CONFIG)) == "config error");
  CHECK(std::string(fdw_version()).size() > 0);
}

TEST_CASE("a_gamma and errors") {
  double a = 0;
  REQUIRE(fdw_a_gamma(0.5, 1.0, &a) == FDW_OK);
  CHECK(a == doctest::Approx(2.0 / std::cos(M_PI / 4)));
  CHECK(std::string(fdw_last_error()).empty());
  CHECK(fdw_a_gamma(0.0, 1.0, &a) == FDW_ERR_DOMAIN);
  CHECK(std::string(fdw_last_error()).size() > 0);
  CHECK(fdw_a_gamma(0.5, 1.0, nullptr) == FDW_ERR_NULL);
}

TEST_CASE("weights through a scheme handle") {
  std::vector<double> w(5);
  REQUIRE(fdw_bdf2_weights(1.0, 1.0, 4, w.data()) == FDW_OK);
  CHECK(w[0] == doctest::Approx(1.5));
  CHECK(w[1] == doctest::Approx(-2.0));
  CHECK(w[2] == doctest::Approx(0.5));

  fdw_cq_scheme* s = nullptr;
  CHECK(fdw_cq_scheme_create(0.0, 0.1, 8, &s) == FDW_ERR_DOMAIN);
  CHECK(s == nullptr);
  REQUIRE(fdw_cq_scheme_create(-0.5, 0.1, 8, &s) == FDW_OK);
  std::vector<double> plain(9);
  REQUIRE(fdw_bdf2_weights(-0.5, 0.1, 8, plain.data()) == FDW_OK);
  double om = 0, w0 = 0, w1 = 1;
  REQUIRE(fdw_cq_scheme_weights(s, 3, &om, &w0, &w1) == FDW_OK);
  CHECK(om == plain[3]);
  CHECK(w1 == 0.0);
  CHECK(fdw_cq_scheme_weights(s, 9, &om, nullptr, nullptr) == FDW_ERR_INDEX);
  CHECK(fdw_cq_scheme_write_csv(s, "/nonexistent/dir/w.csv") == FDW_ERR_IO);
  fdw_cq_scheme_destroy(s);
  fdw_cq_scheme_destroy(nullptr);
}

namespace {
double cosine(double t, void*) { return std::cos(t); }
}  // namespace

TEST_CASE("scalar oracle with a callback source") {
  fdw_ode_problem p;
  fdw_ode_problem_init(&p);
  p.lambda = 1.0;
  p.a_gamma = 0.0;
  p.f = cosine;
  p.substeps = 64;
  fdw_ode_solution* sol = nullptr;
  REQUIRE(fdw_ode_solve(&p, &sol) == FDW_OK);
  CHECK(fdw_ode_solution_size(sol) == 65);
  double t = 0, u = 0;
  // u'' + u = cos t, u(0) = u'(0) = 0: u = t sin(t) / 2.
  REQUIRE(fdw_ode_solution_sample(sol, 64, &t, &u, nullptr) == FDW_OK);
  CHECK(t == doctest::Approx(1.0));
  CHECK(u == doctest::Approx(0.5 * std::sin(1.0)).epsilon(1e-3));
  CHECK(fdw_ode_solution_sample(sol, 65, &t, &u, nullptr) == FDW_ERR_INDEX);
  fdw_ode_solution_destroy(sol);
}

TEST_CASE("convergence report accessors") {
  fdw_convergence_options o;
  fdw_convergence_options_init(&o);
  o.gamma = -0.25;
  o.corrected = 1;
  o.levels = 3;
  fdw_convergence_report* r = nullptr;
  REQUIRE(fdw_convergence_run(&o, &r) == FDW_OK);
  CHECK(fdw_convergence_level_count(r) == 3);
  fdw_level l{};
  REQUIRE(fdw_convergence_level(r, 2, &l) == FDW_OK);
  CHECK(l.level == 2);
  fdw_rate primary{}, energy{};
  REQUIRE(fdw_convergence_rates(r, &primary, &energy, nullptr) == FDW_OK);
  CHECK(primary.global == energy.global);
  CHECK(std::string(fdw_convergence_primary_norm(r)) == "energy");
  CHECK(std::string(fdw_convergence_summary(r)).find("rate=") != std::string::npos);
  fdw_convergence_destroy(r);

  o.case_name = "nope";
  CHECK(fdw_convergence_run(&o, &r) == FDW_ERR_CONFIG);
  CHECK(std::string(fdw_last_error()).find("smooth1d") != std::string::npos);
  double rate = 0;
  REQUIRE(fdw_expected_rate("smooth1d", 0.75, 0, &rate) == FDW_OK);
  CHECK(rate == doctest::Approx(1.25));
}

TEST_CASE("constants and acceptance through the C API") {
  int strict = 0;
  REQUIRE(fdw_constants_csv(99, 1.0, "capi_constants.csv", &strict) == FDW_OK);
  CHECK(strict == 1);
  std::remove("capi_constants.csv");

  CHECK(fdw_acceptance_criterion_count() == 10);
  const int ids[] = {1, 4};
  fdw_acceptance* a = nullptr;
  REQUIRE(fdw_acceptance_run(ids, 2, &a) == FDW_OK);
  REQUIRE(fdw_acceptance_size(a) == 2);
  fdw_criterion c{};
  REQUIRE(fdw_acceptance_get(a, 1, &c) == FDW_OK);
  CHECK(c.id == 4);
  CHECK(c.passed == 1);
  CHECK(std::string(fdw_acceptance_line(a, 0)).rfind("criterion 1 PASS", 0) == 0);
  fdw_acceptance_destroy(a);
  const int bad[] = {11};
  CHECK(fdw_acceptance_run(bad, 1, &a) == FDW_ERR_DOMAIN);
}

TEST_CASE("single run and damping handles") {
  fdw_solve_options o;
  fdw_solve_options_init(&o);
  o.n_per_side = 16;
  o.kappa = 0.01;
  o.final_time = 0.1;
  fdw_solve_report* r = nullptr;
  REQUIRE(fdw_solve_run(&o, &r) == FDW_OK);
  fdw_solve_summary s{};
  REQUIRE(fdw_solve_get_summary(r, &s) == FDW_OK);
  CHECK(s.steps == 10);
  fdw_solve_destroy(r);
  o.kappa = 1.0;
  CHECK(fdw_solve_run(&o, &r) == FDW_ERR_DOMAIN);

  fdw_damping_options d;
  fdw_damping_options_init(&d);
  const double g[] = {-0.5};
  d.gammas = g;
  d.gamma_count = 1;
  d.n_per_side = 16;
  d.final_time = 0.5;
  fdw_damping_report* dr = nullptr;
  REQUIRE(fdw_damping_run(&d, &dr) == FDW_OK);
  REQUIRE(fdw_damping_trace_count(dr) == 2);
  fdw_damping_trace base{}, damped{};
  REQUIRE(fdw_damping_trace_info(dr, 0, &base) == FDW_OK);
  REQUIRE(fdw_damping_trace_info(dr, 1, &damped) == FDW_OK);
  CHECK(std::isnan(base.gamma));
  CHECK(damped.final_energy < base.final_energy);
  fdw_damping_destroy(dr);
}
