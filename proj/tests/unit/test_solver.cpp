#include <doctest.h>

#include <cmath>
#include <memory>

#include "fdw/error.hpp"
#include "fdw/fem.hpp"
#include "fdw/fraccalc.hpp"
#include "fdw/oracle.hpp"
#include "fdw/solver.hpp"
#include "fdw/special.hpp"

using namespace fdw;

namespace {

std::shared_ptr<const FemSystem> unit_interval(int n) {
  return std::make_shared<const FemSystem>(build_mesh(Domain::interval(0, 1), n));
}

SimConfig sine_config(std::shared_ptr<const FemSystem> fem, double kappa, double T) {
  SimConfig c;
  c.fem = fem;
  c.kappa = kappa;
  c.final_time = T;
  c.u0 = ritz_projection(*fem, [](const Point& p) { return Point{kPi * std::cos(kPi * p.x), 0}; });
  c.v0 = Vector::Zero(c.u0.size());
  return c;
}

}  // namespace

TEST_CASE("zero data gives a zero trajectory") {
  auto fem = unit_interval(16);
  for (double g : {-0.5, 0.5}) {
    for (bool corrected : {false, true}) {
      SimConfig c;
      c.fem = fem;
      c.gamma = g;
      c.a_gamma = a_gamma(g, 1.0);
      c.corrected = corrected;
      c.kappa = 0.01;
      c.final_time = 0.5;
      c.u0 = Vector::Zero(15);
      c.v0 = Vector::Zero(15);
      Simulation sim(c);
      double worst = 0;
      sim.run([&](std::size_t, double, const Vector& u) { worst = std::max(worst, u.cwiseAbs().maxCoeff()); });
      CHECK(worst == 0.0);
    }
  }
}

TEST_CASE("initial data: u1 - u0 = kappa v0 + kappa^2/2 w") {
  auto fem = unit_interval(20);
  SimConfig c = sine_config(fem, 0.01, 0.1);
  c.v0 = fem->interpolate([](const Point& p) { return p.x * (1 - p.x); });
  c.load = [&](double t) { return load_vector(*fem, [t](const Point& p) { return std::cos(t) * p.x; }); };
  Simulation sim(c);
  sim.initialize();
  const Vector w = fem->solve_mass(c.load(0.0) - fem->stiffness() * c.u0);
  const Vector expect = c.u0 + c.kappa * c.v0 + 0.5 * c.kappa * c.kappa * w;
  CHECK((sim.previous() - c.u0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((sim.current() - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sim.history(0) - c.v0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("P_h of -Laplace sin converges to -pi^2 sin at second order") {
  double prev = 0;
  for (int n : {16, 32, 64}) {
    auto fem = unit_interval(n);
    const Vector u0 = ritz_projection(*fem, [](const Point& p) { return Point{kPi * std::cos(kPi * p.x), 0}; });
    const Vector w = fem->solve_mass(-(fem->stiffness() * u0));
    const Vector exact = fem->interpolate([](const Point& p) { return -kPi * kPi * std::sin(kPi * p.x); });
    const double err = l2_norm(*fem, w - exact);
    if (prev > 0) CHECK(std::log2(prev / err) > 1.9);
    prev = err;
  }
}

TEST_CASE("undamped leapfrog conserves the discrete energy") {
  auto fem = unit_interval(64);
  SimConfig c = sine_config(fem, 0.25 / 64, 1000 * 0.25 / 64);
  Simulation sim(c);
  const RunResult r = sim.run();
  REQUIRE(r.steps == 1000);
  double drift = 0;
  for (double e : r.energy) drift = std::max(drift, std::abs(e - r.energy.front()) / r.energy.front());
  CHECK(drift < 1e-10);
}

TEST_CASE("undamped standard wave converges at second order") {
  double prev = 0;
  for (int level = 0; level < 3; ++level) {
    const int n = 16 << level;
    const double kappa = 0.25 / n;
    auto fem = unit_interval(n);
    SimConfig c = sine_config(fem, kappa, 1.0);
    const Vector shape = fem->interpolate([](const Point& p) { return std::sin(kPi * p.x); });
    double err = 0;
    Simulation sim(c);
    sim.run([&](std::size_t, double t, const Vector& u) {
      err = std::max(err, l2_norm(*fem, u - std::cos(kPi * t) * shape));
    });
    if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("CFL guard and instability beyond it") {
  auto fem = unit_interval(32);
  const double limit = cfl_limit(1.0 / 32, inverse_constant(*fem));
  CHECK(limit == doctest::Approx(2.0 / 32 / std::sqrt(12.0)).epsilon(2e-2));
  SimConfig c = sine_config(fem, 1.05 * limit, 10.0);
  CHECK_THROWS_AS(Simulation{c}, DomainError);
  c.allow_cfl_violation = true;
  // The guard keeps the energy positive; leapfrog itself only breaks down once
  // lambda_max kappa^2 > 4, i.e. beyond sqrt(2) times the guard.
  c.kappa = 1.3 * limit;
  c.final_time = 200 * c.kappa;
  CHECK_NOTHROW(Simulation(c).run());
  c.kappa = 1.5 * limit;
  c.final_time = 10.0;
  Simulation sim(c);
  std::size_t last = 0;
  CHECK_THROWS_AS(sim.run([&](std::size_t n, double, const Vector&) { last = n; }), SolverError);
  CHECK(last < 200);
}

TEST_CASE("negative-order damping never increases the energy") {
  auto fem = unit_interval(64);
  for (double g : {-0.75, -0.25}) {
    SimConfig c = sine_config(fem, 0.25 / 64, 2.0);
    c.gamma = g;
    c.a_gamma = a_gamma(g, 1.0);
    Simulation sim(c);
    const RunResult r = sim.run();
    double worst = 0;
    for (double e : r.energy) worst = std::max(worst, e);
    CHECK(worst <= r.energy.front() * (1 + 1e-8));
    CHECK(r.energy.back() < 0.9 * r.energy.front());
  }
}

TEST_CASE("single discrete mode follows the scalar recurrence") {
  const int n = 16;
  auto fem = unit_interval(n);
  const double h = 1.0 / n;
  const double c2 = std::cos(2 * kPi * h);
  const double lambda = 6 / (h * h) * (1 - c2) / (2 + c2);
  const Vector mode = fem->interpolate([](const Point& p) { return std::sin(2 * kPi * p.x); });
  for (bool corrected : {false, true}) {
    SimConfig c;
    c.fem = fem;
    c.gamma = 0.5;
    c.a_gamma = a_gamma(0.5, 1.0);
    c.corrected = corrected;
    c.kappa = 0.005;
    c.final_time = 0.5;
    c.u0 = mode;
    c.v0 = -0.5 * mode;
    Simulation sim(c);
    std::vector<double> coeff;
    sim.run([&](std::size_t, double, const Vector& u) { coeff.push_back(u.dot(mode) / mode.dot(mode)); });

    ModalRecurrence m;
    m.gamma = 0.5;
    m.lambda = lambda;
    m.a_gamma = c.a_gamma;
    m.corrected = corrected;
    m.kappa = c.kappa;
    m.steps = sim.steps();
    m.u0 = 1.0;
    m.v0 = -0.5;
    const auto ref = modal_recurrence(m);
    REQUIRE(ref.size() == coeff.size());
    for (std::size_t j = 0; j < ref.size(); ++j) CHECK(std::abs(coeff[j] - ref[j]) < 1e-12);
  }
}

TEST_CASE("configuration errors") {
  auto fem = unit_interval(8);
  SimConfig c = sine_config(fem, 0.01, 1.0);
  c.kappa = 0;
  CHECK_THROWS_AS(Simulation{c}, DomainError);
  c.kappa = 0.01;
  c.v0 = Vector::Zero(3);
  CHECK_THROWS_AS(Simulation{c}, DomainError);
  c.fem = nullptr;
  CHECK_THROWS_AS(Simulation{c}, ConfigError);
}
