#include "bioeco/simulate.hpp"

#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"

#include "bioeco/check.hpp"
#include "bioeco/equilibria.hpp"
#include "test_params.hpp"

using namespace bioeco;
using bioeco::testing::econ_opt;
using bioeco::testing::p_family;
using bioeco::testing::p_opt_model;
using bioeco::testing::p_triv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SimConfig cfg_t(double t_end) {
  SimConfig c;
  c.t_end = t_end;
  return c;
}

Trajectory constant_trajectory(const ModelParams& P, const State& s, double t_end, int n) {
  Trajectory traj;
  traj.params_used = P;
  for (int i = 0; i <= n; ++i) {
    traj.times.push_back(t_end * i / n);
    traj.states.push_back(s);
    traj.validity.push_back({true, refuge_factor(P, s) >= 0.0});
  }
  return traj;
}

}  // namespace

TEST_CASE("a trajectory started at the stable interior point stays there") {
  const ModelParams P = p_family(0.015);
  const Equilibrium eq = interior_equilibrium(P);
  const Trajectory traj = integrate(P, eq.point, cfg_t(1000.0));
  for (const State& s : traj.states) {
    CHECK(std::abs(s.x - eq.point.x) < 1e-6);
    CHECK(std::abs(s.y - eq.point.y) < 1e-6);
  }
}

TEST_CASE("the limit-cycle regime stays inside the uniform bound") {
  const ModelParams P = p_family(0.005);
  const Trajectory traj = integrate(P, {60.0, 15.0}, cfg_t(2000.0));
  CHECK(verify_bound(traj));
  const Bound b = ultimate_bound(P);
  for (const State& s : traj.states) {
    CHECK(s.x + s.y / P.e <= std::max(b.ultimate, 160.0) + 1e-6 * (1.0 + b.ultimate));
  }
}

TEST_CASE("integrate validates its inputs") {
  CHECK_THROWS_AS(integrate(p_family(0.01), {-1.0, 5.0}, cfg_t(10.0)), InvalidState);
  CHECK_THROWS_AS(integrate(p_family(0.5), {60.0, 15.0}, cfg_t(10.0)), InvalidDenominator);
  SimConfig bad = cfg_t(10.0);
  bad.transient_fraction = 1.5;
  CHECK_THROWS_AS(integrate(p_family(0.01), {60.0, 15.0}, bad), InvalidParams);
}

TEST_CASE("step underflow aborts with the partial trajectory attached") {
  // An absurd magnitude overflows the local error estimate; the controller
  // shrinks the step to nothing and gives up.
  bool thrown = false;
  try {
    integrate(p_family(0.01), {1e160, 1.0}, cfg_t(10.0));
  } catch (const StepFailure& e) {
    thrown = true;
    REQUIRE_FALSE(e.partial().times.empty());
    CHECK(e.partial().states.front().x == 1e160);
    for (std::size_t i = 0; i + 1 < e.partial().times.size(); ++i) {
      CHECK(e.partial().times[i] < e.partial().times[i + 1]);
    }
  }
  CHECK(thrown);
}

TEST_CASE("trajectory times are strictly increasing and flagged valid") {
  const Trajectory traj = integrate(p_family(0.01), {60.0, 15.0}, cfg_t(50.0));
  REQUIRE(traj.times.size() >= 2);
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    CHECK(traj.times[i] < traj.times[i + 1]);
  }
  for (const StepFlags& f : traj.validity) {
    CHECK(f.denominator_ok);
  }
}

TEST_CASE("limit cycle detected below the Hopf threshold") {
  const Trajectory traj = integrate(p_family(0.005), {60.0, 15.0}, cfg_t(2000.0));
  const CycleReport rep = detect_limit_cycle(traj, cfg_t(2000.0));
  CHECK(rep.verdict == CycleVerdict::Oscillating);
  CHECK(rep.amplitude_x > 100.0);
  CHECK(rep.amplitude_y > 10.0);
  REQUIRE(rep.period_estimate.has_value());
  CHECK_THAT(*rep.period_estimate, WithinAbs(6.1, 0.6));
}

TEST_CASE("convergence detected above the Hopf threshold") {
  const Trajectory traj = integrate(p_family(0.015), {60.0, 15.0}, cfg_t(2000.0));
  const CycleReport rep = detect_limit_cycle(traj, cfg_t(2000.0));
  CHECK(rep.verdict == CycleVerdict::Converged);
  REQUIRE(rep.attractor_point.has_value());
  CHECK_THAT(rep.attractor_point->x, WithinRel(94.99, 5e-3));
  CHECK_THAT(rep.attractor_point->y, WithinRel(23.33, 5e-3));
}

TEST_CASE("cycle verdicts agree with the eigenvalue classification") {
  struct Case {
    double m;
    CycleVerdict want;
  };
  for (const Case c : {Case{0.005, CycleVerdict::Oscillating},
                       Case{0.01, CycleVerdict::Oscillating},
                       Case{0.015, CycleVerdict::Converged}}) {
    const ModelParams P = p_family(c.m);
    const Trajectory traj = integrate(P, {60.0, 15.0}, cfg_t(2000.0));
    const CycleReport rep = detect_limit_cycle(traj, cfg_t(2000.0));
    INFO("m = " << c.m);
    CHECK(rep.verdict == c.want);
    const StabilityReport st = classify(P, interior_equilibrium(P));
    const bool unstable = st.classification == Classification::UnstableFocus ||
                          st.classification == Classification::UnstableNode;
    CHECK(unstable == (rep.verdict == CycleVerdict::Oscillating));
  }
}

TEST_CASE("a constant trajectory converges with zero amplitude") {
  const Trajectory traj = constant_trajectory(p_family(0.01), {10.0, 5.0}, 100.0, 200);
  const CycleReport rep = detect_limit_cycle(traj, cfg_t(100.0));
  CHECK(rep.verdict == CycleVerdict::Converged);
  CHECK(rep.amplitude_x == 0.0);
  CHECK(rep.amplitude_y == 0.0);
}

TEST_CASE("cycle detection needs room beyond the transient") {
  const Trajectory traj = integrate(p_family(0.01), {60.0, 15.0}, cfg_t(50.0));
  SimConfig cfg = cfg_t(50.0);
  cfg.transient_fraction = 0.8;
  CHECK_THROWS_AS(detect_limit_cycle(traj, cfg), TooShort);
}

TEST_CASE("refuge sweep reproduces the reference equilibrium rows") {
  const auto rows = sweep_refuge(p_family(0.0), {0.010, 0.500});
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].star.has_value());
  CHECK_THAT(rows[0].star->x, WithinRel(77.14, 5e-3));
  CHECK_THAT(rows[0].star->y, WithinRel(19.94, 5e-3));
  REQUIRE(rows[1].star.has_value());
  CHECK_THAT(rows[1].star->x, WithinRel(427.82, 5e-3));
  CHECK_THAT(rows[1].star->y, WithinRel(1.71, 5e-3));
  CHECK(*rows[1].classification == Classification::StableNode);
}

TEST_CASE("refuge sweep of an empty list is empty") {
  CHECK(sweep_refuge(p_family(0.0), {}).empty());
}

TEST_CASE("refuge sweep marks infeasible rows") {
  const auto rows = sweep_refuge(p_triv(), {0.1});
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].star.has_value());
}

TEST_CASE("terminal predator stock falls as the refuge grows") {
  // common start valid for every listed refuge value
  std::vector<double> terminal;
  for (const double m : {0.015, 0.045, 0.060, 0.075, 0.500, 0.800}) {
    const Trajectory traj = integrate(p_family(m), {60.0, 1.2}, cfg_t(600.0));
    terminal.push_back(traj.states.back().y);
  }
  for (std::size_t i = 0; i + 1 < terminal.size(); ++i) {
    CHECK(terminal[i] > terminal[i + 1]);
  }
}

TEST_CASE("bound holds when the start already exceeds the asymptotic bound") {
  ModelParams P = p_family(0.01);
  const Bound b = ultimate_bound(P);
  const double x0 = std::min(0.9 * P.k, b.ultimate * 1.2);
  const Trajectory traj = integrate(P, {x0, 10.0}, cfg_t(300.0));
  CHECK(verify_bound(traj));
}

TEST_CASE("bound holds trivially at the origin") {
  const Trajectory traj = integrate(p_family(0.01), {0.0, 0.0}, cfg_t(50.0));
  CHECK(verify_bound(traj));
  for (const State& s : traj.states) {
    CHECK(s.x == 0.0);
    CHECK(s.y == 0.0);
  }
}

TEST_CASE("boundedness property suite") {
  const CheckResult r = check_boundedness();
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("positivity property suite") {
  const CheckResult r = check_positivity();
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("integrator self-convergence") {
  const CheckResult r = check_integrator_self_convergence();
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("global-stability regime: random starts reach the interior point") {
  const ModelParams P = p_family(0.5);
  const Equilibrium eq = interior_equilibrium(P);
  const GasCheck g = gas_condition(P, eq);
  REQUIRE(g.holds);
  REQUIRE(eq.feasible);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ux(1.0, 500.0), uy(0.01, 1.9);
  for (int i = 0; i < 20; ++i) {
    const State s0{ux(rng), uy(rng)};
    const Trajectory traj = integrate(P, s0, cfg_t(200.0));
    const State last = traj.states.back();
    CHECK(std::abs(last.x - eq.point.x) <= 0.01 * (1.0 + std::abs(eq.point.x)));
    CHECK(std::abs(last.y - eq.point.y) <= 0.01 * (1.0 + std::abs(eq.point.y)));
  }
}

TEST_CASE("heavy harvest empties both stocks") {
  const Trajectory traj = integrate(p_triv(), {5.0, 5.0}, cfg_t(150.0));
  const State last = traj.states.back();
  CHECK(last.x < 1e-6);
  CHECK(last.y < 1e-6);
}

TEST_CASE("discounted revenue is zero without effort") {
  ModelParams P = p_opt_model();
  P.E1 = 0.0;
  P.E2 = 0.0;
  const Trajectory traj = integrate(P, {100.0, 20.0}, cfg_t(50.0));
  CHECK(discounted_revenue(traj, P, econ_opt()) == 0.0);
}

TEST_CASE("discounted revenue vanishes at a zero-rent bionomic point") {
  const auto cases = bionomic_equilibrium(p_opt_model(), econ_opt());
  const BionomicEquilibrium& civ = cases[3];
  ModelParams P = p_opt_model();
  P.E1 = civ.e1_inf;
  P.E2 = civ.e2_inf;
  const Trajectory traj = constant_trajectory(P, {*civ.x_inf, *civ.y_inf}, 100.0, 1000);
  CHECK(std::abs(discounted_revenue(traj, P, econ_opt())) < 1e-10);
}

TEST_CASE("discounted revenue matches the closed form for constant rent") {
  ModelParams P = p_opt_model();
  P.E1 = 2.0;
  P.E2 = 1.0;
  EconParams E = econ_opt();
  E.delta = 0.05;
  const State s{100.0, 20.0};
  const double pi = revenue(E, P, s).pi;
  const double T = 100.0;
  const Trajectory traj = constant_trajectory(P, s, T, 4000);
  const double want = pi * (1.0 - std::exp(-E.delta * T)) / E.delta;
  CHECK_THAT(discounted_revenue(traj, P, E), WithinRel(want, 1e-6));
}

TEST_CASE("discounted revenue rejects an empty trajectory") {
  Trajectory empty;
  empty.params_used = p_opt_model();
  CHECK_THROWS_AS(discounted_revenue(empty, p_opt_model(), econ_opt()), EmptyTrajectory);
}
