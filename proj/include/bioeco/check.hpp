#pragma once

// Seeded property suites over random admissible parameter draws. These back
// the CLI `check` command and the acceptance property criteria; every suite
// is deterministic for a fixed seed.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bioeco/bifurcation.hpp"
#include "bioeco/equilibria.hpp"
#include "bioeco/finite_difference.hpp"
#include "bioeco/harvest.hpp"
#include "bioeco/model.hpp"
#include "bioeco/simulate.hpp"

namespace bioeco {

struct CheckResult {
  std::string suite;
  bool passed;
  std::string detail;
};

namespace detail {

inline ModelParams draw_params(std::mt19937& rng) {
  auto u = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  ModelParams P{};
  P.r = u(0.5, 4.0);
  P.k = u(50.0, 500.0);
  P.p = u(0.05, 0.5);
  P.a = u(0.001, 0.05);
  P.m = u(0.0, 0.8);
  P.d = u(0.01, 0.6);
  P.e = u(0.05, 0.5);
  P.q1 = u(0.05, 0.8);
  P.q2 = u(0.05, 0.8);
  P.E1 = u(0.0, 3.0);
  P.E2 = u(0.0, 3.0);
  return P;
}

// A state inside the validity region, kept clear of the denominator zero.
inline State draw_state(std::mt19937& rng, const ModelParams& P) {
  auto u = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  for (int tries = 0; tries < 100; ++tries) {
    const double ymax = P.m > 0.0 ? 0.9 / P.m : P.k;
    State s{u(0.5, P.k), u(0.01, std::min(ymax, P.k))};
    if (response_denominator(P, s) > 0.05) return s;
  }
  return {P.k / 10.0, 1.0};
}

inline double mat_scaled_error(const Mat2& got, const Mat2& want) {
  const double num = std::max({std::abs(got.j11 - want.j11), std::abs(got.j12 - want.j12),
                               std::abs(got.j21 - want.j21), std::abs(got.j22 - want.j22)});
  const double den = std::max({1.0, std::abs(want.j11), std::abs(want.j12),
                               std::abs(want.j21), std::abs(want.j22)});
  return num / den;
}

}  // namespace detail

/// Analytic Jacobian against central finite differences of rhs.
inline CheckResult check_jacobian_fd(unsigned seed = 20240901, int draws = 200) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ModelParams P = detail::draw_params(rng);
    const State s = detail::draw_state(rng, P);
    worst = std::max(worst, detail::mat_scaled_error(fd::jacobian(P, s), jacobian(P, s)));
  }
  std::ostringstream os;
  os << "worst scaled error " << worst << " over " << draws << " draws (tol 1e-6)";
  return {"jacobian_vs_finite_difference", worst <= 1e-6, os.str()};
}

/// Analytic Taylor jet against the stencil oracle, 1e-4 relative with an
/// absolute floor of 1e-8 for near-zero coefficients.
inline CheckResult check_taylor_fd(unsigned seed = 20240901, int draws = 50) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  std::string worst_name;
  for (int i = 0; i < draws; ++i) {
    const ModelParams P = detail::draw_params(rng);
    const State s = detail::draw_state(rng, P);
    const TaylorCoefficients an = taylor_coefficients(P, s);
    const TaylorCoefficients nu = fd::taylor(P, s);
    const std::pair<const char*, std::pair<double, double>> entries[] = {
        {"a10", {an.a10, nu.a10}}, {"a01", {an.a01, nu.a01}}, {"a20", {an.a20, nu.a20}},
        {"a11", {an.a11, nu.a11}}, {"a02", {an.a02, nu.a02}}, {"a30", {an.a30, nu.a30}},
        {"a21", {an.a21, nu.a21}}, {"a12", {an.a12, nu.a12}}, {"b10", {an.b10, nu.b10}},
        {"b01", {an.b01, nu.b01}}, {"b20", {an.b20, nu.b20}}, {"b11", {an.b11, nu.b11}},
        {"b30", {an.b30, nu.b30}}, {"b21", {an.b21, nu.b21}}, {"b12", {an.b12, nu.b12}},
        {"b02", {an.b02, nu.b02}}, {"a03", {an.a03, nu.a03}}, {"b03", {an.b03, nu.b03}},
    };
    for (const auto& [name, pair] : entries) {
      const double err = std::abs(pair.second - pair.first) /
                         std::max(std::abs(pair.first), 1e-8 / 1e-4);
      if (err > worst) {
        worst = err;
        worst_name = name;
      }
    }
  }
  std::ostringstream os;
  os << "worst relative error " << worst << " (" << worst_name << ") over " << draws
     << " draws (tol 1e-4)";
  return {"taylor_vs_finite_difference", worst <= 1e-4, os.str()};
}

/// The linear part of the jet must be the Jacobian, bit for bit.
inline CheckResult check_taylor_linear_part(unsigned seed = 20240901, int draws = 50) {
  std::mt19937 rng(seed);
  bool ok = true;
  for (int i = 0; i < draws && ok; ++i) {
    const ModelParams P = detail::draw_params(rng);
    const State s = detail::draw_state(rng, P);
    const TaylorCoefficients c = taylor_coefficients(P, s);
    const Mat2 J = jacobian(P, s);
    ok = c.a10 == J.j11 && c.a01 == J.j12 && c.b10 == J.j21 && c.b01 == J.j22;
  }
  return {"taylor_linear_part_is_jacobian", ok,
          ok ? "exact equality on all draws" : "mismatch found"};
}

/// Random simulations never exceed the uniform bound on xi = x + y/e.
inline CheckResult check_boundedness(unsigned seed = 20240901, int draws = 20) {
  std::mt19937 rng(seed);
  int done = 0;
  for (int i = 0; i < draws; ++i) {
    const ModelParams P = detail::draw_params(rng);
    const State s0 = detail::draw_state(rng, P);
    SimConfig cfg;
    cfg.t_end = 200.0;
    try {
      const Trajectory traj = integrate(P, s0, cfg);
      if (!verify_bound(traj)) {
        return {"boundedness", false, "bound violated on draw " + std::to_string(i)};
      }
      ++done;
    } catch (const StepFailure&) {
      // a singular step abort is not a bound violation; draw again
    }
  }
  return {"boundedness", true, std::to_string(done) + " trajectories within the bound"};
}

/// s1 of the transcritical check vanishes identically.
inline CheckResult check_transcritical_s1(unsigned seed = 20240901, int draws = 100) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    ModelParams P = detail::draw_params(rng);
    if (P.E1 <= 0.0) P.E1 = 0.5;  // keep r_tc away from zero
    worst = std::max(worst, std::abs(transcritical_check(P).s1));
  }
  std::ostringstream os;
  os << "max |s1| = " << worst << " over " << draws << " draws (tol 1e-10)";
  return {"transcritical_s1", worst <= 1e-10, os.str()};
}

/// The optimal-effort formulas are the nullclines solved for effort:
/// substituting them back makes rhs vanish at the probe state.
inline CheckResult check_effort_formula_nullclines(unsigned seed = 20240901, int draws = 100) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    ModelParams P = detail::draw_params(rng);
    const State s = detail::draw_state(rng, P);
    ModelParams Q = P;
    Q.E1 = detail::effort_prey(P, s.x, s.y);
    Q.E2 = detail::effort_predator(P, s.x, s.y);
    // efforts may come out negative at an arbitrary probe; rhs must still vanish
    const Deriv d = detail::rhs_unchecked(Q, s.x, s.y);
    const double scale = std::max({1.0, std::abs(s.x), std::abs(s.y)});
    worst = std::max(worst, std::max(std::abs(d.dx_dt), std::abs(d.dy_dt)) / scale);
  }
  std::ostringstream os;
  os << "worst scaled rhs residual " << worst << " over " << draws << " draws (tol 1e-10)";
  return {"effort_formulas_are_nullclines", worst <= 1e-10, os.str()};
}

/// Classified eigenvalues reproduce trace and determinant.
inline CheckResult check_eigen_consistency(unsigned seed = 20240901, int draws = 100) {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const ModelParams P = detail::draw_params(rng);
    const State s = detail::draw_state(rng, P);
    Equilibrium eq{EquilibriumKind::Interior, s, true, {}, {}};
    const StabilityReport rep = classify(P, eq);
    const auto sum = rep.eig1 + rep.eig2;
    const auto prod = rep.eig1 * rep.eig2;
    worst = std::max(worst, std::abs(sum.real() - rep.trace) /
                                std::max(1.0, std::abs(rep.trace)));
    worst = std::max(worst, std::abs(prod.real() - rep.determinant) /
                                std::max(1.0, std::abs(rep.determinant)));
    worst = std::max(worst, std::abs(sum.imag()));
    worst = std::max(worst, std::abs(prod.imag()) / std::max(1.0, std::abs(rep.determinant)));
  }
  std::ostringstream os;
  os << "worst relative defect " << worst << " (tol 1e-10)";
  return {"eigenvalues_match_trace_det", worst <= 1e-10, os.str()};
}

/// Nonnegative admissible starts stay nonnegative (the axes are invariant).
inline CheckResult check_positivity(unsigned seed = 20240901, int draws = 10) {
  std::mt19937 rng(seed);
  for (int i = 0; i < draws; ++i) {
    const ModelParams P = detail::draw_params(rng);
    const State s0 = detail::draw_state(rng, P);
    SimConfig cfg;
    cfg.t_end = 150.0;
    try {
      const Trajectory traj = integrate(P, s0, cfg);
      for (const State& s : traj.states) {
        if (s.x < 0.0 || s.y < 0.0) {
          return {"positivity", false, "negative state on draw " + std::to_string(i)};
        }
      }
    } catch (const StepFailure&) {
    }
  }
  return {"positivity", true, "all sampled states nonnegative"};
}

/// Tightening the tolerances tenfold moves the terminal state by no more
/// than five times the looser tolerance (relative to the state scale). The
/// horizon ends mid-transient so the comparison happens away from the
/// attractor.
inline CheckResult check_integrator_self_convergence() {
  ModelParams P{3, 500, 0.2, 0.008, 0.5, 0.04, 0.15, 0.2, 0.6, 2, 2};
  const State s0{400.0, 1.5};
  SimConfig loose;
  loose.t_end = 2.0;
  loose.max_step = 2.0;  // let the error control pick the steps
  SimConfig tight = loose;
  tight.rel_tol = loose.rel_tol / 10.0;
  tight.abs_tol = loose.abs_tol / 10.0;
  const Trajectory a = integrate(P, s0, loose);
  const Trajectory b = integrate(P, s0, tight);
  const State sa = a.states.back(), sb = b.states.back();
  const double diff = std::max(std::abs(sa.x - sb.x), std::abs(sa.y - sb.y)) /
                      (1.0 + std::max(std::abs(sb.x), std::abs(sb.y)));
  std::ostringstream os;
  os << "terminal shift " << diff << " (tol " << 5.0 * loose.rel_tol << ")";
  return {"integrator_self_convergence", diff <= 5.0 * loose.rel_tol, os.str()};
}

/// Returned interior equilibria satisfy the residual invariant on the
/// reference refuge family.
inline CheckResult check_equilibrium_residuals() {
  const ModelParams base{3, 500, 0.2, 0.008, 0.0, 0.04, 0.15, 0.2, 0.6, 2, 2};
  double worst = 0.0;
  for (const double m : {0.005, 0.01, 0.015, 0.045, 0.06, 0.075, 0.5, 0.8}) {
    ModelParams P = base;
    P.m = m;
    const Equilibrium eq = interior_equilibrium(P);
    const Deriv d = rhs(P, eq.point);
    const double norm = std::max(std::abs(eq.point.x), std::abs(eq.point.y));
    worst = std::max(worst,
                     std::max(std::abs(d.dx_dt), std::abs(d.dy_dt)) / (1.0 + norm));
  }
  std::ostringstream os;
  os << "worst scaled residual " << worst << " (tol 1e-10)";
  return {"equilibrium_residuals", worst <= 1e-10, os.str()};
}

/// Every suite, in a fixed order.
inline std::vector<CheckResult> run_all_checks(unsigned seed = 20240901) {
  return {
      check_jacobian_fd(seed),
      check_taylor_fd(seed),
      check_taylor_linear_part(seed),
      check_boundedness(seed),
      check_transcritical_s1(seed),
      check_effort_formula_nullclines(seed),
      check_eigen_consistency(seed),
      check_positivity(seed),
      check_integrator_self_convergence(),
      check_equilibrium_residuals(),
  };
}

}  // namespace bioeco
