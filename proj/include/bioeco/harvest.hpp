#pragma once

// Harvest economics: net revenue, the four bionomic-equilibrium cases, the
// scaled shadow prices, the singular-path stationarity relations, and the
// optimal steady-state policy solved from them.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bioeco/equilibria.hpp"
#include "bioeco/errors.hpp"
#include "bioeco/model.hpp"

namespace bioeco {

struct EconParams {
  double p1;     // prey price per unit biomass
  double p2;     // predator price per unit biomass
  double c1;     // prey fishing cost per unit effort
  double c2;     // predator fishing cost per unit effort
  double delta;  // instantaneous annual discount rate

  void validate() const {
    if (!(p1 > 0 && p2 > 0 && c1 > 0 && c2 > 0)) {
      throw InvalidParams("prices and costs must be positive");
    }
    if (!(delta >= 0)) throw InvalidParams("delta must be nonnegative");
  }
};

struct RevenueReport {
  double pi_x;  // (p1 q1 x - c1) E1
  double pi_y;  // (p2 q2 y - c2) E2
  double pi;    // total rent
};

inline RevenueReport revenue(const EconParams& E, const ModelParams& P, const State& s) {
  RevenueReport r{};
  r.pi_x = (E.p1 * P.q1 * s.x - E.c1) * P.E1;
  r.pi_y = (E.p2 * P.q2 * s.y - E.c2) * P.E2;
  r.pi = r.pi_x + r.pi_y;
  return r;
}

// Time-invariant factors e^{delta t} * lambda_i(t) of the adjoint variables.
struct ShadowPrices {
  double lambda1_scaled;  // p1 - c1/(q1 x)
  double lambda2_scaled;  // p2 - c2/(q2 y)
};

inline ShadowPrices shadow_prices(const EconParams& E, const ModelParams& P, const State& s) {
  if (!(s.x > 0.0) || !(s.y > 0.0)) {
    throw ZeroBiomass("shadow prices need positive biomass in both stocks");
  }
  return {E.p1 - E.c1 / (P.q1 * s.x), E.p2 - E.c2 / (P.q2 * s.y)};
}

enum class BionomicCase { I, II, III, IV };

inline const char* to_string(BionomicCase c) {
  switch (c) {
    case BionomicCase::I: return "I";
    case BionomicCase::II: return "II";
    case BionomicCase::III: return "III";
    case BionomicCase::IV: return "IV";
  }
  return "?";
}

// One row per case; non-existence is data. Components that a case does not
// determine stay empty, efforts of a closed fishery stay zero.
struct BionomicEquilibrium {
  BionomicCase case_id;
  std::optional<double> x_inf;
  std::optional<double> y_inf;
  double e1_inf = 0.0;
  double e2_inf = 0.0;
  bool exists = false;
  std::vector<std::pair<std::string, bool>> conditions;
};

namespace detail {

// Efforts that make (x, y) a steady state: the prey/predator nullclines
// solved for E1, E2.
inline double effort_prey(const ModelParams& P, double x, double y) {
  const double w = 1.0 - P.m * y;
  const double D = 1.0 + P.a * x * w;
  return (P.r * (1.0 - x / P.k) - P.p * w * y / D) / P.q1;
}

inline double effort_predator(const ModelParams& P, double x, double y) {
  const double w = 1.0 - P.m * y;
  const double D = 1.0 + P.a * x * w;
  return (-P.d + P.e * P.p * w * x / D) / P.q2;
}

// Smallest positive root of the unharvested prey nullcline in x for fixed y,
// located by sign scan plus bisection.
inline std::optional<double> prey_nullcline_root(const ModelParams& P, double y) {
  const double w = 1.0 - P.m * y;
  auto g = [&](double x) {
    const double D = 1.0 + P.a * x * w;
    return P.r * (1.0 - x / P.k) - P.p * w * y / D;
  };
  constexpr int n = 4000;
  double prev_x = P.k * 1e-9;
  double prev_g = g(prev_x);
  for (int i = 1; i <= n; ++i) {
    const double x = P.k * i / n;
    const double gx = g(x);
    if (std::isfinite(prev_g) && std::isfinite(gx) && prev_g * gx <= 0.0) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(lo) * g(mid) <= 0.0) hi = mid; else lo = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
    prev_g = gx;
  }
  return std::nullopt;
}

}  // namespace detail

/// All four bionomic cases. Efforts in `params` are ignored; they are the
/// unknowns here. In case I the prey zero-rent identity fixes the prey
/// biomass at c1/(p1*q1).
inline std::vector<BionomicEquilibrium> bionomic_equilibrium(const ModelParams& P,
                                                             const EconParams& E) {
  P.validate();
  E.validate();
  std::vector<BionomicEquilibrium> out;
  const double e1_bound = P.r / P.q1 * (1.0 - E.c1 / (E.p1 * P.q1 * P.k));

  // Case I: predator fishery closed (E2 = 0), prey rent zero.
  BionomicEquilibrium ci{};
  ci.case_id = BionomicCase::I;
  {
    const double x_inf = E.c1 / (E.p1 * P.q1);
    const double mu = P.e * P.p - P.a * P.d;  // slope of the predator nullcline at E2 = 0
    bool solvable = false;
    double y_inf = 0.0, e1 = 0.0;
    if (mu > 0.0 && P.m > 0.0) {
      const double w = P.d / (x_inf * mu);
      if (w > 0.0 && w < 1.0) {
        y_inf = (1.0 - w) / P.m;
        e1 = detail::effort_prey(P, x_inf, y_inf);
        solvable = e1 > 0.0;
      }
    }
    ci.conditions.emplace_back("solvable", solvable);
    if (solvable) {
      ci.x_inf = x_inf;
      ci.y_inf = y_inf;
      ci.e1_inf = e1;
      const bool premise = E.p2 * P.q2 * y_inf < E.c2;
      const bool bound = e1 < e1_bound;
      ci.conditions.emplace_back("predator_unprofitable", premise);
      ci.conditions.emplace_back("prey_effort_bound", bound);
      ci.exists = premise && bound;
    }
  }
  out.push_back(ci);

  // Case II: prey fishery closed (E1 = 0), predator rent zero.
  BionomicEquilibrium cii{};
  cii.case_id = BionomicCase::II;
  {
    const double y_inf = E.c2 / (E.p2 * P.q2);
    const auto x_root = detail::prey_nullcline_root(P, y_inf);
    bool solvable = false;
    double e2 = 0.0;
    if (x_root) {
      e2 = detail::effort_predator(P, *x_root, y_inf);
      solvable = e2 > 0.0;
    }
    cii.conditions.emplace_back("solvable", solvable);
    if (solvable) {
      cii.x_inf = *x_root;
      cii.y_inf = y_inf;
      cii.e2_inf = e2;
      const bool premise = E.p1 * P.q1 * *x_root < E.c1;
      const bool bound = e2 >= (P.d - E.p2 * P.q2 * P.e * P.r * P.k / (4.0 * E.c2)) / P.q2;
      cii.conditions.emplace_back("prey_unprofitable", premise);
      cii.conditions.emplace_back("predator_effort_bound", bound);
      cii.exists = premise && bound;
    }
  }
  out.push_back(cii);

  // Case III: costs exceed revenue for both species; the whole fishery
  // closes, so there is no bionomic point to report.
  BionomicEquilibrium ciii{};
  ciii.case_id = BionomicCase::III;
  {
    bool prey_closed = false, pred_closed = false;
    if (cii.x_inf) prey_closed = E.p1 * P.q1 * *cii.x_inf < E.c1;
    if (ci.y_inf) pred_closed = E.p2 * P.q2 * *ci.y_inf < E.c2;
    ciii.conditions.emplace_back("prey_unprofitable", prey_closed);
    ciii.conditions.emplace_back("predator_unprofitable", pred_closed);
    ciii.exists = false;
  }
  out.push_back(ciii);

  // Case IV: both fisheries operational; zero rent fixes both stocks.
  BionomicEquilibrium civ{};
  civ.case_id = BionomicCase::IV;
  {
    const double x_inf = E.c1 / (E.p1 * P.q1);
    const double y_inf = E.c2 / (E.p2 * P.q2);
    civ.x_inf = x_inf;
    civ.y_inf = y_inf;
    civ.e1_inf = detail::effort_prey(P, x_inf, y_inf);
    civ.e2_inf = detail::effort_predator(P, x_inf, y_inf);
    const double s = E.p2 * P.q2 - P.m * E.c2;
    const double denom = E.p1 * P.q1 * E.p2 * P.q2 + P.a * E.c1 * s;
    const bool cond_i = e1_bound > P.p * s * E.c2 / (E.p2 * P.q2 * denom);
    const bool cond_ii = P.d < P.e * P.p * s * E.c1 / denom;
    civ.conditions.emplace_back("prey_effort_condition", cond_i);
    civ.conditions.emplace_back("predator_effort_condition", cond_ii);
    civ.conditions.emplace_back("e1_positive", civ.e1_inf > 0.0);
    civ.conditions.emplace_back("e2_positive", civ.e2_inf > 0.0);
    civ.exists = cond_i && cond_ii;
  }
  out.push_back(civ);
  return out;
}

// Residuals (left minus right) of the two singular-path stationarity
// relations, one per stock, transcribed term for term with no algebraic
// simplification.
struct SingularResiduals {
  double r_x;
  double r_y;
};

namespace detail {

// Largest term magnitude per relation; convergence tests are relative to it.
struct SingularScales {
  double s_x;
  double s_y;
};

inline void singular_terms(const ModelParams& P, const EconParams& E, double x, double y,
                           SingularResiduals* res, SingularScales* sc) {
  const double w = 1.0 - P.m * y;
  const double D = 1.0 + P.a * x * w;
  const double D2 = D * D;
  const double lam1 = E.p1 - E.c1 / (P.q1 * x);
  const double lam2 = E.p2 - E.c2 / (P.q2 * y);

  const double lhs_x = E.delta * lam1;
  const double tx1 = E.p1 * (P.r * (1.0 - x / P.k) - P.p * y * w / D);
  const double tx2 = lam2 * P.e * P.p * y * w / D2;
  const double tx3 = lam1 * (-P.r * x / P.k + P.p * P.a * x * y * w * w / D2);

  const double N = P.a * x * w * w + 1.0 - 2.0 * P.m * y;
  const double lhs_y = E.delta * lam2;
  const double ty1 = E.p2 * (P.e * P.p * x * w / D - P.d);
  const double ty2 = P.p * x * lam1 * N / D2;
  const double ty3 = -lam2 * P.e * P.p * P.m * x * y / D2;

  if (res) {
    res->r_x = lhs_x - (tx1 + tx2 + tx3);
    res->r_y = lhs_y - (ty1 + ty2 + ty3);
  }
  if (sc) {
    sc->s_x = std::max({1e-12, std::abs(lhs_x), std::abs(tx1), std::abs(tx2), std::abs(tx3)});
    sc->s_y = std::max({1e-12, std::abs(lhs_y), std::abs(ty1), std::abs(ty2), std::abs(ty3)});
  }
}

}  // namespace detail

inline SingularResiduals optimal_singular_residuals(const ModelParams& P, const EconParams& E,
                                                    const State& s) {
  if (!(s.x > 0.0) || !(s.y > 0.0)) {
    throw ZeroBiomass("singular-path residuals need positive biomass");
  }
  detail::require_denominator(P, s);
  SingularResiduals r{};
  detail::singular_terms(P, E, s.x, s.y, &r, nullptr);
  return r;
}

struct OptimalPolicy {
  double x_opt = 0.0;
  double y_opt = 0.0;
  double e1_opt = 0.0;
  double e2_opt = 0.0;
  double residual_x = 0.0;
  double residual_y = 0.0;
};

/// Steady-state optimal policy: Newton on the two stationarity residuals
/// (finite-difference Jacobian, step halving), multistarted like the
/// interior-equilibrium solve, then efforts from the nullclines. Policies
/// with a negative effort are rejected.
inline OptimalPolicy solve_optimal(const ModelParams& P, const EconParams& E,
                                   std::optional<State> guess = std::nullopt) {
  P.validate();
  E.validate();

  auto eval = [&](double x, double y, SingularResiduals* r, detail::SingularScales* sc) {
    detail::singular_terms(P, E, x, y, r, sc);
  };
  auto admissible = [&](double x, double y) {
    return x > 0.0 && y > 0.0 && 1.0 + P.a * x * (1.0 - P.m * y) > 0.0;
  };

  auto newton = [&](double x, double y, State* root) {
    for (int it = 0; it < 100; ++it) {
      if (!admissible(x, y)) return false;
      SingularResiduals f{};
      detail::SingularScales sc{};
      eval(x, y, &f, &sc);
      const double res = std::max(std::abs(f.r_x) / sc.s_x, std::abs(f.r_y) / sc.s_y);
      if (res <= 1e-13) {
        *root = {x, y};
        return true;
      }
      const double hx = 1e-6 * std::max(1.0, std::abs(x));
      const double hy = 1e-6 * std::max(1.0, std::abs(y));
      if (!admissible(x - hx, y - hy) || !admissible(x + hx, y + hy)) return false;
      SingularResiduals fxp{}, fxm{}, fyp{}, fym{};
      eval(x + hx, y, &fxp, nullptr);
      eval(x - hx, y, &fxm, nullptr);
      eval(x, y + hy, &fyp, nullptr);
      eval(x, y - hy, &fym, nullptr);
      const double j11 = (fxp.r_x - fxm.r_x) / (2.0 * hx);
      const double j21 = (fxp.r_y - fxm.r_y) / (2.0 * hx);
      const double j12 = (fyp.r_x - fym.r_x) / (2.0 * hy);
      const double j22 = (fyp.r_y - fym.r_y) / (2.0 * hy);
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0 || !std::isfinite(det)) return false;
      const double dx = -(f.r_x * j22 - f.r_y * j12) / det;
      const double dy = -(j11 * f.r_y - j21 * f.r_x) / det;
      double lam = 1.0;
      bool accepted = false;
      double xn = x, yn = y;
      for (int h = 0; h <= 30; ++h) {
        xn = x + lam * dx;
        yn = y + lam * dy;
        if (admissible(xn, yn)) {
          SingularResiduals g{};
          detail::SingularScales gs{};
          eval(xn, yn, &g, &gs);
          if (std::isfinite(g.r_x) && std::isfinite(g.r_y) &&
              std::max(std::abs(g.r_x) / gs.s_x, std::abs(g.r_y) / gs.s_y) < res) {
            accepted = true;
            break;
          }
        }
        lam *= 0.5;
      }
      if (!accepted) return false;
      const double step = std::max(std::abs(xn - x), std::abs(yn - y));
      x = xn;
      y = yn;
      if (step <= 1e-13 * (1.0 + std::max(std::abs(x), std::abs(y)))) {
        eval(x, y, &f, &sc);
        if (std::max(std::abs(f.r_x) / sc.s_x, std::abs(f.r_y) / sc.s_y) <= 1e-12) {
          *root = {x, y};
          return true;
        }
        return false;
      }
    }
    return false;
  };

  std::vector<State> roots;
  auto attempt = [&](double x0, double y0) {
    State root{};
    if (!newton(x0, y0, &root)) return;
    auto near = [&](const State& s) {
      return std::abs(s.x - root.x) <= 1e-7 * (1.0 + std::abs(root.x)) &&
             std::abs(s.y - root.y) <= 1e-7 * (1.0 + std::abs(root.y));
    };
    if (std::none_of(roots.begin(), roots.end(), near)) roots.push_back(root);
  };

  if (guess) attempt(guess->x, guess->y);
  if (roots.empty()) {
    const double ymax = P.m > 0.0 ? 1.0 / P.m : P.k;
    for (int i = 0; i < 8; ++i) {
      const double x0 = P.k * std::pow(10.0, -3.0 + 3.0 * i / 7.0);
      for (int j = 0; j < 8; ++j) {
        const double y0 = 0.999 * ymax * std::pow(10.0, -3.0 + 3.0 * j / 7.0);
        attempt(x0, y0);
      }
    }
  }
  if (roots.empty()) throw NoConvergence("no optimal steady state found from any start");
  std::sort(roots.begin(), roots.end(), [](const State& a, const State& b) { return a.x < b.x; });

  const State z = roots.front();
  OptimalPolicy pol{};
  pol.x_opt = z.x;
  pol.y_opt = z.y;
  pol.e1_opt = detail::effort_prey(P, z.x, z.y);
  pol.e2_opt = detail::effort_predator(P, z.x, z.y);
  SingularResiduals r{};
  detail::singular_terms(P, E, z.x, z.y, &r, nullptr);
  pol.residual_x = r.r_x;
  pol.residual_y = r.r_y;
  if (pol.e1_opt < 0.0 || pol.e2_opt < 0.0) {
    throw NegativeEffort("optimal steady state (" + std::to_string(z.x) + ", " +
                         std::to_string(z.y) + ") needs efforts (" + std::to_string(pol.e1_opt) +
                         ", " + std::to_string(pol.e2_opt) + "); negative effort rejected");
  }
  return pol;
}

}  // namespace bioeco
