#pragma once

// Harvested prey-predator model with a Holling type-II response and a prey
// refuge proportional to both species:
//
//   dx/dt = r x (1 - x/k) - p (1-my) x y / (1 + a x (1-my)) - q1 E1 x
//   dy/dt = e p (1-my) x y / (1 + a x (1-my)) - d y - q2 E2 y
//
// This header holds the parameter/state types, the vector field, its exact
// Jacobian, the Taylor jet through third order, and the boundedness and
// persistence diagnostics built from closed forms.

#include <cmath>
#include <string>

#include "bioeco/errors.hpp"

namespace bioeco {

struct ModelParams {
  double r;   // intrinsic prey growth rate (1/time)
  double k;   // prey carrying capacity (biomass)
  double p;   // maximum per-capita consumption rate
  double a;   // handling-time coefficient in the response denominator
  double m;   // refuge coefficient, in [0, 1]
  double d;   // predator death rate (1/time)
  double e;   // conversion efficiency, in (0, 1)
  double q1;  // prey catchability
  double q2;  // predator catchability
  double E1;  // prey harvesting effort (>= 0)
  double E2;  // predator harvesting effort (>= 0)

  void validate() const {
    auto fail = [](const std::string& msg) { throw InvalidParams(msg); };
    if (!(r > 0)) fail("r must be positive");
    if (!(k > 0)) fail("k must be positive");
    if (!(p > 0)) fail("p must be positive");
    if (!(a > 0)) fail("a must be positive");
    if (!(d > 0)) fail("d must be positive");
    if (!(q1 > 0)) fail("q1 must be positive");
    if (!(q2 > 0)) fail("q2 must be positive");
    if (!(e > 0 && e < 1)) fail("e must lie in (0, 1)");
    if (!(m >= 0 && m <= 1)) fail("m must lie in [0, 1]");
    if (!(E1 >= 0)) fail("E1 must be nonnegative");
    if (!(E2 >= 0)) fail("E2 must be nonnegative");
  }
};

struct State {
  double x;  // prey biomass
  double y;  // predator biomass
};

struct Deriv {
  double dx_dt;
  double dy_dt;
};

// 2x2 real matrix in row-major naming.
struct Mat2 {
  double j11, j12, j21, j22;
  double trace() const { return j11 + j22; }
  double det() const { return j11 * j22 - j12 * j21; }
};

// (1 - m*y): fraction of the prey exposed to predation. Negative values are
// admissible for evaluation but leave the refuge interpretation.
inline double refuge_factor(const ModelParams& P, const State& s) {
  return 1.0 - P.m * s.y;
}

// 1 + a*x*(1 - m*y): must stay positive for the model to make sense.
inline double response_denominator(const ModelParams& P, const State& s) {
  return 1.0 + P.a * s.x * refuge_factor(P, s);
}

namespace detail {
inline void require_denominator(const ModelParams& P, const State& s) {
  if (!(response_denominator(P, s) > 0.0)) {
    throw InvalidDenominator("response denominator 1 + a*x*(1-m*y) is not positive at (" +
                             std::to_string(s.x) + ", " + std::to_string(s.y) + ")");
  }
}

// Unchecked evaluation for integrator internals; may return inf/nan when the
// denominator crosses zero, which the step control rejects.
inline Deriv rhs_unchecked(const ModelParams& P, double x, double y) {
  const double w = 1.0 - P.m * y;
  const double D = 1.0 + P.a * x * w;
  const double interaction = P.p * w * x * y / D;
  return {P.r * x * (1.0 - x / P.k) - interaction - P.q1 * P.E1 * x,
          P.e * interaction - (P.d + P.q2 * P.E2) * y};
}
}  // namespace detail

/// Vector field of the model. Throws InvalidDenominator outside the validity
/// region.
inline Deriv rhs(const ModelParams& P, const State& s) {
  detail::require_denominator(P, s);
  return detail::rhs_unchecked(P, s.x, s.y);
}

/// Exact Jacobian of the vector field at an arbitrary admissible point.
inline Mat2 jacobian(const ModelParams& P, const State& s) {
  detail::require_denominator(P, s);
  const double x = s.x, y = s.y;
  const double w = 1.0 - P.m * y;
  const double D = 1.0 + P.a * x * w;
  const double D2 = D * D;
  // N collects d/dy of the exposed-prey product: a*x*w^2 + 1 - 2*m*y.
  const double N = P.a * x * w * w + 1.0 - 2.0 * P.m * y;
  return {P.r - 2.0 * P.r * x / P.k - P.q1 * P.E1 - P.p * y * w / D2,
          -P.p * x * N / D2,
          P.e * P.p * y * w / D2,
          -P.d - P.q2 * P.E2 + P.e * P.p * x * N / D2};
}

// Taylor-monomial coefficients of the vector field about an expansion point:
// coefficient of x1^i y1^j equals (1/(i! j!)) d^{i+j}F / dx^i dy^j there.
// b02, a03, b03 complete the quadratic/cubic jets needed by the Hopf normal
// form; delta = a10*b01 - a01*b10.
struct TaylorCoefficients {
  double a10, a01, a20, a11, a02, a30, a21, a12;
  double b10, b01, b20, b11, b30, b21, b12;
  double b02, a03, b03;
  double delta;
};

/// Full jet of the vector field through third order at an admissible point.
/// The linear part reuses the jacobian entries verbatim.
inline TaylorCoefficients taylor_coefficients(const ModelParams& P, const State& s) {
  const Mat2 J = jacobian(P, s);  // also enforces the denominator condition
  const double x = s.x, y = s.y, a = P.a, m = P.m, p = P.p, e = P.e;
  const double w = 1.0 - m * y;
  const double D = 1.0 + a * x * w;
  const double D3 = D * D * D;
  const double D4 = D3 * D;

  // Only the interaction term T = p*w*x*y/D contributes beyond the linear
  // order (logistic growth adds -r/k to the x^2 coefficient); the predator
  // equation carries the same jet scaled by -e.
  const double t20 = -p * a * w * w * y / D3;
  const double t11 = p * (a * x * w + 1.0 - 2.0 * m * y) / D3;
  const double t02 = -p * m * x * (1.0 + a * x) / D3;
  const double t30 = p * a * a * w * w * w * y / D4;
  const double t21 = -p * a * w * (a * x * w + 1.0 - 3.0 * m * y) / D4;
  const double t12 = -p * m * (1.0 + 2.0 * a * m * x * y - a * a * x * x * w) / D4;
  const double t03 = -p * a * m * m * x * x * (1.0 + a * x) / D4;

  TaylorCoefficients c{};
  c.a10 = J.j11;
  c.a01 = J.j12;
  c.b10 = J.j21;
  c.b01 = J.j22;
  c.a20 = -P.r / P.k - t20;
  c.b20 = e * t20;
  c.a11 = -t11;
  c.b11 = e * t11;
  c.a02 = -t02;
  c.b02 = e * t02;
  c.a30 = -t30;
  c.b30 = e * t30;
  c.a21 = -t21;
  c.b21 = e * t21;
  c.a12 = -t12;
  c.b12 = e * t12;
  c.a03 = -t03;
  c.b03 = e * t03;
  c.delta = c.a10 * c.b01 - c.a01 * c.b10;
  return c;
}

// Uniform bound on xi = x + y/e derived from the differential inequality
// d(xi)/dt + zeta*xi <= kappa.
struct Bound {
  double zeta;      // d + q2*E2
  double kappa;     // (k/(4r)) (r + zeta - q1*E1)^2
  double ultimate;  // kappa / zeta, the asymptotic bound on xi
};

inline Bound ultimate_bound(const ModelParams& P) {
  Bound b{};
  b.zeta = P.d + P.q2 * P.E2;
  const double s = P.r + b.zeta - P.q1 * P.E1;
  b.kappa = P.k / (4.0 * P.r) * s * s;
  b.ultimate = b.kappa / b.zeta;
  return b;
}

struct PersistenceReport {
  bool growth_condition;       // r > q1*E1
  bool consumption_condition;  // p exceeds the predator break-even threshold
  bool permanent;              // conjunction of the two
};

/// Permanence test. Degenerate inputs (r <= q1*E1) map to non-permanence
/// rather than an error.
inline PersistenceReport persistence_check(const ModelParams& P) {
  PersistenceReport rep{};
  rep.growth_condition = P.r > P.q1 * P.E1;
  if (rep.growth_condition) {
    const double x1 = P.k * (1.0 - P.q1 * P.E1 / P.r);
    rep.consumption_condition = P.p > (P.d + P.q2 * P.E2) / P.e * (P.a + 1.0 / x1);
  } else {
    rep.consumption_condition = false;
  }
  rep.permanent = rep.growth_condition && rep.consumption_condition;
  return rep;
}

}  // namespace bioeco
