#pragma once

// Finite-difference derivatives of the vector field, built only on rhs
// evaluations. These back the property suites that cross-check the analytic
// Jacobian and Taylor jet, so they must stay independent of those code paths.
//
// First derivatives use plain central differences with h = 1e-6*max(1,|c|).
// Higher orders use 5-point stencils; third derivatives add one Richardson
// extrapolation step.

#include <cmath>
#include <functional>

#include "bioeco/model.hpp"

namespace bioeco::fd {

namespace detail {

using Fn = std::function<double(double)>;

inline double d1_5pt(const Fn& g, double h) {
  return (g(-2 * h) - 8 * g(-h) + 8 * g(h) - g(2 * h)) / (12 * h);
}

inline double d2_5pt(const Fn& g, double h) {
  return (-g(-2 * h) + 16 * g(-h) - 30 * g(0.0) + 16 * g(h) - g(2 * h)) / (12 * h * h);
}

inline double d3_richardson(const Fn& g, double h) {
  auto base = [&](double hh) {
    return (g(2 * hh) - 2 * g(hh) + 2 * g(-hh) - g(-2 * hh)) / (2 * hh * hh * hh);
  };
  return (4.0 * base(h / 2) - base(h)) / 3.0;
}

}  // namespace detail

/// Central-difference Jacobian of rhs, step 1e-6 relative per coordinate.
inline Mat2 jacobian(const ModelParams& P, const State& s) {
  const double hx = 1e-6 * std::max(1.0, std::abs(s.x));
  const double hy = 1e-6 * std::max(1.0, std::abs(s.y));
  const Deriv fxp = rhs(P, {s.x + hx, s.y});
  const Deriv fxm = rhs(P, {s.x - hx, s.y});
  const Deriv fyp = rhs(P, {s.x, s.y + hy});
  const Deriv fym = rhs(P, {s.x, s.y - hy});
  return {(fxp.dx_dt - fxm.dx_dt) / (2 * hx), (fyp.dx_dt - fym.dx_dt) / (2 * hy),
          (fxp.dy_dt - fxm.dy_dt) / (2 * hx), (fyp.dy_dt - fym.dy_dt) / (2 * hy)};
}

/// Full Taylor jet through third order by stencils on rhs. hscale balances
/// truncation against roundoff for the mixed third derivatives.
inline TaylorCoefficients taylor(const ModelParams& P, const State& s, double hscale = 5e-3) {
  const double hx = hscale * std::max(1.0, std::abs(s.x));
  const double hy = hscale * std::max(1.0, std::abs(s.y));
  TaylorCoefficients c{};

  auto fill = [&](int comp, double* c10, double* c01, double* c20, double* c11, double* c02,
                  double* c30, double* c21, double* c12, double* c03) {
    auto f = [&](double dx, double dy) {
      const Deriv d = rhs(P, {s.x + dx, s.y + dy});
      return comp == 0 ? d.dx_dt : d.dy_dt;
    };
    *c10 = detail::d1_5pt([&](double t) { return f(t, 0.0); }, hx);
    *c01 = detail::d1_5pt([&](double t) { return f(0.0, t); }, hy);
    *c20 = detail::d2_5pt([&](double t) { return f(t, 0.0); }, hx) / 2.0;
    *c02 = detail::d2_5pt([&](double t) { return f(0.0, t); }, hy) / 2.0;
    *c11 = detail::d1_5pt(
        [&](double u) {
          return detail::d1_5pt([&](double t) { return f(t, u); }, hx);
        },
        hy);
    *c30 = detail::d3_richardson([&](double t) { return f(t, 0.0); }, hx) / 6.0;
    *c03 = detail::d3_richardson([&](double t) { return f(0.0, t); }, hy) / 6.0;
    *c21 = detail::d1_5pt(
               [&](double u) {
                 return detail::d2_5pt([&](double t) { return f(t, u); }, hx);
               },
               hy) /
           2.0;
    *c12 = detail::d2_5pt(
               [&](double u) {
                 return detail::d1_5pt([&](double t) { return f(t, u); }, hx);
               },
               hy) /
           2.0;
  };

  double a03 = 0.0, b03 = 0.0, b02 = 0.0;
  fill(0, &c.a10, &c.a01, &c.a20, &c.a11, &c.a02, &c.a30, &c.a21, &c.a12, &a03);
  fill(1, &c.b10, &c.b01, &c.b20, &c.b11, &b02, &c.b30, &c.b21, &c.b12, &b03);
  c.a03 = a03;
  c.b02 = b02;
  c.b03 = b03;
  c.delta = c.a10 * c.b01 - c.a01 * c.b10;
  return c;
}

}  // namespace bioeco::fd
