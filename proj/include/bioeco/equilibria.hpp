#pragma once

// Equilibria of the model and their stability: the trivial steady state, the
// predator-free axial state, and the interior state from a damped-Newton
// multistart on the two nullclines. Classification follows the standard
// trace-determinant chart; the printed sufficient conditions and the
// global-stability inequality are reported as data alongside the eigenvalue
// truth.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bioeco/errors.hpp"
#include "bioeco/model.hpp"

namespace bioeco {

enum class EquilibriumKind { Trivial, Axial, Interior };

inline const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::Trivial: return "Trivial";
    case EquilibriumKind::Axial: return "Axial";
    case EquilibriumKind::Interior: return "Interior";
  }
  return "?";
}

struct Equilibrium {
  EquilibriumKind kind;
  State point;
  bool feasible = true;
  std::vector<std::pair<std::string, bool>> feasibility_notes;
  // Interior solves report every distinct positive root found; point is the
  // smallest-x one.
  std::vector<State> root_candidates;
};

enum class Classification {
  StableNode,
  StableFocus,
  UnstableNode,
  UnstableFocus,
  Saddle,
  CenterCandidate,
};

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::StableNode: return "StableNode";
    case Classification::StableFocus: return "StableFocus";
    case Classification::UnstableNode: return "UnstableNode";
    case Classification::UnstableFocus: return "UnstableFocus";
    case Classification::Saddle: return "Saddle";
    case Classification::CenterCandidate: return "CenterCandidate";
  }
  return "?";
}

// The two printed sufficient conditions for interior local stability,
// evaluated verbatim. Eigenvalues remain the ground truth; these flags are
// informational and a disagreement is data, not an error.
struct LasSufficiency {
  bool trace_condition;
  bool determinant_condition;
};

struct StabilityReport {
  double trace = 0.0;
  double determinant = 0.0;
  std::complex<double> eig1, eig2;
  Classification classification = Classification::CenterCandidate;
  bool degenerate = false;  // a numerically zero eigenvalue
  std::optional<LasSufficiency> las_sufficient;  // interior only
  std::optional<bool> las_window;                // axial sufficient-stability window
};

// Global-stability check: the inequality 4rme(1+ak)(1+ax*) > p m^2 y*^2 and,
// when a probe state is supplied, the quadratic-form coefficients evaluated
// verbatim from their printed expressions.
struct QuadraticForm {
  double alpha, beta, gamma, A;
};

struct GasCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::optional<QuadraticForm> form;
};

namespace detail {

inline std::pair<std::complex<double>, std::complex<double>> eigenvalues_from(double trace,
                                                                              double det) {
  const double disc = trace * trace - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return {std::complex<double>((trace + s) / 2.0, 0.0),
            std::complex<double>((trace - s) / 2.0, 0.0)};
  }
  const double im = std::sqrt(-disc) / 2.0;
  return {std::complex<double>(trace / 2.0, im), std::complex<double>(trace / 2.0, -im)};
}

inline Classification classify_chart(double trace, double det, bool* degenerate) {
  const double scale = std::max(1.0, std::abs(trace));
  if (degenerate) *degenerate = false;
  if (std::abs(det) <= 1e-12 * scale * scale) {
    if (degenerate) *degenerate = true;  // zero eigenvalue, borderline case
    return Classification::CenterCandidate;
  }
  if (det < 0.0) return Classification::Saddle;
  if (std::abs(trace) < 1e-10) return Classification::CenterCandidate;
  const bool node = trace * trace - 4.0 * det >= 0.0;
  if (trace < 0.0) return node ? Classification::StableNode : Classification::StableFocus;
  return node ? Classification::UnstableNode : Classification::UnstableFocus;
}

// Nullcline system solved by the interior Newton iteration. The prey
// equation is F1/x; the predator equation is taken directly from the
// governing equations, e*p*(1-my)*x/(1+a*x*(1-my)) = d + q2*E2.
struct Nullclines {
  const ModelParams& P;

  void eval(double x, double y, double* f1, double* f2) const {
    const double w = 1.0 - P.m * y;
    const double D = 1.0 + P.a * x * w;
    *f1 = P.r * (1.0 - x / P.k) - P.p * w * y / D - P.q1 * P.E1;
    *f2 = P.e * P.p * w * x / D - P.d - P.q2 * P.E2;
  }
  void jac(double x, double y, double* j11, double* j12, double* j21, double* j22) const {
    const double w = 1.0 - P.m * y;
    const double D = 1.0 + P.a * x * w;
    const double D2 = D * D;
    *j11 = -P.r / P.k + P.p * P.a * w * w * y / D2;
    *j12 = -P.p * (P.a * x * w * w + 1.0 - 2.0 * P.m * y) / D2;
    *j21 = P.e * P.p * w / D2;
    *j22 = -P.e * P.p * P.m * x / D2;
  }
  double scale() const { return std::max({1.0, P.r, P.d + P.q2 * P.E2}); }
};

// Damped Newton with step halving. Returns true on convergence to a root
// with a positive response denominator (the iterate may leave the positive
// quadrant; callers filter).
inline bool newton2(const Nullclines& sys, double* x, double* y) {
  constexpr int kMaxIter = 100;
  constexpr int kMaxHalvings = 30;
  const double res_tol = 1e-13 * sys.scale();
  for (int it = 0; it < kMaxIter; ++it) {
    if (!(1.0 + sys.P.a * *x * (1.0 - sys.P.m * *y) > 0.0)) return false;
    double f1, f2;
    sys.eval(*x, *y, &f1, &f2);
    const double res = std::max(std::abs(f1), std::abs(f2));
    if (res <= res_tol) return true;
    double j11, j12, j21, j22;
    sys.jac(*x, *y, &j11, &j12, &j21, &j22);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return false;
    const double dx = -(f1 * j22 - f2 * j12) / det;
    const double dy = -(j11 * f2 - j21 * f1) / det;
    double lam = 1.0;
    double xn = *x, yn = *y;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      xn = *x + lam * dx;
      yn = *y + lam * dy;
      if (1.0 + sys.P.a * xn * (1.0 - sys.P.m * yn) > 0.0) {
        double g1, g2;
        sys.eval(xn, yn, &g1, &g2);
        if (std::isfinite(g1) && std::isfinite(g2) &&
            std::max(std::abs(g1), std::abs(g2)) < res) {
          accepted = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!accepted) return false;
    const double step = std::max(std::abs(xn - *x), std::abs(yn - *y));
    *x = xn;
    *y = yn;
    if (step <= 1e-13 * (1.0 + std::max(std::abs(*x), std::abs(*y)))) {
      sys.eval(*x, *y, &f1, &f2);
      return std::max(std::abs(f1), std::abs(f2)) <= 1e-10 * sys.scale();
    }
  }
  return false;
}

}  // namespace detail

/// Trivial steady state (0,0). Eigenvalues are the closed forms r - q1*E1
/// and -(d + q2*E2); the first changes sign at the biotechnical productivity
/// threshold E1 = r/q1.
inline std::pair<Equilibrium, StabilityReport> trivial_equilibrium(const ModelParams& P) {
  Equilibrium eq{EquilibriumKind::Trivial, {0.0, 0.0}, true, {}, {}};
  StabilityReport rep{};
  const double l1 = P.r - P.q1 * P.E1;
  const double l2 = -(P.d + P.q2 * P.E2);
  rep.eig1 = l1;
  rep.eig2 = l2;
  rep.trace = l1 + l2;
  rep.determinant = l1 * l2;
  rep.classification = detail::classify_chart(rep.trace, rep.determinant, &rep.degenerate);
  return {eq, rep};
}

/// Predator-free state (x1, 0) with x1 = k(1 - q1*E1/r). Throws Infeasible
/// when harvesting meets or exceeds the prey growth rate.
inline std::pair<Equilibrium, StabilityReport> axial_equilibrium(const ModelParams& P) {
  if (!(P.r > P.q1 * P.E1)) {
    throw Infeasible("axial equilibrium infeasible: r <= q1*E1 gives x1 <= 0");
  }
  const double x1 = P.k * (1.0 - P.q1 * P.E1 / P.r);
  Equilibrium eq{EquilibriumKind::Axial, {x1, 0.0}, true, {}, {}};
  eq.feasibility_notes.emplace_back("prey_growth_exceeds_harvest", true);

  StabilityReport rep{};
  const double l1 = P.r - 2.0 * P.r * x1 / P.k - P.q1 * P.E1;
  const double l2 = -P.d - P.q2 * P.E2 + P.e * P.p * x1 / (1.0 + P.a * x1);
  rep.eig1 = l1;
  rep.eig2 = l2;
  rep.trace = l1 + l2;
  rep.determinant = l1 * l2;
  rep.classification = detail::classify_chart(rep.trace, rep.determinant, &rep.degenerate);
  // Printed window: 1 - (d+q2E2)/(epk - ak(d+q2E2)) < q1E1/r < 1.
  const double zeta = P.d + P.q2 * P.E2;
  const double denom = P.e * P.p * P.k - P.a * P.k * zeta;
  const double lower = 1.0 - zeta / denom;
  const double ratio = P.q1 * P.E1 / P.r;
  rep.las_window = std::isfinite(lower) && lower < ratio && ratio < 1.0;
  return {eq, rep};
}

/// Interior steady state. With no guess, an 8x8 log-spaced multistart over
/// (0,k] x (0, 1/m or k] feeds the damped Newton iteration; every distinct
/// positive root is collected and the smallest-x one returned.
inline Equilibrium interior_equilibrium(const ModelParams& P,
                                        std::optional<State> guess = std::nullopt) {
  P.validate();
  const detail::Nullclines sys{P};
  std::vector<State> positive, nonpositive;
  auto try_start = [&](double x0, double y0) {
    double x = x0, y = y0;
    if (!detail::newton2(sys, &x, &y)) return;
    auto near = [&](const State& s) {
      return std::abs(s.x - x) <= 1e-7 * (1.0 + std::abs(x)) &&
             std::abs(s.y - y) <= 1e-7 * (1.0 + std::abs(y));
    };
    auto& bucket = (x > 0.0 && y > 0.0) ? positive : nonpositive;
    if (std::none_of(bucket.begin(), bucket.end(), near)) bucket.push_back({x, y});
  };

  if (guess) {
    try_start(guess->x, guess->y);
  }
  if (positive.empty()) {
    const double ymax = P.m > 0.0 ? 1.0 / P.m : P.k;
    for (int i = 0; i < 8; ++i) {
      const double x0 = P.k * std::pow(10.0, -3.0 + 3.0 * i / 7.0);
      for (int j = 0; j < 8; ++j) {
        const double y0 = 0.999 * ymax * std::pow(10.0, -3.0 + 3.0 * j / 7.0);
        try_start(x0, y0);
      }
    }
  }
  if (positive.empty()) {
    if (!nonpositive.empty()) {
      throw NoPositiveRoot("nullcline roots exist only outside the positive quadrant");
    }
    throw NoConvergence("no interior equilibrium found from any start");
  }
  std::sort(positive.begin(), positive.end(),
            [](const State& a, const State& b) { return a.x < b.x; });

  Equilibrium eq{EquilibriumKind::Interior, positive.front(), true, {}, positive};
  const double e1_bound = P.r / P.q1 * (1.0 - eq.point.x / P.k);
  const double e2_bound = 1.0 / (P.a * P.q2) * (P.e * P.p - P.a * P.d);
  eq.feasibility_notes.emplace_back("prey_effort_bound", P.E1 < e1_bound);
  eq.feasibility_notes.emplace_back("predator_effort_bound", P.E2 < e2_bound);
  eq.feasible = P.E1 < e1_bound && P.E2 < e2_bound;
  return eq;
}

/// The two printed feasibility conditions for an interior equilibrium,
/// by name. Throws WrongKind for boundary equilibria.
inline std::vector<std::pair<std::string, bool>> feasibility_interior(const ModelParams& P,
                                                                      const Equilibrium& eq) {
  if (eq.kind != EquilibriumKind::Interior) {
    throw WrongKind("feasibility_interior requires an interior equilibrium");
  }
  const double e1_bound = P.r / P.q1 * (1.0 - eq.point.x / P.k);
  const double e2_bound = 1.0 / (P.a * P.q2) * (P.e * P.p - P.a * P.d);
  return {{"prey_effort_bound", P.E1 < e1_bound},
          {"predator_effort_bound", P.E2 < e2_bound}};
}

/// Eigenvalue classification of any equilibrium; interior points also carry
/// the printed sufficient-condition flags.
inline StabilityReport classify(const ModelParams& P, const Equilibrium& eq) {
  const Mat2 J = jacobian(P, eq.point);
  StabilityReport rep{};
  rep.trace = J.trace();
  rep.determinant = J.det();
  std::tie(rep.eig1, rep.eig2) = detail::eigenvalues_from(rep.trace, rep.determinant);
  rep.classification = detail::classify_chart(rep.trace, rep.determinant, &rep.degenerate);
  if (eq.kind == EquilibriumKind::Interior) {
    const double x = eq.point.x, y = eq.point.y;
    const double w = 1.0 - P.m * y;
    const double D = 1.0 + P.a * x * w;
    LasSufficiency las{};
    las.trace_condition =
        P.e * P.a * x * w * w * (P.p + y - P.p * x) + P.e * y >
        P.p * y * (P.m * y - P.p - P.m * P.e * x) + P.r * x * D * D;
    las.determinant_condition = P.p * y * w > D * D;
    rep.las_sufficient = las;
  }
  return rep;
}

/// Global-stability inequality at an interior equilibrium, with the
/// quadratic-form coefficients evaluated at an optional probe state.
inline GasCheck gas_condition(const ModelParams& P, const Equilibrium& eq,
                              std::optional<State> probe = std::nullopt) {
  if (eq.kind != EquilibriumKind::Interior) {
    throw WrongKind("gas_condition requires an interior equilibrium");
  }
  const double xs = eq.point.x, ys = eq.point.y;
  GasCheck g{};
  g.lhs = 4.0 * P.r * P.m * P.e * (1.0 + P.a * P.k) * (1.0 + P.a * xs);
  g.rhs = P.p * P.m * P.m * ys * ys;
  g.holds = g.lhs > g.rhs;
  if (probe) {
    const double x = probe->x, y = probe->y;
    QuadraticForm f{};
    f.A = (1.0 + P.a * x * (1.0 - P.m * y)) * (1.0 + P.a * xs * (1.0 - P.m * ys));
    f.alpha = P.r / P.k + P.p * P.m * (y + ys) / f.A - P.p * y * (1.0 + P.m * y * ys) / f.A;
    f.beta = P.m * x * P.e * P.p / f.A;
    f.gamma = (P.p * x * (1.0 + P.m * y * ys) + P.p * (1.0 - P.m * (y + ys)) - P.e * P.p -
               P.e * P.p * ys - P.p * (y + ys)) /
              f.A;
    g.form = f;
  }
  return g;
}

}  // namespace bioeco
