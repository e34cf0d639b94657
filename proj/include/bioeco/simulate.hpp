#pragma once

// Time integration (Dormand-Prince 5(4) embedded pair with PI step control),
// limit-cycle detection on the post-transient window, the refuge sweep, and
// trajectory-level diagnostics.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bioeco/equilibria.hpp"
#include "bioeco/errors.hpp"
#include "bioeco/harvest.hpp"
#include "bioeco/model.hpp"

namespace bioeco {

struct SimConfig {
  double t_end = 100.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  std::optional<double> max_step;     // default t_end/8000 keeps cycles well sampled
  double transient_fraction = 0.5;    // discarded before cycle analysis

  void validate() const {
    if (!(t_end > 0)) throw InvalidParams("t_end must be positive");
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw InvalidParams("tolerances must be positive");
    if (!(transient_fraction >= 0 && transient_fraction < 1)) {
      throw InvalidParams("transient_fraction must lie in [0, 1)");
    }
    if (max_step && !(*max_step > 0)) throw InvalidParams("max_step must be positive");
  }
};

struct StepFlags {
  bool denominator_ok;  // 1 + a*x*(1-m*y) > 0
  bool refuge_ok;       // 1 - m*y >= 0; violation leaves the refuge regime
};

struct Trajectory {
  std::vector<double> times;   // strictly increasing
  std::vector<State> states;
  std::vector<StepFlags> validity;
  ModelParams params_used{};
};

// Integration aborted on step-size underflow, typically near the denominator
// singularity; the samples accepted so far ride along.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

namespace detail {

inline StepFlags flags_at(const ModelParams& P, const State& s) {
  return {response_denominator(P, s) > 0.0, refuge_factor(P, s) >= 0.0};
}

}  // namespace detail

/// Adaptive integration from a nonnegative admissible state. Every accepted
/// step is recorded.
inline Trajectory integrate(const ModelParams& P, const State& initial, const SimConfig& cfg) {
  P.validate();
  cfg.validate();
  if (!(initial.x >= 0.0) || !(initial.y >= 0.0)) {
    throw InvalidState("initial state must be nonnegative");
  }
  detail::require_denominator(P, initial);

  // Dormand-Prince 5(4) tableau; the vector field is autonomous, so the
  // stage abscissae never enter. The last stage is FSAL.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory traj;
  traj.params_used = P;
  double t = 0.0;
  double x = initial.x, y = initial.y;
  traj.times.push_back(t);
  traj.states.push_back({x, y});
  traj.validity.push_back(detail::flags_at(P, {x, y}));

  const double hmax = cfg.max_step ? *cfg.max_step : cfg.t_end / 8000.0;
  const double hmin = 1e-14 * cfg.t_end;

  Deriv f1 = detail::rhs_unchecked(P, x, y);
  // Initial step from the horizon scaled by the relative rate of change.
  const double rate = std::max(std::abs(f1.dx_dt), std::abs(f1.dy_dt)) /
                      std::max(1.0, std::max(std::abs(x), std::abs(y)));
  double h = std::min({1e-3 * cfg.t_end / std::max(1.0, rate), hmax, cfg.t_end});
  double err_prev = 1e-4;

  while (t < cfg.t_end) {
    // The last accepted step can land one rounding unit short of the
    // horizon; that sliver is not an underflow.
    if (cfg.t_end - t <= hmin) break;
    if (!(h >= hmin)) {
      throw StepFailure("step size underflow at t = " + std::to_string(t), std::move(traj));
    }
    h = std::min(h, cfg.t_end - t);
    const Deriv k1 = f1;
    const Deriv k2 = detail::rhs_unchecked(P, x + h * a21 * k1.dx_dt, y + h * a21 * k1.dy_dt);
    const Deriv k3 = detail::rhs_unchecked(P, x + h * (a31 * k1.dx_dt + a32 * k2.dx_dt),
                                           y + h * (a31 * k1.dy_dt + a32 * k2.dy_dt));
    const Deriv k4 =
        detail::rhs_unchecked(P, x + h * (a41 * k1.dx_dt + a42 * k2.dx_dt + a43 * k3.dx_dt),
                              y + h * (a41 * k1.dy_dt + a42 * k2.dy_dt + a43 * k3.dy_dt));
    const Deriv k5 = detail::rhs_unchecked(
        P, x + h * (a51 * k1.dx_dt + a52 * k2.dx_dt + a53 * k3.dx_dt + a54 * k4.dx_dt),
        y + h * (a51 * k1.dy_dt + a52 * k2.dy_dt + a53 * k3.dy_dt + a54 * k4.dy_dt));
    const Deriv k6 = detail::rhs_unchecked(
        P,
        x + h * (a61 * k1.dx_dt + a62 * k2.dx_dt + a63 * k3.dx_dt + a64 * k4.dx_dt +
                 a65 * k5.dx_dt),
        y + h * (a61 * k1.dy_dt + a62 * k2.dy_dt + a63 * k3.dy_dt + a64 * k4.dy_dt +
                 a65 * k5.dy_dt));
    double xn = x + h * (b1 * k1.dx_dt + b3 * k3.dx_dt + b4 * k4.dx_dt + b5 * k5.dx_dt +
                         b6 * k6.dx_dt);
    double yn = y + h * (b1 * k1.dy_dt + b3 * k3.dy_dt + b4 * k4.dy_dt + b5 * k5.dy_dt +
                         b6 * k6.dy_dt);
    const Deriv k7 = detail::rhs_unchecked(P, xn, yn);

    const double ex = h * (e1 * k1.dx_dt + e3 * k3.dx_dt + e4 * k4.dx_dt + e5 * k5.dx_dt +
                           e6 * k6.dx_dt + e7 * k7.dx_dt);
    const double ey = h * (e1 * k1.dy_dt + e3 * k3.dy_dt + e4 * k4.dy_dt + e5 * k5.dy_dt +
                           e6 * k6.dy_dt + e7 * k7.dy_dt);
    const double scx = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x), std::abs(xn));
    const double scy = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y), std::abs(yn));
    double err = std::sqrt(0.5 * ((ex / scx) * (ex / scx) + (ey / scy) * (ey / scy)));
    if (!std::isfinite(err) || !std::isfinite(xn) || !std::isfinite(yn)) err = 1e10;

    if (err <= 1.0) {
      t += h;
      // The coordinate axes are invariant manifolds; snap sub-tolerance
      // overshoots back instead of carrying a spurious sign change.
      if (xn < 0.0 && xn >= -10.0 * cfg.abs_tol) xn = 0.0;
      if (yn < 0.0 && yn >= -10.0 * cfg.abs_tol) yn = 0.0;
      x = xn;
      y = yn;
      f1 = (xn == 0.0 || yn == 0.0) ? detail::rhs_unchecked(P, x, y) : k7;
      traj.times.push_back(t);
      traj.states.push_back({x, y});
      traj.validity.push_back(detail::flags_at(P, {x, y}));
      const double fac =
          0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      h = std::min(h * std::clamp(fac, 0.2, 5.0), hmax);
      err_prev = std::max(err, 1e-10);
    } else {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
    }
  }
  return traj;
}

enum class CycleVerdict { Converged, Oscillating, Diverged, Inconclusive };

inline const char* to_string(CycleVerdict v) {
  switch (v) {
    case CycleVerdict::Converged: return "Converged";
    case CycleVerdict::Oscillating: return "Oscillating";
    case CycleVerdict::Diverged: return "Diverged";
    case CycleVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct CycleReport {
  CycleVerdict verdict = CycleVerdict::Inconclusive;
  double amplitude_x = 0.0;  // peak to trough over the post-transient window
  double amplitude_y = 0.0;
  std::optional<double> period_estimate;  // mean peak spacing when oscillating
  std::optional<State> attractor_point;   // when converged
};

namespace detail {

// Local maxima of v over [i0, i1) by three-point comparison, each refined by
// the vertex of the parabola through the discrete triple.
inline std::vector<double> peak_times(const std::vector<double>& t, const std::vector<double>& v,
                                      std::size_t i0, std::size_t i1) {
  std::vector<double> out;
  for (std::size_t i = i0 + 1; i + 1 < i1; ++i) {
    if (v[i] >= v[i - 1] && v[i] > v[i + 1]) {
      // Vertex of the parabola through the triple, assuming near-uniform
      // spacing h; offset = h/2 * (v[i-1]-v[i+1]) / (v[i-1]-2v[i]+v[i+1]).
      const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
      double tp = t[i];
      if (denom < 0.0) {
        const double h = 0.5 * (t[i + 1] - t[i - 1]);
        tp = t[i] + 0.5 * h * (v[i - 1] - v[i + 1]) / denom;
      }
      out.push_back(tp);
    }
  }
  return out;
}

inline void window_amplitude(const std::vector<State>& s, std::size_t i0, std::size_t i1,
                             double* ax, double* ay) {
  double xmin = s[i0].x, xmax = s[i0].x, ymin = s[i0].y, ymax = s[i0].y;
  for (std::size_t i = i0; i < i1; ++i) {
    xmin = std::min(xmin, s[i].x);
    xmax = std::max(xmax, s[i].x);
    ymin = std::min(ymin, s[i].y);
    ymax = std::max(ymax, s[i].y);
  }
  *ax = xmax - xmin;
  *ay = ymax - ymin;
}

}  // namespace detail

/// Attractor analysis on the post-transient window. Requires the trajectory
/// to cover at least twice the transient window.
inline CycleReport detect_limit_cycle(const Trajectory& traj, const SimConfig& cfg) {
  if (traj.times.size() < 16) throw TooShort("trajectory has too few samples");
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  const double span = t1 - t0;
  const double transient = cfg.transient_fraction * span;
  if (span < 2.0 * transient - 1e-12 * span) {
    throw TooShort("trajectory does not cover twice the transient window");
  }
  std::size_t w0 = 0;
  while (w0 < traj.times.size() && traj.times[w0] < t0 + transient) ++w0;
  const std::size_t w1 = traj.times.size();
  if (w1 - w0 < 8) throw TooShort("post-transient window has too few samples");

  CycleReport rep{};
  detail::window_amplitude(traj.states, w0, w1, &rep.amplitude_x, &rep.amplitude_y);

  const Bound bound = ultimate_bound(traj.params_used);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double norm = std::max(std::abs(traj.states[i].x), std::abs(traj.states[i].y));
    if (norm > 10.0 * bound.ultimate) {
      rep.verdict = CycleVerdict::Diverged;
      return rep;
    }
  }

  const State last = traj.states.back();
  const double attractor_scale = 1.0 + std::max(std::abs(last.x), std::abs(last.y));
  if (rep.amplitude_x <= 1e-4 * attractor_scale && rep.amplitude_y <= 1e-4 * attractor_scale) {
    rep.verdict = CycleVerdict::Converged;
    rep.attractor_point = last;
    return rep;
  }

  // Oscillation when the two halves of the window agree on amplitude.
  std::size_t mid = w0;
  const double tmid = t0 + transient + 0.5 * (t1 - t0 - transient);
  while (mid < w1 && traj.times[mid] < tmid) ++mid;
  double ax1, ay1, ax2, ay2;
  detail::window_amplitude(traj.states, w0, mid, &ax1, &ay1);
  detail::window_amplitude(traj.states, mid, w1, &ax2, &ay2);
  const bool steady_x = std::abs(ax1 - ax2) <= 0.01 * std::max(ax1, ax2);
  const bool steady_y = std::abs(ay1 - ay2) <= 0.01 * std::max(ay1, ay2);
  if (steady_x && steady_y) {
    rep.verdict = CycleVerdict::Oscillating;
    std::vector<double> xv(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) xv[i] = traj.states[i].x;
    const auto peaks = detail::peak_times(traj.times, xv, w0, w1);
    if (peaks.size() >= 2) {
      rep.period_estimate = (peaks.back() - peaks.front()) / double(peaks.size() - 1);
    }
    return rep;
  }
  rep.verdict = CycleVerdict::Inconclusive;
  return rep;
}

struct SweepRow {
  double m;
  std::optional<State> star;
  std::optional<Classification> classification;
};

/// Interior equilibrium and classification per refuge value, continuation
/// seeded in input order. Infeasible rows carry empty optionals.
inline std::vector<SweepRow> sweep_refuge(const ModelParams& base,
                                          const std::vector<double>& m_values) {
  std::vector<SweepRow> rows;
  std::optional<State> seed;
  for (const double m : m_values) {
    if (!(m >= 0.0 && m <= 1.0)) throw InvalidParams("sweep m values must lie in [0, 1]");
    ModelParams P = base;
    P.m = m;
    SweepRow row{m, std::nullopt, std::nullopt};
    try {
      // A seed from the previous refuge value may sit outside the shrunken
      // admissible strip y < 1/m; fall back to the multistart if so.
      std::optional<State> usable = seed;
      if (usable && m > 0.0 && !(usable->y < 1.0 / m)) usable.reset();
      Equilibrium eq = interior_equilibrium(P, usable);
      row.star = eq.point;
      row.classification = classify(P, eq).classification;
      seed = eq.point;
    } catch (const Error&) {
      // row stays marked absent
    }
    rows.push_back(row);
  }
  return rows;
}

/// Checks the uniform bound on xi = x + y/e along a trajectory.
inline bool verify_bound(const Trajectory& traj) {
  if (traj.times.empty()) throw EmptyTrajectory("verify_bound needs samples");
  const Bound b = ultimate_bound(traj.params_used);
  const double e = traj.params_used.e;
  const double xi0 = traj.states.front().x + traj.states.front().y / e;
  const double limit = std::max(b.ultimate, xi0) + 1e-6 * (1.0 + b.ultimate);
  for (const State& s : traj.states) {
    if (s.x + s.y / e > limit) return false;
  }
  return true;
}

/// Present value of the rent stream along a trajectory by trapezoidal
/// quadrature of e^{-delta t} * pi(x(t), y(t)).
inline double discounted_revenue(const Trajectory& traj, const ModelParams& P,
                                 const EconParams& E) {
  if (traj.times.empty()) throw EmptyTrajectory("discounted_revenue needs samples");
  auto integrand = [&](std::size_t i) {
    const RevenueReport r = revenue(E, P, traj.states[i]);
    return std::exp(-E.delta * traj.times[i]) * r.pi;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    acc += 0.5 * (integrand(i) + integrand(i + 1)) * (traj.times[i + 1] - traj.times[i]);
  }
  return acc;
}

}  // namespace bioeco
