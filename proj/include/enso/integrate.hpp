#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "enso/numerics.hpp"

namespace enso {

/// Terminal condition of an integration run. Success covers both reaching the
/// end of the span and stopping at a terminal event; the abort states leave a
/// valid partial trajectory behind.
enum class IntegratorStatus {
  Success,
  StepSizeUnderflow,
  NonFiniteState,
  MaxStepsExceeded,
};

[[nodiscard]] inline const char* to_string(IntegratorStatus s) {
  switch (s) {
    case IntegratorStatus::Success: return "success";
    case IntegratorStatus::StepSizeUnderflow: return "step-size underflow";
    case IntegratorStatus::NonFiniteState: return "non-finite state";
    case IntegratorStatus::MaxStepsExceeded: return "max steps exceeded";
  }
  return "unknown";
}

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double t_begin = 0.0;
  double t_end = 1.0;
  double max_step = 0.0;           ///< 0 = span/10
  double initial_step = 0.0;       ///< 0 = automatic
  double transient_discard = 0.0;  ///< leading time span dropped from output
  double sample_dt = 0.0;          ///< >0: uniform dense-output sampling
  double event_tol = 1e-10;        ///< |g| target for event localization
  std::size_t max_steps = 100'000'000;

  void validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-2 || !(abs_tol > 0.0) || abs_tol > 1e-2)
      throw std::invalid_argument("integrator: tolerances must lie in (0, 1e-2]");
    if (!(t_end > t_begin))
      throw std::invalid_argument("integrator: t_end must exceed t_begin");
    if (transient_discard < 0.0 || transient_discard >= t_end - t_begin)
      throw std::invalid_argument(
          "integrator: transient_discard must lie inside the span");
    if (max_step < 0.0 || initial_step < 0.0 || sample_dt < 0.0)
      throw std::invalid_argument("integrator: step settings must be >= 0");
  }
};

enum class EventDirection { Rising, Falling, Both };

template <std::size_t N>
struct Event {
  std::function<double(double, const std::array<double, N>&)> g;
  EventDirection direction = EventDirection::Both;
  std::string label;
  bool terminal = false;
};

template <std::size_t N>
struct EventHit {
  double t = 0.0;
  std::array<double, N> state{};
  std::size_t event_index = 0;
  std::string label;
};

template <std::size_t N>
struct Trajectory {
  std::vector<double> times;
  std::vector<std::array<double, N>> states;
  std::vector<EventHit<N>> events;
  IntegratorStatus status = IntegratorStatus::Success;
  std::string diagnostic;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;

  [[nodiscard]] bool ok() const { return status == IntegratorStatus::Success; }
  [[nodiscard]] std::size_t size() const { return times.size(); }
};

namespace detail {

/// Cubic Hermite interpolation on one accepted step.
template <std::size_t N>
std::array<double, N> hermite(double t0, const std::array<double, N>& y0,
                              const std::array<double, N>& f0, double t1,
                              const std::array<double, N>& y1,
                              const std::array<double, N>& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  }
  return out;
}

template <std::size_t N>
bool finite(const std::array<double, N>& v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

}  // namespace detail

/// Adaptive Dormand–Prince 5(4) integration with PI step-size control,
/// cubic-Hermite dense output, and event localization by bisection on the
/// dense output to |g| < event_tol.
///
/// The returned trajectory holds either every accepted step (sample_dt = 0)
/// or a uniform dense-output sampling; event states are recorded separately
/// and a terminal event truncates the run at the event point with Success
/// status. Integration aborts (status + diagnostic + partial trajectory)
/// on step-size underflow, non-finite states, or a step-count blowout.
template <std::size_t N, class RHS>
Trajectory<N> integrate(RHS&& rhs, std::array<double, N> y0,
                        const IntegratorConfig& cfg,
                        const std::vector<Event<N>>& events = {}) {
  cfg.validate();
  // Dormand–Prince RK5(4)7M coefficients.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 5th-order minus embedded 4th-order weights (error estimator).
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory<N> traj;
  const double span = cfg.t_end - cfg.t_begin;
  const double max_step = (cfg.max_step > 0.0) ? cfg.max_step : span / 10.0;
  const double keep_from = cfg.t_begin + cfg.transient_discard;

  double t = cfg.t_begin;
  std::array<double, N> y = y0;
  std::array<double, N> f = rhs(t, y);
  if (!detail::finite(f)) {
    traj.status = IntegratorStatus::NonFiniteState;
    traj.diagnostic = "right-hand side non-finite at the initial state";
    return traj;
  }

  // Previous event-function values, for crossing detection across steps.
  std::vector<double> g_prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i].g(t, y);

  double next_sample = keep_from;
  auto emit = [&](double te, const std::array<double, N>& ye) {
    if (te >= keep_from - 1e-300) {
      traj.times.push_back(te);
      traj.states.push_back(ye);
    }
  };
  if (cfg.sample_dt == 0.0) emit(t, y);

  // Initial step size: conservative curvature-free heuristic.
  double h = cfg.initial_step;
  if (h == 0.0) {
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double w = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
      ynorm = std::max(ynorm, std::abs(y[i]) / w);
      fnorm = std::max(fnorm, std::abs(f[i]) / w);
    }
    h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, 1.0) / fnorm : span / 100.0;
    h = std::min(h, span / 100.0);
  }
  h = std::min(h, max_step);

  constexpr double kSafety = 0.9;
  constexpr double kBeta1 = 0.7 / 5.0;
  constexpr double kBeta2 = 0.4 / 5.0;
  double err_prev = 1.0;
  bool last_rejected = false;
  std::size_t steps = 0;

  std::array<double, N> k2{}, k3{}, k4{}, k5{}, k6{}, ynew{}, fnew{};

  while (t < cfg.t_end) {
    if (++steps > cfg.max_steps) {
      traj.status = IntegratorStatus::MaxStepsExceeded;
      traj.diagnostic = "step budget exhausted at t = " + std::to_string(t);
      return traj;
    }
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::abs(t), 1.0);
    if (h < hmin) {
      traj.status = IntegratorStatus::StepSizeUnderflow;
      traj.diagnostic = "step size underflow at t = " + std::to_string(t);
      return traj;
    }
    if (t + h > cfg.t_end) h = cfg.t_end - t;

    auto stage = [&](double frac, auto&&... weighted) {
      std::array<double, N> arg{};
      for (std::size_t i = 0; i < N; ++i) {
        double acc = y[i];
        ((acc += h * weighted.first * weighted.second[i]), ...);
        arg[i] = acc;
      }
      return rhs(t + frac * h, arg);
    };
    using P = std::pair<double, const std::array<double, N>&>;
    k2 = stage(c2, P{a21, f});
    k3 = stage(c3, P{a31, f}, P{a32, k2});
    k4 = stage(c4, P{a41, f}, P{a42, k2}, P{a43, k3});
    k5 = stage(c5, P{a51, f}, P{a52, k2}, P{a53, k3}, P{a54, k4});
    k6 = stage(1.0, P{a61, f}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
    for (std::size_t i = 0; i < N; ++i) {
      ynew[i] = y[i] + h * (b1 * f[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    }
    fnew = rhs(t + h, ynew);  // FSAL stage, reused on acceptance

    bool bad = !detail::finite(ynew) || !detail::finite(fnew);
    double err = 0.0;
    if (!bad) {
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * fnew[i]);
        const double w = cfg.abs_tol +
                         cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (e / w) * (e / w);
      }
      err = std::sqrt(err / N);
      if (!std::isfinite(err)) bad = true;
    }

    if (bad) {
      ++traj.steps_rejected;
      h *= 0.5;
      last_rejected = true;
      continue;
    }

    if (err > 1.0) {
      ++traj.steps_rejected;
      const double fac =
          std::max(0.2, kSafety * std::pow(err, -1.0 / 5.0));
      h = std::min(h * fac, max_step);
      last_rejected = true;
      continue;
    }

    // Accepted. Localize events on this step before advancing bookkeeping.
    const double t_new = t + h;
    double t_stop = t_new;
    bool stop = false;
    struct Located {
      double t;
      std::array<double, N> state;
      std::size_t index;
    };
    std::vector<Located> hits;
    for (std::size_t iev = 0; iev < events.size(); ++iev) {
      const auto& ev = events[iev];
      const double g1 = ev.g(t_new, ynew);
      const double g0 = g_prev[iev];
      const bool rising = g0 < 0.0 && g1 >= 0.0;
      const bool falling = g0 > 0.0 && g1 <= 0.0;
      const bool wanted = (ev.direction == EventDirection::Both && (rising || falling)) ||
                          (ev.direction == EventDirection::Rising && rising) ||
                          (ev.direction == EventDirection::Falling && falling);
      g_prev[iev] = g1;
      if (!wanted) continue;
      // Bisect on the dense output.
      double ta = t, tb = t_new;
      double ga = g0;
      std::array<double, N> ystar = ynew;
      double tstar = t_new, gstar = g1;
      for (int it = 0; it < 200; ++it) {
        const double tm = 0.5 * (ta + tb);
        const auto ym = detail::hermite(t, y, f, t_new, ynew, fnew, tm);
        const double gm = ev.g(tm, ym);
        if (std::abs(gm) < std::abs(gstar)) {
          tstar = tm;
          ystar = ym;
          gstar = gm;
        }
        if (std::abs(gm) < cfg.event_tol || tb - ta < hmin) break;
        if ((ga < 0.0) == (gm < 0.0)) {
          ta = tm;
          ga = gm;
        } else {
          tb = tm;
        }
      }
      hits.push_back({tstar, ystar, iev});
      if (ev.terminal && tstar < t_stop) {
        t_stop = tstar;
        stop = true;
      }
    }
    std::sort(hits.begin(), hits.end(),
              [](const Located& a, const Located& b) { return a.t < b.t; });
    for (const auto& hit : hits) {
      if (hit.t <= t_stop) {
        traj.events.push_back(
            {hit.t, hit.state, hit.index, events[hit.index].label});
      }
    }

    // Emit samples (uniform dense output or the accepted step endpoint).
    if (cfg.sample_dt > 0.0) {
      while (next_sample <= t_stop + 1e-12 * std::max(1.0, std::abs(t_stop))) {
        const double ts = std::min(next_sample, t_stop);
        if (ts >= t && ts <= t_new) {
          traj.times.push_back(ts);
          traj.states.push_back(
              detail::hermite(t, y, f, t_new, ynew, fnew, ts));
        }
        next_sample += cfg.sample_dt;
      }
    }

    if (stop) {
      const auto y_stop = detail::hermite(t, y, f, t_new, ynew, fnew, t_stop);
      if (cfg.sample_dt == 0.0) emit(t_stop, y_stop);
      else if (traj.times.empty() || traj.times.back() < t_stop) {
        traj.times.push_back(t_stop);
        traj.states.push_back(y_stop);
      }
      ++traj.steps_accepted;
      return traj;
    }

    t = t_new;
    y = ynew;
    f = fnew;  // FSAL
    ++traj.steps_accepted;
    if (cfg.sample_dt == 0.0) emit(t, y);

    // PI controller (limited growth after a rejection).
    double fac = kSafety * std::pow(err > 0.0 ? err : 1e-16, -kBeta1) *
                 std::pow(err_prev, kBeta2);
    fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
    h = std::min(h * fac, max_step);
    err_prev = std::max(err, 1e-16);
    last_rejected = false;
  }

  // Ensure the final time is represented when uniform sampling overshoots.
  if (cfg.sample_dt > 0.0 &&
      (traj.times.empty() || traj.times.back() < cfg.t_end - 1e-12)) {
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

/// States interpolated at crossings of a section function along a stored
/// trajectory (linear interpolation between adjacent samples). Useful for
/// counting bursts and building return-map samples after the fact; for
/// tightly localized events, register an Event with integrate() instead.
template <std::size_t N>
[[nodiscard]] std::vector<EventHit<N>> poincare_samples(
    const Trajectory<N>& traj,
    const std::function<double(const std::array<double, N>&)>& section,
    EventDirection direction = EventDirection::Both,
    const std::string& label = "section") {
  std::vector<EventHit<N>> hits;
  if (traj.size() < 2) return hits;
  double g0 = section(traj.states.front());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double g1 = section(traj.states[i]);
    const bool rising = g0 < 0.0 && g1 >= 0.0;
    const bool falling = g0 > 0.0 && g1 <= 0.0;
    const bool wanted =
        (direction == EventDirection::Both && (rising || falling)) ||
        (direction == EventDirection::Rising && rising) ||
        (direction == EventDirection::Falling && falling);
    if (wanted && g1 != g0) {
      const double w = g0 / (g0 - g1);
      EventHit<N> hit;
      hit.t = traj.times[i - 1] + w * (traj.times[i] - traj.times[i - 1]);
      for (std::size_t jj = 0; jj < N; ++jj) {
        hit.state[jj] = traj.states[i - 1][jj] +
                        w * (traj.states[i][jj] - traj.states[i - 1][jj]);
      }
      hit.label = label;
      hits.push_back(hit);
    }
    g0 = g1;
  }
  return hits;
}

}  // namespace enso
