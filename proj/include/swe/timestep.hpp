#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "swe/error.hpp"
#include "swe/state.hpp"

namespace swe {

struct TimeControl {
  double cfl = 0.3;
  double dt = 0.0;
  double t_end = 0.0;
  // When set, exactly n_steps steps of size dt are taken and t_end is ignored.
  std::optional<long> n_steps;
  // Callback every callback_stride steps (0 disables intermediate samples).
  long callback_stride = 0;
};

// dt = cfl dx / max_j(|u_j| + sqrt(g h_j)) from the given (initial) fields.
double compute_dt(const State1D& state0, const Grid1D& grid, double g, double cfl);
// 2D convention: wave speed sqrt(u^2 + v^2) + sqrt(g h).
double compute_dt(const State2D& state0, double dx, double g, double cfl);

inline void axpy(State1D& y, double a, const State1D& x) {
  for (std::size_t j = 0; j < y.h.size(); ++j) {
    y.h[j] += a * x.h[j];
    y.u[j] += a * x.u[j];
  }
}

inline void axpy(State2D& y, double a, const State2D& x) {
  const long n = static_cast<long>(y.h.size());
#pragma omp parallel for schedule(static) if (n > 16384)
  for (long j = 0; j < n; ++j) {
    y.h[j] += a * x.h[j];
    y.u[j] += a * x.u[j];
    y.v[j] += a * x.v[j];
  }
}

inline bool all_finite(const State1D& s) {
  for (std::size_t j = 0; j < s.h.size(); ++j) {
    if (!std::isfinite(s.h[j]) || !std::isfinite(s.u[j])) return false;
  }
  return true;
}

inline bool all_finite(const State2D& s) {
  for (std::size_t j = 0; j < s.h.size(); ++j) {
    if (!std::isfinite(s.h[j]) || !std::isfinite(s.u[j]) || !std::isfinite(s.v[j])) return false;
  }
  return true;
}

template <typename State>
using Tendency = std::function<State(const State&, double)>;

// Classical four-stage Runge-Kutta step.
template <typename State>
State rk4_step(const Tendency<State>& rhs, const State& q, double t, double dt) {
  const State k1 = rhs(q, t);
  State stage = q;
  axpy(stage, 0.5 * dt, k1);
  const State k2 = rhs(stage, t + 0.5 * dt);
  stage = q;
  axpy(stage, 0.5 * dt, k2);
  const State k3 = rhs(stage, t + 0.5 * dt);
  stage = q;
  axpy(stage, dt, k3);
  const State k4 = rhs(stage, t + dt);
  State out = q;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  return out;
}

template <typename State>
struct IntegrationResult {
  State state;
  double t = 0.0;
  long steps = 0;
};

template <typename State>
using SampleCallback = std::function<void(long step, double t, const State& state)>;

// Fixed-dt loop. The last step is shortened to land on t_end unless n_steps is
// given. The callback runs at step 0, every callback_stride steps and at the
// final step; nothing is sampled when no step is taken.
template <typename State>
IntegrationResult<State> integrate(const Tendency<State>& rhs, const State& state0, const TimeControl& control,
                                   const SampleCallback<State>& on_sample = {}, double t0 = 0.0) {
  if (!(control.dt > 0.0)) throw Error(ErrorCode::ConfigInvalid, "time step must be positive");
  IntegrationResult<State> res{state0, t0, 0};
  long total = 0;
  if (control.n_steps) {
    total = *control.n_steps;
  } else {
    const double span = control.t_end - t0;
    if (span > 0.0) total = static_cast<long>(std::ceil(span / control.dt - 1e-9));
  }
  if (total <= 0) return res;
  if (on_sample) on_sample(0, res.t, res.state);
  for (long k = 1; k <= total; ++k) {
    double dt = control.dt;
    if (!control.n_steps && k == total) dt = control.t_end - res.t;
    res.state = rk4_step(rhs, res.state, res.t, dt);
    res.t = (!control.n_steps && k == total) ? control.t_end : t0 + static_cast<double>(k) * control.dt;
    res.steps = k;
    if (!all_finite(res.state)) {
      throw Error(ErrorCode::NonFinite, "non-finite value after step " + std::to_string(k) +
                                            " (t = " + std::to_string(res.t) + ")");
    }
    const bool sample = control.callback_stride > 0 && k % control.callback_stride == 0;
    if (on_sample && (sample || k == total)) on_sample(k, res.t, res.state);
  }
  return res;
}

}  // namespace swe
