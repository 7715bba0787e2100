#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qjet/types.hpp"

namespace qjet {

struct IntegrationConfig {
  double dt = 1e-3;
  double t_final = 0.0;
  std::int64_t store_every = 1;  // keep every k-th step (plus t=0 and t_final)
};

template <class State>
struct IntegrationResult {
  std::vector<State> samples;  // at t = k*store_every*dt, plus t_final exactly
  bool diverged = false;
  double diverged_at = std::numeric_limits<double>::quiet_NaN();
  double max_halving_error = 0.0;  // inf-norm, full step vs two half steps
};

// Classical fixed-step RK4. State must expose a public `t` field and the
// free functions axpy(State&, double, const State&), norm_inf, all_finite.
template <class State, class Rhs>
State rk4_step(const State& y, Rhs&& rhs, double dt) {
  const State k1 = rhs(y);
  State y2 = y;
  axpy(y2, 0.5 * dt, k1);
  y2.t = y.t + 0.5 * dt;
  const State k2 = rhs(y2);
  State y3 = y;
  axpy(y3, 0.5 * dt, k2);
  y3.t = y.t + 0.5 * dt;
  const State k3 = rhs(y3);
  State y4 = y;
  axpy(y4, dt, k3);
  y4.t = y.t + dt;
  const State k4 = rhs(y4);

  State out = y;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  out.t = y.t + dt;
  return out;
}

namespace detail {

// Number of whole dt steps before the (possibly shortened) final step.
inline std::int64_t whole_steps(double t_final, double dt, double* remainder) {
  const double ratio = t_final / dt;
  const auto rounded = static_cast<std::int64_t>(std::llround(ratio));
  if (std::abs(t_final - static_cast<double>(rounded) * dt) <= 1e-9 * dt) {
    *remainder = 0.0;
    return rounded;
  }
  auto n = static_cast<std::int64_t>(std::floor(ratio));
  double rem = t_final - static_cast<double>(n) * dt;
  if (rem < 0) {
    --n;
    rem = t_final - static_cast<double>(n) * dt;
  }
  *remainder = rem;
  return n;
}

}  // namespace detail

template <class State, class Rhs>
IntegrationResult<State> integrate(const State& state0, Rhs&& rhs,
                                   const IntegrationConfig& cfg) {
  IntegrationResult<State> out;
  out.samples.push_back(state0);
  if (cfg.t_final <= 0.0) return out;

  double rem = 0.0;
  const std::int64_t n_whole = detail::whole_steps(cfg.t_final, cfg.dt, &rem);

  State y = state0;
  bool sampled_last = true;
  auto advance = [&](double dt) -> bool {
    const State y_next = rk4_step(y, rhs, dt);
    State y_half = rk4_step(y, rhs, 0.5 * dt);
    y_half = rk4_step(y_half, rhs, 0.5 * dt);
    if (!all_finite(y_next) || !all_finite(y_half)) {
      out.diverged = true;
      out.diverged_at = y.t + dt;
      return false;
    }
    State diff = y_next;
    axpy(diff, -1.0, y_half);
    out.max_halving_error = std::max(out.max_halving_error, norm_inf(diff));
    y = y_next;
    return true;
  };

  for (std::int64_t i = 1; i <= n_whole; ++i) {
    if (!advance(cfg.dt)) return out;
    y.t = static_cast<double>(i) * cfg.dt;  // avoid accumulated drift
    sampled_last = (i % cfg.store_every == 0);
    if (sampled_last) out.samples.push_back(y);
  }
  if (rem > 0.0) {
    if (!advance(rem)) return out;
    y.t = cfg.t_final;
    out.samples.push_back(y);
  } else {
    y.t = cfg.t_final;
    if (sampled_last)
      out.samples.back().t = cfg.t_final;
    else
      out.samples.push_back(y);
  }
  return out;
}

}  // namespace qjet
