#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qjet/fan.hpp"

namespace qjet {

struct RootSearchConfig {
  int max_iter = 25;
  double tol_imag = 1e-10;  // tolerance on Im x(t_f) and on Re x(t_f)-target
  double step = 1e-6;       // complex secant probe size
  double dt = 1e-3;         // time step for the probe integrations
};

struct RootSearchResult {
  cplx x0{};    // best initial position found
  cplx x_tf{};  // where it lands at t_f
  int iterations = 0;
  bool converged = false;
  std::string failure;  // empty on success
};

namespace detail {

inline std::optional<cplx> bomca_endpoint(const GaussianWavepacket& w,
                                          const Potential& potential, cplx x0,
                                          int N, double t_f, double dt,
                                          const PhysicalConstants& consts) {
  IntegrationConfig cfg;
  cfg.dt = dt;
  cfg.t_final = t_f;
  cfg.store_every = std::numeric_limits<std::int64_t>::max();
  const auto rec = propagate_one(w, potential, VelocityStrategy::Bomca, x0, N,
                                 cfg, consts);
  if (rec.path.diverged) return std::nullopt;
  return rec.path.samples.back().x;
}

}  // namespace detail

// Damped Newton on the analytic map x(0) -> x(t_f), derivative estimated by
// a secant probe of size cfg.step. Finds the complex launch point that lands
// on the real axis at target_x.
inline RootSearchResult bomca_root_search(
    double target_x, const Potential& potential, const GaussianWavepacket& w,
    int N, double t_f, const RootSearchConfig& cfg,
    const PhysicalConstants& consts, std::optional<cplx> initial_guess = {}) {
  RootSearchResult res;
  cplx z = initial_guess.value_or(cplx(target_x, 0.0));

  auto endpoint = [&](cplx x0) {
    return detail::bomca_endpoint(w, potential, x0, N, t_f, cfg.dt, consts);
  };

  auto land = endpoint(z);
  if (!land) {
    res.x0 = z;
    res.failure = "divergent probe trajectory at initial guess";
    return res;
  }
  auto residual_ok = [&](cplx xtf) {
    return std::abs(xtf.imag()) < cfg.tol_imag &&
           std::abs(xtf.real() - target_x) < cfg.tol_imag;
  };

  for (int it = 0; it < cfg.max_iter; ++it) {
    res.x0 = z;
    res.x_tf = *land;
    if (residual_ok(*land)) {
      res.converged = true;
      return res;
    }
    const auto probe = endpoint(z + cfg.step);
    if (!probe) {
      res.failure = "divergent probe trajectory";
      return res;
    }
    const cplx deriv = (*probe - *land) / cfg.step;
    if (!is_finite(deriv) || deriv == cplx{}) {
      res.failure = "degenerate secant derivative";
      return res;
    }
    const cplx f = *land - target_x;
    cplx step = -f / deriv;
    // damping: keep halving while the residual refuses to decrease
    bool moved = false;
    for (int damp = 0; damp < 6; ++damp) {
      const auto trial = endpoint(z + step);
      if (trial && (std::abs(*trial - target_x) < std::abs(f) ||
                    residual_ok(*trial))) {
        z += step;
        land = trial;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    if (!moved) {
      res.x0 = z;
      res.failure = "damped Newton stalled";
      return res;
    }
  }
  res.x0 = z;
  res.x_tf = *land;
  res.converged = residual_ok(*land);
  if (!res.converged) res.failure = "max_iter exceeded";
  return res;
}

struct GridRootSearch {
  std::vector<RootSearchResult> results;
  std::vector<bool> jump_flag;  // solution jumped > 10x target spacing
};

// Sequential sweep with continuation seeding; `reverse` sweeps the target
// grid from high to low instead.
inline GridRootSearch bomca_root_search_grid(
    const std::vector<double>& targets, const Potential& potential,
    const GaussianWavepacket& w, int N, double t_f,
    const RootSearchConfig& cfg, const PhysicalConstants& consts,
    bool reverse = false) {
  GridRootSearch out;
  out.results.resize(targets.size());
  out.jump_flag.assign(targets.size(), false);
  std::optional<cplx> seed;
  std::optional<std::size_t> prev;
  for (std::size_t step = 0; step < targets.size(); ++step) {
    const std::size_t i = reverse ? targets.size() - 1 - step : step;
    auto r = bomca_root_search(targets[i], potential, w, N, t_f, cfg, consts,
                               seed);
    if (r.converged) {
      if (prev) {
        const double spacing = std::abs(targets[i] - targets[*prev]);
        if (spacing > 0 &&
            std::abs(r.x0 - out.results[*prev].x0) > 10.0 * spacing)
          out.jump_flag[i] = true;
      }
      seed = r.x0;
      prev = i;
    } else {
      seed.reset();  // fall back to default seeding after a failure
    }
    out.results[i] = std::move(r);
  }
  return out;
}

}  // namespace qjet
