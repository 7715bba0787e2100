#pragma once

#include <thread>
#include <vector>

#include "qjet/integrate.hpp"
#include "qjet/wavepacket.hpp"

namespace qjet {

struct TrajectoryRecord {
  cplx x0{};
  IntegrationResult<TrajectoryState> path;
  cplx psi_final{};  // exp(i S_0(t_f)/hbar); meaningful only if !path.diverged
};

using Fan = std::vector<TrajectoryRecord>;

inline TrajectoryRecord propagate_one(const GaussianWavepacket& w,
                                      const Potential& potential,
                                      VelocityStrategy strategy, cplx x0,
                                      int N, const IntegrationConfig& cfg,
                                      const PhysicalConstants& consts) {
  TrajectoryRecord rec;
  rec.x0 = x0;
  const TrajectoryState st0 = init_state(w, strategy, x0, N, consts);
  rec.path = integrate(
      st0,
      [&](const TrajectoryState& s) {
        return full_rhs(strategy, s, potential, consts);
      },
      cfg);
  if (!rec.path.diverged)
    rec.psi_final =
        reconstruct_amplitude(rec.path.samples.back().jet.s(0), consts);
  return rec;
}

// Data-parallel over initial conditions; chunking does not affect results.
inline Fan propagate_fan(const GaussianWavepacket& w,
                         const Potential& potential, VelocityStrategy strategy,
                         const std::vector<cplx>& x0_list, int N,
                         const IntegrationConfig& cfg,
                         const PhysicalConstants& consts, int n_threads = 1) {
  if (x0_list.empty())
    throw std::invalid_argument("propagate_fan: empty initial-position list");
  Fan fan(x0_list.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      fan[i] = propagate_one(w, potential, strategy, x0_list[i], N, cfg,
                             consts);
  };
  const std::size_t n = x0_list.size();
  const auto hw = static_cast<std::size_t>(std::max(1, n_threads));
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    work(0, n);
    return fan;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t b = 0; b < n; b += chunk)
    pool.emplace_back(work, b, std::min(b + chunk, n));
  for (auto& th : pool) th.join();
  return fan;
}

inline std::vector<cplx> linspace_complex(double lo, double hi, int count) {
  std::vector<cplx> xs;
  xs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    xs.emplace_back(lo + f * (hi - lo), 0.0);
  }
  return xs;
}

}  // namespace qjet
