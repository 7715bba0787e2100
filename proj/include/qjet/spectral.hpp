#pragma once

#include <iostream>
#include <sstream>
#include <stdexcept>

#include "qjet/fft.hpp"
#include "qjet/potential.hpp"
#include "qjet/wavepacket.hpp"

namespace qjet {

struct GridSpec {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t n_points = 1024;  // power of two; x_max itself is excluded
};

struct GridWavefunction {
  double x_min = 0.0;
  double dx = 0.0;
  std::vector<cplx> psi;

  std::size_t n() const { return psi.size(); }
  double x(std::size_t i) const {
    return x_min + static_cast<double>(i) * dx;
  }
};

inline double grid_norm(const GridWavefunction& g) {
  double acc = 0.0;
  for (const cplx& v : g.psi) acc += std::norm(v);
  return std::sqrt(acc * g.dx);
}

// Pointwise evaluation of the initial packet; rejects grids whose edges see
// non-negligible amplitude (the propagation is periodic in x).
inline GridWavefunction sample_wavepacket(const GaussianWavepacket& w,
                                          const GridSpec& spec,
                                          const PhysicalConstants& consts) {
  if (spec.n_points < 2 || (spec.n_points & (spec.n_points - 1)) != 0)
    throw std::invalid_argument(
        "sample_wavepacket: n_points must be a power of two >= 2");
  if (!(spec.x_max > spec.x_min))
    throw std::invalid_argument("sample_wavepacket: empty grid range");
  GridWavefunction g;
  g.x_min = spec.x_min;
  g.dx = (spec.x_max - spec.x_min) / static_cast<double>(spec.n_points);
  g.psi.resize(spec.n_points);
  double peak = 0.0;
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    g.psi[i] = initial_psi(w, cplx(g.x(i), 0.0), consts);
    peak = std::max(peak, std::abs(g.psi[i]));
  }
  const double edge =
      std::max(std::abs(g.psi.front()), std::abs(g.psi.back()));
  if (edge > 1e-12 * peak) {
    std::ostringstream msg;
    msg << "sample_wavepacket: grid does not cover the packet (edge "
           "amplitude "
        << edge << " vs peak " << peak << ")";
    throw std::invalid_argument(msg.str());
  }
  return g;
}

struct SplitOpDiagnostics {
  double final_norm = 0.0;
  double aliased_fraction = 0.0;  // norm^2 fraction in the top 10% of |k|
  bool aliasing_warning = false;
};

// Strang-split Fourier propagation: exp(-iV dt/2h) F^-1 exp(-ih k^2 dt/2m) F
// per step, with the two half kicks of adjacent steps kept separate so the
// wavefunction is exact at the requested sample time.
inline GridWavefunction split_operator_propagate(
    GridWavefunction psi, const Potential& potential, double dt,
    std::int64_t n_steps, const PhysicalConstants& consts,
    SplitOpDiagnostics* diag = nullptr) {
  const std::size_t n = psi.n();
  Fft fft(n);
  std::vector<cplx> phase_v(n), phase_t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = eval_derivative(potential, cplx(psi.x(i), 0.0), 0).real();
    phase_v[i] = std::exp(cplx(0.0, -0.5 * v * dt / consts.hbar));
  }
  const double dk = 2.0 * kPi / (static_cast<double>(n) * psi.dx);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = static_cast<double>(i < n / 2
                                           ? static_cast<std::int64_t>(i)
                                           : static_cast<std::int64_t>(i) -
                                                 static_cast<std::int64_t>(n));
    const double k = f * dk;
    phase_t[i] = std::exp(cplx(0.0, -0.5 * consts.hbar * k * k * dt /
                                        consts.mass));
  }

  cplx* a = psi.psi.data();
  for (std::int64_t s = 0; s < n_steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= phase_v[i];
    fft.forward(a);
    for (std::size_t i = 0; i < n; ++i) a[i] *= phase_t[i];
    fft.inverse(a);
    for (std::size_t i = 0; i < n; ++i) a[i] *= phase_v[i];
  }

  // aliasing check on the final state
  std::vector<cplx> spec(psi.psi);
  fft.forward(spec.data());
  double total = 0.0, top = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = static_cast<double>(i < n / 2
                                           ? static_cast<std::int64_t>(i)
                                           : static_cast<std::int64_t>(i) -
                                                 static_cast<std::int64_t>(n));
    const double mag = std::norm(spec[i]);
    total += mag;
    if (std::abs(f) >= 0.9 * static_cast<double>(n / 2)) top += mag;
  }
  const double fraction = total > 0 ? top / total : 0.0;
  if (diag) {
    diag->final_norm = grid_norm(psi);
    diag->aliased_fraction = fraction;
    diag->aliasing_warning = fraction > 1e-8;
  } else if (fraction > 1e-8) {
    std::cerr << "warning: " << fraction
              << " of the norm sits in the top 10% of the momentum grid; "
                 "increase the resolution\n";
  }
  return psi;
}

}  // namespace qjet
