#pragma once

#include "qjet/wavepacket.hpp"

namespace qjet {

// Eigenstate of V = (1/2) m w^2 x^2 with alpha0 = m w / 2 hbar:
// psi = exp(-alpha0 x^2 - i w t / 2 + i gamma0 / hbar).
inline cplx harmonic_ground_state(double x, double t, double omega,
                                  const PhysicalConstants& consts) {
  const double alpha0 = consts.mass * omega / (2.0 * consts.hbar);
  const cplx gamma0 = GaussianWavepacket::default_gamma0(alpha0, consts);
  return std::exp(cplx(-alpha0 * x * x, -0.5 * omega * t) +
                  cplx(0.0, 1.0) * gamma0 / consts.hbar);
}

// Thawed-Gaussian evolution in a harmonic well. The packet stays Gaussian:
// S(x,t) = i hbar a(t) (x-xt)^2 + pt (x-xt) + gamma(t).
//
// With z0 = 2 hbar alpha0 / (m w), the width factor f = cos wt + i z0 sin wt
// is factored as ((1+z0)/2) e^{iwt} (1 + rho e^{-2iwt}), rho = (1-z0)/(1+z0),
// |rho| < 1, so the log of f is winding-safe and gamma(t) keeps the correct
// phase across full periods (the t = 2 pi / w sign flip included).
struct ThawedGaussian {
  cplx alpha;   // a(t)
  double xt;    // packet center
  double pt;    // packet momentum
  cplx gamma;   // gamma(t)
};

inline ThawedGaussian thawed_harmonic(const GaussianWavepacket& w,
                                      double omega, double t,
                                      const PhysicalConstants& consts) {
  const double m = consts.mass, hbar = consts.hbar;
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  const cplx z0 = 2.0 * hbar * w.alpha0 / (m * omega);
  const cplx z = (z0 * c + cplx(0.0, 1.0) * s) / (c + cplx(0.0, 1.0) * z0 * s);

  ThawedGaussian g;
  g.alpha = m * omega * z / (2.0 * hbar);
  g.xt = w.xc * c + w.pc / (m * omega) * s;
  g.pt = w.pc * c - m * omega * w.xc * s;
  const double s_cl = 0.5 * (g.xt * g.pt - w.xc * w.pc);
  const cplx rho = (1.0 - z0) / (1.0 + z0);
  const cplx logf = cplx(0.0, omega * t) + std::log(0.5 * (1.0 + z0)) +
                    std::log(1.0 + rho * std::exp(cplx(0.0, -2.0 * omega * t)));
  g.gamma = w.gamma0 + s_cl + cplx(0.0, 0.5 * hbar) * logf;
  return g;
}

// Free evolution: a(t) = alpha0 / (1 + 2 i hbar alpha0 t / m).
inline ThawedGaussian thawed_free(const GaussianWavepacket& w, double t,
                                  const PhysicalConstants& consts) {
  const double m = consts.mass, hbar = consts.hbar;
  const cplx f = 1.0 + cplx(0.0, 2.0 * hbar) * w.alpha0 * t / m;
  ThawedGaussian g;
  g.alpha = w.alpha0 / f;
  g.xt = w.xc + w.pc * t / m;
  g.pt = w.pc;
  g.gamma =
      w.gamma0 + w.pc * w.pc * t / (2.0 * m) + cplx(0.0, 0.5 * hbar) * std::log(f);
  return g;
}

inline cplx thawed_psi(const ThawedGaussian& g, double x,
                       const PhysicalConstants& consts) {
  const double dx = x - g.xt;
  const cplx action =
      cplx(0.0, consts.hbar) * g.alpha * dx * dx + g.pt * dx + g.gamma;
  return reconstruct_amplitude(action, consts);
}

// Analytic psi(x,t) for a Gaussian packet in harmonic/free potentials.
inline cplx thawed_psi_harmonic(const GaussianWavepacket& w, double omega,
                                double x, double t,
                                const PhysicalConstants& consts) {
  return thawed_psi(thawed_harmonic(w, omega, t, consts), x, consts);
}

inline cplx thawed_psi_free(const GaussianWavepacket& w, double x, double t,
                            const PhysicalConstants& consts) {
  return thawed_psi(thawed_free(w, t, consts), x, consts);
}

}  // namespace qjet
