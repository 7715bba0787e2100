#pragma once

#include <stdexcept>
#include <vector>

#include "qjet/hierarchy.hpp"
#include "qjet/strategies.hpp"

namespace qjet {

// psi(x,0) = exp(i S(x,0)/hbar) with
// S(x,0) = i hbar alpha0 (x-xc)^2 + pc (x-xc) + gamma0.
struct GaussianWavepacket {
  cplx alpha0 = cplx(0.5, 0.0);
  double xc = 0.0;
  double pc = 0.0;
  cplx gamma0{};

  // gamma0 that normalizes the packet: -(i hbar/4) ln(2 alpha0 / pi)
  static cplx default_gamma0(cplx alpha0, const PhysicalConstants& consts) {
    return cplx(0.0, -consts.hbar / 4.0) * std::log(2.0 * alpha0 / kPi);
  }

  static GaussianWavepacket make(cplx alpha0, double xc, double pc,
                                 const PhysicalConstants& consts) {
    if (alpha0.real() <= 0.0)
      throw std::invalid_argument("wavepacket: Re(alpha0) must be > 0");
    return {alpha0, xc, pc, default_gamma0(alpha0, consts)};
  }
};

inline cplx initial_action(const GaussianWavepacket& w, cplx x,
                           const PhysicalConstants& consts) {
  const cplx dx = x - w.xc;
  return cplx(0.0, consts.hbar) * w.alpha0 * dx * dx + w.pc * dx + w.gamma0;
}

inline cplx initial_psi(const GaussianWavepacket& w, cplx x,
                        const PhysicalConstants& consts) {
  return reconstruct_amplitude(initial_action(w, x, consts), consts);
}

// S_n(x0,0) = -i hbar d^n ln psi / dx^n; closed form for the Gaussian.
inline PhaseJet init_jet(const GaussianWavepacket& w, cplx x0, int N,
                         const PhysicalConstants& consts) {
  if (N < 0 || N > kMaxJetOrder)
    throw std::invalid_argument("init_jet: truncation order out of range");
  PhaseJet jet;
  jet.order = N;
  const cplx iha = cplx(0.0, consts.hbar) * w.alpha0;
  jet[0] = initial_action(w, x0, consts);
  if (N >= 1) jet[1] = 2.0 * iha * (x0 - w.xc) + w.pc;
  if (N >= 2) jet[2] = 2.0 * iha;
  return jet;
}

// Initial velocity for the RealClassical strategy: Im(S_1)/m.
inline double init_velocity_real(const GaussianWavepacket& w, double x0,
                                 const PhysicalConstants& consts) {
  const cplx s1 = init_jet(w, cplx(x0, 0.0), 1, consts).s(1);
  return s1.imag() / consts.mass;
}

// ln psi(x,0) = sum_k a_k x^k: the non-Gaussian family with a closed-form jet.
struct ExpPolyWavepacket {
  std::vector<cplx> log_coefficients;
};

inline cplx initial_psi(const ExpPolyWavepacket& w, cplx x) {
  cplx acc{};
  for (std::size_t k = w.log_coefficients.size(); k-- > 0;)
    acc = acc * x + w.log_coefficients[k];
  return std::exp(acc);
}

inline PhaseJet init_jet(const ExpPolyWavepacket& w, cplx x0, int N,
                         const PhysicalConstants& consts) {
  if (N < 0 || N > kMaxJetOrder)
    throw std::invalid_argument("init_jet: truncation order out of range");
  PhaseJet jet;
  jet.order = N;
  const auto& a = w.log_coefficients;
  const cplx mih = cplx(0.0, -consts.hbar);
  for (int n = 0; n <= N; ++n) {
    cplx acc{};
    for (int k = static_cast<int>(a.size()) - 1; k >= n; --k) {
      double fall = 1.0;
      for (int i = 0; i < n; ++i) fall *= static_cast<double>(k - i);
      acc = acc * x0 + fall * a[static_cast<std::size_t>(k)];
    }
    jet[n] = mih * acc;
  }
  return jet;
}

// Assembled initial state for a given strategy.
inline TrajectoryState init_state(const GaussianWavepacket& w,
                                  VelocityStrategy strategy, cplx x0, int N,
                                  const PhysicalConstants& consts) {
  TrajectoryState st;
  st.x = x0;
  st.jet = init_jet(w, x0, N, consts);
  if (strategy == VelocityStrategy::RealClassical)
    st.v_aux = cplx(init_velocity_real(w, x0.real(), consts), 0.0);
  return st;
}

}  // namespace qjet
