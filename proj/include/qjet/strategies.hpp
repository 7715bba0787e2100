#pragma once

#include <array>
#include <stdexcept>

#include "qjet/hierarchy.hpp"
#include "qjet/potential.hpp"

namespace qjet {

// The four velocity-field choices. Same hierarchy, different v; only
// RealClassical carries extra state (an independently evolving velocity).
enum class VelocityStrategy { Zevca, Bomca, Dpm, RealClassical };

inline const char* strategy_name(VelocityStrategy s) {
  switch (s) {
    case VelocityStrategy::Zevca: return "zevca";
    case VelocityStrategy::Bomca: return "bomca";
    case VelocityStrategy::Dpm: return "dpm";
    case VelocityStrategy::RealClassical: return "realclassical";
  }
  return "?";
}

inline cplx velocity_of(VelocityStrategy s, const TrajectoryState& state,
                        const PhysicalConstants& consts) {
  switch (s) {
    case VelocityStrategy::Zevca:
      return cplx{};
    case VelocityStrategy::Bomca:
      return state.jet.s(1) / consts.mass;
    case VelocityStrategy::Dpm:
      return cplx(state.jet.s(1).real() / consts.mass, 0.0);
    case VelocityStrategy::RealClassical:
      if (!state.v_aux)
        throw std::logic_error("RealClassical state is missing v_aux");
      return *state.v_aux;
  }
  return cplx{};
}

inline TrajectoryState full_rhs(VelocityStrategy s,
                                const TrajectoryState& state,
                                const Potential& potential,
                                const PhysicalConstants& consts) {
  const cplx v = velocity_of(s, state, consts);
  std::array<cplx, kMaxJetOrder + 1> vn;
  detail::potential_derivatives(potential, state.x, state.jet.order, vn);

  TrajectoryState d;
  d.t = state.t;
  d.x = v;
  d.jet = detail::jet_rhs(state.jet, v, vn, consts);
  if (s == VelocityStrategy::RealClassical) {
    const cplx v1 =
        state.jet.order >= 1 ? vn[1] : eval_derivative(potential, state.x, 1);
    d.v_aux = -v1 / consts.mass;
  }
  return d;
}

// N=2 DPM in split real variables, S_n = s_n - i hbar c_n.
struct DpmSplitState {
  double t = 0.0;
  double x = 0.0;
  std::array<double, 3> s{};
  std::array<double, 3> c{};
};

inline void axpy(DpmSplitState& y, double a, const DpmSplitState& d) {
  y.x += a * d.x;
  for (int n = 0; n < 3; ++n) {
    y.s[n] += a * d.s[n];
    y.c[n] += a * d.c[n];
  }
}

inline double norm_inf(const DpmSplitState& y) {
  double m = std::abs(y.x);
  for (int n = 0; n < 3; ++n)
    m = std::max({m, std::abs(y.s[n]), std::abs(y.c[n])});
  return m;
}

inline bool all_finite(const DpmSplitState& y) {
  if (!is_finite(y.x)) return false;
  for (int n = 0; n < 3; ++n)
    if (!is_finite(y.s[n]) || !is_finite(y.c[n])) return false;
  return true;
}

inline DpmSplitState dpm_split_rhs(const DpmSplitState& y,
                                   const Potential& potential,
                                   const PhysicalConstants& consts) {
  const double m = consts.mass;
  const double h2 = consts.hbar * consts.hbar;
  std::array<cplx, 3> vn;
  detail::potential_derivatives(potential, cplx(y.x, 0.0), 2, vn);
  const double v0 = vn[0].real(), v1 = vn[1].real(), v2 = vn[2].real();

  DpmSplitState d;
  d.t = y.t;
  d.x = y.s[1] / m;
  d.s[0] = y.s[1] * y.s[1] / (2 * m) - v0 +
           h2 / (2 * m) * (y.c[2] + y.c[1] * y.c[1]);
  d.s[1] = -v1 + h2 * y.c[1] * y.c[2] / m;
  d.s[2] = -y.s[2] * y.s[2] / m + h2 * y.c[2] * y.c[2] / m - v2;
  d.c[0] = -y.s[2] / (2 * m);
  d.c[1] = -y.c[1] * y.s[2] / m;
  d.c[2] = -2.0 * y.c[2] * y.s[2] / m;
  return d;
}

inline TrajectoryState split_to_jet(const DpmSplitState& y,
                                    const PhysicalConstants& consts) {
  TrajectoryState st;
  st.t = y.t;
  st.x = cplx(y.x, 0.0);
  st.jet.order = 2;
  for (int n = 0; n < 3; ++n)
    st.jet[n] = cplx(y.s[n], -consts.hbar * y.c[n]);
  return st;
}

// Inverse of split_to_jet; the DPM trajectory is real, so only Re x is used.
inline DpmSplitState jet_to_split(const TrajectoryState& st,
                                  const PhysicalConstants& consts) {
  DpmSplitState y;
  y.t = st.t;
  y.x = st.x.real();
  for (int n = 0; n < 3; ++n) {
    y.s[n] = st.jet.s(n).real();
    y.c[n] = -st.jet.s(n).imag() / consts.hbar;
  }
  return y;
}

}  // namespace qjet
