#pragma once

#include <array>
#include <optional>

#include "qjet/potential.hpp"
#include "qjet/types.hpp"

namespace qjet {

// Truncation orders up to 32 are supported; binomials up to that order are
// exactly representable in double.
inline constexpr int kMaxJetOrder = 32;

namespace detail {

struct BinomialTable {
  std::array<std::array<double, kMaxJetOrder + 1>, kMaxJetOrder + 1> c{};
  constexpr BinomialTable() {
    for (int n = 0; n <= kMaxJetOrder; ++n) {
      c[n][0] = 1.0;
      for (int j = 1; j <= n; ++j)
        c[n][j] = c[n - 1][j - 1] + (j <= n - 1 ? c[n - 1][j] : 0.0);
    }
  }
};

inline constexpr BinomialTable kBinomial{};

}  // namespace detail

inline double binomial(int n, int j) { return detail::kBinomial.c[n][j]; }

// Jet of spatial derivatives S_0..S_order of the complex action along one
// trajectory. Entries above `order` are exactly zero (the closure).
struct PhaseJet {
  int order = 0;
  std::array<cplx, kMaxJetOrder + 1> values{};

  cplx s(int n) const {
    return n <= order ? values[static_cast<std::size_t>(n)] : cplx{};
  }
  cplx& operator[](int n) { return values[static_cast<std::size_t>(n)]; }
  cplx operator[](int n) const { return values[static_cast<std::size_t>(n)]; }
};

// (S_1^2)_n = sum_j C(n,j) S_{j+1} S_{n-j+1}, indices past the order read 0.
inline cplx leibniz_square(const PhaseJet& jet, int n) {
  cplx acc{};
  for (int j = 0; j <= n; ++j) {
    const cplx a = jet.s(j + 1);
    const cplx b = jet.s(n - j + 1);
    if (a != cplx{} && b != cplx{}) acc += binomial(n, j) * a * b;
  }
  return acc;
}

struct TrajectoryState {
  double t = 0.0;
  cplx x{};
  std::optional<cplx> v_aux{};  // present only for the RealClassical strategy
  PhaseJet jet{};
};

inline void axpy(TrajectoryState& y, double a, const TrajectoryState& d) {
  y.x += a * d.x;
  if (y.v_aux && d.v_aux) *y.v_aux += a * *d.v_aux;
  for (int n = 0; n <= y.jet.order; ++n) y.jet[n] += a * d.jet.s(n);
}

inline double norm_inf(const TrajectoryState& y) {
  double m = abs_max(y.x);
  if (y.v_aux) m = std::max(m, abs_max(*y.v_aux));
  for (int n = 0; n <= y.jet.order; ++n) m = std::max(m, abs_max(y.jet[n]));
  return m;
}

inline bool all_finite(const TrajectoryState& y) {
  if (!is_finite(y.x)) return false;
  if (y.v_aux && !is_finite(*y.v_aux)) return false;
  for (int n = 0; n <= y.jet.order; ++n)
    if (!is_finite(y.jet[n])) return false;
  return true;
}

namespace detail {

// dS_n/dt = -(1/2m)(S_1^2)_n - V_n + v S_{n+1} + (i hbar / 2m) S_{n+2}
inline PhaseJet jet_rhs(const PhaseJet& jet, cplx v, std::span<const cplx> vn,
                        const PhysicalConstants& pc) {
  PhaseJet d;
  d.order = jet.order;
  const double inv2m = 1.0 / (2.0 * pc.mass);
  const cplx diff = cplx(0.0, pc.hbar * inv2m);
  for (int n = 0; n <= jet.order; ++n)
    d[n] = -inv2m * leibniz_square(jet, n) - vn[static_cast<std::size_t>(n)] +
           v * jet.s(n + 1) + diff * jet.s(n + 2);
  return d;
}

}  // namespace detail

inline PhaseJet hierarchy_rhs(const TrajectoryState& state, cplx v,
                              const Potential& potential,
                              const PhysicalConstants& consts) {
  std::array<cplx, kMaxJetOrder + 1> vn;
  detail::potential_derivatives(potential, state.x, state.jet.order, vn);
  return detail::jet_rhs(state.jet, v, vn, consts);
}

// psi = exp(i S_0 / hbar)
inline cplx reconstruct_amplitude(cplx s0, const PhysicalConstants& consts) {
  return std::exp(cplx(0.0, 1.0) * s0 / consts.hbar);
}

}  // namespace qjet
