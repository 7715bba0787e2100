#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "qjet/types.hpp"

namespace qjet {

// Analytic potential families. All are entire functions, so evaluation at
// complex x (needed by the complex-trajectory strategies) is unambiguous.

struct Free {};

struct Harmonic {
  double omega = 1.0;
  double mass = 1.0;  // V = (1/2) mass omega^2 x^2
};

struct Morse {
  double depth = 1.0;  // A
  double range = 1.0;  // beta: V = A [ e^{-2 beta x} - 2 e^{-beta x} ]
};

struct Polynomial {
  std::vector<double> coefficients;  // V = sum_k c_k x^k
};

using Potential = std::variant<Free, Harmonic, Morse, Polynomial>;

namespace detail {

inline cplx exp_scaled(double a, cplx x) {
  // e^{a x}, avoiding the complex exp when x is on the real axis
  if (x.imag() == 0.0) return cplx(std::exp(a * x.real()), 0.0);
  return std::exp(a * x);
}

// Writes V_0..V_nmax at x into out. Shared exponentials/powers are computed
// once, which is what the hierarchy RHS wants in its inner loop.
inline void potential_derivatives(const Potential& p, cplx x, int nmax,
                                  std::span<cplx> out) {
  if (const auto* h = std::get_if<Harmonic>(&p)) {
    const double k = h->mass * h->omega * h->omega;
    for (int n = 0; n <= nmax; ++n) out[n] = cplx{};
    out[0] = 0.5 * k * x * x;
    if (nmax >= 1) out[1] = k * x;
    if (nmax >= 2) out[2] = cplx(k, 0.0);
    return;
  }
  if (const auto* m = std::get_if<Morse>(&p)) {
    const cplx w1 = exp_scaled(-m->range, x);
    const cplx w2 = w1 * w1;
    double q1 = 1.0;  // (-beta)^n
    double q2 = 1.0;  // (-2 beta)^n
    for (int n = 0; n <= nmax; ++n) {
      out[n] = m->depth * (q2 * w2 - 2.0 * q1 * w1);
      q1 *= -m->range;
      q2 *= -2.0 * m->range;
    }
    return;
  }
  if (const auto* poly = std::get_if<Polynomial>(&p)) {
    const auto& c = poly->coefficients;
    const int deg = static_cast<int>(c.size()) - 1;
    for (int n = 0; n <= nmax; ++n) {
      cplx acc{};
      for (int k = deg; k >= n; --k) {
        double fall = 1.0;
        for (int i = 0; i < n; ++i) fall *= static_cast<double>(k - i);
        acc = acc * x + fall * c[static_cast<std::size_t>(k)];
      }
      out[n] = acc;
    }
    return;
  }
  for (int n = 0; n <= nmax; ++n) out[n] = cplx{};  // Free
}

}  // namespace detail

inline cplx eval_derivative(const Potential& p, cplx x, int n) {
  if (const auto* h = std::get_if<Harmonic>(&p)) {
    const double k = h->mass * h->omega * h->omega;
    if (n == 0) return 0.5 * k * x * x;
    if (n == 1) return k * x;
    return n == 2 ? cplx(k, 0.0) : cplx{};
  }
  if (const auto* m = std::get_if<Morse>(&p)) {
    const cplx w1 = detail::exp_scaled(-m->range, x);
    double q1 = 1.0, q2 = 1.0;
    for (int i = 0; i < n; ++i) {
      q1 *= -m->range;
      q2 *= -2.0 * m->range;
    }
    return m->depth * (q2 * w1 * w1 - 2.0 * q1 * w1);
  }
  if (const auto* poly = std::get_if<Polynomial>(&p)) {
    const auto& c = poly->coefficients;
    cplx acc{};
    for (int k = static_cast<int>(c.size()) - 1; k >= n; --k) {
      double fall = 1.0;
      for (int i = 0; i < n; ++i) fall *= static_cast<double>(k - i);
      acc = acc * x + fall * c[static_cast<std::size_t>(k)];
    }
    return acc;
  }
  return cplx{};
}

}  // namespace qjet
