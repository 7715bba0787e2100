#pragma once

#include <cmath>
#include <complex>

namespace qjet {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Atomic units (m = hbar = 1) are the default everywhere, but both
// constants stay explicit parameters of every physics routine.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
};

inline bool is_finite(double a) { return std::isfinite(a); }
inline bool is_finite(const cplx& a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

inline double abs_max(const cplx& a) {
  return std::max(std::abs(a.real()), std::abs(a.imag()));
}

}  // namespace qjet
