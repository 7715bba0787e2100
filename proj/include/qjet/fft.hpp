#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qjet/types.hpp"

namespace qjet {

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
// forward() leaves the result unnormalized; inverse() divides by n, so the
// pair is unitary up to roundoff.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Fft: size must be a power of two >= 2");
    rev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
      rev_[i] = r;
    }
    w_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double ang = -2.0 * kPi * static_cast<double>(k) /
                         static_cast<double>(n);
      w_[k] = cplx(std::cos(ang), std::sin(ang));
    }
  }

  std::size_t size() const { return n_; }

  void forward(cplx* a) const { transform(a, false); }

  void inverse(cplx* a) const {
    transform(a, true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
  }

 private:
  void transform(cplx* a, bool invert) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t stride = n_ / len;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t j = 0; j < len / 2; ++j) {
          cplx w = w_[j * stride];
          if (invert) w = std::conj(w);
          const cplx u = a[i + j];
          const cplx v = a[i + j + len / 2] * w;
          a[i + j] = u + v;
          a[i + j + len / 2] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<cplx> w_;
};

}  // namespace qjet
