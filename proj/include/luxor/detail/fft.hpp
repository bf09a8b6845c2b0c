#pragma once

// Iterative radix-2 FFT and the displaced real linear convolution built on
// it. Used for the |z|^alpha-weighted level convolutions, whose cell weights
// admit no prefix-sum shortcut.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace luxor::detail {

inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_radix2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  constexpr double pi = 3.141592653589793238462643383279502884;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> step(std::cos(ang), std::sin(ang));
    for (std::size_t base = 0; base < n; base += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[base + j];
        const std::complex<double> v = a[base + j + len / 2] * w;
        a[base + j] = u + v;
        a[base + j + len / 2] = u - v;
        w *= step;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

// out[i] = sum_d w[d + center] f[i - d] for i = 0..f.size()-1, i.e. linear
// convolution with a weight vector carrying displacement indices
// d = -center, ..., w.size()-1-center; f is treated as zero outside its range.
inline std::vector<double> convolve_displaced(const std::vector<double>& f,
                                              const std::vector<double>& w, std::size_t center) {
  if (w.empty() || center >= w.size())
    throw std::invalid_argument("convolve_displaced: center outside the weight vector");
  const std::size_t n = f.size(), m = w.size();
  std::size_t p = 1;
  while (p < n + m) p <<= 1;
  std::vector<std::complex<double>> A(p), B(p);
  for (std::size_t i = 0; i < n; ++i) A[i] = f[i];
  for (std::size_t j = 0; j < m; ++j) B[j] = w[j];
  fft_radix2(A, false);
  fft_radix2(B, false);
  for (std::size_t i = 0; i < p; ++i) A[i] *= B[i];
  fft_radix2(A, true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = A[i + center].real();
  return out;
}

}  // namespace luxor::detail
