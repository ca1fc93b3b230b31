#include "dilute/fourier.hpp"

#include <cmath>
#include <utility>

#include "dilute/model.hpp"

namespace dilute {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw ValidationError("FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Twiddles from direct cos/sin per stage keep the error at O(eps log n).
  std::vector<cplx> w(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t t = 0; t < half; ++t) {
      const double ang = -2.0 * kPi * static_cast<double>(t * stride) / static_cast<double>(n);
      w[t] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t t = 0; t < half; ++t) {
        const cplx u = a[i + t];
        const cplx v = a[i + t + half] * w[t];
        a[i + t] = u + v;
        a[i + t + half] = u - v;
      }
    }
  }
}

PeriodicSpectrum::PeriodicSpectrum(std::vector<cplx> samples) : spectrum_(std::move(samples)) {
  fft(spectrum_);
  const double inv = 1.0 / static_cast<double>(spectrum_.size());
  for (auto& c : spectrum_) c *= inv;
}

cplx PeriodicSpectrum::coefficient(long long m) const {
  const long long n = static_cast<long long>(spectrum_.size());
  long long idx = m % n;
  if (idx < 0) idx += n;
  return spectrum_[static_cast<std::size_t>(idx)];
}

std::vector<double> phase_grid(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = kPi * static_cast<double>(j) / static_cast<double>(n);
  return out;
}

} // namespace dilute
