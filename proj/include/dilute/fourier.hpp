#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dilute {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// In-place forward DFT, X_f = sum_j x_j exp(-2 pi i f j / n), n a power of two.
void fft(std::vector<cplx>& data);

/// Samples of a pi-periodic function on theta_j = pi j / n, turned into the
/// coefficients c_m of sum_m c_m e^{2 i m theta}: c_m = spectrum[m mod n] / n.
class PeriodicSpectrum {
public:
  explicit PeriodicSpectrum(std::vector<cplx> samples);

  cplx coefficient(long long m) const;
  std::size_t size() const { return spectrum_.size(); }

private:
  std::vector<cplx> spectrum_;
};

/// theta_j = pi j / n, j = 0..n-1.
std::vector<double> phase_grid(std::size_t n);

} // namespace dilute
