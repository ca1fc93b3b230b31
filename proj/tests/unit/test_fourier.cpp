#include <doctest.h>

#include <cmath>
#include <complex>

#include "dilute/fourier.hpp"
#include "dilute/model.hpp"
#include "dilute/random.hpp"

using namespace dilute;

TEST_CASE("fft matches the naive DFT") {
  Rng rng(RngContract{31, 0});
  for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
    std::vector<cplx> x(n);
    for (auto& z : x) z = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    auto y = x;
    fft(y);
    for (std::size_t f = 0; f < n; ++f) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += x[j] * std::polar(1.0, -2.0 * kPi * double(f * j % n) / double(n));
      CHECK(std::abs(y[f] - s) < 1e-12 * double(n));
    }
  }
  std::vector<cplx> bad(6);
  CHECK_THROWS_AS(fft(bad), ValidationError);
}

TEST_CASE("periodic spectrum of a trigonometric polynomial") {
  const std::size_t n = 32;
  const auto grid = phase_grid(n);
  REQUIRE(grid.size() == n);
  CHECK(grid[1] == doctest::Approx(kPi / n));
  std::vector<cplx> samples(n);
  const cplx c3{0.25, -0.5};
  for (std::size_t j = 0; j < n; ++j) {
    const double t = grid[j];
    samples[j] = 1.5 + c3 * std::exp(cplx(0, 6 * t)) + std::conj(c3) * std::exp(cplx(0, -6 * t)) +
                 0.1 * std::exp(cplx(0, -2 * t));
  }
  const PeriodicSpectrum spec(samples);
  CHECK(std::abs(spec.coefficient(0) - 1.5) < 1e-14);
  CHECK(std::abs(spec.coefficient(3) - c3) < 1e-14);
  CHECK(std::abs(spec.coefficient(-3) - std::conj(c3)) < 1e-14);
  CHECK(std::abs(spec.coefficient(-1) - 0.1) < 1e-14);
  CHECK(std::abs(spec.coefficient(1)) < 1e-14);
  CHECK(std::abs(spec.coefficient(5)) < 1e-14);
}

TEST_CASE("powers of two") {
  CHECK(is_power_of_two(1));
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(0));
  CHECK_FALSE(is_power_of_two(12));
  CHECK(next_power_of_two(1) == 1);
  CHECK(next_power_of_two(5) == 8);
  CHECK(next_power_of_two(64) == 64);
}
