#include <doctest.h>

#include <cmath>

#include "dilute/lyapunov.hpp"
#include "dilute/random.hpp"
#include "dilute/sl2.hpp"

using namespace dilute;

namespace {

const double kGolden = kPi * (std::sqrt(5.0) - 1.0) / 2.0;

// Midpoint rule for the phase average of log |(1 + P) e_theta|, written from
// the kick matrix directly.
double uniform_phase_average(const EnergyPoint& e, const DisorderSpec& atoms, int n = 200'000) {
  double total = 0.0;
  for (const auto& a : atoms.atoms) {
    const Mat2 kick = Mat2::identity() + perturbation(e, a.value);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = kPi * (j + 0.5) / n;
      const double x = kick.a11 * std::cos(t) + kick.a12 * std::sin(t);
      const double y = kick.a21 * std::cos(t) + kick.a22 * std::sin(t);
      s += 0.5 * std::log(x * x + y * y);
    }
    total += a.weight * s / n;
  }
  return total;
}

McOptions mc(std::uint64_t n, std::uint64_t seed, std::uint32_t replicas = 1) {
  McOptions o;
  o.n_steps = n;
  o.burn_in = 1000;
  o.seed = seed;
  o.replicas = replicas;
  return o;
}

DisorderSpec delta(double v, double rho = 1.0) { return make_disorder({{v, 1.0}}, rho); }

} // namespace

TEST_CASE("closed form equals the uniform phase average") {
  const auto e0 = energy_from_E(0.0);
  CHECK(gamma_hat_infinity(e0, delta(2.0)).gamma.value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(gamma_hat_infinity(e0, delta(1.0)).gamma.value == doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-14));
  Rng rng(RngContract{41, 0});
  for (int i = 0; i < 10; ++i) {
    const auto e = energy_from_k(0.3 + 2.5 * rng.uniform());
    const auto d = make_disorder({{-3 + 6 * rng.uniform(), 1.0}, {-3 + 6 * rng.uniform(), 2.0}}, 1.0);
    CHECK(gamma_hat_infinity(e, d).gamma.value == doctest::Approx(uniform_phase_average(e, d)).epsilon(1e-10));
  }
}

TEST_CASE("closed form properties") {
  CHECK(gamma_hat_infinity(energy_from_k(1.0), delta(0.0)).gamma.value == 0.0);
  Rng rng(RngContract{42, 0});
  for (int i = 0; i < 2000; ++i) {
    const double sk = 1e-3 + (1.0 - 1e-3) * rng.uniform();
    const auto e = energy_from_k(rng.uniform() < 0.5 ? std::asin(sk) : kPi - std::asin(sk));
    const double v = (rng.uniform() < 0.5 ? -1 : 1) * std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    const auto d = delta(v);
    const double a = gamma_hat_infinity_log_form(e, d);
    const double b = gamma_hat_infinity_lambda_form(e, d);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
    CHECK(a > 0.0);
  }
}

TEST_CASE("Fourier coefficients of the mean log-stretch") {
  const auto e = energy_from_k(1.1);
  const auto d = parse_disorder("2:1,-1:1", 1.0);
  const auto a = fourier_a(e, d, 16, 256);
  CHECK(a.at(0).imag() == 0.0);
  CHECK(a.at(0).real() == doctest::Approx(gamma_hat_infinity(e, d).gamma.value).epsilon(1e-12));
  for (int m = 1; m <= 16; ++m) CHECK(std::abs(a.at(-m) - std::conj(a.at(m))) < 1e-12);

  const auto fine = fourier_a(e, d, 16, 512);
  for (int m = -16; m <= 16; ++m) CHECK(std::abs(fine.at(m) - a.at(m)) < 1e-10);

  const auto fit = fit_decay(fourier_a(e, d, 32, 1024));
  REQUIRE(fit);
  CHECK(fit->xi > 0.0);
  const auto big = fourier_a(e, d, 32, 1024);
  for (int m = -32; m <= 32; ++m) CHECK(std::abs(big.at(m)) <= fit->c * std::exp(-fit->xi * std::abs(m)) * (1 + 1e-12));

  const auto zero = fourier_a(e, delta(0.0), 4, 64);
  for (int m = -4; m <= 4; ++m) CHECK(zero.at(m) == cplx(0.0));

  CHECK_THROWS_AS(fourier_a(e, d, 16, 100), ValidationError);
  CHECK_THROWS_AS(fourier_a(e, d, 16, 64), ValidationError);
}

TEST_CASE("second Fourier coefficient against direct quadrature") {
  const auto e = energy_from_k(0.8);
  const auto d = delta(1.3);
  const auto a = fourier_a(e, d, 4, 1024);
  cplx direct = 0.0;
  const int n = 100'000;
  for (int j = 0; j < n; ++j) {
    const double t = kPi * (j + 0.5) / n;
    direct += step_log_norm(e, 1.3, t) * std::exp(cplx(0, -4 * t));
  }
  direct /= double(n);
  CHECK(std::abs(a.at(2) - direct) < 1e-9);
}

TEST_CASE("Monte Carlo exponent vanishes without disorder") {
  const auto e = energy_from_k(kGolden);
  const auto tel = gamma_mc_telescopic(e, delta(2.0, 0.0), mc(20'000, 1));
  CHECK(tel.gamma.value == 0.0);
  CHECK(tel.gamma.std_error == 0.0);
  CHECK(gamma_mc_telescopic(e, delta(0.0, 0.4), mc(20'000, 1)).gamma.value == 0.0);
  const auto mat = gamma_mc_matrix_product(e, delta(2.0, 0.0), 20, mc(100'000, 1));
  CHECK(std::abs(mat.gamma.value) < 1e-4);
  CHECK_THROWS_AS(gamma_mc_telescopic(e, delta(2.0, 0.1), mc(5000, 1)), ValidationError);
  CHECK_THROWS_AS(gamma_mc_matrix_product(e, delta(2.0, 0.1), 0, mc(20'000, 1)), ValidationError);
  CHECK_THROWS_AS(gamma_mc_matrix_product(e, delta(2.0, 0.1), 51, mc(20'000, 1)), ValidationError);
}

TEST_CASE("matrix product overflow is reported") {
  CHECK_THROWS_AS(gamma_mc_matrix_product(energy_from_k(1.0), delta(1e120, 1.0), 50, mc(20'000, 1)),
                  NumericalError);
}

TEST_CASE("estimators agree and do not depend on the initial phase") {
  const auto e = energy_from_k(2.0);
  const auto d = parse_disorder("1.5:1,-0.5:1", 0.3);
  const auto opt = mc(200'000, 7, 2);
  const auto a = gamma_mc_telescopic(e, d, opt).gamma;
  const auto b = gamma_mc_matrix_product(e, d, 20, opt).gamma;
  const auto b1 = gamma_mc_matrix_product(e, d, 1, opt).gamma;
  CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
  CHECK(std::abs(b1.value - b.value) <= b.std_error);
  CHECK(a.value > 0.0);

  std::vector<EstimateWithError> g;
  std::uint64_t seed = 100;
  for (double theta0 : {0.0, 0.7, 2.0}) {
    auto o = mc(200'000, seed++);
    o.theta0 = theta0;
    g.push_back(gamma_mc_telescopic(e, d, o).gamma);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      CHECK(std::abs(g[i].value - g[j].value) <= 3 * std::hypot(g[i].std_error, g[j].std_error));
    }
  }
}

TEST_CASE("replica pooling is independent of the thread count") {
  const auto e = energy_from_k(1.4);
  const auto d = delta(1.0, 0.2);
  auto opt = mc(20'000, 3, 4);
  const auto one = gamma_mc_telescopic(e, d, opt).gamma;
  opt.threads = 3;
  const auto three = gamma_mc_telescopic(e, d, opt).gamma;
  CHECK(one.value == three.value);
  CHECK(one.std_error == three.std_error);
}

TEST_CASE("dilute Diophantine exponent is near rho times the closed form") {
  const auto e = energy_from_k(kGolden);
  const auto g = gamma_mc_telescopic(e, delta(2.0, 0.05), mc(1'000'000, 5)).gamma;
  const double inf = gamma_hat_infinity(e, delta(2.0)).gamma.value;
  CHECK(inf == doctest::Approx(0.38300501277903254).epsilon(1e-12));
  CHECK(std::abs(g.value / 0.05 - inf) < 0.1 * inf);
}

TEST_CASE("auxiliary chain exponents") {
  const auto e = energy_from_k(kPi / 2);
  const auto d = delta(2.0);
  const auto uni = gamma_hat_mc(e, d, PsiLaw::uniform(), mc(400'000, 9)).gamma;
  CHECK(std::abs(uni.value - 0.5 * std::log(2.0)) <= 3 * uni.std_error);

  SpectralOptions so;
  so.n_max = 32;
  const auto spec = gamma_hat_q_spectral(e, d, 2, so);
  const auto hat = gamma_hat_q_mc(e, d, 2, mc(400'000, 10)).gamma;
  CHECK(std::abs(hat.value - spec.value) <= 3 * hat.std_error + spec.truncation_error);
  CHECK(spec.value > 0.5 * std::log(2.0) + 0.1);
  CHECK(spec.rcond > 0.0);
  CHECK(spec.truncation_error >= spec.discarded_term);
  // Independent prototype value (n_max = 64).
  so.n_max = 64;
  CHECK(gamma_hat_q_spectral(e, d, 2, so).value == doctest::Approx(0.51393).epsilon(2e-5));

  so.n_max = 0;
  CHECK(gamma_hat_q_spectral(e, d, 2, so).value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
  so.n_max = 16;
  CHECK(gamma_hat_q_spectral(e, delta(0.0), 2, so).value == 0.0);
  CHECK(gamma_hat_q_mc(e, delta(0.0), 2, mc(20'000, 1)).gamma.value == 0.0);
}

TEST_CASE("anomaly is small at large q") {
  const auto d = delta(2.0);
  const Rational r{5, 12};
  const auto e = energy_from_rational(r);
  SpectralOptions so;
  so.n_max = 16;
  const auto spec = gamma_hat_q_spectral(e, d, 12, so);
  CHECK(spec.value > 0.0);
  CHECK(std::abs(spec.value - gamma_hat_infinity(e, d).gamma.value) < 1e-2);
}
