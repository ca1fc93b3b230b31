#include <doctest.h>

#include <cmath>

#include "dilute/random.hpp"
#include "dilute/sl2.hpp"

using namespace dilute;

namespace {

// Larger eigenvalue of a symmetric 2x2 matrix from its characteristic polynomial.
double sym_top_eigenvalue(const Mat2& s) {
  const double m = 0.5 * (s.a11 + s.a22);
  const double d = 0.5 * (s.a11 - s.a22);
  return m + std::hypot(d, s.a12);
}

} // namespace

TEST_CASE("transfer matrices are unimodular") {
  Rng rng(RngContract{11, 0});
  for (int i = 0; i < 50; ++i) {
    const auto e = energy_from_k(0.1 + 2.9 * rng.uniform());
    const double v = -4.0 + 8.0 * rng.uniform();
    CHECK(transfer(e, v).det() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(conjugated_transfer(e, v).det() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(basis_change(e).det() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs_diff(basis_change(e) * basis_change_inverse(e), Mat2::identity()) < 1e-14);
  }
}

TEST_CASE("free dynamics is a rotation in the rotated basis") {
  for (double k : {0.3, kPi / 3, kPi / 2, 2.5}) {
    const auto e = energy_from_k(k);
    const Mat2 direct = basis_change(e) * transfer(e, 0.0) * basis_change_inverse(e);
    CHECK(max_abs_diff(direct, rotation(k)) < 1e-14);
    CHECK(max_abs_diff(conjugated_transfer(e, 0.0), rotation(k)) < 1e-14);
  }
}

TEST_CASE("conjugated transfer equals R_k (1 + P) computed by hand") {
  Rng rng(RngContract{12, 0});
  for (int i = 0; i < 50; ++i) {
    const auto e = energy_from_k(0.05 + 3.0 * rng.uniform());
    const double v = -3.0 + 6.0 * rng.uniform();
    const double s = std::sin(e.k), c = std::cos(e.k);
    // R_k (1 + P) with P = -(v / s) [[0, 0], [1, 0]], multiplied out.
    const double t = -v / s;
    const Mat2 expected{c - s * t, -s, s + c * t, c};
    const Mat2 direct = basis_change(e) * transfer(e, v) * basis_change_inverse(e);
    CHECK(max_abs_diff(conjugated_transfer(e, v), expected) < 1e-12 * (1 + std::abs(t)));
    CHECK(max_abs_diff(direct, expected) < 1e-12 * (1 + std::abs(t)));
  }
}

TEST_CASE("band centre: M is the identity") {
  const auto e = energy_from_k(kPi / 2);
  const Mat2 got = conjugated_transfer(e, 2.0);
  CHECK(max_abs_diff(got, Mat2{2.0, -1.0, 1.0, 0.0}) < 1e-15);
  CHECK(max_abs_diff(got, transfer(e, 2.0)) < 1e-15);
}

TEST_CASE("stretch eigenvalue matches the symmetric eigensolver") {
  Rng rng(RngContract{13, 0});
  for (int i = 0; i < 50; ++i) {
    const auto e = energy_from_k(0.1 + 2.9 * rng.uniform());
    const double v = -3.0 + 6.0 * rng.uniform();
    const Mat2 kick = Mat2::identity() + perturbation(e, v);
    const double lam = stretch_eigenvalue(kick_strength(e, v));
    CHECK(lam == doctest::Approx(sym_top_eigenvalue(kick.transpose() * kick)).epsilon(1e-12));
    CHECK(lam >= 1.0);
  }
  CHECK(stretch_eigenvalue(4.0) == doctest::Approx(3.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(stretch_eigenvalue(1.0) == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  CHECK(stretch_eigenvalue(0.0) == 1.0);
}

TEST_CASE("hat transfer adds a rotation") {
  const auto e = energy_from_k(1.1);
  const Mat2 h = hat_transfer(e, 0.4, 1.5);
  CHECK(max_abs_diff(h, rotation(0.4) * conjugated_transfer(e, 1.5)) < 1e-14);
  CHECK(max_abs_diff(rotation(0.3) * rotation(0.4), rotation(0.7)) < 1e-15);
}

TEST_CASE("matrix helpers") {
  const Mat2 a{1.0, 2.0, 3.0, 4.0};
  CHECK(a.det() == -2.0);
  CHECK(a.trace() == 5.0);
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(30.0)));
  CHECK(max_abs_diff(a * a.inverse(), Mat2::identity()) < 1e-15);
  CHECK(a.transpose() == Mat2{1.0, 3.0, 2.0, 4.0});
}
