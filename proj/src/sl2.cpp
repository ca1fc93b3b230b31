#include "dilute/sl2.hpp"

#include <algorithm>
#include <cmath>

namespace dilute {

double Mat2::frobenius_norm() const {
  return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
}

Mat2 Mat2::inverse() const {
  const double d = det();
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double max_abs_diff(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12), std::abs(x.a21 - y.a21),
                   std::abs(x.a22 - y.a22)});
}

Mat2 transfer(const EnergyPoint& e, double v) { return {v - e.E, -1.0, 1.0, 0.0}; }

Mat2 basis_change(const EnergyPoint& e) {
  const double s = e.sin_k();
  const double r = 1.0 / std::sqrt(s);
  return {s * r, 0.0, -e.cos_k() * r, r};
}

Mat2 basis_change_inverse(const EnergyPoint& e) {
  // Adjugate of a determinant-one matrix.
  const Mat2 m = basis_change(e);
  return {m.a22, -m.a12, -m.a21, m.a11};
}

Mat2 rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

Mat2 perturbation(const EnergyPoint& e, double v) {
  return {0.0, 0.0, -v / e.sin_k(), 0.0};
}

Mat2 conjugated_transfer(const EnergyPoint& e, double v) {
  const Mat2 factored = rotation(e.k) * (Mat2::identity() + perturbation(e, v));
  const Mat2 explicit_form = basis_change(e) * transfer(e, v) * basis_change_inverse(e);
  const double scale = std::max(1.0, factored.frobenius_norm());
  if (max_abs_diff(factored, explicit_form) > 1e-11 * scale) {
    throw ConsistencyError("M T M^-1 differs from R_k (1 + P) beyond 1e-11");
  }
  return factored;
}

Mat2 hat_transfer(const EnergyPoint& e, double psi, double v) {
  return rotation(psi) * conjugated_transfer(e, v);
}

double stretch_eigenvalue(double a) { return 1.0 + a / 2.0 + std::sqrt(a + a * a / 4.0); }

double kick_strength(const EnergyPoint& e, double v) {
  const double c = v / e.sin_k();
  return c * c;
}

} // namespace dilute
