#pragma once

#include "dilute/model.hpp"

namespace dilute {

/// Real 2x2 matrix, row major.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  double det() const { return a11 * a22 - a12 * a21; }
  double trace() const { return a11 + a22; }
  double frobenius_norm() const;
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  /// Adjugate divided by the determinant.
  Mat2 inverse() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2 operator*(double s, const Mat2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Largest entrywise difference.
double max_abs_diff(const Mat2& x, const Mat2& y);

/// Transfer matrix [[v - E, -1], [1, 0]] of the tight-binding chain.
Mat2 transfer(const EnergyPoint& e, double v);

/// Basis change M = sin(k)^{-1/2} [[sin k, 0], [-cos k, 1]] that turns the
/// free transfer matrix into the rotation by k.
Mat2 basis_change(const EnergyPoint& e);
Mat2 basis_change_inverse(const EnergyPoint& e);

Mat2 rotation(double angle);

/// Nilpotent impurity kick P = -(v / sin k) [[0, 0], [1, 0]].
Mat2 perturbation(const EnergyPoint& e, double v);

/// M T M^{-1}, returned in the factorized form R_k (1 + P). Both evaluation
/// orders are computed; a mismatch above 1e-11 (relative to the entry scale)
/// throws ConsistencyError.
Mat2 conjugated_transfer(const EnergyPoint& e, double v);

/// R_psi M T M^{-1}.
Mat2 hat_transfer(const EnergyPoint& e, double psi, double v);

/// Larger eigenvalue lambda_v >= 1 of |1 + P|^2, with a = v^2 / sin^2 k.
double stretch_eigenvalue(double a);

/// a = (v / sin k)^2.
double kick_strength(const EnergyPoint& e, double v);

} // namespace dilute
