#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dilute/model.hpp"

namespace dilute {

/// c(xi') = min_{1 <= m <= m_range} |1 - e^{2 i m k}| e^{xi' m}.
struct DioFit {
  double xi = 0.0;
  double c = 0.0;
};

struct KClassification {
  enum class Kind { rational, generic };

  Kind kind = Kind::generic;
  Rational pq;               // valid when kind == rational
  std::vector<DioFit> dio;   // filled when kind == generic
  int m_range = 0;

  bool is_rational() const { return kind == Kind::rational; }
};

/// Partial quotients of x > 0, stopping after max_terms or once the remainder
/// is below eps.
std::vector<std::int64_t> continued_fraction(double x, int max_terms, double eps = 1e-15);

/// Rational if a continued-fraction convergent p/q of k/pi with q <= q_max
/// lies within tol/pi of k/pi; otherwise generic with fitted weak
/// Diophantine constants over |m| <= m_range.
KClassification classify_k(double k, std::int64_t q_max, double tol = 1e-9, int m_range = 1000);

/// (m, |1 - e^{2 i m k}|) for m = 1..m_max.
std::vector<std::pair<int, double>> dio_margin(double k, int m_max);

/// Exact variant for k = pi p / q: the margin is 2 |sin(pi (m p mod q) / q)|,
/// zero exactly when q divides m.
std::vector<std::pair<int, double>> dio_margin(const Rational& r, int m_max);

/// Numerator coprime to q closest to q/2 (ties to the smaller one).
std::int64_t central_numerator(std::int64_t q);

} // namespace dilute
