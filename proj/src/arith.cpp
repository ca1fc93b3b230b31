#include "dilute/arith.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace dilute {

std::vector<std::int64_t> continued_fraction(double x, int max_terms, double eps) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("continued fraction needs x > 0");
  std::vector<std::int64_t> terms;
  for (int i = 0; i < max_terms; ++i) {
    const double a = std::floor(x);
    if (a > 9.0e15) break;
    terms.push_back(static_cast<std::int64_t>(a));
    const double frac = x - a;
    if (frac < eps) break;
    x = 1.0 / frac;
  }
  return terms;
}

KClassification classify_k(double k, std::int64_t q_max, double tol, int m_range) {
  if (!(k > 0.0 && k < kPi)) throw DomainError("k must lie in (0, pi)");
  if (q_max < 2) throw ValidationError("q_max must be at least 2");
  if (tol < 0.0) throw ValidationError("tolerance must be non-negative");
  KClassification out;
  const double x = k / kPi;
  const double thresh = tol / kPi;
  // Convergents h_n / q_n; (h, q) holds index n - 1 and (h_prev, q_prev) n - 2.
  std::int64_t h_prev = 0, h = 1, q_prev = 1, q = 0;
  double rem = x;
  for (int i = 0; i < 64; ++i) {
    const double a_d = std::floor(rem);
    if (a_d > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t q_next = a * q + q_prev;
    if (q_next > q_max) break;
    h_prev = h;
    h = h_next;
    q_prev = q;
    q = q_next;
    if (h > 0 && std::abs(x - static_cast<double>(h) / static_cast<double>(q)) <= thresh) {
      const std::int64_t g = std::gcd(h, q);
      if (q / g >= 2) {
        out.kind = KClassification::Kind::rational;
        out.pq = {h / g, q / g};
        return out;
      }
    }
    const double frac = rem - a_d;
    if (frac <= 0.0) break;
    rem = 1.0 / frac;
  }
  out.kind = KClassification::Kind::generic;
  out.m_range = m_range;
  const auto margin = dio_margin(k, m_range);
  for (double xi : {0.0, 1e-3, 1e-2, 5e-2, 1e-1}) {
    double c = std::numeric_limits<double>::infinity();
    for (const auto& [m, v] : margin) c = std::min(c, v * std::exp(xi * m));
    out.dio.push_back({xi, c});
  }
  return out;
}

std::vector<std::pair<int, double>> dio_margin(double k, int m_max) {
  if (m_max < 1) throw ValidationError("m_max must be at least 1");
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(m_max));
  for (int m = 1; m <= m_max; ++m) out.emplace_back(m, 2.0 * std::abs(std::sin(m * k)));
  return out;
}

std::vector<std::pair<int, double>> dio_margin(const Rational& r, int m_max) {
  if (m_max < 1) throw ValidationError("m_max must be at least 1");
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(m_max));
  for (int m = 1; m <= m_max; ++m) {
    const std::int64_t residue = (static_cast<std::int64_t>(m) * r.p) % r.q;
    const double v = residue == 0
                         ? 0.0
                         : 2.0 * std::abs(std::sin(kPi * static_cast<double>(residue) /
                                                   static_cast<double>(r.q)));
    out.emplace_back(m, v);
  }
  return out;
}

std::int64_t central_numerator(std::int64_t q) {
  if (q < 2) throw ValidationError("q must be at least 2");
  std::int64_t best = 1;
  for (std::int64_t p = 1; p < q; ++p) {
    if (std::gcd(p, q) == 1 && std::abs(2 * p - q) < std::abs(2 * best - q)) best = p;
  }
  return best;
}

} // namespace dilute
