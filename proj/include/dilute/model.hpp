#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dilute {

// Bad user input: out-of-range parameters, malformed literals.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// A numerical problem the caller can fix by changing parameters
// (singular truncated system, overflow between renormalizations).
class NumericalError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// An identity that must hold up to rounding did not; indicates a bug.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Smallest admissible sin(k); the impurity kick carries 1/sin(k).
inline constexpr double kMinSinK = 1e-6;

/// Spectral parameter of the free band: E = -2 cos k with 0 < k < pi.
struct EnergyPoint {
  double k = kPi / 2;
  double E = 0.0;

  double sin_k() const;
  double cos_k() const;
};

EnergyPoint energy_from_k(double k);
EnergyPoint energy_from_E(double E);

/// Exact rational quasi-momentum k = pi p / q in lowest terms.
struct Rational {
  std::int64_t p = 1;
  std::int64_t q = 2;

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Parses "p/q" with positive integers, reduces to lowest terms and requires
/// 0 < p/q < 1 so that k = pi p/q lies inside the band.
Rational parse_rational(std::string_view text);
EnergyPoint energy_from_rational(const Rational& r);

struct Atom {
  double value = 0.0;
  double weight = 1.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Single-site law (1 - rho) delta_0 + rho * sum_i w_i delta_{v_i}.
/// Atoms are sorted by value, distinct, and their weights sum to one.
struct DisorderSpec {
  double rho = 0.0;
  std::vector<Atom> atoms{{0.0, 1.0}};

  /// p~ = delta_0.
  bool impurities_vanish() const;
  /// rho = 0 or p~ = delta_0: the physical chain is free.
  bool is_trivial() const { return rho == 0.0 || impurities_vanish(); }
  double max_abs_value() const;

  friend bool operator==(const DisorderSpec&, const DisorderSpec&) = default;
};

/// Builds a normalized DisorderSpec from raw atoms: merges equal values,
/// normalizes weights, validates rho in [0, 1].
DisorderSpec make_disorder(std::vector<Atom> atoms, double rho);

/// Grammar: "v:w[,v:w]*" with decimal literals.
DisorderSpec parse_disorder(std::string_view text, double rho);

/// Canonical "v:w,..." serialization using shortest round-trip literals, so
/// parse_disorder(to_string(d), d.rho) == d.
std::string to_string(const DisorderSpec& d);

/// Decimal or 0x-prefixed hexadecimal 64-bit literal.
std::uint64_t parse_seed(std::string_view text);

std::string format_double(double x);

} // namespace dilute
