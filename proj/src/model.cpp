#include "dilute/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <system_error>

namespace dilute {

double EnergyPoint::sin_k() const { return std::sin(k); }
double EnergyPoint::cos_k() const { return std::cos(k); }

EnergyPoint energy_from_k(double k) {
  if (!std::isfinite(k) || !(k > 0.0 && k < kPi) || std::sin(k) < kMinSinK) {
    throw DomainError("quasi-momentum k = " + format_double(k) +
                      " outside the open interval (0, pi) with sin(k) >= 1e-6");
  }
  return {k, -2.0 * std::cos(k)};
}

EnergyPoint energy_from_E(double E) {
  if (!std::isfinite(E) || std::abs(E) > 2.0 - 1e-9) {
    throw DomainError("energy E = " + format_double(E) +
                      " outside the open band |E| < 2 (guard |E| <= 2 - 1e-9)");
  }
  return energy_from_k(std::acos(-E / 2.0));
}

namespace {

std::int64_t parse_positive_int(std::string_view s, std::string_view what) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || out <= 0) {
    throw ValidationError("expected a positive integer for " + std::string(what) +
                          ", got '" + std::string(s) + "'");
  }
  return out;
}

double parse_decimal(std::string_view s, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("malformed " + std::string(what) + " literal '" + std::string(s) + "'");
  }
  if (!std::isfinite(out)) {
    throw ValidationError("non-finite " + std::string(what) + " '" + std::string(s) + "'");
  }
  return out;
}

} // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ValidationError("rational quasi-momentum must have the form p/q, got '" +
                          std::string(text) + "'");
  }
  std::int64_t p = parse_positive_int(text.substr(0, slash), "p");
  std::int64_t q = parse_positive_int(text.substr(slash + 1), "q");
  const std::int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (p >= q) {
    throw DomainError("rational quasi-momentum p/q = " + std::string(text) +
                      " must satisfy 0 < p/q < 1");
  }
  return {p, q};
}

EnergyPoint energy_from_rational(const Rational& r) {
  if (r.p <= 0 || r.q <= r.p || std::gcd(r.p, r.q) != 1) {
    throw DomainError("rational quasi-momentum needs coprime 0 < p < q");
  }
  return energy_from_k(kPi * r.value());
}

bool DisorderSpec::impurities_vanish() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.value == 0.0; });
}

double DisorderSpec::max_abs_value() const {
  double m = 0.0;
  for (const auto& a : atoms) m = std::max(m, std::abs(a.value));
  return m;
}

DisorderSpec make_disorder(std::vector<Atom> atoms, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw ValidationError("impurity density rho = " + format_double(rho) + " outside [0, 1]");
  }
  if (atoms.empty()) throw ValidationError("impurity distribution has no atoms");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value)) throw ValidationError("non-finite impurity value");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw ValidationError("impurity weight must be positive, got " + format_double(a.weight) +
                            " for value " + format_double(a.value));
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  double total = 0.0;
  for (const auto& a : merged) total += a.weight;
  // Already-normalized input is kept bit-for-bit so serialization round-trips.
  if (std::abs(total - 1.0) > 1e-12) {
    for (auto& a : merged) a.weight /= total;
  }
  return {rho, std::move(merged)};
}

DisorderSpec parse_disorder(std::string_view text, double rho) {
  std::vector<Atom> atoms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = text.substr(pos, comma - pos);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError("impurity atom '" + std::string(item) + "' is not of the form v:w");
    }
    atoms.push_back({parse_decimal(item.substr(0, colon), "impurity value"),
                     parse_decimal(item.substr(colon + 1), "impurity weight")});
    pos = comma + 1;
  }
  return make_disorder(std::move(atoms), rho);
}

std::string to_string(const DisorderSpec& d) {
  std::string out;
  for (std::size_t i = 0; i < d.atoms.size(); ++i) {
    if (i) out += ',';
    out += format_double(d.atoms[i].value);
    out += ':';
    out += format_double(d.atoms[i].weight);
  }
  return out;
}

std::uint64_t parse_seed(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, base);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("seed must be a decimal or 0x-hex 64-bit literal, got '" +
                          std::string(text) + "'");
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

} // namespace dilute
