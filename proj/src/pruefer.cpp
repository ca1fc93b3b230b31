#include "dilute/pruefer.hpp"

#include <stdexcept>

namespace dilute {

double action(const EnergyPoint& e, double v, double theta) {
  if (v == 0.0) return theta + e.k;
  return theta + kick(e.k, v / e.sin_k(), theta).increment;
}

double hat_action(const EnergyPoint& e, double psi, double v, double theta) {
  return action(e, v, theta) + psi;
}

double step_log_norm(const EnergyPoint& e, double v, double theta) {
  if (v == 0.0) return 0.0;
  return kick(e.k, v / e.sin_k(), theta).log_norm;
}

PsiLaw PsiLaw::uniform() { return {}; }

PsiLaw PsiLaw::grid(int q) {
  if (q < 2) throw ValidationError("psi grid needs q >= 2");
  return {Kind::grid, q, 0.0, kPi / q};
}

PsiLaw PsiLaw::printed_grid(int q) {
  if (q < 2) throw ValidationError("psi grid needs q >= 2");
  return {Kind::grid, q, kPi * (1.0 - q) / (4.0 * q), kPi / (2.0 * q)};
}

std::vector<double> PsiLaw::atoms() const {
  std::vector<double> out;
  if (kind == Kind::grid) {
    for (int j = 0; j < q; ++j) out.push_back(offset + spacing * j);
  }
  return out;
}

std::string PsiLaw::describe() const {
  if (kind == Kind::uniform) return "uniform";
  return "grid(q=" + std::to_string(q) + ",offset=" + format_double(offset) +
         ",spacing=" + format_double(spacing) + ")";
}

namespace {

PrueferOrbit collect(std::uint64_t n_steps, auto&& walk) {
  PrueferOrbit orbit;
  orbit.thetas.reserve(n_steps + 1);
  orbit.log_norms.reserve(n_steps);
  orbit.increments.reserve(n_steps);
  double lift = 0.0;
  walk([&](double prev, double, double log_norm, double inc, double) {
    if (orbit.thetas.empty()) {
      lift = prev;
      orbit.thetas.push_back(lift);
    }
    lift += inc;
    orbit.thetas.push_back(lift);
    orbit.log_norms.push_back(log_norm);
    orbit.increments.push_back(inc);
  });
  return orbit;
}

void require_steps(const OrbitOptions& opt) {
  if (opt.n_steps < 1) throw ValidationError("orbit needs at least one recorded step");
}

} // namespace

PrueferOrbit run_orbit(const EnergyPoint& e, const DisorderSpec& disorder,
                       const OrbitOptions& opt, const RngContract& stream) {
  require_steps(opt);
  return collect(opt.n_steps,
                 [&](auto&& visit) { walk_orbit(e, disorder, opt, stream, visit); });
}

PrueferOrbit run_hat_orbit(const EnergyPoint& e, const DisorderSpec& atoms, const PsiLaw& law,
                           const OrbitOptions& opt, const RngContract& stream) {
  require_steps(opt);
  return collect(opt.n_steps,
                 [&](auto&& visit) { walk_hat_orbit(e, atoms, law, opt, stream, visit); });
}

} // namespace dilute
