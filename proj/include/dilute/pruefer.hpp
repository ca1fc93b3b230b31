#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dilute/model.hpp"
#include "dilute/random.hpp"

namespace dilute {

/// One impurity step of the modified Pruefer dynamics at phase theta:
/// the lift increment S(theta) - theta and log |M T M^{-1} e_theta|.
struct KickStep {
  double increment;
  double log_norm;
};

/// With c = v / sin k, (1 + P) e_theta = (cos t, sin t - c cos t). Its angle
/// relative to e_theta is atan2(cross, dot) of the two vectors, both in the
/// same half plane, which is the continuous-in-v branch; R_k then adds k.
inline KickStep kick(double k, double c, double theta) {
  const double s = std::sin(theta);
  const double co = std::cos(theta);
  const double cc = c * co;
  const double shift = std::atan2(-cc * co, 1.0 - cc * s);
  return {k + shift, 0.5 * std::log1p(cc * (cc - 2.0 * s))};
}

/// Lift of the projective action of M T^E_v M^{-1} on R, anchored by
/// S_{E,0}(theta) = theta + k and continuity in v.
double action(const EnergyPoint& e, double v, double theta);

/// S_{E,v}(theta) + psi.
double hat_action(const EnergyPoint& e, double psi, double v, double theta);

/// log |M T^E_v M^{-1} e_theta| (Euclidean norm).
double step_log_norm(const EnergyPoint& e, double v, double theta);

/// Distribution of the extra rotation psi in the auxiliary chain.
struct PsiLaw {
  enum class Kind { uniform, grid };

  Kind kind = Kind::uniform;
  int q = 0;
  double offset = -kPi / 2;
  double spacing = 0.0;

  /// Uniform on [-pi/2, pi/2).
  static PsiLaw uniform();
  /// q equiprobable atoms pi j / q, j = 0..q-1. With this spacing the average
  /// of e^{2 i m psi} is exactly the indicator of q | m.
  static PsiLaw grid(int q);
  /// The atoms (pi/2)(p/q - (q+1)/(2q)), p = 1..q, spacing pi/(2q).
  static PsiLaw printed_grid(int q);

  std::vector<double> atoms() const;
  std::string describe() const;

  double sample(Rng& rng) const {
    if (kind == Kind::uniform) return offset + kPi * rng.uniform();
    return offset + spacing * static_cast<double>(rng.below(static_cast<std::uint64_t>(q)));
  }
};

struct OrbitOptions {
  std::uint64_t n_steps = 1'000'000;
  std::uint64_t burn_in = 10'000;
  double theta0 = 0.1;
};

/// Recorded part of an orbit (after burn-in). thetas holds the lift
/// theta_0..theta_N; log_norms and increments are per step.
struct PrueferOrbit {
  std::vector<double> thetas;
  std::vector<double> log_norms;
  std::vector<double> increments;
};

/// Reduces a phase to [0, pi) for phases within a few periods of it.
inline double reduce_phase(double t) {
  while (t >= kPi) t -= kPi;
  while (t < 0.0) t += kPi;
  return t;
}

/// Streams the physical chain: v_n ~ (1 - rho) delta_0 + rho p~,
/// theta_n = S_{E,v_n}(theta_{n-1}). The visitor receives
/// (theta_prev mod pi, v, log_norm, increment, theta_next mod pi) for every
/// recorded step; burn-in steps are executed silently.
template <class Visitor>
double walk_orbit(const EnergyPoint& e, const DisorderSpec& disorder, const OrbitOptions& opt,
                  const RngContract& stream, Visitor&& visit) {
  Rng rng(stream);
  const ImpuritySampler sampler(disorder);
  const double inv_sin = 1.0 / e.sin_k();
  const double k = e.k;
  double theta = reduce_phase(opt.theta0);
  const std::uint64_t total = opt.burn_in + opt.n_steps;
  for (std::uint64_t n = 0; n < total; ++n) {
    const double v = sampler(rng);
    double inc = k;
    double log_norm = 0.0;
    if (v != 0.0) {
      const KickStep st = kick(k, v * inv_sin, theta);
      inc = st.increment;
      log_norm = st.log_norm;
    }
    const double next = reduce_phase(theta + inc);
    if (n >= opt.burn_in) visit(theta, v, log_norm, inc, next);
    theta = next;
  }
  return theta;
}

/// Streams the auxiliary chain: (psi_n, v_n) ~ law x p~ (every site carries
/// an impurity), theta_n = S_{E,v_n}(theta_{n-1}) + psi_n. rho is ignored.
template <class Visitor>
double walk_hat_orbit(const EnergyPoint& e, const DisorderSpec& atoms, const PsiLaw& law,
                      const OrbitOptions& opt, const RngContract& stream, Visitor&& visit) {
  Rng rng(stream);
  const ImpuritySampler sampler(atoms);
  const double inv_sin = 1.0 / e.sin_k();
  const double k = e.k;
  double theta = reduce_phase(opt.theta0);
  const std::uint64_t total = opt.burn_in + opt.n_steps;
  for (std::uint64_t n = 0; n < total; ++n) {
    const double psi = law.sample(rng);
    const double v = sampler.impurity(rng);
    double inc = k;
    double log_norm = 0.0;
    if (v != 0.0) {
      const KickStep st = kick(k, v * inv_sin, theta);
      inc = st.increment;
      log_norm = st.log_norm;
    }
    inc += psi;
    const double next = reduce_phase(theta + inc);
    if (n >= opt.burn_in) visit(theta, v, log_norm, inc, next);
    theta = next;
  }
  return theta;
}

PrueferOrbit run_orbit(const EnergyPoint& e, const DisorderSpec& disorder,
                       const OrbitOptions& opt, const RngContract& stream);

PrueferOrbit run_hat_orbit(const EnergyPoint& e, const DisorderSpec& atoms, const PsiLaw& law,
                           const OrbitOptions& opt, const RngContract& stream);

} // namespace dilute
