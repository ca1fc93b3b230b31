#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dilute/estimate.hpp"
#include "dilute/fourier.hpp"
#include "dilute/model.hpp"
#include "dilute/pruefer.hpp"

namespace dilute {

/// Shared Monte Carlo settings. Every replica runs n_steps recorded steps on
/// its own stream (seed, stream_base + replica); replicas are pooled by
/// inverse-variance weighting.
struct McOptions {
  std::uint64_t n_steps = 1'000'000;
  std::uint64_t burn_in = 10'000;
  double theta0 = 0.1;
  std::uint32_t replicas = 1;
  std::uint32_t batches = 32;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  unsigned threads = 1;

  OrbitOptions orbit() const { return {n_steps, burn_in, theta0}; }
  RngContract stream(std::uint32_t replica) const { return {seed, stream_base + replica}; }
};

enum class LyapunovMethod { telescopic, matrix_product, closed_form, hat_chain, spectral };
std::string_view to_string(LyapunovMethod m);

struct LyapunovResult {
  EstimateWithError gamma;
  LyapunovMethod method = LyapunovMethod::closed_form;
  double k = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

/// gamma(rho, E) as the mean of log |M T M^{-1} e_{theta_{n-1}}| along the
/// modified Pruefer orbit.
LyapunovResult gamma_mc_telescopic(const EnergyPoint& e, const DisorderSpec& disorder,
                                   const McOptions& opt);

/// gamma(rho, E) from raw products of T^E_{v_n}, renormalized by the
/// Frobenius norm every renorm_every steps. The first burn_in draws of each
/// stream are skipped so that, on a shared stream, this estimator sees the
/// same disorder window as the telescopic one.
LyapunovResult gamma_mc_matrix_product(const EnergyPoint& e, const DisorderSpec& disorder,
                                       unsigned renorm_every, const McOptions& opt);

/// Lyapunov exponent of the auxiliary chain R_psi M T M^{-1}, psi ~ law.
LyapunovResult gamma_hat_mc(const EnergyPoint& e, const DisorderSpec& atoms, const PsiLaw& law,
                            const McOptions& opt);

/// gamma_hat_q via the auxiliary chain with the q-point psi grid.
LyapunovResult gamma_hat_q_mc(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                              const McOptions& opt);

/// Closed form of the uniform-phase exponent,
///   gamma_hat_inf = sum_i w_i log((sqrt(lambda_i) + 1/sqrt(lambda_i)) / 2)
///                 = 1/2 sum_i w_i log(1 + a_i / 4),   a_i = v_i^2 / sin^2 k.
/// Both forms are evaluated; disagreement above 1e-12 throws ConsistencyError.
LyapunovResult gamma_hat_infinity(const EnergyPoint& e, const DisorderSpec& atoms);

/// The two closed forms separately (exposed for the equivalence check).
double gamma_hat_infinity_log_form(const EnergyPoint& e, const DisorderSpec& atoms);
double gamma_hat_infinity_lambda_form(const EnergyPoint& e, const DisorderSpec& atoms);

/// Coefficients of E~_v log |M T M^{-1} e_theta| = sum_m a_m e^{2 i m theta}.
struct FourierCoeffs {
  int m_max = 0;
  std::vector<cplx> values;  // index m + m_max

  cplx at(int m) const { return values.at(static_cast<std::size_t>(m + m_max)); }
};

/// Trapezoidal quadrature on n_grid points (a power of two, >= 8 m_max).
FourierCoeffs fourier_a(const EnergyPoint& e, const DisorderSpec& atoms, int m_max,
                        std::size_t n_grid);

/// Exponential envelope |a_m| <= c e^{-xi |m|}: xi from a least-squares fit of
/// log |a_m| over the coefficients above `floor`, c the smallest constant for
/// which the envelope holds on every computed m.
struct DecayFit {
  double xi = 0.0;
  double c = 0.0;
  int points = 0;
};
std::optional<DecayFit> fit_decay(const FourierCoeffs& a, double floor = 1e-13);

struct SpectralOptions {
  int n_max = 64;
  int l_max = 0;             // 0: 2 n_max q, the full coupling window
  std::size_t n_grid = 0;    // 0: chosen from the band limit of the integrands
  bool estimate_truncation = true;
};

struct SpectralResult {
  double value = 0.0;
  /// |a_{(n_max+1) q}|, the first coefficient left out of the sum.
  double discarded_term = 0.0;
  /// max(discarded_term, |value(n_max) - value(n_max / 2)|).
  double truncation_error = 0.0;
  double closure_residual = 0.0;
  double rcond = 0.0;
  int n_max = 0;
  std::size_t n_grid = 0;
};

/// gamma_hat_q = sum_{|n| <= n_max} a_{nq} J_n, with J_n the harmonics of
/// the invariant measure of the q-grid auxiliary chain.
SpectralResult gamma_hat_q_spectral(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                                    const SpectralOptions& opt);

} // namespace dilute
