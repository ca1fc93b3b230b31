#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dilute/fourier.hpp"
#include "dilute/lyapunov.hpp"
#include "dilute/model.hpp"
#include "dilute/pruefer.hpp"

namespace dilute {

/// Harmonics h_m, |m| <= m_max, with per-m standard errors for Monte Carlo
/// estimates (zero for deterministic ones).
struct HarmonicVector {
  int m_max = 0;
  std::vector<cplx> values;       // index m + m_max
  std::vector<double> std_error;  // |error| of the complex estimate
  std::uint64_t n_steps = 0;

  cplx at(int m) const { return values.at(static_cast<std::size_t>(m + m_max)); }
  double error(int m) const { return std_error.at(static_cast<std::size_t>(m + m_max)); }
};

/// I_m(N) = (1/N) sum_n e^{2 i m theta_n} over theta_1..theta_N of a stored orbit.
HarmonicVector oscillatory_sums(const PrueferOrbit& orbit, int m_max);

/// Streaming I_m(N) on the physical chain with batch-means errors.
HarmonicVector oscillatory_sums_mc(const EnergyPoint& e, const DisorderSpec& disorder, int m_max,
                                   const McOptions& opt);

/// Streaming I^_m(N) on the auxiliary chain.
HarmonicVector hat_oscillatory_sums_mc(const EnergyPoint& e, const DisorderSpec& atoms,
                                       const PsiLaw& law, int m_max, const McOptions& opt);

/// b^{(m)}_l with E~_v e^{2 i m S(theta)} = sum_l b^{(m)}_l e^{2 i (m + l) theta}.
struct TransitionCoeffs {
  int m_max = 0;
  int l_max = 0;
  std::size_t n_grid = 0;
  std::vector<cplx> table;  // row m + m_max, column l + l_max

  cplx at(int m, int l) const {
    return table.at(static_cast<std::size_t>(m + m_max) * static_cast<std::size_t>(2 * l_max + 1) +
                    static_cast<std::size_t>(l + l_max));
  }
};

TransitionCoeffs transition_coeffs(const EnergyPoint& e, const DisorderSpec& atoms, int m_max,
                                   int l_max, std::size_t n_grid);

/// Maximum over m and the sampling grid of |sum_l b^{(m)}_l e^{2i(m+l)theta} - g_m(theta)|.
double reconstruction_residual(const TransitionCoeffs& b, const EnergyPoint& e,
                               const DisorderSpec& atoms);

/// Smallest grid that resolves e^{2 i m S(theta)} for |m| <= m_max together
/// with frequencies up to m_max + l_max.
std::size_t default_grid(const EnergyPoint& e, const DisorderSpec& atoms, int m_max, int l_max);

/// Compares b^-hat computed from the auxiliary action (averaging over the psi
/// atoms of `law`) with delta_{q | m} b^{(m)}_l.
struct HatRelationReport {
  int q = 0;
  std::string law;
  double max_mismatch_divisible = 0.0;  // max |b^ - b| over q | m
  double max_magnitude_other = 0.0;     // max |b^| over q does not divide m
  double tolerance = 1e-10;
  bool passed = false;
};

HatRelationReport hat_transition_relation_check(const TransitionCoeffs& b, const EnergyPoint& e,
                                                const DisorderSpec& atoms, const PsiLaw& law,
                                                double tolerance = 1e-10);

/// Lowest-order harmonics J_n = int e^{2 i n q theta} d nu^_q from
///   J_n = sum_r b^{(nq)}_{rq} J_{n+r},  n = +-1..+-n_max,  J_0 = 1,
/// unknowns outside the window set to zero.
struct HarmonicSolution {
  int q = 0;
  int n_max = 0;
  std::vector<cplx> J;  // index n + n_max
  double rcond = 0.0;
  /// max over n_max < |n| <= n_max + n_max/4 of |sum_r b^{(nq)}_{rq} J_{n+r}|,
  /// the part of the untruncated equations the zero padding ignores.
  double closure_residual = 0.0;
  double hermitian_defect = 0.0;
  std::size_t n_grid = 0;

  cplx at(int n) const { return J.at(static_cast<std::size_t>(n + n_max)); }
};

HarmonicSolution solve_harmonic_system(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                                       int n_max, int l_max = 0, std::size_t n_grid = 0);

} // namespace dilute
