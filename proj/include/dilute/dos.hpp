#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dilute/estimate.hpp"
#include "dilute/lyapunov.hpp"
#include "dilute/model.hpp"
#include "dilute/pruefer.hpp"

namespace dilute {

// Integrated density of states normalized so that N(0, E) = k, total mass pi.

enum class DosMethod { rotation, eigencount, lowdensity_prediction };
std::string_view to_string(DosMethod m);

struct DosResult {
  double value = 0.0;
  DosMethod method = DosMethod::rotation;
  EstimateWithError error;  // value repeated with its standard error
};

/// Mean Pruefer increment along the physical chain (rotation number).
DosResult dos_rotation(const EnergyPoint& e, const DisorderSpec& disorder, const McOptions& opt);

/// Number of eigenvalues below `shift` of the symmetric tridiagonal matrix
/// with the given diagonal and off-diagonal, by Sturm sign counting with the
/// ratio recurrence d_i = (a_i - shift) - b_{i-1}^2 / d_{i-1}. Pivots
/// smaller than pivmin are replaced by -pivmin.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double shift);

/// All eigenvalues (ascending) of a symmetric tridiagonal matrix by the cyclic
/// Jacobi method on the dense matrix. Limited to n <= 64.
std::vector<double> jacobi_eigenvalues(std::span<const double> diag, std::span<const double> off);

/// Restriction of H - E to {1..N} with free ends: diagonal v_n - E, hopping -1.
/// Returns pi * count(negative eigenvalues) / N averaged over replicas, each
/// replica an independent realization on stream (seed, stream_base + r).
DosResult dos_eigencount(const EnergyPoint& e, const DisorderSpec& disorder, std::size_t box,
                         std::uint32_t replicas, std::uint64_t seed, std::uint64_t stream_base = 0,
                         unsigned threads = 1);

/// Same, for one fixed potential (used for monotonicity in E).
double dos_eigencount_fixed(const EnergyPoint& e, std::span<const double> potential);

/// phi~(theta) = E~_v (S_{E,v}(theta) - theta).
double mean_phase_shift(const EnergyPoint& e, const DisorderSpec& atoms, double theta);

struct LowDensityOptions {
  enum class Measure { lebesgue, grid_orbit, grid_spectral };
  Measure measure = Measure::lebesgue;
  int q = 0;
  std::size_t n_grid = 4096;
  int n_max = 64;
  McOptions mc;  // for grid_orbit
};

/// (1 - rho) k + rho <phi~>, the average taken over the uniform measure
/// (irrational case) or the invariant measure of the q-grid auxiliary chain.
DosResult dos_lowdensity(const EnergyPoint& e, const DisorderSpec& disorder,
                         const LowDensityOptions& opt);

} // namespace dilute
