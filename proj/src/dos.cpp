#include "dilute/dos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dilute/fourier.hpp"
#include "dilute/harmonics.hpp"
#include "dilute/parallel.hpp"

namespace dilute {

std::string_view to_string(DosMethod m) {
  switch (m) {
    case DosMethod::rotation: return "rotation";
    case DosMethod::eigencount: return "eigencount";
    case DosMethod::lowdensity_prediction: return "lowdensity_prediction";
  }
  return "unknown";
}

DosResult dos_rotation(const EnergyPoint& e, const DisorderSpec& disorder, const McOptions& opt) {
  if (opt.n_steps < 10'000) throw ValidationError("rotation-number DOS needs n_steps >= 1e4");
  if (opt.replicas < 1) throw ValidationError("at least one replica is required");
  std::vector<EstimateWithError> parts(opt.replicas);
  parallel_for(opt.replicas, opt.threads, [&](std::size_t r) {
    BatchMeans bm(opt.n_steps, opt.batches);
    walk_orbit(e, disorder, opt.orbit(), opt.stream(static_cast<std::uint32_t>(r)),
               [&](double, double, double, double inc, double) { bm.add(inc); });
    parts[r] = bm.finish();
  });
  const auto est = pool_inverse_variance(parts);
  return {est.value, DosMethod::rotation, est};
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double shift) {
  if (diag.empty() || off.size() + 1 != diag.size()) {
    throw ValidationError("tridiagonal matrix needs n diagonal and n-1 off-diagonal entries");
  }
  double scale = 0.0;
  for (double d : diag) scale = std::max(scale, std::abs(d - shift));
  for (double b : off) scale = std::max(scale, std::abs(b));
  const double pivmin = std::max(scale, 1.0) * std::numeric_limits<double>::min() * 1e4;
  std::size_t count = 0;
  double d = diag[0] - shift;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    if (i + 1 == diag.size()) break;
    d = (diag[i + 1] - shift) - off[i] * off[i] / d;
  }
  return count;
}

std::vector<double> jacobi_eigenvalues(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n) {
    throw ValidationError("tridiagonal matrix needs n diagonal and n-1 off-diagonal entries");
  }
  if (n > 64) throw ValidationError("dense Jacobi oracle is limited to n <= 64");
  std::vector<double> a(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) at(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) at(i, i + 1) = at(i + 1, i) = off[i];

  for (int sweep = 0; sweep < 100; ++sweep) {
    double offnorm = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += at(i, j) * at(i, j);
        if (i != j) offnorm += at(i, j) * at(i, j);
      }
    }
    if (offnorm <= 1e-30 * total || offnorm == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = at(r, p), arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = at(p, r), aqr = at(q, r);
          at(p, r) = c * apr - s * aqr;
          at(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double dos_eigencount_fixed(const EnergyPoint& e, std::span<const double> potential) {
  if (potential.size() < 2) throw ValidationError("eigenvalue counting needs a box of size >= 2");
  const std::vector<double> off(potential.size() - 1, -1.0);
  const std::size_t count = sturm_count(potential, off, e.E);
  return kPi * static_cast<double>(count) / static_cast<double>(potential.size());
}

DosResult dos_eigencount(const EnergyPoint& e, const DisorderSpec& disorder, std::size_t box,
                         std::uint32_t replicas, std::uint64_t seed, std::uint64_t stream_base,
                         unsigned threads) {
  if (box < 2) throw ValidationError("eigenvalue counting needs a box of size >= 2");
  if (replicas < 1) throw ValidationError("at least one replica is required");
  std::vector<double> values(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) {
    Rng rng(RngContract{seed, stream_base + r});
    const ImpuritySampler sampler(disorder);
    std::vector<double> potential(box);
    for (auto& v : potential) v = sampler(rng);
    values[r] = dos_eigencount_fixed(e, potential);
  });
  const auto est = mean_and_error(values);
  return {est.value, DosMethod::eigencount, est};
}

double mean_phase_shift(const EnergyPoint& e, const DisorderSpec& atoms, double theta) {
  double s = 0.0;
  for (const auto& a : atoms.atoms) s += a.weight * (action(e, a.value, theta) - theta);
  return s;
}

namespace {

/// Coefficients of the pi-periodic function phi~(theta) on a grid.
PeriodicSpectrum phase_shift_spectrum(const EnergyPoint& e, const DisorderSpec& atoms,
                                      std::size_t n_grid) {
  const auto grid = phase_grid(n_grid);
  std::vector<cplx> samples(n_grid);
  for (std::size_t j = 0; j < n_grid; ++j) samples[j] = mean_phase_shift(e, atoms, grid[j]);
  return PeriodicSpectrum(std::move(samples));
}

} // namespace

DosResult dos_lowdensity(const EnergyPoint& e, const DisorderSpec& disorder,
                         const LowDensityOptions& opt) {
  using Measure = LowDensityOptions::Measure;
  if (opt.measure != Measure::lebesgue && opt.q < 2) {
    throw ValidationError("grid measure needs q >= 2");
  }
  if (!is_power_of_two(opt.n_grid)) throw ValidationError("n_grid must be a power of two");
  double mean_shift = e.k;
  EstimateWithError err;
  if (!disorder.impurities_vanish()) {
    switch (opt.measure) {
      case Measure::lebesgue: {
        mean_shift = phase_shift_spectrum(e, disorder, opt.n_grid).coefficient(0).real();
        break;
      }
      case Measure::grid_spectral: {
        const auto sol = solve_harmonic_system(e, disorder, opt.q, opt.n_max);
        const std::size_t grid =
            std::max(opt.n_grid, next_power_of_two(8 * static_cast<std::size_t>(opt.n_max * opt.q)));
        const auto spec = phase_shift_spectrum(e, disorder, grid);
        cplx s = spec.coefficient(0);
        for (int n = -opt.n_max; n <= opt.n_max; ++n) {
          if (n != 0) s += spec.coefficient(n * opt.q) * sol.at(n);
        }
        mean_shift = s.real();
        break;
      }
      case Measure::grid_orbit: {
        const PsiLaw law = PsiLaw::grid(opt.q);
        const auto& mc = opt.mc;
        std::vector<EstimateWithError> parts(mc.replicas);
        parallel_for(mc.replicas, mc.threads, [&](std::size_t r) {
          BatchMeans bm(mc.n_steps, mc.batches);
          walk_hat_orbit(e, disorder, law, mc.orbit(), mc.stream(static_cast<std::uint32_t>(r)),
                         [&](double prev, double, double, double, double) {
                           bm.add(mean_phase_shift(e, disorder, prev));
                         });
          parts[r] = bm.finish();
        });
        err = pool_inverse_variance(parts);
        mean_shift = err.value;
        break;
      }
    }
  }
  const double rho = disorder.rho;
  DosResult out;
  out.value = (1.0 - rho) * e.k + rho * mean_shift;
  out.method = DosMethod::lowdensity_prediction;
  out.error = {out.value, rho * err.std_error, err.n_samples, err.n_batches};
  return out;
}

} // namespace dilute
