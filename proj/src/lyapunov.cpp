#include "dilute/lyapunov.hpp"

#include <algorithm>
#include <cmath>

#include "dilute/harmonics.hpp"
#include "dilute/parallel.hpp"
#include "dilute/sl2.hpp"

namespace dilute {

std::string_view to_string(LyapunovMethod m) {
  switch (m) {
    case LyapunovMethod::telescopic: return "telescopic";
    case LyapunovMethod::matrix_product: return "matrix_product";
    case LyapunovMethod::closed_form: return "closed_form";
    case LyapunovMethod::hat_chain: return "hat_chain";
    case LyapunovMethod::spectral: return "spectral";
  }
  return "unknown";
}

namespace {

void require_replicas(const McOptions& opt) {
  if (opt.replicas < 1) throw ValidationError("at least one replica is required");
  if (opt.batches < kMinBatches) throw ValidationError("at least 16 batches are required");
}

template <class PerReplica>
EstimateWithError run_replicas(const McOptions& opt, PerReplica&& per_replica) {
  require_replicas(opt);
  std::vector<EstimateWithError> parts(opt.replicas);
  parallel_for(opt.replicas, opt.threads,
               [&](std::size_t r) { parts[r] = per_replica(static_cast<std::uint32_t>(r)); });
  return pool_inverse_variance(parts);
}

LyapunovResult make_result(EstimateWithError g, LyapunovMethod m, const EnergyPoint& e,
                           double rho, std::uint64_t seed) {
  return {g, m, e.k, rho, seed};
}

} // namespace

LyapunovResult gamma_mc_telescopic(const EnergyPoint& e, const DisorderSpec& disorder,
                                   const McOptions& opt) {
  if (opt.n_steps < 10'000) throw ValidationError("telescopic estimator needs n_steps >= 1e4");
  const auto g = run_replicas(opt, [&](std::uint32_t r) {
    BatchMeans bm(opt.n_steps, opt.batches);
    walk_orbit(e, disorder, opt.orbit(), opt.stream(r),
               [&](double, double, double log_norm, double, double) { bm.add(log_norm); });
    return bm.finish();
  });
  return make_result(g, LyapunovMethod::telescopic, e, disorder.rho, opt.seed);
}

LyapunovResult gamma_mc_matrix_product(const EnergyPoint& e, const DisorderSpec& disorder,
                                       unsigned renorm_every, const McOptions& opt) {
  if (renorm_every < 1 || renorm_every > 50) {
    throw ValidationError("renorm_every must lie in [1, 50]");
  }
  const auto g = run_replicas(opt, [&](std::uint32_t r) {
    Rng rng(opt.stream(r));
    const ImpuritySampler sampler(disorder);
    for (std::uint64_t i = 0; i < opt.burn_in; ++i) (void)sampler(rng);
    BatchMeans bm(opt.n_steps, opt.batches);
    Mat2 prod = Mat2::identity();
    unsigned since = 0;
    for (std::uint64_t n = 0; n < opt.n_steps; ++n) {
      prod = transfer(e, sampler(rng)) * prod;
      double growth = 0.0;
      if (++since == renorm_every || n + 1 == opt.n_steps) {
        const double f = prod.frobenius_norm();
        if (!std::isfinite(f) || f == 0.0) {
          throw NumericalError("transfer-matrix product overflowed between renormalizations; "
                               "use a smaller renorm_every");
        }
        growth = std::log(f);
        prod = (1.0 / f) * prod;
        since = 0;
      }
      bm.add(growth);
    }
    return bm.finish();
  });
  return make_result(g, LyapunovMethod::matrix_product, e, disorder.rho, opt.seed);
}

LyapunovResult gamma_hat_mc(const EnergyPoint& e, const DisorderSpec& atoms, const PsiLaw& law,
                            const McOptions& opt) {
  const auto g = run_replicas(opt, [&](std::uint32_t r) {
    BatchMeans bm(opt.n_steps, opt.batches);
    walk_hat_orbit(e, atoms, law, opt.orbit(), opt.stream(r),
                   [&](double, double, double log_norm, double, double) { bm.add(log_norm); });
    return bm.finish();
  });
  return make_result(g, LyapunovMethod::hat_chain, e, 1.0, opt.seed);
}

LyapunovResult gamma_hat_q_mc(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                              const McOptions& opt) {
  return gamma_hat_mc(e, atoms, PsiLaw::grid(q), opt);
}

double gamma_hat_infinity_log_form(const EnergyPoint& e, const DisorderSpec& atoms) {
  double g = 0.0;
  for (const auto& a : atoms.atoms) {
    g += a.weight * 0.5 * std::log1p(kick_strength(e, a.value) / 4.0);
  }
  return g;
}

double gamma_hat_infinity_lambda_form(const EnergyPoint& e, const DisorderSpec& atoms) {
  double g = 0.0;
  for (const auto& a : atoms.atoms) {
    const double lambda = stretch_eigenvalue(kick_strength(e, a.value));
    const double root = std::sqrt(lambda);
    g += a.weight * std::log((root + 1.0 / root) / 2.0);
  }
  return g;
}

LyapunovResult gamma_hat_infinity(const EnergyPoint& e, const DisorderSpec& atoms) {
  const double g = gamma_hat_infinity_log_form(e, atoms);
  const double check = gamma_hat_infinity_lambda_form(e, atoms);
  if (std::abs(g - check) > 1e-12 * std::max(1.0, std::abs(g))) {
    throw ConsistencyError("closed forms of gamma_hat_inf disagree beyond 1e-12");
  }
  EstimateWithError est{g, 0.0, 0, 0};
  return make_result(est, LyapunovMethod::closed_form, e, 1.0, 0);
}

FourierCoeffs fourier_a(const EnergyPoint& e, const DisorderSpec& atoms, int m_max,
                        std::size_t n_grid) {
  if (m_max < 0) throw ValidationError("m_max must be non-negative");
  if (!is_power_of_two(n_grid) || n_grid < 8 * static_cast<std::size_t>(std::max(m_max, 1))) {
    throw ValidationError("n_grid must be a power of two with n_grid >= 8 m_max");
  }
  const auto grid = phase_grid(n_grid);
  std::vector<cplx> samples(n_grid, 0.0);
  for (const auto& a : atoms.atoms) {
    for (std::size_t j = 0; j < n_grid; ++j) {
      samples[j] += a.weight * step_log_norm(e, a.value, grid[j]);
    }
  }
  const PeriodicSpectrum spec(std::move(samples));
  FourierCoeffs out;
  out.m_max = m_max;
  out.values.resize(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    out.values[static_cast<std::size_t>(m + m_max)] = spec.coefficient(m);
  }
  return out;
}

std::optional<DecayFit> fit_decay(const FourierCoeffs& a, double floor) {
  std::vector<double> xs, ys;
  for (int m = 1; m <= a.m_max; ++m) {
    const double mag = std::abs(a.at(m));
    if (mag > floor) {
      xs.push_back(m);
      ys.push_back(std::log(mag));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  DecayFit fit;
  fit.xi = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.points = static_cast<int>(xs.size());
  for (int m = -a.m_max; m <= a.m_max; ++m) {
    const double mag = std::abs(a.at(m));
    if (mag > floor || m == 0) fit.c = std::max(fit.c, mag * std::exp(fit.xi * std::abs(m)));
  }
  return fit;
}

namespace {

double spectral_value(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                      const SpectralOptions& opt, SpectralResult& out) {
  const HarmonicSolution sol = solve_harmonic_system(e, atoms, q, opt.n_max, opt.l_max, opt.n_grid);
  const int m_top = (opt.n_max + 1) * q;
  const std::size_t grid = std::max(sol.n_grid, next_power_of_two(8 * static_cast<std::size_t>(m_top)));
  const FourierCoeffs a = fourier_a(e, atoms, m_top, grid);
  cplx sum = a.at(0);
  for (int n = -opt.n_max; n <= opt.n_max; ++n) {
    if (n != 0) sum += a.at(n * q) * sol.at(n);
  }
  out.discarded_term = std::abs(a.at(m_top));
  out.closure_residual = sol.closure_residual;
  out.rcond = sol.rcond;
  out.n_grid = grid;
  return sum.real();
}

} // namespace

SpectralResult gamma_hat_q_spectral(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                                    const SpectralOptions& opt) {
  if (q < 2) throw ValidationError("gamma_hat_q needs q >= 2");
  if (opt.n_max < 0) throw ValidationError("n_max must be non-negative");
  SpectralResult out;
  out.n_max = opt.n_max;
  if (atoms.impurities_vanish()) return out;
  if (opt.n_max == 0) {
    out.value = gamma_hat_infinity(e, atoms).gamma.value;
    const auto a = fourier_a(e, atoms, q, next_power_of_two(8 * static_cast<std::size_t>(q)));
    out.discarded_term = std::abs(a.at(q));
    out.truncation_error = out.discarded_term;
    out.rcond = 1.0;
    return out;
  }
  out.value = spectral_value(e, atoms, q, opt, out);
  out.truncation_error = out.discarded_term;
  if (opt.estimate_truncation && opt.n_max >= 2) {
    SpectralOptions half = opt;
    half.n_max = opt.n_max / 2;
    half.l_max = opt.l_max > 0 ? opt.l_max / 2 : 0;
    SpectralResult scratch;
    const double coarse = spectral_value(e, atoms, q, half, scratch);
    out.truncation_error = std::max(out.discarded_term, std::abs(out.value - coarse));
  }
  return out;
}

} // namespace dilute
