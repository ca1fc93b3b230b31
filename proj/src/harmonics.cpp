#include "dilute/harmonics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dilute/parallel.hpp"
#include "dilute/sl2.hpp"

namespace dilute {

namespace {

HarmonicVector empty_vector(int m_max) {
  if (m_max < 0) throw ValidationError("m_max must be non-negative");
  HarmonicVector h;
  h.m_max = m_max;
  h.values.assign(static_cast<std::size_t>(2 * m_max + 1), 0.0);
  h.std_error.assign(static_cast<std::size_t>(2 * m_max + 1), 0.0);
  return h;
}

/// Real and imaginary parts of z^m, m = 1..m_max, fed to batch accumulators.
struct HarmonicAccumulator {
  HarmonicAccumulator(int m_max, std::uint64_t n, std::size_t batches) : m_max(m_max) {
    for (int m = 0; m < 2 * m_max; ++m) parts.emplace_back(n, batches);
  }
  void add(double theta) {
    const cplx z = std::polar(1.0, 2.0 * theta);
    cplx zm = 1.0;
    for (int m = 1; m <= m_max; ++m) {
      zm *= z;
      parts[static_cast<std::size_t>(2 * (m - 1))].add(zm.real());
      parts[static_cast<std::size_t>(2 * (m - 1) + 1)].add(zm.imag());
    }
  }
  int m_max;
  std::vector<BatchMeans> parts;
};

HarmonicVector pool_harmonics(int m_max, std::vector<std::vector<EstimateWithError>>& per_replica,
                              std::uint64_t n_steps) {
  HarmonicVector h = empty_vector(m_max);
  h.n_steps = n_steps;
  h.values[static_cast<std::size_t>(m_max)] = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    std::vector<EstimateWithError> re, im;
    for (auto& rep : per_replica) {
      re.push_back(rep[static_cast<std::size_t>(2 * (m - 1))]);
      im.push_back(rep[static_cast<std::size_t>(2 * (m - 1) + 1)]);
    }
    const auto r = pool_inverse_variance(re);
    const auto i = pool_inverse_variance(im);
    const cplx v{r.value, i.value};
    const double se = std::hypot(r.std_error, i.std_error);
    h.values[static_cast<std::size_t>(m_max + m)] = v;
    h.values[static_cast<std::size_t>(m_max - m)] = std::conj(v);
    h.std_error[static_cast<std::size_t>(m_max + m)] = se;
    h.std_error[static_cast<std::size_t>(m_max - m)] = se;
  }
  return h;
}

template <class Walk>
HarmonicVector harmonics_mc(int m_max, const McOptions& opt, Walk&& walk) {
  if (m_max < 1) throw ValidationError("m_max must be at least 1");
  if (opt.replicas < 1) throw ValidationError("at least one replica is required");
  std::vector<std::vector<EstimateWithError>> per_replica(opt.replicas);
  parallel_for(opt.replicas, opt.threads, [&](std::size_t r) {
    HarmonicAccumulator acc(m_max, opt.n_steps, opt.batches);
    walk(opt.stream(static_cast<std::uint32_t>(r)),
         [&](double, double, double, double, double next) { acc.add(next); });
    for (const auto& p : acc.parts) per_replica[r].push_back(p.finish());
  });
  return pool_harmonics(m_max, per_replica, opt.n_steps * opt.replicas);
}

/// S_v(theta_j) for every atom on the phase grid, reused across harmonics.
struct ActionTable {
  ActionTable(const EnergyPoint& e, const DisorderSpec& atoms, std::size_t n_grid)
      : grid(phase_grid(n_grid)) {
    for (const auto& a : atoms.atoms) {
      weights.push_back(a.weight);
      auto& s = actions.emplace_back(n_grid);
      for (std::size_t j = 0; j < n_grid; ++j) s[j] = action(e, a.value, grid[j]);
    }
  }

  /// Samples of E~_v avg_psi e^{2 i m (S_v(theta) + psi)}.
  std::vector<cplx> exp_samples(int m, const std::vector<double>& psis = {0.0}) const {
    cplx psi_factor = 0.0;
    for (double psi : psis) psi_factor += std::polar(1.0, 2.0 * m * psi);
    psi_factor /= static_cast<double>(psis.size());
    std::vector<cplx> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double w = weights[i];
      const auto& s = actions[i];
      for (std::size_t j = 0; j < grid.size(); ++j) out[j] += w * std::polar(1.0, 2.0 * m * s[j]);
    }
    for (auto& z : out) z *= psi_factor;
    return out;
  }

  std::vector<double> grid;
  std::vector<double> weights;
  std::vector<std::vector<double>> actions;
};

} // namespace

HarmonicVector oscillatory_sums(const PrueferOrbit& orbit, int m_max) {
  HarmonicVector h = empty_vector(m_max);
  const std::size_t n = orbit.thetas.size() > 0 ? orbit.thetas.size() - 1 : 0;
  h.n_steps = n;
  h.values[static_cast<std::size_t>(m_max)] = 1.0;
  if (n == 0) return h;
  for (int m = 1; m <= m_max; ++m) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double arg = 2.0 * m * orbit.thetas[i];
      re += std::cos(arg);
      im += std::sin(arg);
    }
    const cplx v{re / static_cast<double>(n), im / static_cast<double>(n)};
    h.values[static_cast<std::size_t>(m_max + m)] = v;
    h.values[static_cast<std::size_t>(m_max - m)] = std::conj(v);
  }
  return h;
}

HarmonicVector oscillatory_sums_mc(const EnergyPoint& e, const DisorderSpec& disorder, int m_max,
                                   const McOptions& opt) {
  return harmonics_mc(m_max, opt, [&](const RngContract& stream, auto&& visit) {
    walk_orbit(e, disorder, opt.orbit(), stream, visit);
  });
}

HarmonicVector hat_oscillatory_sums_mc(const EnergyPoint& e, const DisorderSpec& atoms,
                                       const PsiLaw& law, int m_max, const McOptions& opt) {
  return harmonics_mc(m_max, opt, [&](const RngContract& stream, auto&& visit) {
    walk_hat_orbit(e, atoms, law, opt.orbit(), stream, visit);
  });
}

std::size_t default_grid(const EnergyPoint& e, const DisorderSpec& atoms, int m_max, int l_max) {
  double lambda = 1.0;
  for (const auto& a : atoms.atoms) {
    lambda = std::max(lambda, stretch_eigenvalue(kick_strength(e, a.value)));
  }
  const double band = 4.0 * m_max * lambda + 2.0 * (m_max + l_max);
  const std::size_t need =
      std::max<std::size_t>(8 * static_cast<std::size_t>(m_max + l_max), static_cast<std::size_t>(band));
  return next_power_of_two(std::max<std::size_t>(need, 64));
}

TransitionCoeffs transition_coeffs(const EnergyPoint& e, const DisorderSpec& atoms, int m_max,
                                   int l_max, std::size_t n_grid) {
  if (m_max < 0 || l_max < 0) throw ValidationError("m_max and l_max must be non-negative");
  if (!is_power_of_two(n_grid) || n_grid < 8 * static_cast<std::size_t>(m_max + l_max)) {
    throw ValidationError("n_grid must be a power of two with n_grid >= 8 (m_max + l_max)");
  }
  TransitionCoeffs b;
  b.m_max = m_max;
  b.l_max = l_max;
  b.n_grid = n_grid;
  const std::size_t width = static_cast<std::size_t>(2 * l_max + 1);
  b.table.assign(static_cast<std::size_t>(2 * m_max + 1) * width, 0.0);
  const ActionTable table(e, atoms, n_grid);
  for (int m = -m_max; m <= m_max; ++m) {
    const PeriodicSpectrum spec(table.exp_samples(m));
    for (int l = -l_max; l <= l_max; ++l) {
      b.table[static_cast<std::size_t>(m + m_max) * width + static_cast<std::size_t>(l + l_max)] =
          spec.coefficient(m + l);
    }
  }
  return b;
}

double reconstruction_residual(const TransitionCoeffs& b, const EnergyPoint& e,
                               const DisorderSpec& atoms) {
  const ActionTable table(e, atoms, b.n_grid);
  const auto& grid = table.grid;
  double worst = 0.0;
  for (int m = -b.m_max; m <= b.m_max; ++m) {
    const auto g = table.exp_samples(m);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      cplx s = 0.0;
      for (int l = -b.l_max; l <= b.l_max; ++l) {
        s += b.at(m, l) * std::polar(1.0, 2.0 * (m + l) * grid[j]);
      }
      worst = std::max(worst, std::abs(s - g[j]));
    }
  }
  return worst;
}

HatRelationReport hat_transition_relation_check(const TransitionCoeffs& b, const EnergyPoint& e,
                                                const DisorderSpec& atoms, const PsiLaw& law,
                                                double tolerance) {
  if (law.kind != PsiLaw::Kind::grid) {
    throw ValidationError("the b-hat relation is defined for a psi grid");
  }
  HatRelationReport rep;
  rep.q = law.q;
  rep.law = law.describe();
  rep.tolerance = tolerance;
  const ActionTable table(e, atoms, b.n_grid);
  const auto psis = law.atoms();
  for (int m = -b.m_max; m <= b.m_max; ++m) {
    const PeriodicSpectrum spec(table.exp_samples(m, psis));
    const bool divisible = m % law.q == 0;
    for (int l = -b.l_max; l <= b.l_max; ++l) {
      const cplx hat = spec.coefficient(m + l);
      if (divisible) {
        rep.max_mismatch_divisible = std::max(rep.max_mismatch_divisible, std::abs(hat - b.at(m, l)));
      } else {
        rep.max_magnitude_other = std::max(rep.max_magnitude_other, std::abs(hat));
      }
    }
  }
  rep.passed = rep.max_mismatch_divisible <= tolerance && rep.max_magnitude_other <= tolerance;
  return rep;
}

HarmonicSolution solve_harmonic_system(const EnergyPoint& e, const DisorderSpec& atoms, int q,
                                       int n_max, int l_max, std::size_t n_grid) {
  if (q < 2) throw ValidationError("harmonic system needs q >= 2");
  if (n_max < 1) throw ValidationError("harmonic system needs n_max >= 1");
  if (l_max <= 0) l_max = 2 * n_max * q;
  HarmonicSolution sol;
  sol.q = q;
  sol.n_max = n_max;
  sol.J.assign(static_cast<std::size_t>(2 * n_max + 1), 0.0);
  sol.J[static_cast<std::size_t>(n_max)] = 1.0;
  if (atoms.impurities_vanish()) {
    // Pure rotation: every rotation-invariant measure is invariant; the
    // Lebesgue one is returned.
    sol.rcond = 1.0;
    return sol;
  }
  const int extra = std::max(1, n_max / 4);
  const int r_max = l_max / q;
  if (n_grid == 0) n_grid = default_grid(e, atoms, (n_max + extra) * q, l_max + extra * q);
  if (!is_power_of_two(n_grid)) throw ValidationError("n_grid must be a power of two");
  sol.n_grid = n_grid;

  const ActionTable table(e, atoms, n_grid);
  auto row_spectrum = [&](int n) { return PeriodicSpectrum(table.exp_samples(n * q)); };

  const int dim = 2 * n_max;
  auto index = [&](int n) { return n < 0 ? n + n_max : n + n_max - 1; };
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
  for (int n = -n_max; n <= n_max; ++n) {
    if (n == 0) continue;
    const auto spec = row_spectrum(n);
    for (int t = -n_max; t <= n_max; ++t) {
      if (std::abs(t - n) > r_max) continue;
      // b^{(nq)}_{(t-n)q} is the coefficient of e^{2 i t q theta}.
      const cplx c = spec.coefficient(t * q);
      if (t == 0) {
        rhs(index(n)) += c;
      } else {
        A(index(n), index(t)) -= c;
      }
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  sol.rcond = lu.rcond();
  if (!(sol.rcond > 1e-13)) {
    throw NumericalError("truncated harmonic system is singular (rcond = " +
                         format_double(sol.rcond) + "); increase n_max or check the disorder");
  }
  const Eigen::VectorXcd x = lu.solve(rhs);
  for (int n = -n_max; n <= n_max; ++n) {
    if (n != 0) sol.J[static_cast<std::size_t>(n + n_max)] = x(index(n));
  }
  for (int n = 1; n <= n_max; ++n) {
    sol.hermitian_defect = std::max(sol.hermitian_defect, std::abs(sol.at(-n) - std::conj(sol.at(n))));
  }
  for (int sign : {-1, 1}) {
    for (int n = n_max + 1; n <= n_max + extra; ++n) {
      const auto spec = row_spectrum(sign * n);
      cplx s = 0.0;
      for (int t = -n_max; t <= n_max; ++t) s += spec.coefficient(t * q) * sol.at(t);
      sol.closure_residual = std::max(sol.closure_residual, std::abs(s));
    }
  }
  return sol;
}

} // namespace dilute
