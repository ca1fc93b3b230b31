#include "dilute/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "dilute/arith.hpp"
#include "dilute/dos.hpp"
#include "dilute/experiments.hpp"
#include "dilute/harmonics.hpp"
#include "dilute/lyapunov.hpp"
#include "dilute/random.hpp"
#include "dilute/sl2.hpp"

namespace dilute {

// From `acceptance --calibrate` (seed 0x5eed2024 ^ 0xca11b7a7e): largest
// observed ratios 0.100, 0.484 and 0.366, each times 1.5.
const Calibration& frozen_calibration() {
  static const Calibration c{0.15, 0.75, 0.55};
  return c;
}

bool VerifyReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["criteria"] = nlohmann::json::array();
  for (const auto& r : results) {
    j["criteria"].push_back({{"id", r.id},
                             {"title", r.title},
                             {"passed", r.passed},
                             {"summary", r.summary},
                             {"observed", r.observed},
                             {"seconds", r.seconds}});
  }
  return j;
}

namespace {

const double kGoldenK = kPi * (std::sqrt(5.0) - 1.0) / 2.0;

DisorderSpec delta(double v, double rho) { return make_disorder({{v, 1.0}}, rho); }

double hypot3(double a, double b) { return std::sqrt(a * a + b * b); }

struct Context {
  const VerifyOptions& opt;
  double scale;  // 1 for the full suite

  std::uint64_t steps(double full) const {
    return std::max<std::uint64_t>(10'000, static_cast<std::uint64_t>(full * scale));
  }

  McOptions mc(std::uint64_t n_total, std::uint32_t replicas, std::uint64_t stream) const {
    McOptions o;
    o.replicas = replicas;
    o.n_steps = std::max<std::uint64_t>(10'000, n_total / replicas);
    o.burn_in = 10'000;
    o.seed = opt.seed;
    o.stream_base = stream;
    o.threads = opt.threads;
    return o;
  }

  double gamma_inf(const EnergyPoint& e, const DisorderSpec& atoms) const {
    return gamma_hat_infinity(e, atoms).gamma.value + opt.gamma_inf_offset;
  }
};

std::uint64_t stream_of(int criterion, int sub) {
  return (static_cast<std::uint64_t>(criterion) << 40) | (static_cast<std::uint64_t>(sub) << 20);
}

std::string fmt(double x) { return format_double(x); }

// 1. Closed-form anchors at the band centre.
CriterionResult closed_form_anchor(const Context& ctx) {
  CriterionResult r{1, "closed-form anchor gamma_hat_inf(E=0)", false, {}, {}, 0.0};
  const auto e = energy_from_E(0.0);
  const double g2 = ctx.gamma_inf(e, delta(2.0, 1.0));
  const double g1 = ctx.gamma_inf(e, delta(1.0, 1.0));
  const double want2 = 0.5 * std::log(3.0);
  const double want1 = 0.5 * std::log(1.5);
  // The anchors rest on lambda(a) and (1 + lambda^2) / (2 lambda) = 1 + a / 2.
  const double l2 = stretch_eigenvalue(4.0);
  const double l1 = stretch_eigenvalue(1.0);
  const double lam_err = std::max(std::abs(l2 - (3.0 + 2.0 * std::sqrt(2.0))),
                                  std::abs(l1 - (3.0 + std::sqrt(5.0)) / 2.0));
  const double id_err = std::max(std::abs((1 + l2 * l2) / (2 * l2) - 3.0),
                                 std::abs((1 + l1 * l1) / (2 * l1) - 1.5));
  const double d2 = std::abs(g2 - want2);
  const double d1 = std::abs(g1 - want1);
  r.passed = d2 <= 1e-12 && d1 <= 1e-12 && lam_err <= 1e-12 && id_err <= 1e-12;
  r.observed = {{"gamma_hat_inf_delta2", g2},     {"expected_delta2", want2},
                {"gamma_hat_inf_delta1", g1},     {"expected_delta1", want1},
                {"lambda_error", lam_err},        {"identity_error", id_err},
                {"uniform_average_delta2", 0.5 * std::log(2.0)},
                {"uniform_average_delta1", 0.5 * std::log(1.25)}};
  r.summary = "delta2 " + fmt(g2) + " vs " + fmt(want2) + ", delta1 " + fmt(g1) + " vs " +
              fmt(want1) + " (tol 1e-12)";
  return r;
}

// 2. a_0 equals the closed form; |a_m| decays exponentially.
CriterionResult fourier_consistency(const Context& ctx) {
  CriterionResult r{2, "Fourier a_0 = gamma_hat_inf, exponential decay", true, {}, {}, 0.0};
  Rng rng(RngContract{ctx.opt.seed, stream_of(2, 0)});
  double worst = 0.0;
  double min_xi = 1e300;
  nlohmann::json sets = nlohmann::json::array();
  for (int i = 0; i < 10; ++i) {
    const double k = 0.2 + (kPi - 0.4) * rng.uniform();
    const int n_atoms = 1 + static_cast<int>(rng.below(3));
    std::vector<Atom> atoms;
    for (int j = 0; j < n_atoms; ++j) {
      double v = -3.0 + 6.0 * rng.uniform();
      if (std::abs(v) < 0.1) v = 0.1;
      atoms.push_back({v, 0.2 + rng.uniform()});
    }
    const auto d = make_disorder(atoms, 1.0);
    const auto e = energy_from_k(k);
    const auto a = fourier_a(e, d, 64, 8192);
    const double diff = std::abs(a.at(0) - ctx.gamma_inf(e, d));
    const auto fit = fit_decay(a);
    const double xi = fit ? fit->xi : 0.0;
    worst = std::max(worst, diff);
    min_xi = std::min(min_xi, xi);
    if (diff > 1e-10 || !(xi > 0.0)) r.passed = false;
    sets.push_back({{"k", k}, {"disorder", to_string(d)}, {"a0_diff", diff}, {"xi", xi},
                    {"c", fit ? fit->c : 0.0}});
  }
  r.observed = {{"sets", sets}, {"max_a0_diff", worst}, {"min_xi", min_xi}};
  r.summary = "max |a_0 - gamma_hat_inf| " + fmt(worst) + " (tol 1e-10), min xi " + fmt(min_xi);
  return r;
}

// 3. Uniform psi: exponent and phase law.
CriterionResult uniform_phase_law(const Context& ctx) {
  CriterionResult r{3, "uniform-psi auxiliary chain", false, {}, {}, 0.0};
  const auto e = energy_from_E(0.0);
  const auto d = delta(2.0, 1.0);
  const auto opt = ctx.mc(ctx.steps(1e6), 1, stream_of(3, 0));
  BatchMeans bm(opt.n_steps, opt.batches);
  std::vector<double> phases;
  phases.reserve(opt.n_steps);
  walk_hat_orbit(e, d, PsiLaw::uniform(), opt.orbit(), opt.stream(0),
                 [&](double, double, double log_norm, double, double next) {
                   bm.add(log_norm);
                   phases.push_back(next);
                 });
  const auto g = bm.finish();
  std::sort(phases.begin(), phases.end());
  double ks = 0.0;
  const double n = static_cast<double>(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double f = phases[i] / kPi;
    ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  const double target = ctx.gamma_inf(e, d);
  const double dev = std::abs(g.value - target);
  r.passed = dev <= 3.0 * g.std_error && ks <= 0.01;
  r.observed = {{"gamma", g.value}, {"sigma", g.std_error}, {"gamma_hat_inf", target},
                {"ks", ks},         {"n_steps", opt.n_steps}};
  r.summary = "gamma " + fmt(g.value) + " +- " + fmt(g.std_error) + " vs " + fmt(target) +
              ", KS " + fmt(ks) + " (tol 0.01)";
  return r;
}

struct RatioPoint {
  double rho;
  double y;
  double sigma;
};

RatioPoint gamma_ratio(const Context& ctx, const EnergyPoint& e, double v, double rho,
                       double impurities, std::uint64_t stream) {
  const auto opt = ctx.mc(ctx.steps(impurities / rho), 4, stream);
  const auto g = gamma_mc_telescopic(e, delta(v, rho), opt).gamma;
  return {rho, g.value / rho, g.std_error / rho};
}

// 4. Diophantine k: gamma / rho approaches gamma_hat_inf linearly in rho.
CriterionResult diophantine_branch(const Context& ctx) {
  CriterionResult r{4, "Diophantine k: gamma/rho -> gamma_hat_inf", false, {}, {}, 0.0};
  const auto e = energy_from_k(kGoldenK);
  const double target = ctx.gamma_inf(e, delta(2.0, 1.0));
  std::vector<double> rhos{0.1, 0.05, 0.025};
  std::vector<double> ys, sig, res;
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const auto p = gamma_ratio(ctx, e, 2.0, rhos[i], 2e6, stream_of(4, static_cast<int>(i)));
    ys.push_back(p.y);
    sig.push_back(p.sigma);
    res.push_back(std::abs(p.y - target));
    pts.push_back({{"rho", p.rho}, {"ratio", p.y}, {"sigma", p.sigma}, {"residual", res.back()}});
  }
  const auto fit = weighted_linear_fit(rhos, ys, sig);
  const auto res_fit = weighted_linear_fit(rhos, res, sig);
  const bool intercept_ok = std::abs(fit.intercept - target) <= 3.0 * fit.intercept_se;
  const bool decreasing = res_fit.slope > 0.0;
  r.passed = intercept_ok && decreasing;
  r.observed = {{"points", pts},
                {"gamma_hat_inf", target},
                {"intercept", fit.intercept},
                {"intercept_se", fit.intercept_se},
                {"slope", fit.slope},
                {"residual_slope", res_fit.slope},
                {"residual_slope_se", res_fit.slope_se}};
  r.summary = "intercept " + fmt(fit.intercept) + " +- " + fmt(fit.intercept_se) + " vs " +
              fmt(target) + ", residuals " + fmt(res[0]) + " > " + fmt(res[1]) + " > " +
              fmt(res[2]) + " (fitted residual slope " + fmt(res_fit.slope) + ")";
  return r;
}

// Truncation error of J_n from the last two doublings of n_max.
double harmonic_truncation(const EnergyPoint& e, const DisorderSpec& d, int q, int n_max, int n) {
  const auto hi = solve_harmonic_system(e, d, q, n_max);
  const auto mid = solve_harmonic_system(e, d, q, n_max / 2);
  const auto lo = solve_harmonic_system(e, d, q, n_max / 4);
  return std::max(std::abs(hi.at(n) - mid.at(n)), std::abs(mid.at(n) - lo.at(n)));
}

// 5. Rational k: gamma / rho tracks gamma_hat_q, not gamma_hat_inf.
CriterionResult rational_branch(const Context& ctx) {
  CriterionResult r{5, "rational k: gamma/rho -> gamma_hat_q", true, {}, {}, 0.0};
  const double c = frozen_calibration().rational_branch_c;
  const double rho = 0.025;
  const auto atoms = delta(2.0, 1.0);
  nlohmann::json cases = nlohmann::json::array();
  std::string summary;
  int sub = 0;
  for (const Rational pq : {Rational{1, 2}, Rational{1, 3}}) {
    const auto e = energy_from_rational(pq);
    const int q = static_cast<int>(pq.q);
    const auto hat = gamma_hat_q_mc(e, atoms, q, ctx.mc(ctx.steps(1e7), 4, stream_of(5, sub++))).gamma;
    SpectralOptions so;
    so.n_max = 64;
    const auto spec = gamma_hat_q_spectral(e, atoms, q, so);
    const auto y = gamma_ratio(ctx, e, 2.0, rho, 2e6, stream_of(5, sub++));
    const double inf = ctx.gamma_inf(e, atoms);
    const double methods_gap = std::abs(hat.value - spec.value);
    const double methods_tol = 3.0 * hat.std_error + spec.truncation_error;
    const double dev = std::abs(y.y - spec.value);
    const double tol = 3.0 * y.sigma + rho * c + spec.truncation_error;
    const double dev_inf = std::abs(y.y - inf);
    const bool ok = methods_gap <= methods_tol && dev <= tol && dev_inf > tol;
    r.passed = r.passed && ok;
    cases.push_back({{"p", pq.p},
                     {"q", pq.q},
                     {"ratio", y.y},
                     {"ratio_sigma", y.sigma},
                     {"gamma_hat_q_mc", hat.value},
                     {"gamma_hat_q_mc_sigma", hat.std_error},
                     {"gamma_hat_q_spectral", spec.value},
                     {"truncation_error", spec.truncation_error},
                     {"gamma_hat_inf", inf},
                     {"deviation", dev},
                     {"tolerance", tol},
                     {"deviation_from_gamma_hat_inf", dev_inf}});
    summary += (summary.empty() ? "" : "; ") + std::string("q=") + std::to_string(q) + ": ratio " +
               fmt(y.y) + " +- " + fmt(y.sigma) + ", hat " + fmt(hat.value) + ", spectral " +
               fmt(spec.value) + ", inf " + fmt(inf);
  }
  r.observed = {{"cases", cases}, {"c", c}, {"rho", rho}};
  r.summary = summary;
  return r;
}

// 6. The anomaly gamma_hat_q - gamma_hat_inf decays with q.
CriterionResult anomaly_decay(const Context& ctx) {
  CriterionResult r{6, "anomaly |gamma_hat_q - gamma_hat_inf| decays in q", false, {}, {}, 0.0};
  const auto atoms = delta(2.0, 1.0);
  std::vector<double> qs, logs;
  nlohmann::json rows = nlohmann::json::array();
  for (int q = 2; q <= 10; ++q) {
    const Rational pq{central_numerator(q), q};
    const auto e = energy_from_rational(pq);
    SpectralOptions so;
    so.n_max = std::max(16, 128 / q);
    const auto spec = gamma_hat_q_spectral(e, atoms, q, so);
    const double diff = std::abs(spec.value - ctx.gamma_inf(e, atoms));
    qs.push_back(q);
    logs.push_back(std::log(diff));
    rows.push_back({{"q", q}, {"p", pq.p}, {"difference", diff},
                    {"truncation_error", spec.truncation_error}, {"n_max", so.n_max}});
  }
  const std::vector<double> ones(qs.size(), 1.0);
  const auto fit = weighted_linear_fit(qs, logs, ones);
  r.passed = fit.slope < 0.0;
  r.observed = {{"rows", rows}, {"log_slope", fit.slope}, {"log_intercept", fit.intercept}};
  r.summary = "slope of log|difference| vs q " + fmt(fit.slope) + ", q=2 " +
              fmt(rows.front()["difference"].get<double>()) + ", q=10 " +
              fmt(rows.back()["difference"].get<double>());
  return r;
}

// 7. Harmonics at k = pi/3.
CriterionResult harmonic_structure(const Context& ctx) {
  CriterionResult r{7, "harmonic structure at k = pi/3", true, {}, {}, 0.0};
  const double c = frozen_calibration().harmonic_c;
  const double rho = 0.05;
  const auto e = energy_from_rational({1, 3});
  const auto phys = oscillatory_sums_mc(e, delta(2.0, rho), 6, ctx.mc(ctx.steps(1e7), 4, stream_of(7, 0)));
  const auto atoms = delta(2.0, 1.0);
  const auto hat = hat_oscillatory_sums_mc(e, atoms, PsiLaw::grid(3), 6,
                                           ctx.mc(ctx.steps(1e7), 4, stream_of(7, 1)));
  const auto sol = solve_harmonic_system(e, atoms, 3, 64);
  const double trunc = harmonic_truncation(e, atoms, 3, 64, 1);
  nlohmann::json ms = nlohmann::json::array();
  double worst_phys = 0.0;
  double worst_hat = 0.0;
  for (int m : {1, 2, 4, 5}) {
    const double ip = std::abs(phys.at(m));
    const double ih = std::abs(hat.at(m));
    const bool ok = ip <= c * rho + 3.0 * phys.error(m) && ih <= 3.0 * hat.error(m);
    r.passed = r.passed && ok;
    worst_phys = std::max(worst_phys, ip);
    worst_hat = std::max(worst_hat, ih / std::max(hat.error(m), 1e-300));
    ms.push_back({{"m", m}, {"abs_I", ip}, {"I_sigma", phys.error(m)}, {"abs_Ihat", ih},
                  {"Ihat_sigma", hat.error(m)}});
  }
  const double j_gap = std::abs(sol.at(1) - hat.at(3));
  const double j_tol = 3.0 * hat.error(3) + trunc;
  r.passed = r.passed && j_gap <= j_tol;
  r.observed = {{"m", ms},
                {"c", c},
                {"J1", {sol.at(1).real(), sol.at(1).imag()}},
                {"Ihat3", {hat.at(3).real(), hat.at(3).imag()}},
                {"Ihat3_sigma", hat.error(3)},
                {"J1_truncation", trunc},
                {"J1_gap", j_gap}};
  r.summary = "max |I_m| " + fmt(worst_phys) + " (bound " + fmt(c * rho) +
              " + 3 sigma), max |Ihat_m|/sigma " + fmt(worst_hat) + ", |J_1 - Ihat_3| " +
              fmt(j_gap) + " (tol " + fmt(j_tol) + ")";
  return r;
}

// 8. b-hat identity on the implemented psi grid; printed grid as diagnostic.
CriterionResult bhat_identity(const Context&) {
  CriterionResult r{8, "b-hat identity on the psi grid", true, {}, {}, 0.0};
  const auto atoms = delta(2.0, 1.0);
  nlohmann::json rows = nlohmann::json::array();
  double worst = 0.0;
  double printed_worst = 0.0;
  for (int q = 2; q <= 5; ++q) {
    const auto e = energy_from_rational({central_numerator(q), q});
    const int m_max = 3 * q;
    const int l_max = 8;
    const auto b = transition_coeffs(e, atoms, m_max, l_max, default_grid(e, atoms, m_max, l_max));
    const auto rep = hat_transition_relation_check(b, e, atoms, PsiLaw::grid(q), 1e-10);
    const auto printed = hat_transition_relation_check(b, e, atoms, PsiLaw::printed_grid(q), 1e-10);
    r.passed = r.passed && rep.passed;
    worst = std::max({worst, rep.max_mismatch_divisible, rep.max_magnitude_other});
    printed_worst = std::max({printed_worst, printed.max_mismatch_divisible,
                              printed.max_magnitude_other});
    rows.push_back({{"q", q},
                    {"grid", rep.law},
                    {"mismatch_divisible", rep.max_mismatch_divisible},
                    {"magnitude_other", rep.max_magnitude_other},
                    {"printed_grid", printed.law},
                    {"printed_mismatch_divisible", printed.max_mismatch_divisible},
                    {"printed_magnitude_other", printed.max_magnitude_other},
                    {"printed_passed", printed.passed}});
  }
  r.observed = {{"rows", rows}};
  r.summary = "max defect " + fmt(worst) + " (tol 1e-10); printed grid diagnostic defect " +
              fmt(printed_worst);
  return r;
}

// 9. Density of states.
CriterionResult dos_anchors(const Context& ctx) {
  CriterionResult r{9, "density of states anchors", true, {}, {}, 0.0};
  const double c = frozen_calibration().dos_c;
  nlohmann::json obs;

  double free_err = 0.0;
  for (double k : {kGoldenK, kPi / 3}) {
    const auto e = energy_from_k(k);
    const auto rot = dos_rotation(e, delta(2.0, 0.0), ctx.mc(ctx.steps(1e6), 1, stream_of(9, 0)));
    free_err = std::max(free_err, std::abs(rot.value - k) / k);
  }
  const bool free_ok = free_err <= 8.0 * std::numeric_limits<double>::epsilon();
  obs["free_relative_error"] = free_err;

  Rng rng(RngContract{ctx.opt.seed, stream_of(9, 1)});
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(64);
    std::vector<double> diag(n), off(n - 1);
    for (auto& x : diag) x = -3.0 + 6.0 * rng.uniform();
    for (auto& x : off) x = -2.0 + 4.0 * rng.uniform();
    const double shift = -4.0 + 8.0 * rng.uniform();
    const auto ev = jacobi_eigenvalues(diag, off);
    const auto dense = static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [&](double x) { return x < shift; }));
    if (sturm_count(diag, off, shift) != dense) ++mismatches;
  }
  obs["sturm_mismatches"] = mismatches;

  const std::size_t box = 10'000;
  nlohmann::json cmp = nlohmann::json::array();
  bool cmp_ok = true;
  int sub = 2;
  for (double k : {kGoldenK, kPi / 3}) {
    const auto e = energy_from_k(k);
    const auto d = delta(2.0, 0.1);
    const auto rot = dos_rotation(e, d, ctx.mc(ctx.steps(1e6), 4, stream_of(9, sub++)));
    const auto eig = dos_eigencount(e, d, box, ctx.opt.suite == "full" ? 32 : 8, ctx.opt.seed,
                                    stream_of(9, sub++), ctx.opt.threads);
    const double gap = std::abs(rot.value - eig.value);
    const double tol = kPi * 5.0 / box + 3.0 * hypot3(rot.error.std_error, eig.error.std_error);
    cmp_ok = cmp_ok && gap <= tol;
    cmp.push_back({{"k", k}, {"rotation", rot.value}, {"eigencount", eig.value}, {"gap", gap},
                   {"tolerance", tol}});
  }
  obs["rotation_vs_eigencount"] = cmp;

  nlohmann::json low = nlohmann::json::array();
  bool low_ok = true;
  for (const auto& [k, q] : {std::pair{kGoldenK, 0}, std::pair{kPi / 3, 3}}) {
    for (double rho : {0.1, 0.05}) {
      const auto e = energy_from_k(k);
      const auto d = delta(2.0, rho);
      LowDensityOptions lo;
      if (q) {
        lo.measure = LowDensityOptions::Measure::grid_spectral;
        lo.q = q;
      }
      const auto pred = dos_lowdensity(e, d, lo);
      const auto rot = dos_rotation(e, d, ctx.mc(ctx.steps(1e7), 4, stream_of(9, sub++)));
      const double gap = std::abs(pred.value - rot.value);
      const double tol = c * rho * rho + 3.0 * rot.error.std_error;
      low_ok = low_ok && gap <= tol;
      low.push_back({{"k", k}, {"q", q}, {"rho", rho}, {"prediction", pred.value},
                     {"rotation", rot.value}, {"rotation_sigma", rot.error.std_error},
                     {"gap", gap}, {"tolerance", tol}});
    }
  }
  obs["low_density"] = low;
  obs["c"] = c;
  r.passed = free_ok && mismatches == 0 && cmp_ok && low_ok;
  r.observed = obs;
  r.summary = "free relative error " + fmt(free_err) + ", Sturm mismatches " +
              std::to_string(mismatches) + "/1000, rotation vs eigencount " +
              (cmp_ok ? "ok" : "FAIL") + ", low-density formula " + (low_ok ? "ok" : "FAIL");
  return r;
}

// 10. Telescopic and matrix-product estimators agree; theta_0 is irrelevant.
CriterionResult estimator_equivalence(const Context& ctx) {
  CriterionResult r{10, "estimator equivalence and theta_0 independence", true, {}, {}, 0.0};
  Rng rng(RngContract{ctx.opt.seed, stream_of(10, 0)});
  nlohmann::json sets = nlohmann::json::array();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double k = 0.3 + (kPi - 0.6) * rng.uniform();
    const double rho = 0.02 + 0.48 * rng.uniform();
    std::vector<Atom> atoms;
    const int n_atoms = 1 + static_cast<int>(rng.below(2));
    for (int j = 0; j < n_atoms; ++j) atoms.push_back({-3.0 + 6.0 * rng.uniform(), 0.5 + rng.uniform()});
    const auto d = make_disorder(atoms, rho);
    const auto e = energy_from_k(k);
    const auto opt = ctx.mc(ctx.steps(1e6), 1, stream_of(10, 1 + i));
    const auto a = gamma_mc_telescopic(e, d, opt).gamma;
    const auto b = gamma_mc_matrix_product(e, d, 20, opt).gamma;
    const double z = std::abs(a.value - b.value) / hypot3(a.std_error, b.std_error);
    worst = std::max(worst, z);
    if (!(z <= 3.0)) r.passed = false;
    sets.push_back({{"k", k}, {"disorder", to_string(d)}, {"rho", rho}, {"telescopic", a.value},
                    {"matrix_product", b.value}, {"z", z}});
  }
  const auto e = energy_from_k(kGoldenK);
  const auto d = delta(2.0, 0.1);
  std::vector<EstimateWithError> th;
  int sub = 40;
  for (double theta0 : {0.1, 1.0, 2.5}) {
    auto opt = ctx.mc(ctx.steps(1e6), 1, stream_of(10, sub++));
    opt.theta0 = theta0;
    th.push_back(gamma_mc_telescopic(e, d, opt).gamma);
  }
  double theta_z = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) {
    for (std::size_t j = i + 1; j < th.size(); ++j) {
      theta_z = std::max(theta_z, std::abs(th[i].value - th[j].value) /
                                      hypot3(th[i].std_error, th[j].std_error));
    }
  }
  r.passed = r.passed && theta_z <= 3.0;
  r.observed = {{"sets", sets},
                {"max_z", worst},
                {"theta0_values", {th[0].value, th[1].value, th[2].value}},
                {"theta0_max_z", theta_z}};
  r.summary = "max estimator z " + fmt(worst) + ", max theta_0 z " + fmt(theta_z) + " (tol 3)";
  return r;
}

// 11. gamma(rho, 0) / rho at the band centre.
CriterionResult band_centre_probe(const Context& ctx) {
  CriterionResult r{11, "band-centre linearity probe", false, {}, {}, 0.0};
  const auto e = energy_from_E(0.0);
  std::vector<RatioPoint> pts;
  int sub = 0;
  for (double rho : {0.1, 0.2, 0.3, 0.4, 0.5}) pts.push_back(gamma_ratio(ctx, e, 2.0, rho, 2e6, stream_of(11, sub++)));
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      worst = std::max(worst, std::abs(pts[i].y - pts[j].y) / hypot3(pts[i].sigma, pts[j].sigma));
    }
  }
  double wsum = 0.0, ysum = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : pts) {
    wsum += 1.0 / (p.sigma * p.sigma);
    ysum += p.y / (p.sigma * p.sigma);
    rows.push_back({{"rho", p.rho}, {"ratio", p.y}, {"sigma", p.sigma}});
  }
  SpectralOptions so;
  so.n_max = 64;
  const double g2 = gamma_hat_q_spectral(e, delta(2.0, 1.0), 2, so).value;
  r.passed = worst <= 3.0;
  r.observed = {{"rows", rows}, {"max_pair_z", worst}, {"weighted_mean", ysum / wsum},
                {"gamma_hat_2", g2}};
  r.summary = "ratios " + fmt(pts.front().y) + " (rho 0.1) .. " + fmt(pts.back().y) +
              " (rho 0.5), max pairwise z " + fmt(worst) + " (tol 3); mean " + fmt(ysum / wsum) +
              ", gamma_hat_2 " + fmt(g2);
  return r;
}

// 12. Sweeps are reproducible and independent of the thread count.
CriterionResult determinism(const Context& ctx) {
  CriterionResult r{12, "sweep determinism", false, {}, {}, 0.0};
  RunConfig c;
  c.command = "sweep-energy";
  c.k_list = {1.9, kPi / 2, 1.2};
  c.rho = 0.05;
  c.n_steps = 20'000;
  c.replicas = 3;
  c.seed = ctx.opt.seed;
  c.q_max = 8;
  c.n_max = 16;
  c.box = 2'000;
  c.eig_replicas = 2;
  c.timestamp = false;
  c.threads = 1;
  const std::string a = run_to_string(c);
  const std::string b = run_to_string(c);
  c.threads = 4;
  const std::string t = run_to_string(c);
  r.passed = a == b && a == t;
  r.observed = {{"repeat_identical", a == b}, {"threaded_identical", a == t}, {"bytes", a.size()}};
  r.summary = std::string("repeat ") + (a == b ? "identical" : "DIFFERENT") + ", threaded " +
              (a == t ? "identical" : "DIFFERENT");
  return r;
}

using CriterionFn = CriterionResult (*)(const Context&);

constexpr CriterionFn kCriteria[] = {
    closed_form_anchor, fourier_consistency, uniform_phase_law, diophantine_branch,
    rational_branch,    anomaly_decay,       harmonic_structure, bhat_identity,
    dos_anchors,        estimator_equivalence, band_centre_probe, determinism};

} // namespace

VerifyReport run_verification(const VerifyOptions& opt) {
  if (opt.suite != "fast" && opt.suite != "full") throw ValidationError("suite must be fast or full");
  const Context ctx{opt, opt.suite == "full" ? 1.0 : 0.1};
  VerifyReport rep;
  rep.suite = opt.suite;
  for (int id = 1; id <= 12; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = kCriteria[id - 1](ctx);
    } catch (const std::exception& e) {
      res = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), {}, 0.0};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.on_result) opt.on_result(res);
    rep.results.push_back(std::move(res));
  }
  return rep;
}

nlohmann::json calibrate(std::uint64_t seed, unsigned threads) {
  VerifyOptions vo;
  vo.seed = seed;
  vo.threads = threads;
  vo.suite = "full";
  const Context ctx{vo, 1.0};
  nlohmann::json out;
  const auto atoms = delta(2.0, 1.0);

  nlohmann::json rational = nlohmann::json::array();
  int sub = 0;
  for (const Rational pq : {Rational{1, 2}, Rational{1, 3}}) {
    const auto e = energy_from_rational(pq);
    SpectralOptions so;
    so.n_max = 64;
    const double ref = gamma_hat_q_spectral(e, atoms, static_cast<int>(pq.q), so).value;
    for (double rho : {0.1, 0.05}) {
      const auto y = gamma_ratio(ctx, e, 2.0, rho, 2e6, stream_of(13, sub++));
      rational.push_back({{"q", pq.q}, {"rho", rho}, {"c", std::abs(y.y - ref) / rho},
                          {"sigma_over_rho", y.sigma / rho}});
    }
  }
  out["rational_branch"] = rational;

  const auto e3 = energy_from_rational({1, 3});
  const double rho_h = 0.1;
  const auto phys = oscillatory_sums_mc(e3, delta(2.0, rho_h), 6, ctx.mc(1e7, 4, stream_of(14, 0)));
  nlohmann::json harm = nlohmann::json::array();
  for (int m : {1, 2, 4, 5}) {
    harm.push_back({{"m", m}, {"c", std::abs(phys.at(m)) / rho_h},
                    {"sigma_over_rho", phys.error(m) / rho_h}});
  }
  out["harmonic"] = harm;

  nlohmann::json dos = nlohmann::json::array();
  sub = 0;
  for (const auto& [k, q] : {std::pair{kGoldenK, 0}, std::pair{kPi / 3, 3}}) {
    const double rho = 0.2;
    const auto e = energy_from_k(k);
    const auto d = delta(2.0, rho);
    LowDensityOptions lo;
    if (q) {
      lo.measure = LowDensityOptions::Measure::grid_spectral;
      lo.q = q;
    }
    const auto pred = dos_lowdensity(e, d, lo);
    const auto rot = dos_rotation(e, d, ctx.mc(1e7, 4, stream_of(15, sub++)));
    dos.push_back({{"k", k}, {"rho", rho}, {"c", std::abs(pred.value - rot.value) / (rho * rho)},
                   {"sigma_over_rho2", rot.error.std_error / (rho * rho)}});
  }
  out["dos"] = dos;
  return out;
}

} // namespace dilute
