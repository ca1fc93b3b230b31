#include "dilute/dilute.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include <json.hpp>

#include "dilute/arith.hpp"
#include "dilute/dos.hpp"
#include "dilute/experiments.hpp"
#include "dilute/lyapunov.hpp"
#include "dilute/verify.hpp"

struct dl_disorder {
  dilute::DisorderSpec spec;
};

namespace {

thread_local std::string g_last_error;

dl_status fail(dl_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
dl_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const dilute::ValidationError& e) {
    return fail(DL_ERR_VALIDATION, e.what());
  } catch (const dilute::ConsistencyError& e) {
    return fail(DL_ERR_CONSISTENCY, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(DL_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(DL_ERR_CONSISTENCY, e.what());
  } catch (...) {
    return fail(DL_ERR_CONSISTENCY, "unknown internal error");
  }
}

dl_status require(const void* p, const char* name) {
  if (p) return DL_OK;
  g_last_error = std::string(name) + " must not be NULL";
  return DL_ERR_VALIDATION;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dilute::EnergyPoint energy(dl_energy e) { return dilute::energy_from_k(e.k); }

dilute::McOptions mc(const dl_mc_options* o) {
  dilute::McOptions m;
  if (!o) return m;
  m.n_steps = o->n_steps;
  m.burn_in = o->burn_in;
  m.replicas = o->replicas;
  m.seed = o->seed;
  m.stream_base = o->stream_base;
  m.theta0 = o->theta0;
  m.threads = o->threads;
  return m;
}

void put(const dilute::EstimateWithError& g, dl_estimate* out) {
  out->value = g.value;
  out->std_error = g.std_error;
  out->n_samples = g.n_samples;
}

} // namespace

extern "C" {

const char* dl_last_error(void) { return g_last_error.c_str(); }

const char* dl_version(void) { return "0.1.0"; }

void dl_string_free(char* s) { std::free(s); }

dl_status dl_disorder_parse(const char* text, double rho, dl_disorder** out) {
  if (auto s = require(text, "text")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    *out = new dl_disorder{dilute::parse_disorder(text, rho)};
    return DL_OK;
  });
}

void dl_disorder_free(dl_disorder* d) { delete d; }

dl_status dl_disorder_describe(const dl_disorder* d, char** out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    *out = dup_string(dilute::to_string(d->spec));
    return DL_OK;
  });
}

double dl_disorder_rho(const dl_disorder* d) { return d ? d->spec.rho : 0.0; }

dl_status dl_energy_from_k(double k, dl_energy* out) {
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    const auto e = dilute::energy_from_k(k);
    *out = {e.k, e.E};
    return DL_OK;
  });
}

dl_status dl_energy_from_E(double E, dl_energy* out) {
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    const auto e = dilute::energy_from_E(E);
    *out = {e.k, e.E};
    return DL_OK;
  });
}

dl_status dl_energy_from_rational(const char* text, dl_energy* out, int64_t* p, int64_t* q) {
  if (auto s = require(text, "text")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    const auto r = dilute::parse_rational(text);
    const auto e = dilute::energy_from_rational(r);
    *out = {e.k, e.E};
    if (p) *p = r.p;
    if (q) *q = r.q;
    return DL_OK;
  });
}

dl_status dl_classify_k(double k, int64_t q_max, double tol, int64_t* p, int64_t* q) {
  if (auto s = require(p, "p")) return s;
  if (auto s = require(q, "q")) return s;
  return guarded([&] {
    const auto c = dilute::classify_k(k, q_max, tol);
    *p = c.is_rational() ? c.pq.p : 0;
    *q = c.is_rational() ? c.pq.q : 0;
    return DL_OK;
  });
}

void dl_mc_options_default(dl_mc_options* opt) {
  if (!opt) return;
  const dilute::McOptions m;
  *opt = {m.n_steps, m.burn_in, m.replicas, m.seed, m.stream_base, m.theta0, m.threads};
}

dl_status dl_gamma_telescopic(dl_energy e, const dl_disorder* d, const dl_mc_options* opt,
                              dl_estimate* out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    put(dilute::gamma_mc_telescopic(energy(e), d->spec, mc(opt)).gamma, out);
    return DL_OK;
  });
}

dl_status dl_gamma_matrix_product(dl_energy e, const dl_disorder* d, unsigned renorm_every,
                                  const dl_mc_options* opt, dl_estimate* out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    put(dilute::gamma_mc_matrix_product(energy(e), d->spec, renorm_every, mc(opt)).gamma, out);
    return DL_OK;
  });
}

dl_status dl_gamma_hat_infinity(dl_energy e, const dl_disorder* d, double* out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    *out = dilute::gamma_hat_infinity(energy(e), d->spec).gamma.value;
    return DL_OK;
  });
}

dl_status dl_gamma_hat_q_mc(dl_energy e, const dl_disorder* d, int q, const dl_mc_options* opt,
                            dl_estimate* out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    put(dilute::gamma_hat_q_mc(energy(e), d->spec, q, mc(opt)).gamma, out);
    return DL_OK;
  });
}

dl_status dl_gamma_hat_q_spectral(dl_energy e, const dl_disorder* d, int q, int n_max,
                                  double* value, double* truncation_error) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(value, "value")) return s;
  return guarded([&] {
    dilute::SpectralOptions so;
    so.n_max = n_max;
    const auto r = dilute::gamma_hat_q_spectral(energy(e), d->spec, q, so);
    *value = r.value;
    if (truncation_error) *truncation_error = r.truncation_error;
    return DL_OK;
  });
}

dl_status dl_dos_rotation(dl_energy e, const dl_disorder* d, const dl_mc_options* opt,
                          dl_estimate* out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    put(dilute::dos_rotation(energy(e), d->spec, mc(opt)).error, out);
    return DL_OK;
  });
}

dl_status dl_dos_eigencount(dl_energy e, const dl_disorder* d, size_t box, uint32_t replicas,
                            uint64_t seed, dl_estimate* out) {
  if (auto s = require(d, "disorder")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    put(dilute::dos_eigencount(energy(e), d->spec, box, replicas, seed).error, out);
    return DL_OK;
  });
}

dl_status dl_run(const char* config_json, char** output) {
  if (auto s = require(config_json, "config_json")) return s;
  if (auto s = require(output, "output")) return s;
  return guarded([&] {
    const auto cfg = dilute::run_config_from_json(nlohmann::json::parse(config_json));
    *output = dup_string(dilute::run_to_string(cfg));
    return DL_OK;
  });
}

dl_status dl_verify(const char* options_json, dl_progress_fn progress, void* user,
                    char** report_json) {
  if (auto s = require(report_json, "report_json")) return s;
  return guarded([&] {
    dilute::VerifyOptions vo;
    if (options_json && *options_json) {
      const auto j = nlohmann::json::parse(options_json);
      vo.suite = j.value("suite", vo.suite);
      if (j.contains("seed")) {
        const auto& s = j.at("seed");
        vo.seed = s.is_string() ? dilute::parse_seed(s.get<std::string>()) : s.get<std::uint64_t>();
      }
      vo.threads = j.value("threads", vo.threads);
      vo.gamma_inf_offset = j.value("gamma_inf_offset", 0.0);
      if (j.contains("only")) vo.only = j.at("only").get<std::vector<int>>();
    }
    if (progress) {
      vo.on_result = [&](const dilute::CriterionResult& r) {
        const std::string line = std::string(r.passed ? "PASS" : "FAIL") + " criterion " +
                                 std::to_string(r.id) + " " + r.title + ": " + r.summary;
        progress(line.c_str(), user);
      };
    }
    const auto rep = dilute::run_verification(vo);
    *report_json = dup_string(rep.to_json().dump(2) + "\n");
    if (!rep.passed()) {
      g_last_error = "acceptance suite reported failures";
      return DL_ERR_VERIFICATION;
    }
    return DL_OK;
  });
}

} // extern "C"
