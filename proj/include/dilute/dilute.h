#ifndef DILUTE_DILUTE_H
#define DILUTE_DILUTE_H

#include <stddef.h>
#include <stdint.h>

#if defined(DILUTE_BUILDING_LIBRARY)
#define DL_API __attribute__((visibility("default")))
#else
#define DL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes; they double as the CLI exit codes. */
typedef enum {
  DL_OK = 0,
  DL_ERR_VALIDATION = 1,
  DL_ERR_VERIFICATION = 2,
  DL_ERR_CONSISTENCY = 3
} dl_status;

/* Message of the last failed call on this thread, "" if none. */
DL_API const char* dl_last_error(void);
DL_API const char* dl_version(void);

/* Strings returned through char** are owned by the caller. */
DL_API void dl_string_free(char* s);

typedef struct dl_disorder dl_disorder;

/* Site law (1 - rho) delta_0 + rho sum w_i delta_{v_i}, text "v:w[,v:w]*". */
DL_API dl_status dl_disorder_parse(const char* text, double rho, dl_disorder** out);
DL_API void dl_disorder_free(dl_disorder* d);
DL_API dl_status dl_disorder_describe(const dl_disorder* d, char** out);
DL_API double dl_disorder_rho(const dl_disorder* d);

typedef struct {
  double k;
  double E;
} dl_energy;

DL_API dl_status dl_energy_from_k(double k, dl_energy* out);
DL_API dl_status dl_energy_from_E(double E, dl_energy* out);
/* "p/q"; p and q receive the reduced fraction and may be NULL. */
DL_API dl_status dl_energy_from_rational(const char* text, dl_energy* out, int64_t* p, int64_t* q);

/* Rational k (within tol) with denominator <= q_max sets *q > 0; generic sets *q = 0. */
DL_API dl_status dl_classify_k(double k, int64_t q_max, double tol, int64_t* p, int64_t* q);

typedef struct {
  uint64_t n_steps;
  uint64_t burn_in;
  uint32_t replicas;
  uint64_t seed;
  uint64_t stream_base;
  double theta0;
  unsigned threads;
} dl_mc_options;

DL_API void dl_mc_options_default(dl_mc_options* opt);

typedef struct {
  double value;
  double std_error;
  uint64_t n_samples;
} dl_estimate;

DL_API dl_status dl_gamma_telescopic(dl_energy e, const dl_disorder* d, const dl_mc_options* opt,
                                     dl_estimate* out);
DL_API dl_status dl_gamma_matrix_product(dl_energy e, const dl_disorder* d, unsigned renorm_every,
                                         const dl_mc_options* opt, dl_estimate* out);
DL_API dl_status dl_gamma_hat_infinity(dl_energy e, const dl_disorder* d, double* out);
DL_API dl_status dl_gamma_hat_q_mc(dl_energy e, const dl_disorder* d, int q,
                                   const dl_mc_options* opt, dl_estimate* out);
DL_API dl_status dl_gamma_hat_q_spectral(dl_energy e, const dl_disorder* d, int q, int n_max,
                                         double* value, double* truncation_error);

DL_API dl_status dl_dos_rotation(dl_energy e, const dl_disorder* d, const dl_mc_options* opt,
                                 dl_estimate* out);
DL_API dl_status dl_dos_eigencount(dl_energy e, const dl_disorder* d, size_t box,
                                   uint32_t replicas, uint64_t seed, dl_estimate* out);

/* Runs a command from a JSON run configuration and returns the CSV or JSON text. */
DL_API dl_status dl_run(const char* config_json, char** output);

/* Runs the acceptance suite. options_json keys: suite, seed, threads,
   gamma_inf_offset, only. The JSON verdict is returned even on failure,
   in which case the status is DL_ERR_VERIFICATION. progress may be NULL. */
typedef void (*dl_progress_fn)(const char* line, void* user);
DL_API dl_status dl_verify(const char* options_json, dl_progress_fn progress, void* user,
                           char** report_json);

#ifdef __cplusplus
}
#endif

#endif
