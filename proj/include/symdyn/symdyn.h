/*
 * symdyn C API.
 *
 * Every object crosses the boundary as an opaque handle created by a
 * symdyn_*_new / *_load / producing call and released with the matching
 * *_free. Functions return a symdyn_status; on failure the message of the
 * most recent error on the calling thread is available from
 * symdyn_last_error(). Output parameters are left untouched on failure.
 *
 * Entropies are in nats. Strings returned through char** are heap-allocated
 * and released with symdyn_string_free.
 */
#ifndef SYMDYN_H
#define SYMDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SYMDYN_API __declspec(dllexport)
#else
#  define SYMDYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum symdyn_status {
  SYMDYN_OK = 0,
  SYMDYN_E_INVALID_ARGUMENT = 1,
  SYMDYN_E_LENGTH_MISMATCH = 2,
  SYMDYN_E_EMPTY_INPUT = 3,
  SYMDYN_E_MALFORMED_CERTIFICATE = 4,
  SYMDYN_E_NOT_ENOUGH_ENTRIES = 5,
  SYMDYN_E_STRUCTURAL = 6,
  SYMDYN_E_CONFIG = 7,
  SYMDYN_E_IO = 8,
  SYMDYN_E_INTERNAL = 99
} symdyn_status;

typedef struct symdyn_word symdyn_word;
typedef struct symdyn_spec symdyn_spec;
typedef struct symdyn_cert symdyn_cert;
typedef struct symdyn_induced symdyn_induced;
typedef struct symdyn_experiment symdyn_experiment;

typedef enum symdyn_word_format { SYMDYN_FORMAT_RAW = 0, SYMDYN_FORMAT_RLE = 1 } symdyn_word_format;
typedef enum symdyn_metric { SYMDYN_METRIC_DBAR = 0, SYMDYN_METRIC_FBAR = 1, SYMDYN_METRIC_BOTH = 2 } symdyn_metric;
typedef enum symdyn_channel { SYMDYN_CHANNEL_SUB = 0, SYMDYN_CHANNEL_INDEL = 1 } symdyn_channel;
typedef enum symdyn_unit { SYMDYN_UNIT_NATS = 0, SYMDYN_UNIT_BITS = 1 } symdyn_unit;

typedef struct symdyn_entropy_estimate {
  size_t m;
  double block_entropy;
  double ratio;
  double slope;
  size_t n;
  int undersampled;
} symdyn_entropy_estimate;

typedef struct symdyn_abramov_result {
  double h_base;
  double h_induced;
  double mu_e;
  double residual;
  size_t m;
  size_t m_induced;
  size_t induced_length;
  size_t induced_alphabet;
  double overflow_mass;
  double alpha;
  size_t max_return;
  int flagged;
} symdyn_abramov_result;

SYMDYN_API const char* symdyn_version(void);
SYMDYN_API const char* symdyn_rng_name(void);
SYMDYN_API const char* symdyn_last_error(void);
SYMDYN_API void symdyn_string_free(char* s);

/* Words */
SYMDYN_API symdyn_status symdyn_word_new(const uint32_t* symbols, size_t n, uint32_t alphabet,
                                         symdyn_word** out);
SYMDYN_API symdyn_status symdyn_word_read(const char* path, uint32_t alphabet_hint, symdyn_word** out);
SYMDYN_API symdyn_status symdyn_word_write(const symdyn_word* w, const char* path, symdyn_word_format fmt);
SYMDYN_API size_t symdyn_word_length(const symdyn_word* w);
SYMDYN_API uint32_t symdyn_word_alphabet(const symdyn_word* w);
SYMDYN_API const uint32_t* symdyn_word_data(const symdyn_word* w);
SYMDYN_API void symdyn_word_free(symdyn_word* w);

/* Process specs and generation */
SYMDYN_API symdyn_status symdyn_spec_parse(const char* json, symdyn_spec** out);
SYMDYN_API symdyn_status symdyn_spec_load(const char* path, symdyn_spec** out);
SYMDYN_API uint32_t symdyn_spec_alphabet(const symdyn_spec* s);
SYMDYN_API int symdyn_spec_is_mixture(const symdyn_spec* s);
SYMDYN_API symdyn_status symdyn_analytic_entropy(const symdyn_spec* s, double* out);
SYMDYN_API void symdyn_spec_free(symdyn_spec* s);
SYMDYN_API symdyn_status symdyn_sample_path(const symdyn_spec* s, size_t n, uint64_t seed,
                                            symdyn_word** out);
SYMDYN_API symdyn_status symdyn_quasi_generic_path(const symdyn_spec* s, size_t n, uint32_t schedule_L,
                                                   uint64_t seed, symdyn_word** out);
/* Routes mixtures to the quasi-generic construction. */
SYMDYN_API symdyn_status symdyn_generate(const symdyn_spec* s, size_t n, uint32_t schedule_L,
                                         uint64_t seed, symdyn_word** out);

/* Metrics */
SYMDYN_API symdyn_status symdyn_hamming_dn(const symdyn_word* u, const symdyn_word* w, double* out);
/* cert_out may be NULL. */
SYMDYN_API symdyn_status symdyn_edit_fn(const symdyn_word* u, const symdyn_word* w, double* value,
                                        symdyn_cert** cert_out);
SYMDYN_API symdyn_status symdyn_edit_fn_fast(const symdyn_word* u, const symdyn_word* w, double* out);
/* dbar_out / fbar_out receive k values each (NaN for the metric not
 * requested); limsup_* may be NULL. */
SYMDYN_API symdyn_status symdyn_distance_profile(const symdyn_word* u, const symdyn_word* w,
                                                 const size_t* checkpoints, size_t k,
                                                 symdyn_metric metric, double* dbar_out,
                                                 double* fbar_out, double* limsup_dbar,
                                                 double* limsup_fbar);

/* Certificates */
SYMDYN_API symdyn_status symdyn_cert_new(const size_t* left, const size_t* right, size_t k,
                                         symdyn_cert** out);
SYMDYN_API symdyn_status symdyn_cert_read(const char* path, symdyn_cert** out);
SYMDYN_API symdyn_status symdyn_cert_write(const symdyn_cert* c, const char* path);
SYMDYN_API size_t symdyn_cert_size(const symdyn_cert* c);
SYMDYN_API const size_t* symdyn_cert_left(const symdyn_cert* c);
SYMDYN_API const size_t* symdyn_cert_right(const symdyn_cert* c);
SYMDYN_API void symdyn_cert_free(symdyn_cert* c);
/* accepted = 1/0; a malformed certificate returns SYMDYN_E_MALFORMED_CERTIFICATE. */
SYMDYN_API symdyn_status symdyn_verify_hat_f(const symdyn_word* u, const symdyn_word* w,
                                             const symdyn_cert* c, double eps, int* accepted);

/* Entropy */
SYMDYN_API symdyn_status symdyn_shannon_h(double t, double* out);
SYMDYN_API symdyn_status symdyn_estimate_entropy_rate(const symdyn_word* w, size_t m,
                                                      symdyn_entropy_estimate* out);
SYMDYN_API symdyn_status symdyn_conditional_entropy(const symdyn_word* w, size_t m, double* out,
                                                    int* consistent);
SYMDYN_API symdyn_status symdyn_max_entropy_geometric(double p, double* out);

/* Channels */
SYMDYN_API symdyn_status symdyn_substitute(const symdyn_word* x, double eps, uint64_t seed,
                                           symdyn_word** y, size_t* changed);
SYMDYN_API symdyn_status symdyn_indel(const symdyn_word* x, double eps, uint64_t seed,
                                      symdyn_word** y, symdyn_cert** cert);
SYMDYN_API symdyn_status symdyn_budget(double eps, uint32_t alphabet, double* out);

/* Induction. marks == NULL (k == 0) means every nonzero symbol. */
SYMDYN_API symdyn_status symdyn_induce(const symdyn_word* w, const uint32_t* marks, size_t k,
                                       symdyn_induced** out);
SYMDYN_API size_t symdyn_induced_returns(const symdyn_induced* h);
SYMDYN_API double symdyn_induced_density(const symdyn_induced* h);
/* Histogram rows in increasing return time; call with NULL buffers to get
 * the row count. */
SYMDYN_API size_t symdyn_induced_histogram(const symdyn_induced* h, size_t* times, uint64_t* counts,
                                           size_t capacity);
SYMDYN_API symdyn_status symdyn_induced_kac(const symdyn_induced* h, double* mean_return,
                                            double* residual);
SYMDYN_API symdyn_status symdyn_induced_svg(const symdyn_induced* h, char** svg);
SYMDYN_API void symdyn_induced_free(symdyn_induced* h);
SYMDYN_API symdyn_status symdyn_abramov_check(const symdyn_word* w, const uint32_t* marks, size_t k,
                                              size_t m, size_t r_max, symdyn_abramov_result* out);

/* Experiments */
SYMDYN_API symdyn_status symdyn_experiment_load(const char* path, symdyn_experiment** out);
SYMDYN_API symdyn_status symdyn_experiment_parse(const char* json, symdyn_experiment** out);
SYMDYN_API void symdyn_experiment_free(symdyn_experiment* e);
/* Overrides; pass 0 / NULL to keep the configured value. */
SYMDYN_API symdyn_status symdyn_experiment_override(symdyn_experiment* e, const uint64_t* seed,
                                                    const symdyn_unit* unit);
/* Runs, writes configured outputs, returns the CSV. passed = 1 when every
 * row meets the hard criterion. */
SYMDYN_API symdyn_status symdyn_run_continuity(const symdyn_experiment* e, char** csv, int* passed);
/* passed = 1 when the median residual is within the configured tolerance. */
SYMDYN_API symdyn_status symdyn_run_abramov(const symdyn_experiment* e, char** csv, int* passed);
/* SVG scatter from a continuity CSV produced above. */
SYMDYN_API symdyn_status symdyn_plot_continuity(const char* csv, char** svg);

#ifdef __cplusplus
}
#endif

#endif /* SYMDYN_H */
