/* C interface to the machclock library. All objects are opaque handles; every fallible call
 * returns an mc_status and leaves a thread-local message readable through mc_last_error(). */
#ifndef MACHCLOCK_H
#define MACHCLOCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MC_API __declspec(dllexport)
#else
#define MC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mc_status {
    MC_OK = 0,
    MC_ERR_INVALID_ARGUMENT = 1,
    MC_ERR_INVALID_DIMENSION = 2,
    MC_ERR_SPACE_MISMATCH = 3,
    MC_ERR_CUTOFF_TOO_SMALL = 4,
    MC_ERR_STEP_TOO_LARGE = 5,
    MC_ERR_POSITIVITY = 6,
    MC_ERR_NON_HERMITIAN = 7,
    MC_ERR_DEGENERATE = 8,
    MC_ERR_CONFIG = 9,
    MC_ERR_IO = 10,
    MC_ERR_INTERNAL = 11
} mc_status;

MC_API const char* mc_version(void);
MC_API const char* mc_status_string(mc_status status);
/* Message of the last failed call on this thread; empty after a success. */
MC_API const char* mc_last_error(void);

/* ---- configuration and experiment runs ---- */

typedef struct mc_config mc_config;
typedef struct mc_result mc_result;

MC_API mc_status mc_config_create(mc_config** out);
MC_API void mc_config_destroy(mc_config* config);
/* Both merge into the existing entries; later values win. */
MC_API mc_status mc_config_load_file(mc_config* config, const char* path);
MC_API mc_status mc_config_parse_string(mc_config* config, const char* text, const char* origin);
MC_API mc_status mc_config_set(mc_config* config, const char* key, const char* value);

MC_API size_t mc_experiment_count(void);
MC_API const char* mc_experiment_name(size_t index);

/* experiment may be NULL to use the config's "experiment" key. */
MC_API mc_status mc_run(const mc_config* config, const char* experiment, mc_result** out);
MC_API void mc_result_destroy(mc_result* result);
MC_API const char* mc_result_summary_json(const mc_result* result);
MC_API const char* mc_result_output_dir(const mc_result* result);
MC_API int mc_result_checks_passed(const mc_result* result);
MC_API size_t mc_result_file_count(const mc_result* result);
MC_API const char* mc_result_file(const mc_result* result, size_t index);

/* ---- models, states, deterministic evolution ---- */

typedef struct mc_model mc_model;
typedef struct mc_state mc_state;
typedef struct mc_series mc_series;

/* Observables reported by mc_evolve: x1, x2, x3. */
MC_API mc_status mc_model_two_level(double gamma, double nbar, mc_model** out);
/* z1, z2. Gamma <= 0 leaves out the measurement back-action. */
MC_API mc_status mc_model_swap(double gamma, double Gamma, mc_model** out);
/* Eliminated two-cavity model; n1, n2. direction_plus != 0 selects the Plus generator. */
MC_API mc_status mc_model_optomech(double g, double gamma_m, double nbar, int cutoff1, int cutoff2, int direction_plus,
                                   mc_model** out);
/* One Dicke block; jz. */
MC_API mc_status mc_model_dicke(int two_j, double nbar, double Gamma, mc_model** out);
MC_API void mc_model_destroy(mc_model* model);
MC_API size_t mc_model_dim(const mc_model* model);

MC_API mc_status mc_state_bloch(double x1, double x2, double x3, mc_state** out);
MC_API mc_status mc_state_thermal_qubit(double beta_eps, mc_state** out);
MC_API mc_status mc_state_tensor(const mc_state* a, const mc_state* b, mc_state** out);
MC_API mc_status mc_state_basis(const mc_model* model, size_t index, mc_state** out);
MC_API mc_status mc_state_diagonal(const mc_model* model, const double* probabilities, size_t n, mc_state** out);
MC_API void mc_state_destroy(mc_state* state);
MC_API size_t mc_state_dim(const mc_state* state);

/* Output every `stride` steps of size dt up to t_final. */
MC_API mc_status mc_evolve(const mc_model* model, const mc_state* rho0, double dt, double t_final, size_t stride,
                           mc_series** out);
MC_API void mc_series_destroy(mc_series* series);
MC_API size_t mc_series_length(const mc_series* series);
MC_API const double* mc_series_times(const mc_series* series);
MC_API size_t mc_series_observable_count(const mc_series* series);
MC_API const char* mc_series_observable_name(const mc_series* series, size_t index);
MC_API const double* mc_series_values(const mc_series* series, size_t index);

/* ---- estimators ---- */

typedef struct mc_estimate {
    double t_est;
    double sigma_t;
    int defined;
} mc_estimate;

MC_API mc_status mc_radiocarbon_estimate(int64_t count, double gamma, mc_estimate* out);
MC_API mc_status mc_dwell_time_estimate(double gamma, double nbar, mc_estimate* out);
MC_API mc_status mc_ensemble_swap_estimate(int64_t n0, int64_t nt, double gamma, int paper_convention, mc_estimate* out);
MC_API mc_status mc_t_from_S(double S, double gamma, double delta_S, int paper_convention, mc_estimate* out);
MC_API mc_status mc_temperature_estimate(double t, double eps, double gamma, double* out);
MC_API mc_status mc_mu_coefficient(double z1_0, double z2_0, double* out);
MC_API mc_status mc_delta_S(double Gamma, double t, double mu, double* out);
MC_API mc_status mc_kl_divergence(double p_g1, double p_e1, double p_g2, double p_e2, double* out);

#ifdef __cplusplus
}
#endif

#endif
