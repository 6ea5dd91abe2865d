/* The C interface used from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "machclock/machclock.h"

static int failures = 0;

#define EXPECT(cond)                                                              \
    do {                                                                          \
        if (!(cond)) {                                                            \
            fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                           \
        }                                                                         \
    } while (0)

int main(int argc, char** argv) {
    const char* out_dir = argc > 1 ? argv[1] : "capi_out";
    EXPECT(strcmp(mc_version(), "0.1.0") == 0);
    EXPECT(mc_experiment_count() == 8);
    EXPECT(mc_experiment_name(100) == NULL);

    /* configuration errors carry the line number */
    mc_config* cfg = NULL;
    EXPECT(mc_config_create(&cfg) == MC_OK);
    EXPECT(mc_config_parse_string(cfg, "a = 1\nbroken\n", "inline") == MC_ERR_CONFIG);
    EXPECT(strstr(mc_last_error(), "inline:2") != NULL);

    EXPECT(mc_config_parse_string(cfg, "experiment = two-level\nt_final = 1\n", "inline") == MC_OK);
    EXPECT(mc_config_set(cfg, "output_dir", out_dir) == MC_OK);
    mc_result* res = NULL;
    EXPECT(mc_run(cfg, NULL, &res) == MC_OK);
    if (res) {
        EXPECT(mc_result_checks_passed(res) == 1);
        EXPECT(strstr(mc_result_summary_json(res), "\"experiment\": \"two-level\"") != NULL);
        EXPECT(mc_result_file_count(res) == 2);
        EXPECT(strcmp(mc_result_file(res, 0), "series.csv") == 0);
        mc_result_destroy(res);
    }
    EXPECT(mc_config_set(cfg, "model.gamma", "-1") == MC_OK);
    res = NULL;
    EXPECT(mc_run(cfg, NULL, &res) == MC_ERR_CONFIG);
    EXPECT(res == NULL);
    mc_config_destroy(cfg);

    /* deterministic evolution through handles */
    mc_model* model = NULL;
    mc_state* rho = NULL;
    mc_series* s = NULL;
    EXPECT(mc_model_two_level(1.0, 1.0, &model) == MC_OK);
    EXPECT(mc_model_dim(model) == 2);
    EXPECT(mc_state_bloch(0.0, 0.0, 1.0, &rho) == MC_OK);
    EXPECT(mc_evolve(model, rho, 1e-3, 1.0, 100, &s) == MC_OK);
    EXPECT(mc_series_length(s) == 11);
    EXPECT(mc_series_observable_count(s) == 3);
    EXPECT(strcmp(mc_series_observable_name(s, 2), "x3") == 0);
    {
        const double* t = mc_series_times(s);
        const double* x3 = mc_series_values(s, 2);
        const double expect = -1.0 / 3.0 + (1.0 + 1.0 / 3.0) * exp(-3.0 * t[10]);
        EXPECT(fabs(x3[10] - expect) < 1e-10);
    }
    mc_series_destroy(s);
    EXPECT(mc_evolve(model, rho, 1.0, 1.0, 1, &s) == MC_ERR_STEP_TOO_LARGE);
    mc_state_destroy(rho);
    EXPECT(mc_state_bloch(1.0, 1.0, 1.0, &rho) != MC_OK);
    mc_model_destroy(model);

    EXPECT(mc_model_optomech(1.0, 40.0, 1.0, 1, 4, 1, &model) == MC_ERR_CUTOFF_TOO_SMALL);

    /* estimators */
    mc_estimate e;
    EXPECT(mc_radiocarbon_estimate(100, 2.0, &e) == MC_OK && e.t_est == 50.0 && e.defined);
    EXPECT(mc_dwell_time_estimate(1.0, 0.0, &e) == MC_OK && !e.defined);
    EXPECT(mc_t_from_S(0.9, 1.0, 0.0, 0, &e) == MC_OK && fabs(e.t_est - 0.05) < 1e-15);
    double mu = 0.0;
    EXPECT(mc_mu_coefficient(0.6, 0.2, &mu) == MC_OK && fabs(mu - 8.32) < 1e-12);
    EXPECT(mc_mu_coefficient(0.2, 0.2, &mu) == MC_ERR_DEGENERATE);
    EXPECT(mc_radiocarbon_estimate(1, 1.0, NULL) == MC_ERR_INVALID_ARGUMENT);

    if (failures == 0) printf("C API: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
