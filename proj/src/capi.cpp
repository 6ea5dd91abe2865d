#include "machclock/machclock.h"

#include <exception>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "machclock/clocks.hpp"
#include "machclock/experiments.hpp"
#include "machclock/models.hpp"

using namespace machclock;

struct mc_config {
    Config config;
};

struct mc_result {
    RunOutcome outcome;
    std::string dir;
};

struct mc_model {
    LindbladModel model;
    std::vector<NamedObservable> observables;
};

struct mc_state {
    DensityMatrix rho;
};

struct mc_series {
    std::vector<double> times;
    std::vector<NamedSeries> values;
};

namespace {

thread_local std::string last_error;

mc_status status_of(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return MC_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidDimension: return MC_ERR_INVALID_DIMENSION;
    case ErrorCode::SpaceMismatch: return MC_ERR_SPACE_MISMATCH;
    case ErrorCode::CutoffTooSmall: return MC_ERR_CUTOFF_TOO_SMALL;
    case ErrorCode::StepTooLarge: return MC_ERR_STEP_TOO_LARGE;
    case ErrorCode::PositivityViolation: return MC_ERR_POSITIVITY;
    case ErrorCode::NonHermitian: return MC_ERR_NON_HERMITIAN;
    case ErrorCode::DegenerateInput: return MC_ERR_DEGENERATE;
    case ErrorCode::ConfigError: return MC_ERR_CONFIG;
    case ErrorCode::IoError: return MC_ERR_IO;
    }
    return MC_ERR_INTERNAL;
}

template <class F>
mc_status guard(F&& f) {
    try {
        f();
        last_error.clear();
        return MC_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return MC_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

mc_estimate to_c(const ClockEstimate& e) { return {e.t_est, e.sigma_t, e.defined ? 1 : 0}; }

} // namespace

extern "C" {

const char* mc_version(void) { return kVersion; }

const char* mc_status_string(mc_status s) {
    switch (s) {
    case MC_OK: return "ok";
    case MC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MC_ERR_INVALID_DIMENSION: return "invalid dimension";
    case MC_ERR_SPACE_MISMATCH: return "space mismatch";
    case MC_ERR_CUTOFF_TOO_SMALL: return "cutoff too small";
    case MC_ERR_STEP_TOO_LARGE: return "step too large";
    case MC_ERR_POSITIVITY: return "positivity violation";
    case MC_ERR_NON_HERMITIAN: return "non-Hermitian";
    case MC_ERR_DEGENERATE: return "degenerate input";
    case MC_ERR_CONFIG: return "configuration error";
    case MC_ERR_IO: return "I/O error";
    case MC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mc_last_error(void) { return last_error.c_str(); }

// ------------------------------------------------------------ config / run

mc_status mc_config_create(mc_config** out) {
    return guard([&] {
        need(out, "out");
        *out = new mc_config{};
    });
}

void mc_config_destroy(mc_config* config) { delete config; }

mc_status mc_config_load_file(mc_config* config, const char* path) {
    return guard([&] {
        need(config, "config");
        need(path, "path");
        config->config.merge(Config::load(path));
    });
}

mc_status mc_config_parse_string(mc_config* config, const char* text, const char* origin) {
    return guard([&] {
        need(config, "config");
        need(text, "text");
        config->config.merge(Config::parse(text, origin ? origin : "<string>"));
    });
}

mc_status mc_config_set(mc_config* config, const char* key, const char* value) {
    return guard([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        config->config.set(key, value);
    });
}

size_t mc_experiment_count(void) { return experiment_names().size(); }

const char* mc_experiment_name(size_t index) {
    const auto& n = experiment_names();
    return index < n.size() ? n[index].c_str() : nullptr;
}

mc_status mc_run(const mc_config* config, const char* experiment, mc_result** out) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        auto r = std::make_unique<mc_result>();
        r->outcome = run_experiment(config->config, experiment ? experiment : "");
        r->dir = r->outcome.output_dir.string();
        *out = r.release();
    });
}

void mc_result_destroy(mc_result* result) { delete result; }
const char* mc_result_summary_json(const mc_result* r) { return r ? r->outcome.summary_json.c_str() : nullptr; }
const char* mc_result_output_dir(const mc_result* r) { return r ? r->dir.c_str() : nullptr; }
int mc_result_checks_passed(const mc_result* r) { return r && r->outcome.checks_passed ? 1 : 0; }
size_t mc_result_file_count(const mc_result* r) { return r ? r->outcome.files.size() : 0; }
const char* mc_result_file(const mc_result* r, size_t i) {
    return r && i < r->outcome.files.size() ? r->outcome.files[i].c_str() : nullptr;
}

// ------------------------------------------------------------------ models

mc_status mc_model_two_level(double gamma, double nbar, mc_model** out) {
    return guard([&] {
        need(out, "out");
        *out = new mc_model{build_two_level_thermal(gamma, nbar), {{"x1", sigma_x()}, {"x2", sigma_y()}, {"x3", sigma_z()}}};
    });
}

mc_status mc_model_swap(double gamma, double Gamma, mc_model** out) {
    return guard([&] {
        need(out, "out");
        SwapModel m = Gamma > 0.0 ? build_swap_model(gamma, Gamma) : build_swap_model(gamma);
        const HilbertSpace space({2, 2});
        *out = new mc_model{std::move(m.model), {{"z1", embed(sigma_z(), 0, space)}, {"z2", embed(sigma_z(), 1, space)}}};
    });
}

mc_status mc_model_optomech(double g, double gamma_m, double nbar, int cutoff1, int cutoff2, int direction_plus,
                            mc_model** out) {
    return guard([&] {
        need(out, "out");
        OptomechParams p;
        p.g = g;
        p.gamma_m = gamma_m;
        p.nbar = nbar;
        const CavityCutoffs c{cutoff1, cutoff2};
        LindbladModel m = build_optomech_adiabatic(p, direction_plus ? Direction::Plus : Direction::Minus, c);
        const TwoModeSu2 su = two_mode_su2(c);
        *out = new mc_model{std::move(m), {{"n1", su.n1}, {"n2", su.n2}}};
    });
}

mc_status mc_model_dicke(int two_j, double nbar, double Gamma, mc_model** out) {
    return guard([&] {
        need(out, "out");
        *out = new mc_model{build_dicke_block_model({two_j, nbar, Gamma}), {{"jz", angular_momentum(two_j).jz}}};
    });
}

void mc_model_destroy(mc_model* model) { delete model; }
size_t mc_model_dim(const mc_model* model) { return model ? model->model.space().total() : 0; }

// ------------------------------------------------------------------ states

mc_status mc_state_bloch(double x1, double x2, double x3, mc_state** out) {
    return guard([&] {
        need(out, "out");
        *out = new mc_state{from_bloch({x1, x2, x3})};
    });
}

mc_status mc_state_thermal_qubit(double beta_eps, mc_state** out) {
    return guard([&] {
        need(out, "out");
        *out = new mc_state{thermal_qubit(beta_eps)};
    });
}

mc_status mc_state_tensor(const mc_state* a, const mc_state* b, mc_state** out) {
    return guard([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        *out = new mc_state{tensor(a->rho, b->rho)};
    });
}

mc_status mc_state_basis(const mc_model* model, size_t index, mc_state** out) {
    return guard([&] {
        need(model, "model");
        need(out, "out");
        *out = new mc_state{DensityMatrix::basis_state(model->model.space(), index)};
    });
}

mc_status mc_state_diagonal(const mc_model* model, const double* p, size_t n, mc_state** out) {
    return guard([&] {
        need(model, "model");
        need(p, "probabilities");
        need(out, "out");
        *out = new mc_state{DensityMatrix::diagonal(model->model.space(), std::span<const double>(p, n))};
    });
}

void mc_state_destroy(mc_state* state) { delete state; }
size_t mc_state_dim(const mc_state* state) { return state ? state->rho.dim() : 0; }

// --------------------------------------------------------------- evolution

mc_status mc_evolve(const mc_model* model, const mc_state* rho0, double dt, double t_final, size_t stride,
                    mc_series** out) {
    return guard([&] {
        need(model, "model");
        need(rho0, "rho0");
        need(out, "out");
        EvolveOptions o;
        o.store_states = false;
        o.observables = model->observables;
        EvolutionResult r = evolve(model->model, rho0->rho, TimeGrid::span(t_final, dt, stride), o);
        *out = new mc_series{std::move(r.times), std::move(r.observables)};
    });
}

void mc_series_destroy(mc_series* s) { delete s; }
size_t mc_series_length(const mc_series* s) { return s ? s->times.size() : 0; }
const double* mc_series_times(const mc_series* s) { return s ? s->times.data() : nullptr; }
size_t mc_series_observable_count(const mc_series* s) { return s ? s->values.size() : 0; }
const char* mc_series_observable_name(const mc_series* s, size_t i) {
    return s && i < s->values.size() ? s->values[i].name.c_str() : nullptr;
}
const double* mc_series_values(const mc_series* s, size_t i) {
    return s && i < s->values.size() ? s->values[i].values.data() : nullptr;
}

// --------------------------------------------------------------- estimators

mc_status mc_radiocarbon_estimate(int64_t count, double gamma, mc_estimate* out) {
    return guard([&] {
        need(out, "out");
        *out = to_c(radiocarbon_estimate(count, gamma));
    });
}

mc_status mc_dwell_time_estimate(double gamma, double nbar, mc_estimate* out) {
    return guard([&] {
        need(out, "out");
        *out = to_c(dwell_time_estimate(gamma, nbar));
    });
}

mc_status mc_ensemble_swap_estimate(int64_t n0, int64_t nt, double gamma, int paper, mc_estimate* out) {
    return guard([&] {
        need(out, "out");
        *out = to_c(ensemble_swap_estimate(n0, nt, gamma, paper ? SwapConvention::Paper : SwapConvention::Derived));
    });
}

mc_status mc_t_from_S(double S, double gamma, double dS, int paper, mc_estimate* out) {
    return guard([&] {
        need(out, "out");
        *out = to_c(t_from_S(S, gamma, dS, paper ? SConvention::Paper : SConvention::Derived));
    });
}

mc_status mc_temperature_estimate(double t, double eps, double gamma, double* out) {
    return guard([&] {
        need(out, "out");
        *out = temperature_estimate(t, eps, gamma);
    });
}

mc_status mc_mu_coefficient(double z1_0, double z2_0, double* out) {
    return guard([&] {
        need(out, "out");
        *out = mu_coefficient(z1_0, z2_0);
    });
}

mc_status mc_delta_S(double Gamma, double t, double mu, double* out) {
    return guard([&] {
        need(out, "out");
        *out = delta_S(Gamma, t, mu);
    });
}

mc_status mc_kl_divergence(double pg1, double pe1, double pg2, double pe2, double* out) {
    return guard([&] {
        need(out, "out");
        *out = kl_divergence({pg1, pe1}, {pg2, pe2});
    });
}

} // extern "C"
