// Command-line front end. Talks to the library only through the C interface.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "machclock/machclock.h"

namespace {

struct Flags {
    std::string config;
    std::string seed;
    std::string out_dir;
    std::string trajectories;
    std::string workers;
    std::vector<std::string> sets;
    bool quiet = false;
};

int exit_code(mc_status s) {
    if (s == MC_OK) return 0;
    return s == MC_ERR_POSITIVITY ? 3 : 2;
}

int report(mc_status s) {
    std::fprintf(stderr, "machclock: %s: %s\n", mc_status_string(s), mc_last_error());
    return exit_code(s);
}

int run(const Flags& f, const char* experiment) {
    mc_config* cfg = nullptr;
    mc_status s = mc_config_create(&cfg);
    if (s != MC_OK) return report(s);
    auto set = [&](const char* key, const std::string& v) {
        if (s == MC_OK && !v.empty()) s = mc_config_set(cfg, key, v.c_str());
    };
    if (!f.config.empty()) s = mc_config_load_file(cfg, f.config.c_str());
    for (const auto& kv : f.sets) {
        if (s != MC_OK) break;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "machclock: --set expects key=value, got '%s'\n", kv.c_str());
            mc_config_destroy(cfg);
            return 2;
        }
        s = mc_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    }
    set("master_seed", f.seed);
    set("output_dir", f.out_dir);
    set("n_traj", f.trajectories);
    set("workers", f.workers);
    mc_result* result = nullptr;
    if (s == MC_OK) s = mc_run(cfg, experiment, &result);
    mc_config_destroy(cfg);
    if (s != MC_OK) return report(s);

    if (!f.quiet) {
        std::printf("%s", mc_result_summary_json(result));
        std::fflush(stdout);
    }
    std::fprintf(stderr, "wrote %zu files to %s\n", mc_result_file_count(result), mc_result_output_dir(result));
    if (!mc_result_checks_passed(result)) std::fprintf(stderr, "note: some checks in summary.json did not pass\n");
    mc_result_destroy(result);
    return 0;
}

void add_flags(CLI::App* app, Flags& f, bool config_required) {
    auto* c = app->add_option("-c,--config", f.config, "Configuration file (key=value with [section] headers)");
    if (config_required) c->required();
    app->add_option("--seed", f.seed, "Master seed (overrides master_seed)");
    app->add_option("-o,--out-dir", f.out_dir, "Output directory (overrides output_dir)");
    app->add_option("-n,--trajectories", f.trajectories, "Trajectory count (overrides n_traj)");
    app->add_option("-j,--workers", f.workers, "Worker threads, 0 = all cores; results do not depend on it");
    app->add_option("-s,--set", f.sets, "Extra key=value override, repeatable (e.g. model.gamma=2)");
    app->add_flag("-q,--quiet", f.quiet, "Do not print summary.json");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum thermal clock simulations"};
    app.set_version_flag("--version", std::string(mc_version()));
    app.require_subcommand(1);

    Flags flags;
    std::string chosen;

    auto* run_cmd = app.add_subcommand("run", "Run the experiment named by the config's 'experiment' key");
    add_flags(run_cmd, flags, true);
    run_cmd->callback([&] { chosen = ""; });

    auto* list_cmd = app.add_subcommand("list", "List experiments");
    bool listing = false;
    list_cmd->callback([&] { listing = true; });

    std::vector<std::string> names;
    for (size_t i = 0; i < mc_experiment_count(); ++i) names.emplace_back(mc_experiment_name(i));
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
        add_flags(sub, flags, false);
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    if (listing) {
        for (const auto& n : names) std::printf("%s\n", n.c_str());
        return 0;
    }
    return run(flags, chosen.empty() ? nullptr : chosen.c_str());
}
