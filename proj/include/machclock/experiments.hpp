#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "machclock/config.hpp"

namespace machclock {

inline constexpr const char* kVersion = "0.1.0";

struct RunOutcome {
    std::string experiment;
    std::filesystem::path output_dir;
    std::string summary_json;
    std::vector<std::string> files;
    bool checks_passed = true;
};

/// Experiment names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Runs one experiment. `experiment` overrides the config's "experiment" key when non-empty.
/// Throws Error(ConfigError, ...) for bad configuration and Error(PositivityViolation, ...) for numeric aborts.
RunOutcome run_experiment(const Config& config, const std::string& experiment = {});

} // namespace machclock
