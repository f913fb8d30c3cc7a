// JSON experiment configuration: environment lists expanded into an
// RmabInstance plus run parameters for the CLI and harness.

#pragma once

#include <string>
#include <vector>

#include "rmabf/harness.hpp"

namespace rmabf {

struct ExperimentConfig {
    RmabInstance instance;
    std::vector<EnvSpec> env;   // one entry per configured class (pre-expansion)
    int episodes = 1;           // K
    int horizon = 1;            // H
    double epsilon = 0.1;
    RunAlgorithm algorithm = RunAlgorithm::FairUcrl;
    int trials = 100;
    std::uint64_t seed = 0;
    std::vector<int> replicas = {1};  // sweep replica counts (instance is the base)
    double oracle_grid = 0.01;

    LearnerConfig learner_config() const {
        LearnerConfig cfg;
        cfg.episodes = episodes;
        cfg.horizon = horizon;
        cfg.epsilon = epsilon;
        cfg.seed = seed;
        cfg.algorithm = (algorithm == RunAlgorithm::GFairUcrl) ? Algorithm::GFairUcrl
                                                               : Algorithm::FairUcrl;
        return cfg;
    }
};

/// Parses the documented JSON schema from a string; throws RmabError with
/// field context on parse or validation failure.
ExperimentConfig parse_config(const std::string& json_text);

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path);

RunAlgorithm parse_algorithm(const std::string& name);
std::string algorithm_name(RunAlgorithm algorithm);

}  // namespace rmabf
