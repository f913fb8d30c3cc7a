#include "rmabf/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rmabf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw RmabError("config: " + context + ": " + message);
}

EnvSpec parse_env_entry(const json& entry, int position) {
    const std::string context = "env[" + std::to_string(position) + "]";
    if (!entry.is_object()) fail(context, "expected an object");
    const std::string type = entry.value("type", "");
    if (type == "birth-death") {
        BirthDeathSpec spec;
        spec.lambda = entry.value("lambda", spec.lambda);
        spec.mu = entry.value("mu", spec.mu);
        spec.num_states = entry.value("states", spec.num_states);
        spec.reward_slope = entry.value("reward_slope", spec.reward_slope);
        return spec;
    }
    if (type == "cpap") {
        CpapSpec spec;
        spec.cluster = entry.value("cluster", spec.cluster);
        spec.boost = entry.value("boost", spec.boost);
        spec.noise_scale = entry.value("noise_scale", spec.noise_scale);
        spec.seed = entry.value("seed", spec.seed);
        return spec;
    }
    if (type == "rte") {
        RteSpec spec;
        spec.success_prob = entry.value("success_prob", spec.success_prob);
        return spec;
    }
    if (type == "lmss") {
        LmssSpec spec;
        spec.elevation_deg = entry.value("elevation", spec.elevation_deg);
        spec.good_reward = entry.value("good_reward", spec.good_reward);
        spec.bad_reward = entry.value("bad_reward", spec.bad_reward);
        return spec;
    }
    fail(context, "unknown env type \"" + type +
                      "\" (expected birth-death, cpap, rte, or lmss)");
}

/// Accepts either one value per expanded arm or one per env entry
/// (broadcast over that entry's copies).
template <typename T>
std::vector<T> expand_per_arm(const json& values, const std::vector<int>& copies,
                              int total_arms, const std::string& field) {
    std::vector<T> flat;
    if (!values.is_array()) fail(field, "expected an array");
    if (static_cast<int>(values.size()) == total_arms) {
        for (const json& v : values) flat.push_back(v.get<T>());
        return flat;
    }
    if (values.size() == copies.size()) {
        for (std::size_t c = 0; c < copies.size(); ++c) {
            for (int i = 0; i < copies[c]; ++i) flat.push_back(values[c].get<T>());
        }
        return flat;
    }
    fail(field, "eta/arms length mismatch: got " + std::to_string(values.size()) +
                    " values for " + std::to_string(total_arms) + " arms (" +
                    std::to_string(copies.size()) + " env entries)");
}

}  // namespace

RunAlgorithm parse_algorithm(const std::string& name) {
    if (name == "fair-ucrl") return RunAlgorithm::FairUcrl;
    if (name == "g-fair-ucrl") return RunAlgorithm::GFairUcrl;
    if (name == "oracle-index") return RunAlgorithm::OracleIndex;
    if (name == "random") return RunAlgorithm::Random;
    throw RmabError("config: unknown algorithm \"" + name +
                    "\" (valid: fair-ucrl, g-fair-ucrl, oracle-index, random)");
}

std::string algorithm_name(RunAlgorithm algorithm) {
    switch (algorithm) {
        case RunAlgorithm::FairUcrl: return "fair-ucrl";
        case RunAlgorithm::GFairUcrl: return "g-fair-ucrl";
        case RunAlgorithm::OracleIndex: return "oracle-index";
        case RunAlgorithm::Random: return "random";
    }
    return "unknown";
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw RmabError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw RmabError("config: top level must be an object");

    ExperimentConfig config;
    try {
        if (!doc.contains("env") || !doc["env"].is_array() || doc["env"].empty()) {
            fail("env", "a non-empty array of environment entries is required");
        }
        std::vector<int> copies;
        int position = 0;
        for (const json& entry : doc["env"]) {
            config.env.push_back(parse_env_entry(entry, position));
            const int n = entry.value("copies", 1);
            if (n < 1) fail("env[" + std::to_string(position) + "].copies", "must be >= 1");
            copies.push_back(n);
            ++position;
        }
        int total_arms = 0;
        for (std::size_t c = 0; c < config.env.size(); ++c) {
            for (int i = 0; i < copies[c]; ++i) {
                config.instance.arms.push_back(make_arm(config.env[c]));
            }
            total_arms += copies[c];
        }

        if (!doc.contains("budget")) fail("budget", "required");
        config.instance.budget = doc["budget"].get<int>();

        if (!doc.contains("eta")) fail("eta", "required");
        config.instance.eta =
            expand_per_arm<double>(doc["eta"], copies, total_arms, "eta");

        if (doc.contains("initial_states")) {
            config.instance.initial_states = expand_per_arm<int>(
                doc["initial_states"], copies, total_arms, "initial_states");
        } else {
            config.instance.initial_states.assign(total_arms, 0);
        }

        const bool has_k = doc.contains("episodes");
        const bool has_h = doc.contains("horizon");
        if (has_k) config.episodes = doc["episodes"].get<int>();
        if (has_h) config.horizon = doc["horizon"].get<int>();
        if (has_k && !has_h) config.horizon = config.episodes;  // K = H default
        if (has_h && !has_k) config.episodes = config.horizon;

        config.epsilon = doc.value("epsilon", config.epsilon);
        if (doc.contains("algorithm")) {
            config.algorithm = parse_algorithm(doc["algorithm"].get<std::string>());
        }
        config.trials = doc.value("trials", config.trials);
        config.seed = doc.value("seed", config.seed);
        if (doc.contains("replicas")) {
            config.replicas = doc["replicas"].get<std::vector<int>>();
        }
        config.oracle_grid = doc.value("oracle_grid", config.oracle_grid);
    } catch (const json::exception& e) {
        throw RmabError(std::string("config: malformed field: ") + e.what());
    }

    if (config.episodes < 1 || config.horizon < 1) {
        throw RmabError("config: episodes and horizon must be >= 1");
    }
    if (config.epsilon <= 0.0 || config.epsilon >= 1.0) {
        throw RmabError("config: epsilon must lie in (0, 1)");
    }
    if (config.trials < 1) throw RmabError("config: trials must be >= 1");
    for (int r : config.replicas) {
        if (r < 1) throw RmabError("config: replicas must be >= 1");
    }

    const ValidationReport report = validate_instance(config.instance);
    if (!report.ok) {
        std::ostringstream message;
        message << "config: invalid instance:";
        for (const auto& [code, text] : report.violations) {
            message << "\n  [" << code << "] " << text;
        }
        throw RmabError(message.str());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RmabError("config: cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace rmabf
