#ifndef FLOQMON_CONFIG_HPP
#define FLOQMON_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqmon/circuit.hpp"
#include "floqmon/util.hpp"

namespace floqmon {

enum class ModelKind { floquet, heisenberg };

struct RunConfig {
    ModelKind model = ModelKind::floquet;
    int L = 12;
    std::vector<double> disorder;  // alpha (floquet) or W (heisenberg) grid
    double p = 1e-4;
    long n_f = 50000;
    long n_i = 30000;  // averaging window is [n_i, n_f]
    long n_realizations = 30000;
    MeasurementMode mode = MeasurementMode::born;
    ForcedParity parity = ForcedParity::neel;
    long entropy_sample_stride = 100;
    std::uint64_t master_seed = 1;
    std::string output_dir;
    int workers = 0;      // 0 = hardware concurrency
    double long_run_n = 0.0;  // > 0: also record EE at this step for p = 0

    long events_per_trajectory() const {
        return std::lround(p * L * static_cast<double>(n_f));
    }
};

inline void validate(const RunConfig& c) {
    if (c.L < 2 || c.L % 2 != 0 || c.L > 20)
        throw ConfigError("L must be even, 2 <= L <= 20");
    if (c.disorder.empty()) throw ConfigError("disorder grid is empty");
    for (double d : c.disorder) {
        if (c.model == ModelKind::floquet && d <= 0.0)
            throw ConfigError("alpha values must be > 0");
        if (c.model == ModelKind::heisenberg && d < 0.0)
            throw ConfigError("W values must be >= 0");
    }
    if (c.p < 0.0) throw ConfigError("p must be >= 0");
    if (c.n_f < 1) throw ConfigError("n_f must be >= 1");
    const double m_real = c.p * c.L * static_cast<double>(c.n_f);
    if (std::abs(m_real - std::lround(m_real)) > 1e-9)
        throw ConfigError("p*L*n_f must be an integer");
    if (std::lround(m_real) > c.n_f)
        throw ConfigError("p*L*n_f must not exceed n_f");
    if (c.n_i < 0 || c.n_i > c.n_f) throw ConfigError("window must lie within [0, n_f]");
    if (c.n_realizations < 1) throw ConfigError("N_r must be >= 1");
    if (c.entropy_sample_stride < 1) throw ConfigError("entropy_sample_stride must be >= 1");
    if (c.output_dir.empty()) throw ConfigError("output_dir is required");
    if (c.workers < 0) throw ConfigError("workers must be >= 0");
    if (c.long_run_n < 0.0) throw ConfigError("long_run_n must be >= 0");
    if (c.long_run_n > 0.0 && c.p != 0.0)
        throw ConfigError("long_run_n requires p = 0");
}

inline nlohmann::json to_json(const RunConfig& c) {
    return nlohmann::json{
        {"model", c.model == ModelKind::floquet ? "floquet" : "heisenberg"},
        {"L", c.L},
        {"disorder", c.disorder},
        {"p", c.p},
        {"n_f", c.n_f},
        {"window", {c.n_i, c.n_f}},
        {"N_r", c.n_realizations},
        {"measurement_mode", c.mode == MeasurementMode::born ? "born" : "forced"},
        {"forced_parity", c.parity == ForcedParity::neel ? "neel" : "inverted"},
        {"entropy_sample_stride", c.entropy_sample_stride},
        {"master_seed", c.master_seed},
        {"output_dir", c.output_dir},
        {"workers", c.workers},
        {"long_run_n", c.long_run_n},
    };
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        const std::string model = j.at("model").get<std::string>();
        if (model == "floquet")
            c.model = ModelKind::floquet;
        else if (model == "heisenberg")
            c.model = ModelKind::heisenberg;
        else
            throw ConfigError("unknown model: " + model);
        c.L = j.at("L").get<int>();
        c.disorder = j.at("disorder").get<std::vector<double>>();
        c.p = j.at("p").get<double>();
        c.n_f = j.at("n_f").get<long>();
        if (j.contains("window")) {
            auto w = j.at("window").get<std::vector<long>>();
            if (w.size() != 2 || w[1] != c.n_f)
                throw ConfigError("window must be [n_i, n_f]");
            c.n_i = w[0];
        } else {
            c.n_i = (3 * c.n_f) / 5;
        }
        c.n_realizations = j.at("N_r").get<long>();
        if (j.contains("measurement_mode")) {
            const std::string m = j.at("measurement_mode").get<std::string>();
            if (m == "born")
                c.mode = MeasurementMode::born;
            else if (m == "forced")
                c.mode = MeasurementMode::forced;
            else
                throw ConfigError("unknown measurement_mode: " + m);
        }
        if (j.contains("forced_parity")) {
            const std::string pr = j.at("forced_parity").get<std::string>();
            if (pr == "neel")
                c.parity = ForcedParity::neel;
            else if (pr == "inverted")
                c.parity = ForcedParity::inverted;
            else
                throw ConfigError("unknown forced_parity: " + pr);
        }
        if (j.contains("entropy_sample_stride"))
            c.entropy_sample_stride = j.at("entropy_sample_stride").get<long>();
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("workers")) c.workers = j.at("workers").get<int>();
        if (j.contains("long_run_n")) c.long_run_n = j.at("long_run_n").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    validate(c);
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

// Every physics convention baked into the implementation, echoed into the
// run manifest so outputs are comparable across runs.
inline nlohmann::json convention_flags() {
    return nlohmann::json{
        {"gue", "H=(A+A^dag)/2, A i.i.d. standard complex normal"},
        {"cue", "Ginibre + QR with R-diagonal phase normalization"},
        {"diag_gate_order", "eigenphases sorted by principal argument, ascending"},
        {"bit_order", "site i = bit i of the basis index, site 0 least significant"},
        {"outcome_encoding", "1=up, 0=down"},
        {"initial_state", "Neel |up down ...>, site 0 up"},
        {"measurement_timing", "after the step's unitary layer"},
        {"forced_parity_rule", "up on 1-based odd sites unless inverted"},
        {"entropy_log_base", "natural (nats)"},
        {"mi_log_base", "natural (nats)"},
        {"pca_default", "uncentered covariance per the design matrix product"},
        {"scheduling", "exactly M distinct steps, uniform without replacement"},
    };
}

}  // namespace floqmon

#endif
