// SPDX-License-Identifier: Apache-2.0
//
// iasim - link-level simulation library for interference-aligned MIMO networks
// Copyright (C) 2026 the iasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IASIM_CONFIG_HPP
#define IASIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "iasim/constellation.hpp"
#include "iasim/metrics.hpp"
#include "iasim/schemes.hpp"

namespace iasim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SnrGrid {
    double start_db = 20.0;
    double stop_db = 40.0;
    double step_db = 2.0;

    std::vector<double> points() const {
        std::vector<double> p;
        for (double s = start_db; s <= stop_db + 1e-9; s += step_db) p.push_back(s);
        return p;
    }
};

struct ExperimentConfig {
    std::string command;  // ber | mi | diversity | verify
    std::vector<SchemeId> schemes;
    ConstellationKind constellation = ConstellationKind::BPSK;
    SnrGrid snr;
    TrialPolicy trials;
    std::uint64_t mi_trials = 20000;
    std::uint64_t outage_samples = 1'000'000;
    std::vector<double> eps_grid = default_eps_grid();
    std::uint64_t verify_structural_trials = 10000;
    std::uint64_t verify_statistical_trials = 100000;
    std::uint64_t master_seed = 0;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    std::string output_dir = ".";
    std::string output_prefix = "run";
};

namespace detail {
template <typename T>
T get_field(const nlohmann::json& j, const std::string& path, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config field '" + path + key + "': " + e.what());
    }
}
}  // namespace detail

/// Partial assignments collected from command-line flags; applied on top
/// of the file values.
struct ConfigOverrides {
    std::optional<std::string> command;
    std::optional<std::vector<std::string>> schemes;
    std::optional<std::string> constellation;
    std::optional<double> snr_start, snr_stop, snr_step;
    std::optional<std::uint64_t> max_trials;
    std::optional<std::uint32_t> target_errors;
    std::optional<std::uint64_t> mi_trials;
    std::optional<std::uint64_t> outage_samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> output_dir;
    std::optional<std::string> output_prefix;
};

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.command != "ber" && cfg.command != "mi" && cfg.command != "diversity" &&
        cfg.command != "verify")
        throw ConfigError("config field 'command': expected one of ber|mi|diversity|verify, got '" +
                          cfg.command + "'");
    if (cfg.command != "verify" && cfg.schemes.empty())
        throw ConfigError("config field 'schemes': at least one scheme is required");
    if (cfg.snr.step_db <= 0)
        throw ConfigError("config field 'snr.step_db': must be positive");
    if (cfg.snr.stop_db < cfg.snr.start_db)
        throw ConfigError("config field 'snr.stop_db': must be >= snr.start_db");
    if (cfg.snr.points().empty()) throw ConfigError("config field 'snr': grid is empty");
    if (cfg.trials.max_trials == 0)
        throw ConfigError("config field 'trials.max_trials': must be positive");
    if (cfg.trials.target_bit_errors == 0)
        throw ConfigError("config field 'trials.target_bit_errors': must be positive");
    if (cfg.workers < 1) throw ConfigError("config field 'workers': must be >= 1");
    for (SchemeId s : cfg.schemes)
        if (!scheme_supports(s, cfg.constellation))
            throw ConfigError(std::string("config: scheme '") + scheme_name(s) +
                              "' requires a PSK constellation (BPSK, QPSK, PSK16); got " +
                              constellation_name(cfg.constellation));
}

inline ExperimentConfig parse_config(const nlohmann::json& j, const ConfigOverrides& ov = {},
                                     const char* env_output_dir = nullptr) {
    ExperimentConfig cfg;
    cfg.command = detail::get_field<std::string>(j, "", "command", "");
    for (const std::string& name :
         detail::get_field<std::vector<std::string>>(j, "", "schemes", {}))
        cfg.schemes.push_back(scheme_from_name(name));
    const std::string cname = detail::get_field<std::string>(j, "", "constellation", "BPSK");
    cfg.constellation = constellation_from_name(cname);
    if (j.contains("snr")) {
        const auto& s = j.at("snr");
        cfg.snr.start_db = detail::get_field<double>(s, "snr.", "start_db", cfg.snr.start_db);
        cfg.snr.stop_db = detail::get_field<double>(s, "snr.", "stop_db", cfg.snr.stop_db);
        cfg.snr.step_db = detail::get_field<double>(s, "snr.", "step_db", cfg.snr.step_db);
    }
    if (j.contains("trials")) {
        const auto& t = j.at("trials");
        cfg.trials.max_trials =
            detail::get_field<std::uint64_t>(t, "trials.", "max_trials", cfg.trials.max_trials);
        cfg.trials.target_bit_errors = detail::get_field<std::uint32_t>(
            t, "trials.", "target_bit_errors", cfg.trials.target_bit_errors);
    }
    cfg.mi_trials = detail::get_field<std::uint64_t>(j, "", "mi_trials", cfg.mi_trials);
    cfg.outage_samples =
        detail::get_field<std::uint64_t>(j, "", "outage_samples", cfg.outage_samples);
    if (j.contains("eps_grid"))
        cfg.eps_grid = detail::get_field<std::vector<double>>(j, "", "eps_grid", cfg.eps_grid);
    cfg.verify_structural_trials = detail::get_field<std::uint64_t>(
        j, "", "verify_structural_trials", cfg.verify_structural_trials);
    cfg.verify_statistical_trials = detail::get_field<std::uint64_t>(
        j, "", "verify_statistical_trials", cfg.verify_statistical_trials);
    cfg.master_seed = detail::get_field<std::uint64_t>(j, "", "master_seed", cfg.master_seed);
    cfg.workers = detail::get_field<int>(j, "", "workers", cfg.workers);
    if (j.contains("output")) {
        const auto& o = j.at("output");
        cfg.output_dir = detail::get_field<std::string>(o, "output.", "dir", cfg.output_dir);
        cfg.output_prefix =
            detail::get_field<std::string>(o, "output.", "prefix", cfg.output_prefix);
    }

    // Precedence: flags > environment (output dir only) > file > defaults.
    if (env_output_dir && *env_output_dir) cfg.output_dir = env_output_dir;
    if (ov.command) cfg.command = *ov.command;
    if (ov.schemes) {
        cfg.schemes.clear();
        for (const std::string& name : *ov.schemes) cfg.schemes.push_back(scheme_from_name(name));
    }
    if (ov.constellation) cfg.constellation = constellation_from_name(*ov.constellation);
    if (ov.snr_start) cfg.snr.start_db = *ov.snr_start;
    if (ov.snr_stop) cfg.snr.stop_db = *ov.snr_stop;
    if (ov.snr_step) cfg.snr.step_db = *ov.snr_step;
    if (ov.max_trials) cfg.trials.max_trials = *ov.max_trials;
    if (ov.target_errors) cfg.trials.target_bit_errors = *ov.target_errors;
    if (ov.mi_trials) cfg.mi_trials = *ov.mi_trials;
    if (ov.outage_samples) cfg.outage_samples = *ov.outage_samples;
    if (ov.seed) cfg.master_seed = *ov.seed;
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.output_dir) cfg.output_dir = *ov.output_dir;
    if (ov.output_prefix) cfg.output_prefix = *ov.output_prefix;

    validate_config(cfg);
    return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["command"] = cfg.command;
    std::vector<std::string> names;
    for (SchemeId s : cfg.schemes) names.push_back(scheme_name(s));
    j["schemes"] = names;
    j["constellation"] = constellation_name(cfg.constellation);
    j["snr"] = {{"start_db", cfg.snr.start_db},
                {"stop_db", cfg.snr.stop_db},
                {"step_db", cfg.snr.step_db}};
    j["trials"] = {{"max_trials", cfg.trials.max_trials},
                   {"target_bit_errors", cfg.trials.target_bit_errors}};
    j["mi_trials"] = cfg.mi_trials;
    j["outage_samples"] = cfg.outage_samples;
    j["eps_grid"] = cfg.eps_grid;
    j["verify_structural_trials"] = cfg.verify_structural_trials;
    j["verify_statistical_trials"] = cfg.verify_statistical_trials;
    j["master_seed"] = cfg.master_seed;
    j["workers"] = cfg.workers;
    j["output"] = {{"dir", cfg.output_dir}, {"prefix", cfg.output_prefix}};
    return j;
}

}  // namespace iasim

#endif  // IASIM_CONFIG_HPP
