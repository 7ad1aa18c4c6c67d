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

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "iasim/config.hpp"
#include "iasim/runner.hpp"

using namespace iasim;
using nlohmann::json;

TEST_CASE("minimal config fills documented defaults") {
    const json j = json::parse(R"({"command":"ber","schemes":["x_alamouti"],
                                   "constellation":"BPSK"})");
    const ExperimentConfig cfg = parse_config(j);
    CHECK(cfg.master_seed == 0);
    CHECK(cfg.snr.start_db == 20.0);
    CHECK(cfg.snr.stop_db == 40.0);
    CHECK(cfg.snr.step_db == 2.0);
    CHECK(cfg.trials.target_bit_errors == 200);
    CHECK(cfg.snr.points().size() == 11);
}

TEST_CASE("invalid scheme/constellation pairing is rejected with a psk message") {
    const json j = json::parse(R"({"command":"ber","schemes":["ibc_alamouti"],
                                   "constellation":"QAM16"})");
    try {
        parse_config(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("PSK") != std::string::npos);
        CHECK(std::string(e.what()).find("ibc_alamouti") != std::string::npos);
    }
}

TEST_CASE("flag overrides beat file values; env var covers the output dir") {
    const json j = json::parse(R"({"command":"ber","schemes":["jash"],
                                   "master_seed":3,"output":{"dir":"/tmp/from_file"}})");
    ConfigOverrides ov;
    ov.seed = 7;
    const ExperimentConfig cfg = parse_config(j, ov, "/tmp/from_env");
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.output_dir == "/tmp/from_env");

    ConfigOverrides ov2;
    ov2.output_dir = "/tmp/from_flag";
    const ExperimentConfig cfg2 = parse_config(j, ov2, "/tmp/from_env");
    CHECK(cfg2.output_dir == "/tmp/from_flag");
}

TEST_CASE("field errors carry the field path") {
    const json j = json::parse(R"({"command":"ber","schemes":["jash"],
                                   "snr":{"start_db":"oops"}})");
    try {
        parse_config(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("snr.start_db") != std::string::npos);
    }
}

TEST_CASE("validation rejects bad grids and empty schemes") {
    json j = json::parse(R"({"command":"ber","schemes":["jash"],
                             "snr":{"start_db":30,"stop_db":20}})");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = json::parse(R"({"command":"ber","schemes":[]})");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = json::parse(R"({"command":"frobnicate","schemes":["jash"]})");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("csv rows serialize with the fixed schema and lf endings") {
    std::vector<ResultRow> rows{{"jash", "BPSK", 20.0, "ber", 0.125, 0.01, 1000, 7}};
    const std::string s = csv_rows_to_string(rows);
    CHECK(s == "scheme,constellation,snr_db,metric_name,value,ci_halfwidth,trials,seed\n"
               "jash,BPSK,20,ber,0.125,0.01,1000,7\n");
    CHECK(s.find('\r') == std::string::npos);
}

TEST_CASE("run_and_write produces csv and manifest; rerun is byte-identical") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "iasim_test_out";
    fs::remove_all(dir);
    json j = json::parse(R"({"command":"ber","schemes":["x_alamouti"],
                             "constellation":"BPSK",
                             "snr":{"start_db":8,"stop_db":12,"step_db":4},
                             "trials":{"max_trials":2000,"target_bit_errors":50},
                             "master_seed":99})");
    ConfigOverrides ov;
    ov.output_dir = dir.string();
    ov.workers = 2;
    ExperimentConfig cfg = parse_config(j, ov);
    const ResultRecord rec1 = run_and_write(cfg);
    REQUIRE(fs::exists(rec1.csv_path));
    REQUIRE(fs::exists(rec1.manifest_path));

    std::ifstream mf(rec1.manifest_path);
    json manifest;
    mf >> manifest;
    CHECK(manifest["schema_version"] == kCsvSchemaVersion);
    CHECK(manifest["config"]["master_seed"] == 99);
    CHECK(manifest["conventions"].contains("mi_formula"));

    auto read_file = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    const std::string csv1 = read_file(rec1.csv_path);
    cfg.workers = 5;
    const ResultRecord rec2 = run_and_write(cfg);
    CHECK(read_file(rec2.csv_path) == csv1);
    fs::remove_all(dir);
}

TEST_CASE("two configs in one process match separate evaluation") {
    // No hidden global state: interleaving runs does not change results.
    json j = json::parse(R"({"command":"mi","schemes":["jash"],
                             "snr":{"start_db":10,"stop_db":20,"step_db":10},
                             "mi_trials":500,"master_seed":5})");
    const ExperimentConfig cfg = parse_config(j);
    const ResultRecord a = run_experiment(cfg);
    run_experiment(parse_config(json::parse(
        R"({"command":"mi","schemes":["x_alamouti"],"mi_trials":300,"master_seed":1})")));
    const ResultRecord b = run_experiment(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value == b.rows[i].value);
}
