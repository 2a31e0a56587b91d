// SPDX-License-Identifier: Apache-2.0
//
// riscatter: joint primary/backscatter rate characterization for scatter-assisted links
// Copyright (C) 2026 riscatter contributors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "riscatter/config.hpp"
#include "riscatter/io.hpp"

using namespace riscatter;

namespace
{

std::filesystem::path temp_dir()
{
    auto dir = std::filesystem::temp_directory_path() / "riscatter_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_file(const std::string& name, const std::string& content)
{
    auto path = temp_dir() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

ExperimentConfig tiny_config()
{
    ExperimentConfig cfg;
    cfg.num_antennas = 2;
    cfg.num_nodes = 1;
    cfg.num_states = 2;
    cfg.spreading = 4;
    cfg.grid_bits = 5;
    cfg.rho_grid = {0.0, 1.0};
    cfg.realizations = 1;
    cfg.input_params.max_iterations = 200;
    cfg.beam_max_iterations = 40;
    cfg.bcd_max_iterations = 10;
    return cfg;
}

const std::string& find_file(const RunOutput& out, const std::string& name)
{
    for (const auto& [n, content] : out.files)
        if (n == name)
            return content;
    static const std::string missing;
    REQUIRE(false);
    return missing;
}

int count_lines(const std::string& s)
{
    int n = 0;
    for (char c : s)
        if (c == '\n')
            n++;
    return n;
}

} // namespace

TEST_CASE("config files parse keys, comments, arrays, and section headers")
{
    auto path = write_file("full.toml", R"(# experiment
[link]
antennas = 3
nodes = 2
states = 4
spreading = 16
power_dbm = 30.0
noise_dbm = -70.0
amplitude = 0.25

[sweep]
rho_grid = [0.0, 0.5, 1.0]
seed = 9
realizations = 2
threads = 2
input_scheme = "exhaustive"
beam_scheme = "ergodicMrt"
threshold_scheme = "bisection"
exponent_mode = "paperPrinted"
grid_bits = 7
)");
    ExperimentConfig cfg = load_config_file(path.string());
    CHECK(cfg.num_antennas == 3);
    CHECK(cfg.num_nodes == 2);
    CHECK(cfg.num_states == 4);
    CHECK(cfg.spreading == 16);
    CHECK(cfg.transmit_power_dbm == 30.0);
    CHECK(cfg.noise_power_dbm == -70.0);
    CHECK(cfg.amplitude == 0.25);
    REQUIRE(cfg.rho_grid.size() == 3);
    CHECK(cfg.rho_grid[1] == 0.5);
    CHECK(cfg.seed == 9);
    CHECK(cfg.realizations == 2);
    CHECK(cfg.threads == 2);
    CHECK(cfg.input_scheme == InputScheme::exhaustive);
    CHECK(cfg.beam_scheme == BeamScheme::ergodic_mrt);
    CHECK(cfg.threshold_scheme == ThresholdScheme::bisect);
    CHECK(cfg.input_params.mode == ExponentMode::paper_printed);
    CHECK(cfg.grid_bits == 7);
}

TEST_CASE("scheme words accept either naming style")
{
    ExperimentConfig a, b;
    apply_config_entry(a, "beam_scheme", "ergodic_mrt");
    apply_config_entry(b, "beam_scheme", "ergodicMrt");
    CHECK(a.beam_scheme == b.beam_scheme);
    CHECK(a.beam_scheme == BeamScheme::ergodic_mrt);
    apply_config_entry(a, "exponent_mode", "blahut_arimoto");
    apply_config_entry(b, "exponent_mode", "blahutArimoto");
    CHECK(a.input_params.mode == b.input_params.mode);
    CHECK_THROWS_AS(apply_config_entry(a, "beam_scheme", "unknown"), std::invalid_argument);
}

TEST_CASE("unknown keys and malformed values carry the line number")
{
    auto path = write_file("bad_key.toml", "antennas = 2\nno_such_key = 1\n");
    try
    {
        load_config_file(path.string());
        FAIL("expected a parse error");
    }
    catch (const std::invalid_argument& e)
    {
        std::string msg = e.what();
        CHECK(msg.find(":2:") != std::string::npos);
        CHECK(msg.find("no_such_key") != std::string::npos);
    }

    auto path2 = write_file("bad_value.toml", "antennas = many\n");
    CHECK_THROWS_AS(load_config_file(path2.string()), std::invalid_argument);
    CHECK_THROWS_AS(load_config_file((temp_dir() / "absent.toml").string()),
                    std::invalid_argument);
}

TEST_CASE("validation rejects out-of-range setups")
{
    ExperimentConfig cfg = tiny_config();
    validate_config(cfg);

    ExperimentConfig bad = cfg;
    bad.num_antennas = 0;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.num_states = 3;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.amplitude = 1.5;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.rho_grid = {0.2, 0.1};
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.rho_grid = {0.0, 1.5};
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.spreading = 0;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.realizations = 0;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = cfg;
    bad.csi_error = -0.1;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
}

TEST_CASE("power conversions survive a round trip through the config text")
{
    ExperimentConfig cfg;
    for (double dbm : {-80.0, -40.0, 0.0, 17.25, 36.0})
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", dbm);
        apply_config_entry(cfg, "power_dbm", buf);
        CHECK(std::abs(cfg.transmit_power_dbm - dbm) <= 1e-12);
        CHECK(std::abs(watts_to_dbm(cfg.power_watts()) - dbm) <= 1e-12);
    }
}

TEST_CASE("the canonical form is stable and the hash is sensitive")
{
    ExperimentConfig a = tiny_config();
    ExperimentConfig b = tiny_config();
    CHECK(canonical_config(a) == canonical_config(b));
    CHECK(config_hash(a) == config_hash(b));

    b.seed = a.seed + 1;
    CHECK(config_hash(a) != config_hash(b));
    b = tiny_config();
    b.transmit_power_dbm += 1e-9;
    CHECK(config_hash(a) != config_hash(b));

    // Execution details stay out of the canonical form.
    b = tiny_config();
    b.threads = 7;
    CHECK(canonical_config(a) == canonical_config(b));
    CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("channel caches round-trip bit-exactly and refuse mismatched configs")
{
    ExperimentConfig cfg = tiny_config();
    cfg.realizations = 3;
    std::vector<ChannelDraw> draws = generate_all_channels(cfg);
    REQUIRE(draws.size() == 3);
    auto path = (temp_dir() / "channels.bin").string();
    save_channel_cache(path, cfg, draws);
    std::vector<ChannelDraw> loaded = load_channel_cache(path, cfg);
    REQUIRE(loaded.size() == 3);
    for (std::size_t r = 0; r < 3; r++)
    {
        CHECK(loaded[r].direct == draws[r].direct);
        CHECK(loaded[r].forward[0] == draws[r].forward[0]);
        CHECK(loaded[r].backward[0] == draws[r].backward[0]);
        CHECK(loaded[r].cascaded[0] == draws[r].cascaded[0]);
        CHECK(loaded[r].ap_node_distances == draws[r].ap_node_distances);
    }

    ExperimentConfig other = cfg;
    other.seed = cfg.seed + 1;
    CHECK_THROWS_AS(load_channel_cache(path, other), std::runtime_error);

    // Truncation and corrupt magic are refused.
    std::string bytes;
    {
        std::ifstream in(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    auto cut = (temp_dir() / "cut.bin").string();
    {
        std::ofstream out(cut, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(load_channel_cache(cut, cfg), std::runtime_error);
    auto bad = (temp_dir() / "bad.bin").string();
    {
        std::string corrupt = bytes;
        corrupt[0] = 'X';
        std::ofstream out(bad, std::ios::binary);
        out.write(corrupt.data(), static_cast<std::streamsize>(corrupt.size()));
    }
    CHECK_THROWS_AS(load_channel_cache(bad, cfg), std::runtime_error);
}

TEST_CASE("region runs are deterministic for a fixed config and any thread count")
{
    ExperimentConfig cfg = tiny_config();
    cfg.realizations = 2;
    RunOutput first = run_region(cfg);
    RunOutput second = run_region(cfg);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); i++)
    {
        CHECK(first.files[i].first == second.files[i].first);
        CHECK(first.files[i].second == second.files[i].second);
    }

    ExperimentConfig threaded = cfg;
    threaded.threads = 2;
    RunOutput parallel = run_region(threaded);
    REQUIRE(parallel.files.size() == first.files.size());
    for (std::size_t i = 0; i < first.files.size(); i++)
        CHECK(parallel.files[i].second == first.files[i].second);
}

TEST_CASE("the region table has one data row per weight")
{
    ExperimentConfig cfg = tiny_config();
    RunOutput out = run_region(cfg);
    const std::string& csv = find_file(out, "region.csv");
    CHECK(count_lines(csv) == 3); // header + two weights
    CHECK(csv.rfind("rho,primary_bits_per_s_hz,backscatter_bits_per_BB,"
                    "backscatter_bits_per_PB,n_realizations",
                    0) == 0);
    const std::string& poly = find_file(out, "region_polygon.csv");
    CHECK(count_lines(poly) == 5); // header + two projections + two points
    const std::string& manifest = find_file(out, "manifest.json");
    CHECK(manifest.find("config_hash") != std::string::npos);
    CHECK(manifest.find("outputs") != std::string::npos);
}

TEST_CASE("benchmark runs report all five schemes")
{
    ExperimentConfig cfg = tiny_config();
    RunOutput out = run_benchmark(cfg);
    const std::string& csv = find_file(out, "benchmark.csv");
    for (const char* scheme : {"legacy", "bbc", "ambc", "sr", "ris"})
        CHECK(csv.find(scheme) != std::string::npos);
    CHECK(count_lines(csv) == 6);
}

TEST_CASE("convergence runs emit monotone traces for all three loops")
{
    ExperimentConfig cfg = tiny_config();
    RunOutput out = run_convergence(cfg, 0.5);
    for (const char* name : {"converge_input.csv", "converge_beam.csv", "converge_bcd.csv"})
    {
        const std::string& csv = find_file(out, name);
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line); // header
        CHECK(line == "iteration,objective_nats,objective_bits");
        double prev = -1e300;
        int rows = 0;
        while (std::getline(lines, line))
        {
            auto c1 = line.find(',');
            auto c2 = line.find(',', c1 + 1);
            double nats = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            CHECK(nats >= prev - 1e-12);
            prev = nats;
            rows++;
        }
        CHECK(rows >= 1);
    }
}

TEST_CASE("distribution runs emit one probability row per node state")
{
    ExperimentConfig cfg = tiny_config();
    cfg.num_nodes = 1;
    cfg.num_states = 4;
    RunOutput out = run_distribution(cfg);
    const std::string& csv = find_file(out, "distribution.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "rho,node,state,probability");
    std::map<std::string, double> sums;
    bool rho_one_point_mass = false;
    while (std::getline(lines, line))
    {
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        auto c3 = line.find(',', c2 + 1);
        std::string key = line.substr(0, c2); // rho,node
        double p = std::stod(line.substr(c3 + 1));
        CHECK(p >= -1e-15);
        CHECK(p <= 1.0 + 1e-12);
        sums[key] += p;
        if (line.rfind("1,", 0) == 0 && std::abs(p - 1.0) <= 1e-9)
            rho_one_point_mass = true;
    }
    for (const auto& [key, sum] : sums)
    {
        INFO(key);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(rho_one_point_mass);
}

TEST_CASE("outputs can be written to and read back from a directory")
{
    ExperimentConfig cfg = tiny_config();
    RunOutput out = run_benchmark(cfg);
    auto dir = temp_dir() / "written";
    std::filesystem::remove_all(dir);
    write_outputs(out, dir.string());
    for (const auto& [name, content] : out.files)
    {
        std::ifstream in(dir / name, std::ios::binary);
        std::string back(std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>{});
        CHECK(back == content);
    }
}
