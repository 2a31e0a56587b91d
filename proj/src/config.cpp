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

#include "riscatter/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riscatter
{

namespace
{

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

// Lowercase with '_' and '-' removed, so kkt / ergodicMrt / ergodic_mrt all
// normalize to one spelling.
std::string normalize_word(const std::string& s)
{
    std::string out;
    for (char c : s)
    {
        if (c == '_' || c == '-' || c == '"' || c == '\'')
            continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value)
{
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
        v = std::stod(value, &pos);
    }
    catch (const std::exception&)
    {
        throw std::invalid_argument("config key '" + key + "': not a number: " + value);
    }
    if (trim(value.substr(pos)).size() != 0)
        throw std::invalid_argument("config key '" + key + "': trailing junk: " + value);
    return v;
}

long long parse_integer(const std::string& key, const std::string& value)
{
    double v = parse_double(key, value);
    if (std::floor(v) != v || std::abs(v) > 9.0e18)
        throw std::invalid_argument("config key '" + key + "': not an integer: " + value);
    return static_cast<long long>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value)
{
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try
    {
        v = std::stoull(value, &pos, 0);
    }
    catch (const std::exception&)
    {
        throw std::invalid_argument("config key '" + key + "': not an unsigned integer: " + value);
    }
    if (trim(value.substr(pos)).size() != 0)
        throw std::invalid_argument("config key '" + key + "': trailing junk: " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    std::string w = normalize_word(value);
    if (w == "true" || w == "1" || w == "yes" || w == "on")
        return true;
    if (w == "false" || w == "0" || w == "no" || w == "off")
        return false;
    throw std::invalid_argument("config key '" + key + "': not a boolean: " + value);
}

std::vector<double> parse_array(const std::string& key, const std::string& value)
{
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw std::invalid_argument("config key '" + key + "': expected [..] array: " + value);
    v = v.substr(1, v.size() - 2);
    std::vector<double> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const std::vector<double>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (i)
            out += ",";
        out += fmt(v[i]);
    }
    out += "]";
    return out;
}

InputScheme parse_input_scheme(const std::string& value)
{
    std::string w = normalize_word(value);
    if (w == "kkt")
        return InputScheme::kkt;
    if (w == "cooperative")
        return InputScheme::cooperative;
    if (w == "exhaustive")
        return InputScheme::exhaustive;
    if (w == "equiprobable")
        return InputScheme::equiprobable;
    throw std::invalid_argument("unknown input scheme: " + value);
}

BeamScheme parse_beam_scheme(const std::string& value)
{
    std::string w = normalize_word(value);
    if (w == "pga")
        return BeamScheme::pga;
    if (w == "ergodicmrt")
        return BeamScheme::ergodic_mrt;
    if (w == "directmrt")
        return BeamScheme::direct_mrt;
    throw std::invalid_argument("unknown beam scheme: " + value);
}

ThresholdScheme parse_threshold_scheme(const std::string& value)
{
    std::string w = normalize_word(value);
    if (w == "dp")
        return ThresholdScheme::dp;
    if (w == "smawk")
        return ThresholdScheme::smawk;
    if (w == "bisect" || w == "bisection")
        return ThresholdScheme::bisect;
    if (w == "ml")
        return ThresholdScheme::ml;
    throw std::invalid_argument("unknown threshold scheme: " + value);
}

ExponentMode parse_exponent_mode(const std::string& value)
{
    std::string w = normalize_word(value);
    if (w == "paperprinted")
        return ExponentMode::paper_printed;
    if (w == "blahutarimoto")
        return ExponentMode::blahut_arimoto;
    throw std::invalid_argument("unknown exponent mode: " + value);
}

} // namespace

PgaParams ExperimentConfig::beam_params() const
{
    PgaParams p;
    p.power = power_watts();
    p.tolerance = beam_tolerance;
    p.max_iterations = beam_max_iterations;
    return p;
}

std::string to_string(InputScheme s)
{
    switch (s)
    {
    case InputScheme::kkt: return "kkt";
    case InputScheme::cooperative: return "cooperative";
    case InputScheme::exhaustive: return "exhaustive";
    case InputScheme::equiprobable: return "equiprobable";
    }
    return "?";
}

std::string to_string(BeamScheme s)
{
    switch (s)
    {
    case BeamScheme::pga: return "pga";
    case BeamScheme::ergodic_mrt: return "ergodicMrt";
    case BeamScheme::direct_mrt: return "directMrt";
    }
    return "?";
}

std::string to_string(ThresholdScheme s)
{
    switch (s)
    {
    case ThresholdScheme::dp: return "dp";
    case ThresholdScheme::smawk: return "smawk";
    case ThresholdScheme::bisect: return "bisect";
    case ThresholdScheme::ml: return "ml";
    }
    return "?";
}

std::string to_string(ExponentMode m)
{
    switch (m)
    {
    case ExponentMode::paper_printed: return "paperPrinted";
    case ExponentMode::blahut_arimoto: return "blahutArimoto";
    }
    return "?";
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    if (key == "antennas")
        cfg.num_antennas = static_cast<int>(parse_integer(key, value));
    else if (key == "nodes")
        cfg.num_nodes = static_cast<int>(parse_integer(key, value));
    else if (key == "states")
        cfg.num_states = static_cast<int>(parse_integer(key, value));
    else if (key == "spreading")
        cfg.spreading = static_cast<int>(parse_integer(key, value));
    else if (key == "power_dbm")
        cfg.transmit_power_dbm = parse_double(key, value);
    else if (key == "noise_dbm")
        cfg.noise_power_dbm = parse_double(key, value);
    else if (key == "amplitude")
        cfg.amplitude = parse_double(key, value);
    else if (key == "reference_loss_db")
        cfg.fading.reference_loss_db = parse_double(key, value);
    else if (key == "reference_distance")
        cfg.fading.reference_distance = parse_double(key, value);
    else if (key == "exponent_direct")
        cfg.fading.exponent_direct = parse_double(key, value);
    else if (key == "exponent_forward")
        cfg.fading.exponent_forward = parse_double(key, value);
    else if (key == "exponent_backward")
        cfg.fading.exponent_backward = parse_double(key, value);
    else if (key == "rician_k_direct")
        cfg.fading.rician_k_direct = parse_double(key, value);
    else if (key == "rician_k_forward")
        cfg.fading.rician_k_forward = parse_double(key, value);
    else if (key == "rician_k_backward")
        cfg.fading.rician_k_backward = parse_double(key, value);
    else if (key == "ap_user_distance")
        cfg.geometry.ap_user_distance = parse_double(key, value);
    else if (key == "node_drop_radius")
        cfg.geometry.node_drop_radius = parse_double(key, value);
    else if (key == "ap_node_distances")
        cfg.geometry.ap_node_distances = parse_array(key, value);
    else if (key == "node_user_distances")
        cfg.geometry.node_user_distances = parse_array(key, value);
    else if (key == "grid_bits")
        cfg.grid_bits = static_cast<int>(parse_integer(key, value));
    else if (key == "grid_confidence")
        cfg.grid_confidence = parse_double(key, value);
    else if (key == "grid_log_spaced")
        cfg.grid_log_spaced = parse_bool(key, value);
    else if (key == "csi_error")
        cfg.csi_error = parse_double(key, value);
    else if (key == "rho_grid")
        cfg.rho_grid = parse_array(key, value);
    else if (key == "seed")
        cfg.seed = parse_u64(key, value);
    else if (key == "realizations")
        cfg.realizations = static_cast<int>(parse_integer(key, value));
    else if (key == "threads")
        cfg.threads = static_cast<int>(parse_integer(key, value));
    else if (key == "input_scheme")
        cfg.input_scheme = parse_input_scheme(value);
    else if (key == "beam_scheme")
        cfg.beam_scheme = parse_beam_scheme(value);
    else if (key == "threshold_scheme")
        cfg.threshold_scheme = parse_threshold_scheme(value);
    else if (key == "exponent_mode")
        cfg.input_params.mode = parse_exponent_mode(value);
    else if (key == "input_tolerance")
        cfg.input_params.tolerance = parse_double(key, value);
    else if (key == "input_max_iterations")
        cfg.input_params.max_iterations = static_cast<int>(parse_integer(key, value));
    else if (key == "input_support_threshold")
        cfg.input_params.support_threshold = parse_double(key, value);
    else if (key == "exhaust_resolution")
        cfg.exhaust_resolution = parse_double(key, value);
    else if (key == "beam_tolerance")
        cfg.beam_tolerance = parse_double(key, value);
    else if (key == "beam_max_iterations")
        cfg.beam_max_iterations = static_cast<int>(parse_integer(key, value));
    else if (key == "bcd_tolerance")
        cfg.bcd_tolerance = parse_double(key, value);
    else if (key == "bcd_max_iterations")
        cfg.bcd_max_iterations = static_cast<int>(parse_integer(key, value));
    else
        throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        // Section headers are inert decoration; all keys are global.
        if (line.front() == '[' && line.back() == ']')
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        try
        {
            apply_config_entry(cfg, line.substr(0, eq), trim(line.substr(eq + 1)));
        }
        catch (const std::invalid_argument& e)
        {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

void validate_config(const ExperimentConfig& cfg)
{
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (cfg.num_antennas < 1)
        fail("antennas must be >= 1");
    if (cfg.num_nodes < 0)
        fail("nodes must be >= 0");
    if (cfg.num_states < 2)
        fail("states must be >= 2");
    if (cfg.num_states > 2)
    {
        int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cfg.num_states))));
        if (side * side != cfg.num_states)
            fail("states must be 2 or a perfect square");
    }
    if (cfg.spreading < 1)
        fail("spreading must be >= 1");
    if (!(cfg.amplitude > 0.0) || cfg.amplitude > 1.0)
        fail("amplitude must lie in (0, 1]");
    if (!std::isfinite(cfg.transmit_power_dbm) || !std::isfinite(cfg.noise_power_dbm))
        fail("powers must be finite");
    if (!(cfg.fading.reference_distance > 0.0))
        fail("reference_distance must be positive");
    if (cfg.fading.exponent_direct < 0.0 || cfg.fading.exponent_forward < 0.0 ||
        cfg.fading.exponent_backward < 0.0)
        fail("path-loss exponents must be nonnegative");
    if (cfg.fading.rician_k_direct < 0.0 || cfg.fading.rician_k_forward < 0.0 ||
        cfg.fading.rician_k_backward < 0.0)
        fail("rician factors must be nonnegative");
    if (!(cfg.geometry.ap_user_distance > 0.0))
        fail("ap_user_distance must be positive");
    if (cfg.geometry.node_drop_radius < 0.0)
        fail("node_drop_radius must be nonnegative");
    for (const auto* dists : {&cfg.geometry.ap_node_distances, &cfg.geometry.node_user_distances})
    {
        if (!dists->empty() && dists->size() != static_cast<std::size_t>(cfg.num_nodes))
            fail("explicit distance lists must have one entry per node");
        for (double d : *dists)
            if (!(d > 0.0))
                fail("explicit distances must be positive");
    }
    if (cfg.grid_bits < 1 || cfg.grid_bits > 20)
        fail("grid_bits must lie in [1, 20]");
    if (!(cfg.grid_confidence > 0.0) || !(cfg.grid_confidence < 0.5))
        fail("grid_confidence must lie in (0, 0.5)");
    if (cfg.csi_error < 0.0)
        fail("csi_error must be nonnegative");
    if (cfg.rho_grid.empty())
        fail("rho_grid must be nonempty");
    for (std::size_t i = 0; i < cfg.rho_grid.size(); ++i)
    {
        double r = cfg.rho_grid[i];
        if (!(r >= 0.0) || !(r <= 1.0))
            fail("rho values must lie in [0, 1]");
        if (i > 0 && !(r > cfg.rho_grid[i - 1]))
            fail("rho_grid must be strictly ascending");
    }
    if (cfg.realizations < 1)
        fail("realizations must be >= 1");
    if (cfg.threads < 1)
        fail("threads must be >= 1");
    double tuples = std::pow(static_cast<double>(cfg.num_states), cfg.num_nodes);
    if (tuples > 4096.0)
        fail("states^nodes exceeds the tuple cap of 4096");
    if (!(cfg.input_params.tolerance > 0.0) || !(cfg.beam_tolerance > 0.0) ||
        !(cfg.bcd_tolerance > 0.0))
        fail("tolerances must be positive");
    if (cfg.input_params.max_iterations < 1 || cfg.beam_max_iterations < 1 ||
        cfg.bcd_max_iterations < 1)
        fail("iteration limits must be >= 1");
    if (!(cfg.input_params.support_threshold > 0.0))
        fail("input_support_threshold must be positive");
    if (!(cfg.exhaust_resolution > 0.0) || cfg.exhaust_resolution > 0.5)
        fail("exhaust_resolution must lie in (0, 0.5]");
}

std::string canonical_config(const ExperimentConfig& cfg)
{
    std::string out;
    auto put = [&out](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
    put("antennas", std::to_string(cfg.num_antennas));
    put("nodes", std::to_string(cfg.num_nodes));
    put("states", std::to_string(cfg.num_states));
    put("spreading", std::to_string(cfg.spreading));
    put("power_dbm", fmt(cfg.transmit_power_dbm));
    put("noise_dbm", fmt(cfg.noise_power_dbm));
    put("amplitude", fmt(cfg.amplitude));
    put("reference_loss_db", fmt(cfg.fading.reference_loss_db));
    put("reference_distance", fmt(cfg.fading.reference_distance));
    put("exponent_direct", fmt(cfg.fading.exponent_direct));
    put("exponent_forward", fmt(cfg.fading.exponent_forward));
    put("exponent_backward", fmt(cfg.fading.exponent_backward));
    put("rician_k_direct", fmt(cfg.fading.rician_k_direct));
    put("rician_k_forward", fmt(cfg.fading.rician_k_forward));
    put("rician_k_backward", fmt(cfg.fading.rician_k_backward));
    put("ap_user_distance", fmt(cfg.geometry.ap_user_distance));
    put("node_drop_radius", fmt(cfg.geometry.node_drop_radius));
    put("ap_node_distances", fmt(cfg.geometry.ap_node_distances));
    put("node_user_distances", fmt(cfg.geometry.node_user_distances));
    put("grid_bits", std::to_string(cfg.grid_bits));
    put("grid_confidence", fmt(cfg.grid_confidence));
    put("grid_log_spaced", cfg.grid_log_spaced ? "true" : "false");
    put("csi_error", fmt(cfg.csi_error));
    put("rho_grid", fmt(cfg.rho_grid));
    put("seed", std::to_string(cfg.seed));
    put("realizations", std::to_string(cfg.realizations));
    // threads is an execution detail: outputs are identical for any thread
    // count, so it must not enter the canonical form or the hash.
    put("input_scheme", to_string(cfg.input_scheme));
    put("beam_scheme", to_string(cfg.beam_scheme));
    put("threshold_scheme", to_string(cfg.threshold_scheme));
    put("exponent_mode", to_string(cfg.input_params.mode));
    put("input_tolerance", fmt(cfg.input_params.tolerance));
    put("input_max_iterations", std::to_string(cfg.input_params.max_iterations));
    put("input_support_threshold", fmt(cfg.input_params.support_threshold));
    put("exhaust_resolution", fmt(cfg.exhaust_resolution));
    put("beam_tolerance", fmt(cfg.beam_tolerance));
    put("beam_max_iterations", std::to_string(cfg.beam_max_iterations));
    put("bcd_tolerance", fmt(cfg.bcd_tolerance));
    put("bcd_max_iterations", std::to_string(cfg.bcd_max_iterations));
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    std::string s = canonical_config(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace riscatter
