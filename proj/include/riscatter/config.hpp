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

#ifndef riscatter_config_H
#define riscatter_config_H

#include <cstdint>
#include <string>
#include <vector>

#include "riscatter/beam_solver.hpp"
#include "riscatter/channel.hpp"
#include "riscatter/input_solver.hpp"
#include "riscatter/units.hpp"

namespace riscatter
{

enum class InputScheme
{
    kkt,
    cooperative,
    exhaustive,
    equiprobable,
};

enum class BeamScheme
{
    pga,
    ergodic_mrt,
    direct_mrt,
};

enum class ThresholdScheme
{
    dp,
    smawk,
    bisect,
    ml,
};

struct ExperimentConfig
{
    int num_antennas = 4; // Q
    int num_nodes = 2;    // K
    int num_states = 2;   // M (2 or a perfect square)
    int spreading = 20;   // N, primary blocks per backscatter block

    double transmit_power_dbm = 36.0;
    double noise_power_dbm = -40.0;
    double amplitude = 0.5; // scattering amplitude ratio

    FadingConfig fading;
    GeometryConfig geometry;

    int grid_bits = 9;
    double grid_confidence = 1e-3;
    bool grid_log_spaced = false;

    double csi_error = 0.0; // iota; relative cascaded estimation error power

    std::vector<double> rho_grid = {0.0,  0.01, 0.02, 0.05, 0.1,  0.2,  0.35,
                                    0.5,  0.65, 0.8,  0.9,  0.95, 0.99, 1.0};

    std::uint64_t seed = 0;
    int realizations = 1;
    int threads = 1;

    InputScheme input_scheme = InputScheme::kkt;
    BeamScheme beam_scheme = BeamScheme::pga;
    ThresholdScheme threshold_scheme = ThresholdScheme::smawk;

    InputSolverParams input_params;
    double exhaust_resolution = 0.01; // simplex lattice pitch for exhaustive inputs
    double beam_tolerance = 1e-7;
    int beam_max_iterations = 200;
    double bcd_tolerance = 1e-8;
    int bcd_max_iterations = 50;

    double power_watts() const { return dbm_to_watts(transmit_power_dbm); }
    double noise_watts() const { return dbm_to_watts(noise_power_dbm); }
    PgaParams beam_params() const;
};

// Flat `key = value` file (a TOML subset): '#' comments, booleans, numbers,
// [..] float arrays and bare or quoted enum words. Unknown keys are
// rejected.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Range checks shared by the file loader and the CLI; throws
// std::invalid_argument on violation.
void validate_config(const ExperimentConfig& cfg);

// Deterministic serialization of every field, and the FNV-1a 64-bit content
// hash over it (used in run manifests and the channel cache header).
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

std::string to_string(InputScheme s);
std::string to_string(BeamScheme s);
std::string to_string(ThresholdScheme s);
std::string to_string(ExponentMode m);

} // namespace riscatter

#endif
