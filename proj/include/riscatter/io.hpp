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

#ifndef riscatter_io_H
#define riscatter_io_H

#include <string>
#include <utility>
#include <vector>

#include "riscatter/region.hpp"

namespace riscatter
{

// Every run builds its complete output set in memory first and only then
// touches the filesystem, so error paths leave no partial files.
struct RunOutput
{
    std::vector<std::pair<std::string, std::string>> files; // (name, content)
};

// Monte Carlo over realizations; every emitted rate is in bits, averaged
// pointwise at fixed rho. Reduction runs in realization order, so the bytes
// do not depend on the thread count.
RunOutput run_region(const ExperimentConfig& cfg);

// Single realization (index 0): inner input/beam traces from the first outer
// iteration plus the outer trace, at the given rho.
RunOutput run_convergence(const ExperimentConfig& cfg, double rho);

// Single realization: converged per-node input distributions per rho.
RunOutput run_distribution(const ExperimentConfig& cfg);

// The five reference schemes averaged over realizations.
RunOutput run_benchmark(const ExperimentConfig& cfg);

void write_outputs(const RunOutput& out, const std::string& dir);

// Channel realizations 0..realizations-1 for the given config.
std::vector<ChannelDraw> generate_all_channels(const ExperimentConfig& cfg);

// Binary cache: magic "RISC", version u16, config hash u64, then
// little-endian f64 payload (interleaved re/im per complex entry). Loading
// verifies the stored hash against the live config and refuses a mismatch.
void save_channel_cache(const std::string& path, const ExperimentConfig& cfg,
                        const std::vector<ChannelDraw>& draws);
std::vector<ChannelDraw> load_channel_cache(const std::string& path,
                                            const ExperimentConfig& cfg);

} // namespace riscatter

#endif
