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

#ifndef riscatter_region_H
#define riscatter_region_H

#include <cstdint>
#include <vector>

#include "riscatter/config.hpp"
#include "riscatter/rates.hpp"
#include "riscatter/threshold_solver.hpp"

namespace riscatter
{

// One converged operating point of the block-coordinate ascent over
// (input distributions, beamformer, thresholds).
struct BcdState
{
    double rho = 0.0;
    InputDistribution input;
    JointDistribution joint;
    Eigen::VectorXcd w;
    ThresholdSet thresholds;
    InfoBreakdown info;
    std::vector<double> trace; // weighted MI per outer iteration, entry 0 = initial point
    int iterations = 0;
    bool converged = false;
    bool warning = false;
    // Inner traces from the first outer iteration, kept for convergence
    // reporting.
    std::vector<double> input_trace;
    std::vector<double> beam_trace;
};

// Coordinate ascent [inputs -> beamformer -> reorder -> thresholds] until the
// weighted-MI gain drops to cfg.bcd_tolerance. rho = 1 routes through the
// degenerate point-mass input, gradient ascent, and an exhaustive
// tuple/matched-filter polish. A warm start seeds inputs and beamformer.
BcdState bcd_solve(const ChannelDraw& draw, const ExperimentConfig& cfg, double rho,
                   const BcdState* warm = nullptr);

// Rates of a finished design (inputs, beamformer, thresholds) re-evaluated on
// another draw, i.e. the true channel when the design used an estimate.
InfoBreakdown evaluate_design(const ChannelDraw& truth, const ExperimentConfig& cfg,
                              const BcdState& design, double rho);

struct RegionPoint
{
    double rho = 0.0;
    InfoBreakdown info;
    int iterations = 0;
    bool converged = false;
};

struct RegionResult
{
    std::vector<RegionPoint> points;
    std::vector<BcdState> states; // design states, one per grid point
};

// Sweeps cfg.rho_grid (ascending, starting at 0) with progressive warm
// starts. With cfg.csi_error > 0 the design runs on a perturbed draw and the
// reported rates are re-evaluated on `truth`.
RegionResult rate_region(const ChannelDraw& truth, const ExperimentConfig& cfg,
                         std::uint64_t realization);

// Benchmark operating points, rates in nats (primary per primary block,
// backscatter per backscatter block).
struct BenchmarkResult
{
    double primary = 0.0;
    double backscatter = 0.0;
};

// Matched filter on the direct channel, no scatter nodes.
BenchmarkResult benchmark_legacy(const ChannelDraw& draw, const ExperimentConfig& cfg);

// Carrier-only illumination: primary 0, backscatter K ln M nats/BB as the
// large-spreading limit, or the finite-spreading detector value on request.
BenchmarkResult benchmark_bbc(const ChannelDraw& draw, const ExperimentConfig& cfg,
                              bool finite_spreading = false);

// Scatter treated as interference of average power on the primary link;
// uniform inputs and pairwise density-crossing thresholds on the backscatter
// link.
BenchmarkResult benchmark_ambc(const ChannelDraw& draw, const ExperimentConfig& cfg);

// Symbiotic relaying: tuple-averaged primary rate under uniform inputs,
// backscatter reported as the K ln M limit.
BenchmarkResult benchmark_sr(const ChannelDraw& draw, const ExperimentConfig& cfg);

// Deterministic reflection: best tuple with matched filtering (alternating
// selection, exhaustively polished), no backscatter information.
BenchmarkResult benchmark_ris(const ChannelDraw& draw, const ExperimentConfig& cfg);

} // namespace riscatter

#endif
