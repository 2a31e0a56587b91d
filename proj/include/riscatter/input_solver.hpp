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

#ifndef riscatter_input_solver_H
#define riscatter_input_solver_H

#include <vector>

#include "riscatter/rates.hpp"

namespace riscatter
{

// Exponent applied to the marginal information in the multiplicative update
// p'_k(m) ~ p_k(m) * exp(eta * I_k(m)).
//   paperPrinted:  eta = rho / (1 - rho); stalls at rho = 0 (every point is a
//                  fixed point there) but kept for comparison runs.
//   blahutArimoto: eta = 1 / (1 - rho); reduces to the classic update at
//                  rho = 0 and has the same fixed points for rho > 0.
enum class ExponentMode
{
    paper_printed,
    blahut_arimoto,
};

struct InputSolverParams
{
    double tolerance = 1e-9; // on the weighted-MI increase per sweep
    int max_iterations = 1000;
    ExponentMode mode = ExponentMode::blahut_arimoto;
    double support_threshold = 1e-8; // probabilities below count as off-support
};

struct InputSolveResult
{
    InputDistribution input;
    InfoBreakdown info;
    std::vector<double> trace; // weighted MI, entry 0 = initial point
    int iterations = 0;
    bool converged = false;
};

// One full sweep of sequential per-node updates; node k sees nodes 0..k-1
// already updated.
InputDistribution kkt_update(const RateModel& rate, const InputDistribution& input, double rho,
                             ExponentMode mode);

InputSolveResult solve_input_distribution(const RateModel& rate, double rho,
                                          const InputSolverParams& params,
                                          InputDistribution init);

// Max violation of the stationarity conditions: on-support marginals must
// equal the weighted MI, off-support marginals must not exceed it.
double kkt_residual(const RateModel& rate, const InputDistribution& input, double rho,
                    double support_threshold = 1e-8);

// Dense simplex sweep for a single node (K = 1, order <= 6): all
// distributions with entries on a `resolution` lattice.
InputSolveResult exhaustive_search(const RateModel& rate, double rho, double resolution);

// Joint (non-product) distribution over the whole tuple alphabet, optimized
// as one augmented node.
struct CooperativeResult
{
    JointDistribution joint;
    InfoBreakdown info;
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
};

CooperativeResult cooperative_solve(const RateModel& rate, double rho,
                                    const InputSolverParams& params);

// rho = 1 endpoint: point mass on the tuple with the best primary rate
// (lowest tuple index on ties), factorized per node.
InputDistribution solve_degenerate_rho1(const RateModel& rate);

} // namespace riscatter

#endif
