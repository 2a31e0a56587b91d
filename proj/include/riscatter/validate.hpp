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

#ifndef riscatter_validate_H
#define riscatter_validate_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace riscatter
{

// Self-contained numerical cross checks of the core kernels against
// independent references (quadrature, finite differences, closed forms,
// exhaustive enumeration). Each check reports its achieved error and the
// tolerance it is held to.

struct CheckResult
{
    std::string name;
    bool pass = false;
    double error = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// Recursive Simpson integration with interval-halving error control.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tolerance, int max_depth = 30);

// Max |closed form - quadrature| of the energy-distribution mass over a
// fixed case set of (blocks, variance, interval).
double gamma_kernel_error();

// Max relative error between the analytic beam gradient and central finite
// differences over random frozen-order instances. `sign` scales the analytic
// gradient; -1 simulates a sign bug for the mutation check.
double gradient_fd_error(std::uint64_t seed, int instances, double sign = 1.0);

struct ZChannelCheck
{
    double capacity_error = 0.0;     // vs ln(5/4)
    double distribution_error = 0.0; // vs (0.6, 0.4)
    double kkt = 0.0;                // stationarity residual at the solution
};

// Input solver on the fixed two-state transition {{1, 0}, {1/2, 1/2}} at
// rho = 0, against the closed-form optimum.
ZChannelCheck z_channel_check();

// Max |dynamic program - exhaustive enumeration| objective gap on random
// bin-mass instances.
double dp_vs_brute_error(std::uint64_t seed, int instances);

// Max relative density mismatch at pairwise crossing thresholds, plus the
// closed-form pair (variances 1 and e, single block) -> e/(e-1).
double ml_crossing_error(std::uint64_t seed, int pairs);

// Stationarity residual after a converged input solve on one synthesized
// channel instance.
double instance_kkt_residual(std::uint64_t seed);

std::vector<CheckResult> run_validation(std::uint64_t seed);
bool all_passed(const std::vector<CheckResult>& checks);
std::string format_validation(const std::vector<CheckResult>& checks);

} // namespace riscatter

#endif
