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

#ifndef riscatter_beam_solver_H
#define riscatter_beam_solver_H

#include <vector>

#include "riscatter/rates.hpp"

namespace riscatter
{

// Projected gradient ascent on the weighted MI over the transmit power ball,
// using the conjugate (Wirtinger) gradient of the objective. The hypothesis
// order is frozen at entry; reordering happens between solver blocks.

struct PgaParams
{
    double power = 1.0;       // transmit power budget P, ||w||^2 <= P
    double tolerance = 1e-7;  // on ||w_next - w||
    int max_iterations = 200;
    double alpha = 0.1;       // sufficient-increase coefficient
    double beta = 0.5;        // backtracking shrink factor
    double step_scale = 1.0;  // initial step = step_scale * sqrt(P) / ||grad||
};

// Closed form of the threshold sensitivity kernel:
// g(t) = -t e^{-u} u^{n-1} / (n-1)! with u = t / variance; g(0) = g(inf) = 0.
// Equals the telescoped series t e^{-u} (-1 + sum_{k=1}^{n-1} (k-u) u^{k-1}/k!).
double g_component(double threshold, int n, double variance);

// Conjugate gradient of one transition entry with respect to w:
// (h h^H w / variance^2) * (g(t_hi) - g(t_lo)).
Eigen::VectorXcd q_gradient(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w,
                            double variance, int n, double t_lo, double t_hi);

// Conjugate gradient of the weighted MI at rate.w.
Eigen::VectorXcd mi_gradient(const RateModel& rate, const JointDistribution& joint, double rho);

// Radial projection onto the power ball: sqrt(P) * w / max(sqrt(P), ||w||).
Eigen::VectorXcd project_power(const Eigen::VectorXcd& w, double power);

struct BeamSolveResult
{
    Eigen::VectorXcd w;
    std::vector<double> trace; // weighted MI, entry 0 = initial point
    int iterations = 0;
    bool converged = false;
};

BeamSolveResult solve_beamformer(const CompositeTable& table, const JointDistribution& joint,
                                 const ThresholdSet& thresholds, double noise_var, int spreading,
                                 double rho, const PgaParams& params, Eigen::VectorXcd w0);

// Full-power matched filter toward a fixed channel.
Eigen::VectorXcd mrt(const Eigen::VectorXcd& h, double power);

// Matched filter toward the sum of the cascaded channels; falls back to the
// direct channel when there are no nodes (or the sum vanishes).
Eigen::VectorXcd sum_cascade_mrt(const ChannelDraw& draw, double power);

// Matched filter toward the mean composite channel under the given input.
Eigen::VectorXcd ergodic_mrt(const CompositeTable& table, const JointDistribution& joint,
                             double power);

} // namespace riscatter

#endif
