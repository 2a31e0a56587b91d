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

#ifndef riscatter_detector_H
#define riscatter_detector_H

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "riscatter/node.hpp"

namespace riscatter
{

// Under joint state x the accumulated energy over the spreading window is
// Gamma distributed with shape N and scale sigma^2(x) = |h(x)^H w|^2 +
// noise_var. Hypotheses are handled in ascending-variance order throughout.

double receive_variance(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w, double noise_var);

// P(a <= z/scale < b) for the Gamma(N, scale) energy law, expressed through
// Poisson tail sums: exp(-a) sum_{n<N} a^n/n! - exp(-b) sum_{n<N} b^n/n!.
// b may be +inf. Factorials run in the log domain so N up to 1e4 is safe.
double reg_inc_gamma(int n, double a, double b);

double gamma_energy_pdf(double z, int n, double variance);

double gamma_energy_cdf(double z, int n, double variance);

// Inverse CDF by bisection, converged to 1e-12 relative.
double gamma_energy_quantile(double prob, int n, double variance);

// Ascending variance; equal variances keep enumeration order.
std::vector<std::int64_t> hypothesis_order(const Eigen::VectorXd& variances);

struct ReceiveModel
{
    Eigen::VectorXd variances;        // per tuple, enumeration order
    std::vector<std::int64_t> order;  // rank -> tuple index
    std::vector<std::int64_t> rank;   // tuple index -> rank
    double noise_var = 0.0;
    int spreading = 1;

    double ranked_variance(std::int64_t r) const { return variances(order[r]); }
};

ReceiveModel make_receive_model(const CompositeTable& table, const Eigen::VectorXcd& w,
                                double noise_var, int spreading);

// Same, but with a caller-fixed hypothesis order (used while the beamformer
// moves between reorder points).
ReceiveModel receive_model_with_order(const CompositeTable& table, const Eigen::VectorXcd& w,
                                      double noise_var, int spreading,
                                      const std::vector<std::int64_t>& order);

// Energy grid of 2^bits + 1 candidates covering the detection-relevant
// interval: from the `confidence` quantile of the smallest-variance
// hypothesis to the (1 - confidence) quantile of the largest. A collapsed
// interval yields a single candidate with `degenerate` set.
struct ThresholdCandidates
{
    Eigen::VectorXd grid;
    bool degenerate = false;
};

ThresholdCandidates candidate_grid(double var_lo, double var_hi, int n, int bits,
                                   double confidence, bool log_spaced = false);

// Decision-region edges: edges(0) = 0, edges(L) = +inf, nondecreasing.
// Repeated edges denote empty regions.
struct ThresholdSet
{
    Eigen::VectorXd edges;

    Eigen::Index regions() const { return edges.size() - 1; }
};

ThresholdSet make_threshold_set(const Eigen::VectorXd& interior);

// DMMAC transition matrix in hypothesis order:
// q(l, l') = reg_inc_gamma(N, edges(l') / s2_l, edges(l'+1) / s2_l).
Eigen::MatrixXd transition_matrix(const ReceiveModel& model, const ThresholdSet& thresholds);

} // namespace riscatter

#endif
