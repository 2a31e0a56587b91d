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

#ifndef riscatter_rates_H
#define riscatter_rates_H

#include <Eigen/Dense>

#include "riscatter/detector.hpp"
#include "riscatter/node.hpp"

namespace riscatter
{

// Centralized 0 log 0 convention: x * ln(num / den) with x <= 0 mapping to 0.
// Every mutual-information sum in the library goes through this helper.
double info_term(double x, double num, double den);

// Everything a rate evaluation needs for one (channel table, beamformer,
// thresholds) triple. `transition` and all ranked quantities follow the
// hypothesis order stored in `model`; `primary` is per tuple in enumeration
// order.
struct RateModel
{
    const CompositeTable* table = nullptr;
    ReceiveModel model;
    ThresholdSet thresholds;
    Eigen::MatrixXd transition;
    Eigen::VectorXd primary;
    Eigen::VectorXcd w;
};

RateModel make_rate_model(const CompositeTable& table, const Eigen::VectorXcd& w,
                          double noise_var, int spreading, const ThresholdSet& thresholds);

RateModel make_rate_model_with_order(const CompositeTable& table, const Eigen::VectorXcd& w,
                                     double noise_var, int spreading,
                                     const ThresholdSet& thresholds,
                                     const std::vector<std::int64_t>& order);

// Joint probabilities permuted into hypothesis order.
Eigen::VectorXd hyp_probabilities(const RateModel& rate, const JointDistribution& joint);

// Relative entropy of one decision row against the output distribution
// induced by p (both in hypothesis order).
double backscatter_info_fn(const Eigen::MatrixXd& q, const Eigen::VectorXd& p_hyp,
                           Eigen::Index row);

double backscatter_mi(const Eigen::MatrixXd& q, const Eigen::VectorXd& p_hyp);

// ln(1 + |h^H w|^2 / noise_var), in nats.
double primary_info_fn(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w, double noise_var);

double primary_mi(const RateModel& rate, const JointDistribution& joint);

struct InfoBreakdown
{
    double weight = 0.0;      // rho
    double primary = 0.0;     // nats per primary block
    double backscatter = 0.0; // nats per backscatter block
    double weighted = 0.0;    // rho * primary + (1 - rho) * backscatter

    double backscatter_per_block(int spreading) const { return backscatter / spreading; }
};

InfoBreakdown weighted_mi(const RateModel& rate, const JointDistribution& joint, double rho);

// Per-tuple weighted information I(x) = rho * primary(x) + (1 - rho) *
// backscatter_info_fn(rank(x)), enumeration order.
Eigen::VectorXd tuple_weighted_info(const RateModel& rate, const JointDistribution& joint,
                                    double rho);

// Marginal information of each node state: the tuple information averaged
// over the other nodes' distributions. Satisfies
// sum_m p_k(m) I_k(m) = sum_x p(x) I(x) for every k.
struct MarginalInfo
{
    std::vector<Eigen::VectorXd> per_node;
};

MarginalInfo marginal_info(const InputDistribution& input, const TupleSpace& space,
                           const Eigen::VectorXd& tuple_info);

} // namespace riscatter

#endif
