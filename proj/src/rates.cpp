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

#include "riscatter/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riscatter
{

double info_term(double x, double num, double den)
{
    if (x <= 0.0)
        return 0.0;
    // The energy densities have full support, so a zero mixture mass under a
    // positive numerator can only be floating-point underflow; floor the
    // denominator at the smallest representable value instead of diverging.
    den = std::max(den, std::numeric_limits<double>::denorm_min());
    return x * (std::log(num) - std::log(den));
}

static void check_rho(double rho)
{
    if (!(rho >= 0.0) || !(rho <= 1.0))
        throw std::domain_error("weight rho must lie in [0, 1]");
}

RateModel make_rate_model_with_order(const CompositeTable& table, const Eigen::VectorXcd& w,
                                     double noise_var, int spreading,
                                     const ThresholdSet& thresholds,
                                     const std::vector<std::int64_t>& order)
{
    RateModel rate;
    rate.table = &table;
    rate.model = receive_model_with_order(table, w, noise_var, spreading, order);
    rate.thresholds = thresholds;
    rate.transition = transition_matrix(rate.model, thresholds);
    if (rate.transition.cols() != rate.transition.rows())
        throw std::invalid_argument("make_rate_model: need one decision region per hypothesis");
    rate.w = w;
    rate.primary.resize(rate.model.variances.size());
    for (Eigen::Index t = 0; t < rate.primary.size(); t++)
        rate.primary(t) = std::log1p((rate.model.variances(t) - noise_var) / noise_var);
    return rate;
}

RateModel make_rate_model(const CompositeTable& table, const Eigen::VectorXcd& w,
                          double noise_var, int spreading, const ThresholdSet& thresholds)
{
    Eigen::VectorXd variances(static_cast<Eigen::Index>(table.channels.size()));
    for (std::size_t t = 0; t < table.channels.size(); t++)
        variances(static_cast<Eigen::Index>(t)) = receive_variance(table.channels[t], w, noise_var);
    return make_rate_model_with_order(table, w, noise_var, spreading, thresholds,
                                      hypothesis_order(variances));
}

Eigen::VectorXd hyp_probabilities(const RateModel& rate, const JointDistribution& joint)
{
    if (joint.prob.size() != static_cast<Eigen::Index>(rate.model.order.size()))
        throw std::invalid_argument("hyp_probabilities: joint size mismatch");
    Eigen::VectorXd p(joint.prob.size());
    for (Eigen::Index l = 0; l < p.size(); l++)
        p(l) = joint.prob(rate.model.order[l]);
    return p;
}

double backscatter_info_fn(const Eigen::MatrixXd& q, const Eigen::VectorXd& p_hyp,
                           Eigen::Index row)
{
    if (p_hyp.size() != q.rows())
        throw std::invalid_argument("backscatter_info_fn: distribution size mismatch");
    if (row < 0 || row >= q.rows())
        throw std::out_of_range("backscatter_info_fn: row out of range");
    Eigen::VectorXd out = q.transpose() * p_hyp;
    double v = 0.0;
    for (Eigen::Index r = 0; r < q.cols(); r++)
        v += info_term(q(row, r), q(row, r), out(r));
    return v;
}

double backscatter_mi(const Eigen::MatrixXd& q, const Eigen::VectorXd& p_hyp)
{
    if (p_hyp.size() != q.rows())
        throw std::invalid_argument("backscatter_mi: distribution size mismatch");
    Eigen::VectorXd out = q.transpose() * p_hyp;
    double mi = 0.0;
    for (Eigen::Index l = 0; l < q.rows(); l++)
    {
        if (p_hyp(l) <= 0.0)
            continue;
        double row = 0.0;
        for (Eigen::Index r = 0; r < q.cols(); r++)
            row += info_term(q(l, r), q(l, r), out(r));
        mi += p_hyp(l) * row;
    }
    return mi;
}

double primary_info_fn(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w, double noise_var)
{
    if (noise_var <= 0.0)
        throw std::domain_error("primary_info_fn: noise variance must be positive");
    if (h.size() != w.size() || h.size() == 0)
        throw std::invalid_argument("primary_info_fn: dimension mismatch");
    return std::log1p(std::norm(h.dot(w)) / noise_var);
}

double primary_mi(const RateModel& rate, const JointDistribution& joint)
{
    if (joint.prob.size() != rate.primary.size())
        throw std::invalid_argument("primary_mi: joint size mismatch");
    return joint.prob.dot(rate.primary);
}

InfoBreakdown weighted_mi(const RateModel& rate, const JointDistribution& joint, double rho)
{
    check_rho(rho);
    InfoBreakdown info;
    info.weight = rho;
    info.primary = primary_mi(rate, joint);
    info.backscatter = backscatter_mi(rate.transition, hyp_probabilities(rate, joint));
    info.weighted = rho * info.primary + (1.0 - rho) * info.backscatter;
    return info;
}

Eigen::VectorXd tuple_weighted_info(const RateModel& rate, const JointDistribution& joint,
                                    double rho)
{
    check_rho(rho);
    Eigen::VectorXd p_hyp = hyp_probabilities(rate, joint);
    Eigen::VectorXd out = rate.transition.transpose() * p_hyp;

    Eigen::VectorXd info(joint.prob.size());
    for (Eigen::Index t = 0; t < info.size(); t++)
    {
        Eigen::Index row = static_cast<Eigen::Index>(rate.model.rank[t]);
        double back = 0.0;
        for (Eigen::Index r = 0; r < rate.transition.cols(); r++)
            back += info_term(rate.transition(row, r), rate.transition(row, r), out(r));
        info(t) = rho * rate.primary(t) + (1.0 - rho) * back;
    }
    return info;
}

MarginalInfo marginal_info(const InputDistribution& input, const TupleSpace& space,
                           const Eigen::VectorXd& tuple_info)
{
    if (static_cast<int>(input.per_node.size()) != space.num_nodes)
        throw std::invalid_argument("marginal_info: node count mismatch");
    if (tuple_info.size() != space.count)
        throw std::invalid_argument("marginal_info: tuple info size mismatch");

    MarginalInfo marginal;
    marginal.per_node.assign(space.num_nodes, Eigen::VectorXd::Zero(space.num_states));

    int num_nodes = space.num_nodes;
    std::vector<double> prefix(num_nodes + 1), suffix(num_nodes + 1);
    for (std::int64_t t = 0; t < space.count; t++)
    {
        std::vector<int> states = space.states_of(t);
        // Leave-one-out products via prefix/suffix scans; avoids dividing by
        // per-node probabilities that may be zero.
        prefix[0] = 1.0;
        for (int k = 0; k < num_nodes; k++)
            prefix[k + 1] = prefix[k] * input.per_node[k](states[k]);
        suffix[num_nodes] = 1.0;
        for (int k = num_nodes - 1; k >= 0; k--)
            suffix[k] = suffix[k + 1] * input.per_node[k](states[k]);
        for (int k = 0; k < num_nodes; k++)
        {
            // Zero-probability tuples contribute nothing even when their
            // information is extreme (same convention as backscatter_mi).
            double weight = prefix[k] * suffix[k + 1];
            if (weight > 0.0)
                marginal.per_node[k](states[k]) += weight * tuple_info(t);
        }
    }
    return marginal;
}

} // namespace riscatter
