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

#include "riscatter/beam_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace riscatter
{

double g_component(double threshold, int n, double variance)
{
    if (n < 1)
        throw std::invalid_argument("g_component: shape must be at least 1");
    if (variance <= 0.0)
        throw std::domain_error("g_component: variance must be positive");
    if (threshold < 0.0)
        throw std::domain_error("g_component: threshold must be nonnegative");
    if (threshold == 0.0 || std::isinf(threshold))
        return 0.0;

    double u = threshold / variance;
    return -std::exp(std::log(threshold) - u + (n - 1) * std::log(u) -
                     std::lgamma(static_cast<double>(n)));
}

Eigen::VectorXcd q_gradient(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w,
                            double variance, int n, double t_lo, double t_hi)
{
    if (h.size() != w.size())
        throw std::invalid_argument("q_gradient: dimension mismatch");
    if (t_hi < t_lo)
        throw std::invalid_argument("q_gradient: edges out of order");
    double gdiff = g_component(t_hi, n, variance) - g_component(t_lo, n, variance);
    return h * (h.dot(w) * gdiff / (variance * variance));
}

Eigen::VectorXcd mi_gradient(const RateModel& rate, const JointDistribution& joint, double rho)
{
    if (!(rho >= 0.0) || !(rho <= 1.0))
        throw std::domain_error("mi_gradient: rho must lie in [0, 1]");

    const Eigen::MatrixXd& q = rate.transition;
    const Eigen::VectorXd& e = rate.thresholds.edges;
    int n = rate.model.spreading;
    Eigen::Index num_hyp = q.rows();

    Eigen::VectorXd p = hyp_probabilities(rate, joint);
    Eigen::VectorXd out = q.transpose() * p;

    // Ranked per-hypothesis quantities.
    std::vector<Eigen::VectorXcd> base(num_hyp); // h_l (h_l^H w)
    Eigen::VectorXd var(num_hyp);
    for (Eigen::Index l = 0; l < num_hyp; l++)
    {
        const Eigen::VectorXcd& h = rate.table->channels[rate.model.order[l]];
        base[l] = h * h.dot(rate.w);
        var(l) = rate.model.ranked_variance(l);
    }

    // g(edge) per hypothesis, then region sensitivities and their p-average.
    Eigen::MatrixXd gdiff(num_hyp, q.cols());
    for (Eigen::Index l = 0; l < num_hyp; l++)
        for (Eigen::Index r = 0; r < q.cols(); r++)
            gdiff(l, r) = g_component(e(r + 1), n, var(l)) - g_component(e(r), n, var(l));

    Eigen::VectorXcd grad = Eigen::VectorXcd::Zero(rate.w.size());
    std::vector<Eigen::VectorXcd> avg_region(q.cols(),
                                             Eigen::VectorXcd::Zero(rate.w.size()));
    for (Eigen::Index r = 0; r < q.cols(); r++)
        for (Eigen::Index l = 0; l < num_hyp; l++)
            if (p(l) > 0.0)
                avg_region[r] += p(l) / (var(l) * var(l)) * gdiff(l, r) * base[l];

    for (Eigen::Index l = 0; l < num_hyp; l++)
    {
        if (p(l) <= 0.0)
            continue;
        Eigen::VectorXcd row = rho / var(l) * base[l];
        if (rho < 1.0)
            for (Eigen::Index r = 0; r < q.cols(); r++)
            {
                if (out(r) <= 0.0 || q(l, r) <= 0.0)
                    continue; // vanishing region mass: sensitivity vanishes with it
                row += (1.0 - rho) * (std::log(q(l, r) / out(r)) + 1.0) *
                       (gdiff(l, r) / (var(l) * var(l))) * base[l];
                row -= (1.0 - rho) * q(l, r) / out(r) * avg_region[r];
            }
        grad += p(l) * row;
    }
    return grad;
}

Eigen::VectorXcd project_power(const Eigen::VectorXcd& w, double power)
{
    if (power <= 0.0)
        throw std::domain_error("project_power: power must be positive");
    double norm = w.norm();
    double radius = std::sqrt(power);
    return norm > radius ? Eigen::VectorXcd(w * (radius / norm)) : w;
}

BeamSolveResult solve_beamformer(const CompositeTable& table, const JointDistribution& joint,
                                 const ThresholdSet& thresholds, double noise_var, int spreading,
                                 double rho, const PgaParams& params, Eigen::VectorXcd w0)
{
    if (params.power <= 0.0)
        throw std::domain_error("solve_beamformer: power must be positive");
    if (!(params.alpha > 0.0) || !(params.beta > 0.0) || params.beta >= 1.0)
        throw std::invalid_argument("solve_beamformer: invalid line-search parameters");

    w0 = project_power(w0, params.power);
    RateModel rate =
        make_rate_model(table, w0, noise_var, spreading, thresholds); // freezes the order
    std::vector<std::int64_t> order = rate.model.order;

    auto evaluate = [&](const Eigen::VectorXcd& w) {
        return make_rate_model_with_order(table, w, noise_var, spreading, thresholds, order);
    };

    BeamSolveResult result;
    result.w = w0;
    double value = weighted_mi(rate, joint, rho).weighted;
    result.trace.push_back(value);

    double gamma_init = 0.0;
    for (int r = 1; r <= params.max_iterations; r++)
    {
        Eigen::VectorXcd grad = mi_gradient(rate, joint, rho);
        double grad_norm2 = grad.squaredNorm();
        result.iterations = r;
        if (grad_norm2 == 0.0)
        {
            result.converged = true;
            break;
        }
        if (gamma_init == 0.0)
            gamma_init = params.step_scale * std::sqrt(params.power) / std::sqrt(grad_norm2);

        double gamma = gamma_init;
        bool accepted = false;
        while (gamma >= 1e-30 * gamma_init)
        {
            Eigen::VectorXcd w_trial = project_power(result.w + gamma * grad, params.power);
            RateModel rate_trial = evaluate(w_trial);
            double value_trial = weighted_mi(rate_trial, joint, rho).weighted;
            if (value_trial >= value + params.alpha * gamma * grad_norm2)
            {
                double step = (w_trial - result.w).norm();
                result.w = std::move(w_trial);
                rate = std::move(rate_trial);
                value = value_trial;
                result.trace.push_back(value);
                accepted = true;
                if (step <= params.tolerance)
                    result.converged = true;
                break;
            }
            gamma *= params.beta;
        }
        if (!accepted)
        {
            // Projection can make the printed sufficient-increase test
            // unattainable on the power boundary; the incumbent is kept.
            result.converged = true;
            break;
        }
        if (result.converged)
            break;
    }
    return result;
}

Eigen::VectorXcd mrt(const Eigen::VectorXcd& h, double power)
{
    if (power <= 0.0)
        throw std::domain_error("mrt: power must be positive");
    double norm = h.norm();
    if (norm == 0.0)
        throw std::domain_error("mrt: zero channel");
    return std::sqrt(power) / norm * h;
}

Eigen::VectorXcd sum_cascade_mrt(const ChannelDraw& draw, double power)
{
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(draw.direct.size());
    for (const auto& c : draw.cascaded)
        sum += c;
    if (sum.norm() == 0.0)
        return mrt(draw.direct, power);
    return mrt(sum, power);
}

Eigen::VectorXcd ergodic_mrt(const CompositeTable& table, const JointDistribution& joint,
                             double power)
{
    if (joint.prob.size() != static_cast<Eigen::Index>(table.channels.size()))
        throw std::invalid_argument("ergodic_mrt: joint size mismatch");
    Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(table.channels.front().size());
    for (std::size_t t = 0; t < table.channels.size(); t++)
        mean += joint.prob(static_cast<Eigen::Index>(t)) * table.channels[t];
    if (mean.norm() == 0.0)
        throw std::domain_error("ergodic_mrt: mean composite channel vanishes");
    return mrt(mean, power);
}

} // namespace riscatter
