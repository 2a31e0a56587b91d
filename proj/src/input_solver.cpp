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

#include "riscatter/input_solver.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

namespace riscatter
{

static double update_exponent(double rho, ExponentMode mode)
{
    if (!(rho >= 0.0) || rho >= 1.0)
        throw std::domain_error("input solver: rho must lie in [0, 1); use solve_degenerate_rho1 at 1");
    return mode == ExponentMode::paper_printed ? rho / (1.0 - rho) : 1.0 / (1.0 - rho);
}

// Multiplicative simplex update in the log domain. Exact zeros stay zero;
// positive entries are floored at 1e-300 so finite iterates keep full
// support.
static Eigen::VectorXd scaled_update(const Eigen::VectorXd& p, const Eigen::VectorXd& gain,
                                     double eta)
{
    Eigen::VectorXd lp(p.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < p.size(); m++)
    {
        lp(m) = p(m) > 0.0 ? std::log(p(m)) + eta * gain(m)
                           : -std::numeric_limits<double>::infinity();
        shift = std::max(shift, lp(m));
    }
    if (std::isinf(shift))
        throw std::domain_error("input solver: distribution has empty support");

    Eigen::VectorXd next(p.size());
    for (Eigen::Index m = 0; m < p.size(); m++)
        next(m) = p(m) > 0.0 ? std::max(std::exp(lp(m) - shift), 1e-300) : 0.0;
    return next / next.sum();
}

InputDistribution kkt_update(const RateModel& rate, const InputDistribution& input, double rho,
                             ExponentMode mode)
{
    double eta = update_exponent(rho, mode);
    const TupleSpace& space = rate.table->space;

    InputDistribution current = input;
    for (int k = 0; k < space.num_nodes; k++)
    {
        JointDistribution joint = joint_distribution(current);
        Eigen::VectorXd info = tuple_weighted_info(rate, joint, rho);
        MarginalInfo marginal = marginal_info(current, space, info);
        current.per_node[k] = scaled_update(current.per_node[k], marginal.per_node[k], eta);
    }
    return current;
}

InputSolveResult solve_input_distribution(const RateModel& rate, double rho,
                                          const InputSolverParams& params, InputDistribution init)
{
    update_exponent(rho, params.mode); // validates rho
    if (static_cast<int>(init.per_node.size()) != rate.table->space.num_nodes)
        throw std::invalid_argument("solve_input_distribution: initializer node count mismatch");

    InputSolveResult result;
    result.input = std::move(init);
    result.info = weighted_mi(rate, joint_distribution(result.input), rho);
    result.trace.push_back(result.info.weighted);

    InputDistribution best = result.input;
    double best_value = result.info.weighted;

    for (int r = 1; r <= params.max_iterations; r++)
    {
        result.input = kkt_update(rate, result.input, rho, params.mode);
        InfoBreakdown info = weighted_mi(rate, joint_distribution(result.input), rho);
        double previous = result.trace.back();
        result.trace.push_back(info.weighted);
        result.iterations = r;
        if (info.weighted > best_value)
        {
            best_value = info.weighted;
            best = result.input;
        }
        if (info.weighted - previous <= params.tolerance)
        {
            result.info = info;
            result.converged = true;
            return result;
        }
    }

    result.input = best;
    result.info = weighted_mi(rate, joint_distribution(result.input), rho);
    result.converged = false;
    return result;
}

double kkt_residual(const RateModel& rate, const InputDistribution& input, double rho,
                    double support_threshold)
{
    const TupleSpace& space = rate.table->space;
    JointDistribution joint = joint_distribution(input);
    Eigen::VectorXd info = tuple_weighted_info(rate, joint, rho);
    MarginalInfo marginal = marginal_info(input, space, info);
    double value = weighted_mi(rate, joint, rho).weighted;

    double residual = 0.0;
    for (int k = 0; k < space.num_nodes; k++)
        for (Eigen::Index m = 0; m < marginal.per_node[k].size(); m++)
        {
            double gap = marginal.per_node[k](m) - value;
            if (input.per_node[k](m) >= support_threshold)
                residual = std::max(residual, std::abs(gap));
            else
                residual = std::max(residual, std::max(gap, 0.0));
        }
    return residual;
}

InputSolveResult exhaustive_search(const RateModel& rate, double rho, double resolution)
{
    const TupleSpace& space = rate.table->space;
    if (space.num_nodes != 1)
        throw std::invalid_argument("exhaustive_search: only single-node alphabets are supported");
    if (space.num_states > 6)
        throw std::invalid_argument("exhaustive_search: order capped at 6");
    if (!(resolution > 0.0) || resolution > 0.5)
        throw std::domain_error("exhaustive_search: resolution must lie in (0, 0.5]");

    int steps = static_cast<int>(std::lround(1.0 / resolution));
    int states = space.num_states;

    InputSolveResult result;
    result.input = uniform_input(1, states);
    double best = -std::numeric_limits<double>::infinity();
    long evaluated = 0;

    Eigen::VectorXd p(states);
    std::function<void(int, int)> visit = [&](int state, int remaining) {
        if (state == states - 1)
        {
            p(state) = static_cast<double>(remaining) / steps;
            JointDistribution joint;
            joint.prob = p;
            InfoBreakdown info = weighted_mi(rate, joint, rho);
            evaluated++;
            if (info.weighted > best)
            {
                best = info.weighted;
                result.input.per_node[0] = p;
                result.info = info;
            }
            return;
        }
        for (int units = 0; units <= remaining; units++)
        {
            p(state) = static_cast<double>(units) / steps;
            visit(state + 1, remaining - units);
        }
    };
    visit(0, steps);

    result.iterations = static_cast<int>(std::min<long>(evaluated, std::numeric_limits<int>::max()));
    result.converged = true;
    result.trace = {best};
    return result;
}

CooperativeResult cooperative_solve(const RateModel& rate, double rho,
                                    const InputSolverParams& params)
{
    double eta = update_exponent(rho, params.mode);

    CooperativeResult result;
    result.joint.prob = Eigen::VectorXd::Constant(rate.table->space.count,
                                                  1.0 / rate.table->space.count);
    result.info = weighted_mi(rate, result.joint, rho);
    result.trace.push_back(result.info.weighted);

    for (int r = 1; r <= params.max_iterations; r++)
    {
        Eigen::VectorXd info = tuple_weighted_info(rate, result.joint, rho);
        result.joint.prob = scaled_update(result.joint.prob, info, eta);
        InfoBreakdown current = weighted_mi(rate, result.joint, rho);
        double previous = result.trace.back();
        result.trace.push_back(current.weighted);
        result.iterations = r;
        result.info = current;
        if (current.weighted - previous <= params.tolerance)
        {
            result.converged = true;
            break;
        }
    }
    return result;
}

InputDistribution solve_degenerate_rho1(const RateModel& rate)
{
    const TupleSpace& space = rate.table->space;
    Eigen::Index best = 0;
    for (Eigen::Index t = 1; t < rate.primary.size(); t++)
        if (rate.primary(t) > rate.primary(best))
            best = t;

    std::vector<int> states = space.states_of(best);
    InputDistribution input;
    input.per_node.assign(space.num_nodes, Eigen::VectorXd::Zero(space.num_states));
    for (int k = 0; k < space.num_nodes; k++)
        input.per_node[k](states[k]) = 1.0;
    return input;
}

} // namespace riscatter
