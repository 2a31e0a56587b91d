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

#include "riscatter/node.hpp"

#include <cmath>
#include <stdexcept>

namespace riscatter
{

static constexpr std::int64_t tuple_cap = 4096;

Constellation build_constellation(int order, double amplitude)
{
    if (amplitude <= 0.0 || amplitude > 1.0)
        throw std::domain_error("build_constellation: amplitude must lie in (0, 1]");

    Constellation c;
    c.order = order;
    c.amplitude = amplitude;

    if (order == 2)
    {
        c.reflection = {{-amplitude, 0.0}, {amplitude, 0.0}};
        return c;
    }

    int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    if (order < 4 || side * side != order)
        throw std::invalid_argument("build_constellation: order must be 2 or a perfect square");

    double max_modulus = std::hypot(static_cast<double>(side - 1), static_cast<double>(side - 1));
    c.reflection.reserve(order);
    for (int re = -(side - 1); re <= side - 1; re += 2)
        for (int im = -(side - 1); im <= side - 1; im += 2)
            c.reflection.emplace_back(amplitude * re / max_modulus, amplitude * im / max_modulus);
    return c;
}

std::vector<int> TupleSpace::states_of(std::int64_t index) const
{
    if (index < 0 || index >= count)
        throw std::out_of_range("TupleSpace: tuple index out of range");
    std::vector<int> states(num_nodes);
    for (int k = num_nodes - 1; k >= 0; k--)
    {
        states[k] = static_cast<int>(index % num_states);
        index /= num_states;
    }
    return states;
}

std::int64_t TupleSpace::index_of(const std::vector<int>& states) const
{
    if (static_cast<int>(states.size()) != num_nodes)
        throw std::invalid_argument("TupleSpace: state tuple has wrong length");
    std::int64_t index = 0;
    for (int k = 0; k < num_nodes; k++)
    {
        if (states[k] < 0 || states[k] >= num_states)
            throw std::out_of_range("TupleSpace: state out of range");
        index = index * num_states + states[k];
    }
    return index;
}

TupleSpace make_tuple_space(int num_nodes, int num_states)
{
    if (num_nodes < 0 || num_states < 1)
        throw std::invalid_argument("make_tuple_space: invalid dimensions");

    TupleSpace space;
    space.num_nodes = num_nodes;
    space.num_states = num_nodes == 0 ? 1 : num_states;
    space.count = 1;
    for (int k = 0; k < num_nodes; k++)
    {
        space.count *= num_states;
        if (space.count > tuple_cap)
            throw std::length_error("make_tuple_space: joint alphabet exceeds 4096 tuples");
    }
    return space;
}

InputDistribution uniform_input(int num_nodes, int num_states)
{
    InputDistribution input;
    input.per_node.assign(num_nodes,
                          Eigen::VectorXd::Constant(num_states, 1.0 / num_states));
    return input;
}

static void check_simplex(const Eigen::VectorXd& p)
{
    if (p.size() == 0)
        throw std::invalid_argument("joint_distribution: empty per-node distribution");
    if (p.minCoeff() < -1e-9 || std::abs(p.sum() - 1.0) > 1e-9)
        throw std::domain_error("joint_distribution: distribution is off the simplex");
}

JointDistribution joint_distribution(const InputDistribution& input)
{
    JointDistribution joint;
    joint.prob = Eigen::VectorXd::Ones(1);
    for (const auto& p : input.per_node)
    {
        check_simplex(p);
        Eigen::VectorXd next(joint.prob.size() * p.size());
        for (Eigen::Index i = 0; i < joint.prob.size(); i++)
            for (Eigen::Index m = 0; m < p.size(); m++)
                next(i * p.size() + m) = joint.prob(i) * std::max(p(m), 0.0);
        joint.prob = std::move(next);
        if (joint.prob.size() > tuple_cap)
            throw std::length_error("joint_distribution: joint alphabet exceeds 4096 tuples");
    }
    return joint;
}

InputDistribution marginalize(const JointDistribution& joint, const TupleSpace& space)
{
    if (joint.prob.size() != space.count)
        throw std::invalid_argument("marginalize: joint size does not match the tuple space");

    InputDistribution input;
    input.per_node.assign(space.num_nodes, Eigen::VectorXd::Zero(space.num_states));
    for (std::int64_t t = 0; t < space.count; t++)
    {
        std::vector<int> states = space.states_of(t);
        for (int k = 0; k < space.num_nodes; k++)
            input.per_node[k](states[k]) += joint.prob(t);
    }
    return input;
}

Eigen::VectorXcd composite_channel(const ChannelDraw& draw,
                                   const std::vector<Constellation>& constellations,
                                   const std::vector<int>& states)
{
    if (constellations.size() != draw.cascaded.size() || states.size() != constellations.size())
        throw std::invalid_argument("composite_channel: node count mismatch");

    Eigen::VectorXcd h = draw.direct;
    for (std::size_t k = 0; k < states.size(); k++)
    {
        const auto& c = constellations[k];
        if (states[k] < 0 || states[k] >= c.order)
            throw std::out_of_range("composite_channel: state out of range");
        h += c.reflection[states[k]] * draw.cascaded[k];
    }
    return h;
}

CompositeTable build_composite_table(const ChannelDraw& draw,
                                     const std::vector<Constellation>& constellations)
{
    int num_states = constellations.empty() ? 1 : constellations.front().order;
    for (const auto& c : constellations)
        if (c.order != num_states)
            throw std::invalid_argument("build_composite_table: nodes must share one order");

    CompositeTable table;
    table.space = make_tuple_space(static_cast<int>(constellations.size()), num_states);
    table.channels.reserve(table.space.count);
    for (std::int64_t t = 0; t < table.space.count; t++)
        table.channels.push_back(composite_channel(draw, constellations, table.space.states_of(t)));
    return table;
}

} // namespace riscatter
