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

#ifndef riscatter_node_H
#define riscatter_node_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "riscatter/channel.hpp"

namespace riscatter
{

// Reflection constellation of one node. `reflection[m]` is the complex
// coefficient applied to the cascaded channel in state m; the constellation
// is a square QAM grid (or the antipodal pair for order 2) scaled so the
// largest modulus equals `amplitude`.
struct Constellation
{
    int order = 0;
    double amplitude = 1.0;
    std::vector<std::complex<double>> reflection;
};

// order must be 2 or a perfect square; amplitude must lie in (0, 1].
// State enumeration is fixed: ascending real part, then ascending imaginary
// part within equal real parts (order 2 gives {-a, +a}).
Constellation build_constellation(int order, double amplitude);

// Mixed-radix enumeration of joint reflection states. Node 0 is the most
// significant digit: index = sum_k states[k] * M^(K-1-k).
struct TupleSpace
{
    int num_nodes = 0;
    int num_states = 1;
    std::int64_t count = 1;

    std::vector<int> states_of(std::int64_t index) const;
    std::int64_t index_of(const std::vector<int>& states) const;
};

// Caps the joint alphabet at 4096 tuples.
TupleSpace make_tuple_space(int num_nodes, int num_states);

// Per-node input distributions (each a point on the M-simplex).
struct InputDistribution
{
    std::vector<Eigen::VectorXd> per_node;
};

// Joint distribution over tuples, in enumeration order.
struct JointDistribution
{
    Eigen::VectorXd prob;
};

InputDistribution uniform_input(int num_nodes, int num_states);

// Product distribution over the tuple space. Rejects inputs that are off the
// simplex by more than 1e-9.
JointDistribution joint_distribution(const InputDistribution& input);

InputDistribution marginalize(const JointDistribution& joint, const TupleSpace& space);

// Composite channel for one joint state:
// h(x) = direct + sum_k reflection[k][states[k]] * cascaded[k].
Eigen::VectorXcd composite_channel(const ChannelDraw& draw,
                                   const std::vector<Constellation>& constellations,
                                   const std::vector<int>& states);

// Composite channels of every tuple, in enumeration order.
struct CompositeTable
{
    TupleSpace space;
    std::vector<Eigen::VectorXcd> channels;
};

CompositeTable build_composite_table(const ChannelDraw& draw,
                                     const std::vector<Constellation>& constellations);

} // namespace riscatter

#endif
