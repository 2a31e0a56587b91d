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

#ifndef riscatter_channel_H
#define riscatter_channel_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "riscatter/rng.hpp"

namespace riscatter
{

struct FadingConfig
{
    double reference_loss_db = -30.0; // power gain at the reference distance
    double reference_distance = 1.0;  // m
    double exponent_direct = 2.6;
    double exponent_forward = 2.4;
    double exponent_backward = 2.0;
    double rician_k_direct = 5.0; // linear K-factors
    double rician_k_forward = 5.0;
    double rician_k_backward = 5.0;
};

struct GeometryConfig
{
    double ap_user_distance = 10.0; // m
    double node_drop_radius = 2.0;  // m, disk centered at the user
    // When non-empty these override the random drop; both must have one entry
    // per node.
    std::vector<double> ap_node_distances;
    std::vector<double> node_user_distances;
};

// One fading realization. `direct` is the transmitter-to-user channel as a
// column vector (length = antenna count), `forward[k]` the transmitter-to-node
// channel, `backward[k]` the scalar node-to-user channel and
// cascaded[k] = conj(backward[k]) * forward[k].
struct ChannelDraw
{
    Eigen::VectorXcd direct;
    std::vector<Eigen::VectorXcd> forward;
    std::vector<std::complex<double>> backward;
    std::vector<Eigen::VectorXcd> cascaded;
    std::vector<double> ap_node_distances;
    std::vector<double> node_user_distances;
    std::vector<double> cascaded_loss; // per node, linear power gain
};

// Linear power gain L0 * (d0 / d)^gamma with L0 given in dB.
double path_loss(double reference_loss_db, double reference_distance, double distance,
                 double exponent);

// Rician fading with an all-ones deterministic component:
// sqrt(k/(1+k)) * ones + sqrt(1/(1+k)) * H_tilde, H_tilde iid CN(0, 1).
// Entries are drawn in column-major order.
Eigen::MatrixXcd draw_rician(Eigen::Index rows, Eigen::Index cols, double k_factor, Rng& rng);

ChannelDraw generate_channels(const FadingConfig& fading, const GeometryConfig& geometry,
                              int num_antennas, int num_nodes, std::uint64_t seed,
                              std::uint64_t realization);

// Returns a copy whose cascaded channels carry an additive iid CN(0,
// iota * cascaded_loss[k]) estimation error per entry. iota = 0 is the
// identity.
ChannelDraw perturb_csi(const ChannelDraw& draw, double iota, std::uint64_t seed,
                        std::uint64_t realization);

} // namespace riscatter

#endif
