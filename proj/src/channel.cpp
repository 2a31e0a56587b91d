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

#include "riscatter/channel.hpp"
#include "riscatter/units.hpp"

#include <cmath>
#include <stdexcept>

namespace riscatter
{

double path_loss(double reference_loss_db, double reference_distance, double distance,
                 double exponent)
{
    if (distance <= 0.0 || reference_distance <= 0.0)
        throw std::domain_error("path_loss: distances must be positive");
    return db_to_linear(reference_loss_db) * std::pow(reference_distance / distance, exponent);
}

Eigen::MatrixXcd draw_rician(Eigen::Index rows, Eigen::Index cols, double k_factor, Rng& rng)
{
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("draw_rician: dimensions must be positive");
    if (k_factor < 0.0)
        throw std::domain_error("draw_rician: K-factor must be nonnegative");

    double los = std::sqrt(k_factor / (1.0 + k_factor));
    double nlos = std::sqrt(1.0 / (1.0 + k_factor));

    Eigen::MatrixXcd h(rows, cols);
    for (Eigen::Index c = 0; c < cols; c++)
        for (Eigen::Index r = 0; r < rows; r++)
            h(r, c) = los + nlos * rng.standard_complex_normal();
    return h;
}

static void sample_geometry(const GeometryConfig& geometry, int num_nodes, std::uint64_t seed,
                            std::uint64_t realization, std::vector<double>& ap_node,
                            std::vector<double>& node_user)
{
    if (!geometry.ap_node_distances.empty() || !geometry.node_user_distances.empty())
    {
        if (static_cast<int>(geometry.ap_node_distances.size()) != num_nodes ||
            static_cast<int>(geometry.node_user_distances.size()) != num_nodes)
            throw std::invalid_argument("generate_channels: explicit distances need one entry per node");
        ap_node = geometry.ap_node_distances;
        node_user = geometry.node_user_distances;
        return;
    }

    // Uniform drop in a disk around the user; the AP sits at the origin with
    // the user on the x-axis.
    ap_node.resize(num_nodes);
    node_user.resize(num_nodes);
    for (int k = 0; k < num_nodes; k++)
    {
        Rng rng(seed, realization, StreamTag::geometry, static_cast<std::uint64_t>(k));
        double d = geometry.node_drop_radius * std::sqrt(rng.uniform());
        double phi = 2.0 * M_PI * rng.uniform();
        double x = geometry.ap_user_distance + d * std::cos(phi);
        double y = d * std::sin(phi);
        node_user[k] = d;
        ap_node[k] = std::hypot(x, y);
    }
}

ChannelDraw generate_channels(const FadingConfig& fading, const GeometryConfig& geometry,
                              int num_antennas, int num_nodes, std::uint64_t seed,
                              std::uint64_t realization)
{
    if (num_antennas < 1)
        throw std::invalid_argument("generate_channels: need at least one antenna");
    if (num_nodes < 0)
        throw std::invalid_argument("generate_channels: node count must be nonnegative");

    ChannelDraw draw;
    sample_geometry(geometry, num_nodes, seed, realization, draw.ap_node_distances,
                    draw.node_user_distances);

    double loss_direct = path_loss(fading.reference_loss_db, fading.reference_distance,
                                   geometry.ap_user_distance, fading.exponent_direct);
    Rng rng_direct(seed, realization, StreamTag::direct);
    draw.direct = std::sqrt(loss_direct) *
                  draw_rician(num_antennas, 1, fading.rician_k_direct, rng_direct).col(0);

    draw.forward.resize(num_nodes);
    draw.backward.resize(num_nodes);
    draw.cascaded.resize(num_nodes);
    draw.cascaded_loss.resize(num_nodes);
    for (int k = 0; k < num_nodes; k++)
    {
        double loss_forward = path_loss(fading.reference_loss_db, fading.reference_distance,
                                        draw.ap_node_distances[k], fading.exponent_forward);
        double loss_backward = path_loss(fading.reference_loss_db, fading.reference_distance,
                                         draw.node_user_distances[k], fading.exponent_backward);

        Rng rng_forward(seed, realization, StreamTag::forward, static_cast<std::uint64_t>(k));
        Rng rng_backward(seed, realization, StreamTag::backward, static_cast<std::uint64_t>(k));

        draw.forward[k] = std::sqrt(loss_forward) *
                          draw_rician(num_antennas, 1, fading.rician_k_forward, rng_forward).col(0);
        draw.backward[k] = std::sqrt(loss_backward) *
                           draw_rician(1, 1, fading.rician_k_backward, rng_backward)(0, 0);
        draw.cascaded[k] = std::conj(draw.backward[k]) * draw.forward[k];
        draw.cascaded_loss[k] = loss_forward * loss_backward;
    }
    return draw;
}

ChannelDraw perturb_csi(const ChannelDraw& draw, double iota, std::uint64_t seed,
                        std::uint64_t realization)
{
    if (iota < 0.0)
        throw std::domain_error("perturb_csi: error scale must be nonnegative");

    ChannelDraw out = draw;
    if (iota == 0.0)
        return out;
    for (std::size_t k = 0; k < out.cascaded.size(); k++)
    {
        Rng rng(seed, realization, StreamTag::csi_error, static_cast<std::uint64_t>(k));
        double scale = std::sqrt(iota * draw.cascaded_loss[k]);
        for (Eigen::Index i = 0; i < out.cascaded[k].size(); i++)
            out.cascaded[k](i) += scale * rng.standard_complex_normal();
    }
    return out;
}

} // namespace riscatter
