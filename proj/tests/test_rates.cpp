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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riscatter/rates.hpp"

using namespace riscatter;

namespace
{

RateModel tiny_model(std::uint64_t realization, int antennas, int nodes, int order,
                     int spreading, CompositeTable& table)
{
    FadingConfig f;
    GeometryConfig g;
    ChannelDraw d = generate_channels(f, g, antennas, nodes, 101, realization);
    std::vector<Constellation> cons(nodes, build_constellation(order, 0.5));
    table = build_composite_table(d, cons);
    Eigen::VectorXcd w =
        Eigen::VectorXcd::Ones(antennas) / std::sqrt(static_cast<double>(antennas));
    Eigen::Index l = table.space.count;
    Eigen::VectorXd interior =
        Eigen::VectorXd::LinSpaced(l - 1, 1e-6, 1e-6 * static_cast<double>(l));
    return make_rate_model(table, w, 1e-7, spreading, make_threshold_set(interior));
}

} // namespace

TEST_CASE("the information kernel handles its zero conventions")
{
    CHECK(info_term(0.0, 0.0, 1.0) == 0.0);
    CHECK(info_term(-1.0, 0.5, 1.0) == 0.0);
    CHECK(info_term(0.5, 0.25, 0.5) == doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-14));
    CHECK(info_term(1.0, 2.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("the two-state asymmetric channel has its known information value")
{
    Eigen::MatrixXd q(2, 2);
    q << 1.0, 0.0, 0.5, 0.5;
    Eigen::VectorXd p(2);
    p << 0.6, 0.4;
    // I(p, q) at this input: 0.6*ln(0.6/0.8 path)... evaluates to ln 5 terms.
    double expect = 0.6 * std::log(1.0 / 0.8) + 0.4 * (0.5 * std::log(0.5 / 0.8) +
                                                       0.5 * std::log(0.5 / 0.2));
    CHECK(backscatter_mi(q, p) == doctest::Approx(expect).epsilon(1e-13));

    // The per-row information terms recover the mutual information.
    double mix = 0.0;
    for (Eigen::Index r = 0; r < 2; r++)
        mix += p(r) * backscatter_info_fn(q, p, r);
    CHECK(mix == doctest::Approx(backscatter_mi(q, p)).epsilon(1e-13));
}

TEST_CASE("identity and uniform transition matrices bound the information")
{
    Eigen::VectorXd p(3);
    p << 0.2, 0.3, 0.5;
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    double entropy = -(p.array() * p.array().log()).sum();
    CHECK(backscatter_mi(id, p) == doctest::Approx(entropy).epsilon(1e-13));

    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
    CHECK(backscatter_mi(flat, p) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("primary information term is the log SNR expression")
{
    Eigen::VectorXcd h(2), w(2);
    h << std::complex<double>(0.3, -0.4), std::complex<double>(0.0, 1.0);
    w << std::complex<double>(1.0, 0.0), std::complex<double>(0.5, 0.5);
    double nv = 0.01;
    double snr = std::norm(h.dot(w)) / nv;
    CHECK(primary_info_fn(h, w, nv) == doctest::Approx(std::log1p(snr)).epsilon(1e-13));
}

TEST_CASE("primary rate averages the per-tuple terms under the input law")
{
    CompositeTable table;
    RateModel rate = tiny_model(0, 2, 2, 2, 4, table);
    Eigen::VectorXd p(4);
    p << 0.1, 0.2, 0.3, 0.4;
    JointDistribution joint{p};
    double expect = 0.0;
    for (Eigen::Index x = 0; x < 4; x++)
        expect += p(x) * primary_info_fn(table.channels[x], rate.w, rate.model.noise_var);
    CHECK(primary_mi(rate, joint) == doctest::Approx(expect).epsilon(1e-13));
    for (Eigen::Index x = 0; x < 4; x++)
        CHECK(rate.primary(x) ==
              doctest::Approx(primary_info_fn(table.channels[x], rate.w,
                                              rate.model.noise_var)).epsilon(1e-13));
}

TEST_CASE("hypothesis probabilities permute the joint law into rank order")
{
    CompositeTable table;
    RateModel rate = tiny_model(1, 2, 1, 4, 4, table);
    Eigen::VectorXd p(4);
    p << 0.4, 0.1, 0.3, 0.2;
    JointDistribution joint{p};
    Eigen::VectorXd hp = hyp_probabilities(rate, joint);
    REQUIRE(hp.size() == 4);
    for (Eigen::Index r = 0; r < 4; r++)
        CHECK(hp(r) == p(rate.model.order[static_cast<std::size_t>(r)]));
    CHECK(hp.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weighted information blends the two links by the weight")
{
    CompositeTable table;
    RateModel rate = tiny_model(2, 2, 2, 2, 6, table);
    Eigen::VectorXd p(4);
    p << 0.25, 0.25, 0.25, 0.25;
    JointDistribution joint{p};
    for (double rho : {0.0, 0.3, 1.0})
    {
        InfoBreakdown info = weighted_mi(rate, joint, rho);
        CHECK(info.weight == rho);
        CHECK(info.weighted ==
              doctest::Approx(rho * info.primary + (1.0 - rho) * info.backscatter)
                  .epsilon(1e-13));
        CHECK(info.primary == doctest::Approx(primary_mi(rate, joint)).epsilon(1e-13));
        CHECK(info.backscatter ==
              doctest::Approx(backscatter_mi(rate.transition, hyp_probabilities(rate, joint)))
                  .epsilon(1e-13));
        CHECK(info.backscatter_per_block(rate.model.spreading) ==
              doctest::Approx(info.backscatter / 6.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(weighted_mi(rate, joint, -0.1), std::domain_error);
    CHECK_THROWS_AS(weighted_mi(rate, joint, 1.1), std::domain_error);
}

TEST_CASE("weighted information is invariant to the hypothesis order")
{
    FadingConfig f;
    GeometryConfig g;
    ChannelDraw d = generate_channels(f, g, 2, 1, 103, 3);
    CompositeTable table = build_composite_table(d, {build_constellation(4, 0.5)});
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(2);
    Eigen::VectorXd interior(3);
    interior << 1e-6, 2e-6, 3e-6;
    ThresholdSet t = make_threshold_set(interior);
    RateModel sorted = make_rate_model(table, w, 1e-7, 4, t);
    RateModel shuffled = make_rate_model_with_order(table, w, 1e-7, 4, t, {2, 0, 3, 1});
    Eigen::VectorXd p(4);
    p << 0.1, 0.4, 0.2, 0.3;
    JointDistribution joint{p};
    InfoBreakdown a = weighted_mi(sorted, joint, 0.4);
    InfoBreakdown b = weighted_mi(shuffled, joint, 0.4);
    CHECK(a.primary == doctest::Approx(b.primary).epsilon(1e-13));
    CHECK(a.backscatter == doctest::Approx(b.backscatter).epsilon(1e-13));
}

TEST_CASE("per-tuple weighted terms average to the total under the joint law")
{
    CompositeTable table;
    RateModel rate = tiny_model(4, 2, 2, 2, 4, table);
    Eigen::VectorXd p(4);
    p << 0.15, 0.35, 0.05, 0.45;
    JointDistribution joint{p};
    const double rho = 0.35;
    Eigen::VectorXd terms = tuple_weighted_info(rate, joint, rho);
    REQUIRE(terms.size() == 4);
    InfoBreakdown info = weighted_mi(rate, joint, rho);
    CHECK(p.dot(terms) == doctest::Approx(info.weighted).epsilon(1e-12));
}

TEST_CASE("per-node marginal terms preserve the average for every node")
{
    CompositeTable table;
    RateModel rate = tiny_model(5, 2, 2, 2, 4, table);
    InputDistribution in = uniform_input(2, 2);
    in.per_node[0] << 0.3, 0.7;
    in.per_node[1] << 0.8, 0.2;
    JointDistribution joint = joint_distribution(in);
    const double rho = 0.2;
    Eigen::VectorXd terms = tuple_weighted_info(rate, joint, rho);
    MarginalInfo mi = marginal_info(in, table.space, terms);
    REQUIRE(mi.per_node.size() == 2);
    double total = joint.prob.dot(terms);
    for (int k = 0; k < 2; k++)
        CHECK(in.per_node[k].dot(mi.per_node[k]) == doctest::Approx(total).epsilon(1e-12));
}
