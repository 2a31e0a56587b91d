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
#include <random>

#include "riscatter/detector.hpp"
#include "riscatter/validate.hpp"

using namespace riscatter;

TEST_CASE("interval probabilities of the block-energy law, closed forms")
{
    // One block: the energy is exponential.
    for (double b : {0.1, 1.0, 3.5})
        CHECK(reg_inc_gamma(1, 0.0, b) == doctest::Approx(1.0 - std::exp(-b)).epsilon(1e-14));
    CHECK(reg_inc_gamma(1, 1.0, 2.0) ==
          doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-14));
    // Degenerate intervals.
    CHECK(reg_inc_gamma(5, 2.0, 2.0) == 0.0);
    CHECK(reg_inc_gamma(3, 0.0, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(reg_inc_gamma(3, std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("interval probabilities agree with adaptive quadrature of the density")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {1, 5, 20})
    {
        for (int trial = 0; trial < 20; trial++)
        {
            double a = u(gen) * 2.0 * n;
            double b = a + u(gen) * 2.0 * n + 1e-3;
            auto pdf = [n](double x)
            { return gamma_energy_pdf(x, n, 1.0); };
            double expect = adaptive_simpson(pdf, a, b, 1e-13);
            CHECK(std::abs(reg_inc_gamma(n, a, b) - expect) <= 1e-10);
        }
    }
}

TEST_CASE("energy density closed forms")
{
    CHECK(gamma_energy_pdf(0.0, 1, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gamma_energy_pdf(0.0, 2, 2.0) == 0.0);
    CHECK(gamma_energy_pdf(1.0, 1, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // Two blocks, unit variance: z e^{-z}.
    CHECK(gamma_energy_pdf(3.0, 2, 1.0) == doctest::Approx(3.0 * std::exp(-3.0)).epsilon(1e-13));
    // Scaling: pdf(z; n, s) = pdf(z/s; n, 1)/s.
    CHECK(gamma_energy_pdf(3.0, 4, 2.0) ==
          doctest::Approx(gamma_energy_pdf(1.5, 4, 1.0) / 2.0).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_energy_pdf(1.0, 1, 0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_energy_pdf(-1.0, 1, 1.0), std::domain_error);
}

TEST_CASE("cdf and quantile are inverse, with the exponential example")
{
    CHECK(gamma_energy_quantile(0.999, 1, 1.0) ==
          doctest::Approx(std::log(1000.0)).epsilon(1e-9));
    for (double p : {0.01, 0.2, 0.5, 0.9, 0.999})
    {
        for (int n : {1, 4, 20})
        {
            double z = gamma_energy_quantile(p, n, 1.7);
            CHECK(gamma_energy_cdf(z, n, 1.7) == doctest::Approx(p).epsilon(1e-9));
        }
    }
    CHECK(gamma_energy_cdf(-1.0, 2, 1.0) == 0.0);
    CHECK_THROWS_AS(gamma_energy_quantile(0.0, 1, 1.0), std::domain_error);
    CHECK_THROWS_AS(gamma_energy_quantile(1.0, 1, 1.0), std::domain_error);
}

TEST_CASE("receive variance is the projected signal power plus noise")
{
    Eigen::VectorXcd h(2), w(2);
    h << std::complex<double>(1.0, 1.0), std::complex<double>(0.0, -2.0);
    w << std::complex<double>(0.5, 0.0), std::complex<double>(0.0, 0.5);
    double expect = std::norm(std::conj(h(0)) * w(0) + std::conj(h(1)) * w(1)) + 0.25;
    CHECK(receive_variance(h, w, 0.25) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("hypothesis ordering is ascending and stable under ties")
{
    Eigen::VectorXd v(3);
    v << 3.0, 1.0, 2.0;
    std::vector<std::int64_t> order = hypothesis_order(v);
    CHECK(order == std::vector<std::int64_t>{1, 2, 0});

    Eigen::VectorXd tied(4);
    tied << 2.0, 1.0, 1.0, 0.5;
    CHECK(hypothesis_order(tied) == std::vector<std::int64_t>{3, 1, 2, 0});
}

TEST_CASE("receive model ranks variances ascending and inverts the ranks")
{
    FadingConfig f;
    GeometryConfig g;
    ChannelDraw d = generate_channels(f, g, 2, 2, 17, 0);
    CompositeTable table = build_composite_table(
        d, {build_constellation(2, 0.5), build_constellation(2, 0.5)});
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(2);
    ReceiveModel m = make_receive_model(table, w, 1e-4, 10);
    REQUIRE(m.variances.size() == 4);
    for (std::int64_t r = 1; r < 4; r++)
        CHECK(m.ranked_variance(r) >= m.ranked_variance(r - 1));
    for (std::int64_t t = 0; t < 4; t++)
        CHECK(m.order[m.rank[t]] == t);
    for (Eigen::Index t = 0; t < 4; t++)
        CHECK(m.variances(t) ==
              doctest::Approx(receive_variance(table.channels[t], w, 1e-4)).epsilon(1e-14));
}

TEST_CASE("an explicit order must be a permutation")
{
    FadingConfig f;
    GeometryConfig g;
    ChannelDraw d = generate_channels(f, g, 2, 1, 18, 0);
    CompositeTable table = build_composite_table(d, {build_constellation(2, 0.5)});
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(2);
    CHECK_THROWS_AS(receive_model_with_order(table, w, 1e-4, 4, {0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(receive_model_with_order(table, w, 1e-4, 4, {0}), std::invalid_argument);
    CHECK_THROWS_AS(receive_model_with_order(table, w, 1e-4, 0, {0, 1}),
                    std::invalid_argument);
    ReceiveModel m = receive_model_with_order(table, w, 1e-4, 4, {1, 0});
    CHECK(m.order == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("candidate grid spans the requested quantiles")
{
    ThresholdCandidates c = candidate_grid(1.0, 4.0, 3, 5, 1e-3);
    CHECK(c.grid.size() == 33);
    CHECK_FALSE(c.degenerate);
    CHECK(c.grid(0) == doctest::Approx(gamma_energy_quantile(1e-3, 3, 1.0)).epsilon(1e-12));
    CHECK(c.grid(32) ==
          doctest::Approx(gamma_energy_quantile(1.0 - 1e-3, 3, 4.0)).epsilon(1e-12));
    for (Eigen::Index i = 1; i < 33; i++)
        CHECK(c.grid(i) > c.grid(i - 1));

    ThresholdCandidates lg = candidate_grid(1.0, 4.0, 3, 5, 1e-3, true);
    CHECK(lg.grid.size() == 33);
    CHECK(lg.grid(0) == c.grid(0));
    CHECK(lg.grid(32) == c.grid(32));
    // Log spacing spends more of the grid near the low end.
    CHECK(lg.grid(16) < c.grid(16));

    CHECK_THROWS_AS(candidate_grid(0.0, 1.0, 1, 5, 1e-3), std::domain_error);
    CHECK_THROWS_AS(candidate_grid(2.0, 1.0, 1, 5, 1e-3), std::domain_error);
    CHECK_THROWS_AS(candidate_grid(1.0, 2.0, 1, 0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(candidate_grid(1.0, 2.0, 1, 21, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(candidate_grid(1.0, 2.0, 1, 5, 0.5), std::domain_error);
}

TEST_CASE("identical variances still span the energy distribution")
{
    ThresholdCandidates c = candidate_grid(2.0, 2.0, 4, 9, 1e-3);
    CHECK_FALSE(c.degenerate);
    CHECK(c.grid.size() == 513);
    CHECK(c.grid(0) < 4.0 * 2.0);   // below the mean energy
    CHECK(c.grid(512) > 4.0 * 2.0); // above the mean energy
}

TEST_CASE("threshold sets run from zero to infinity")
{
    Eigen::VectorXd interior(2);
    interior << 1.0, 3.0;
    ThresholdSet t = make_threshold_set(interior);
    REQUIRE(t.edges.size() == 4);
    CHECK(t.edges(0) == 0.0);
    CHECK(t.edges(1) == 1.0);
    CHECK(t.edges(2) == 3.0);
    CHECK(std::isinf(t.edges(3)));
    CHECK(t.regions() == 3);

    Eigen::VectorXd bad(2);
    bad << 3.0, 1.0;
    CHECK_THROWS_AS(make_threshold_set(bad), std::invalid_argument);
    bad << -1.0, 1.0;
    CHECK_THROWS_AS(make_threshold_set(bad), std::domain_error);
}

TEST_CASE("transition rows are probability vectors ordered by variance rank")
{
    FadingConfig f;
    GeometryConfig g;
    ChannelDraw d = generate_channels(f, g, 2, 2, 23, 1);
    CompositeTable table = build_composite_table(
        d, {build_constellation(2, 0.5), build_constellation(2, 0.5)});
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(2) * std::sqrt(2.0);
    ReceiveModel m = make_receive_model(table, w, 1e-5, 8);
    Eigen::VectorXd interior(3);
    double mid = m.ranked_variance(1) * m.spreading;
    interior << 0.5 * mid, mid, 2.0 * mid;
    ThresholdSet t = make_threshold_set(interior);
    Eigen::MatrixXd q = transition_matrix(m, t);
    REQUIRE(q.rows() == 4);
    REQUIRE(q.cols() == 4);
    for (Eigen::Index l = 0; l < 4; l++)
    {
        CHECK(q.row(l).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(q.row(l).minCoeff() >= 0.0);
    }
    // Rows use ranked variances: a larger variance pushes mass to higher regions.
    Eigen::VectorXd region_index = Eigen::VectorXd::LinSpaced(4, 0.0, 3.0);
    for (Eigen::Index l = 1; l < 4; l++)
        CHECK(q.row(l).dot(region_index) >= q.row(l - 1).dot(region_index) - 1e-12);
}

TEST_CASE("two hypotheses, one block: the split matrix in closed form")
{
    FadingConfig f;
    GeometryConfig g;
    ChannelDraw d = generate_channels(f, g, 1, 1, 31, 0);
    CompositeTable table = build_composite_table(d, {build_constellation(2, 0.5)});
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(1);
    ReceiveModel m = make_receive_model(table, w, 1e-6, 1);
    double s0 = m.ranked_variance(0), s1 = m.ranked_variance(1);
    double edge = 2.0 * s0;
    Eigen::VectorXd interior(1);
    interior << edge;
    Eigen::MatrixXd q = transition_matrix(m, make_threshold_set(interior));
    CHECK(q(0, 0) == doctest::Approx(1.0 - std::exp(-edge / s0)).epsilon(1e-12));
    CHECK(q(0, 1) == doctest::Approx(std::exp(-edge / s0)).epsilon(1e-12));
    CHECK(q(1, 0) == doctest::Approx(1.0 - std::exp(-edge / s1)).epsilon(1e-12));
    CHECK(q(1, 1) == doctest::Approx(std::exp(-edge / s1)).epsilon(1e-12));
}

TEST_CASE("diagonal confidence grows with the spreading factor")
{
    // Synthetic single-antenna draw with a strong scattered component so the
    // two hypothesis variances are well separated.
    ChannelDraw d;
    d.direct = Eigen::VectorXcd::Ones(1);
    d.forward = {Eigen::VectorXcd::Constant(1, std::complex<double>(0.5, 0.0))};
    d.backward = {std::complex<double>(0.8, 0.0)};
    d.cascaded = {std::conj(d.backward[0]) * d.forward[0]};
    d.ap_node_distances = {10.0};
    d.node_user_distances = {1.0};
    d.cascaded_loss = {0.16};
    CompositeTable table = build_composite_table(d, {build_constellation(2, 0.9)});
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(1);
    double prev = 0.0;
    for (int n : {1, 10, 100})
    {
        ReceiveModel m = make_receive_model(table, w, 1e-8, n);
        // Split at the geometric mean of the scaled means.
        double edge = n * std::sqrt(m.ranked_variance(0) * m.ranked_variance(1));
        Eigen::VectorXd interior(1);
        interior << edge;
        Eigen::MatrixXd q = transition_matrix(m, make_threshold_set(interior));
        double diag = 0.5 * (q(0, 0) + q(1, 1));
        CHECK(diag > prev);
        prev = diag;
    }
    CHECK(prev > 0.99);
}
