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

#include "riscatter/region.hpp"

using namespace riscatter;

namespace
{

ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.num_antennas = 2;
    cfg.num_nodes = 2;
    cfg.num_states = 2;
    cfg.spreading = 8;
    cfg.grid_bits = 6;
    cfg.input_params.max_iterations = 300;
    cfg.beam_max_iterations = 60;
    cfg.bcd_max_iterations = 20;
    return cfg;
}

ChannelDraw draw_for(const ExperimentConfig& cfg, std::uint64_t realization)
{
    return generate_channels(cfg.fading, cfg.geometry, cfg.num_antennas, cfg.num_nodes,
                             cfg.seed, realization);
}

} // namespace

TEST_CASE("block-coordinate descent produces a monotone objective trace")
{
    ExperimentConfig cfg = small_config();
    for (std::uint64_t r = 0; r < 3; r++)
    {
        ChannelDraw d = draw_for(cfg, r);
        for (double rho : {0.0, 0.5, 0.9})
        {
            BcdState st = bcd_solve(d, cfg, rho);
            REQUIRE(st.trace.size() >= 2);
            for (std::size_t i = 1; i < st.trace.size(); i++)
                CHECK(st.trace[i] >= st.trace[i - 1] - 1e-12);
            CHECK(st.info.weighted == doctest::Approx(st.trace.back()).epsilon(1e-12));
            CHECK(st.w.squaredNorm() <= cfg.power_watts() + 1e-9);
            CHECK(st.joint.prob.minCoeff() >= 0.0);
            CHECK(st.joint.prob.sum() == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("the region sweep returns one point per weight, in grid order")
{
    ExperimentConfig cfg = small_config();
    cfg.rho_grid = {0.0, 0.2, 0.8, 1.0};
    ChannelDraw d = draw_for(cfg, 0);
    RegionResult region = rate_region(d, cfg, 0);
    REQUIRE(region.points.size() == 4);
    REQUIRE(region.states.size() == 4);
    for (std::size_t i = 0; i < 4; i++)
        CHECK(region.points[i].rho == cfg.rho_grid[i]);
    // Endpoints: the pure-backscatter point and the pure-primary point bound
    // the others in their own coordinate.
    double best_backscatter = region.points[0].info.backscatter;
    double best_primary = region.points[3].info.primary;
    for (const RegionPoint& pt : region.points)
    {
        CHECK(pt.info.backscatter <= best_backscatter + 1e-6);
        CHECK(pt.info.primary <= best_primary + 1e-9);
    }
}

TEST_CASE("a strictly increasing weight grid starting at zero is required")
{
    ExperimentConfig cfg = small_config();
    cfg.rho_grid = {0.5, 0.2};
    ChannelDraw d = draw_for(cfg, 0);
    CHECK_THROWS_AS(rate_region(d, cfg, 0), std::invalid_argument);
    cfg.rho_grid = {0.1, 0.5};
    CHECK_THROWS_AS(rate_region(d, cfg, 0), std::invalid_argument);
}

TEST_CASE("at full weight on the primary link the scatter link is silent")
{
    ExperimentConfig cfg = small_config();
    for (std::uint64_t r = 0; r < 5; r++)
    {
        ChannelDraw d = draw_for(cfg, r);
        BcdState st = bcd_solve(d, cfg, 1.0);
        CHECK(st.info.backscatter == 0.0);
        BenchmarkResult ris = benchmark_ris(d, cfg);
        CHECK(st.info.primary == doctest::Approx(ris.primary).epsilon(1e-9));
        // The input collapses onto one tuple.
        CHECK(st.joint.prob.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("without scatter nodes every scheme is the direct link")
{
    ExperimentConfig cfg = small_config();
    cfg.num_nodes = 0;
    ChannelDraw d = draw_for(cfg, 1);
    BenchmarkResult legacy = benchmark_legacy(d, cfg);
    CHECK(legacy.backscatter == 0.0);
    CHECK(legacy.primary ==
          doctest::Approx(std::log1p(cfg.power_watts() * d.direct.squaredNorm() /
                                     cfg.noise_watts()))
              .epsilon(1e-12));

    for (double rho : {0.0, 0.5, 1.0})
    {
        BcdState st = bcd_solve(d, cfg, rho);
        CHECK(st.info.primary == doctest::Approx(legacy.primary).epsilon(1e-9));
        CHECK(st.info.backscatter == 0.0);
    }
    CHECK(benchmark_ris(d, cfg).primary == doctest::Approx(legacy.primary).epsilon(1e-9));
    CHECK(benchmark_sr(d, cfg).primary == doctest::Approx(legacy.primary).epsilon(1e-9));
    CHECK(benchmark_ambc(d, cfg).primary == doctest::Approx(legacy.primary).epsilon(1e-9));
    CHECK(benchmark_ambc(d, cfg).backscatter == 0.0);
    CHECK(benchmark_sr(d, cfg).backscatter == 0.0);
}

TEST_CASE("the carrier-only scheme reports the alphabet entropy per block")
{
    ExperimentConfig cfg = small_config();
    cfg.num_nodes = 1;
    cfg.num_states = 4;
    ChannelDraw d = draw_for(cfg, 0);
    BenchmarkResult bbc = benchmark_bbc(d, cfg);
    CHECK(bbc.primary == 0.0);
    CHECK(bbc.backscatter == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    cfg.num_nodes = 2;
    cfg.num_states = 2;
    ChannelDraw d2 = draw_for(cfg, 0);
    BenchmarkResult bbc2 = benchmark_bbc(d2, cfg);
    CHECK(bbc2.backscatter == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

    // The finite-length detector cannot beat the alphabet entropy.
    BenchmarkResult finite = benchmark_bbc(d2, cfg, true);
    CHECK(finite.backscatter <= bbc2.backscatter + 1e-12);
    CHECK(finite.backscatter >= 0.0);
}

TEST_CASE("with a vanishing cascade the ambient scheme degenerates to the direct link")
{
    ExperimentConfig cfg = small_config();
    ChannelDraw d = draw_for(cfg, 2);
    for (auto& c : d.cascaded)
        c.setZero();
    BenchmarkResult ambc = benchmark_ambc(d, cfg);
    BenchmarkResult legacy = benchmark_legacy(d, cfg);
    CHECK(ambc.primary == doctest::Approx(legacy.primary).epsilon(1e-9));
    // Identical hypotheses carry no information.
    CHECK(std::abs(ambc.backscatter) <= 1e-12);
}

TEST_CASE("the ambient scheme treats scatter as interference")
{
    ExperimentConfig cfg = small_config();
    ChannelDraw d = draw_for(cfg, 3);
    BenchmarkResult ambc = benchmark_ambc(d, cfg);
    BenchmarkResult legacy = benchmark_legacy(d, cfg);
    // Interference can only hurt the primary link relative to a clean channel
    // with the same beam.
    CHECK(ambc.primary <= legacy.primary + 1e-12);
    CHECK(ambc.backscatter >= 0.0);
}

TEST_CASE("the symbiotic scheme averages the primary rate over tuples")
{
    ExperimentConfig cfg = small_config();
    ChannelDraw d = draw_for(cfg, 4);
    BenchmarkResult sr = benchmark_sr(d, cfg);
    BenchmarkResult ris = benchmark_ris(d, cfg);
    CHECK(sr.backscatter ==
          doctest::Approx(cfg.num_nodes * std::log(cfg.num_states)).epsilon(1e-12));
    // A tuple average under a fixed beam cannot beat the best tuple under its
    // matched beam.
    CHECK(sr.primary <= ris.primary + 1e-12);
    CHECK(sr.primary > 0.0);
}

TEST_CASE("interior operating points stay inside the endpoint rectangle")
{
    ExperimentConfig cfg = small_config();
    cfg.rho_grid = {0.0, 0.5, 1.0};
    ChannelDraw d = draw_for(cfg, 5);
    RegionResult region = rate_region(d, cfg, 5);
    const RegionPoint& lo = region.points.front();
    const RegionPoint& mid = region.points[1];
    const RegionPoint& hi = region.points.back();
    CHECK(mid.info.primary <= hi.info.primary + 1e-9);
    CHECK(mid.info.backscatter <= lo.info.backscatter + 1e-6);
    CHECK(mid.info.primary + 1e-6 >= lo.info.primary);
    CHECK(mid.info.backscatter + 1e-9 >= hi.info.backscatter);
}

TEST_CASE("re-evaluating a design under its own truth reproduces the solve")
{
    ExperimentConfig cfg = small_config();
    ChannelDraw d = draw_for(cfg, 6);
    BcdState st = bcd_solve(d, cfg, 0.5);
    InfoBreakdown info = evaluate_design(d, cfg, st, 0.5);
    CHECK(info.primary == doctest::Approx(st.info.primary).epsilon(1e-12));
    CHECK(info.backscatter == doctest::Approx(st.info.backscatter).epsilon(1e-12));
    CHECK(info.weighted == doctest::Approx(st.info.weighted).epsilon(1e-12));
}

TEST_CASE("a mismatched channel estimate degrades gracefully")
{
    ExperimentConfig cfg = small_config();
    cfg.csi_error = 0.3;
    ChannelDraw truth = draw_for(cfg, 7);
    ChannelDraw estimate = perturb_csi(truth, cfg.csi_error, cfg.seed, 7);
    BcdState designed = bcd_solve(estimate, cfg, 0.5);
    InfoBreakdown actual = evaluate_design(truth, cfg, designed, 0.5);
    BcdState oracle = bcd_solve(truth, cfg, 0.5);
    // Designing against the wrong channel cannot beat designing against the
    // true one (up to solver slack).
    CHECK(actual.weighted <= oracle.info.weighted + 0.05);
    CHECK(actual.primary >= 0.0);
    CHECK(actual.backscatter >= 0.0);
}

TEST_CASE("warm starts do not break convergence on the reference geometry")
{
    ExperimentConfig cfg;
    cfg.num_antennas = 4;
    cfg.num_nodes = 8;
    cfg.num_states = 2;
    cfg.spreading = 20;
    cfg.rho_grid = {0.0, 0.5};
    ChannelDraw d = draw_for(cfg, 0);
    RegionResult region = rate_region(d, cfg, 0);
    for (const RegionPoint& pt : region.points)
    {
        CHECK(pt.converged);
        CHECK(pt.iterations <= 20);
    }
}
