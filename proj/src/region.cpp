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

#include "riscatter/region.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "riscatter/beam_solver.hpp"
#include "riscatter/input_solver.hpp"

namespace riscatter
{

namespace
{

const double inf = std::numeric_limits<double>::infinity();

std::vector<Constellation> make_constellations(const ExperimentConfig& cfg)
{
    return std::vector<Constellation>(static_cast<std::size_t>(cfg.num_nodes),
                                      build_constellation(cfg.num_states, cfg.amplitude));
}

Eigen::VectorXd ranked_probabilities(const JointDistribution& joint, const ReceiveModel& model)
{
    Eigen::VectorXd p(joint.prob.size());
    for (Eigen::Index r = 0; r < p.size(); r++)
        p(r) = joint.prob(model.order[static_cast<std::size_t>(r)]);
    return p;
}

// Initial beamformer; falls back to a basis direction when every channel in
// the draw is zero (then all beams are equivalent anyway).
Eigen::VectorXcd init_beam(const ChannelDraw& draw, double power)
{
    double energy = draw.direct.squaredNorm();
    for (const auto& c : draw.cascaded)
        energy += c.squaredNorm();
    if (energy == 0.0)
    {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(draw.direct.size());
        w(0) = std::sqrt(power);
        return w;
    }
    return sum_cascade_mrt(draw, power);
}

// All edges at zero except the final +inf: a single live region carrying all
// mass, zero backscatter information. Used where thresholds are irrelevant.
ThresholdSet trivial_thresholds(Eigen::Index regions)
{
    ThresholdSet t;
    t.edges = Eigen::VectorXd::Zero(regions + 1);
    t.edges(regions) = inf;
    return t;
}

ThresholdSet even_split(const BinMassTable& table, Eigen::Index regions)
{
    ThresholdSet t;
    t.edges.resize(regions + 1);
    t.edges(0) = 0.0;
    for (Eigen::Index r = 1; r < regions; r++)
        t.edges(r) = table.edges(r * table.bins() / regions);
    t.edges(regions) = inf;
    return t;
}

// Pairwise density-crossing thresholds that survive tied variances: ties are
// grouped (their rows are identical, so any split between them carries no
// information) and the missing edges collapse onto the next real crossing.
ThresholdSet merged_ml_thresholds(const ReceiveModel& model, const BinMassTable* snap)
{
    const Eigen::Index regions = model.variances.size();
    std::vector<double> unique_vars{model.ranked_variance(0)};
    std::vector<Eigen::Index> group(static_cast<std::size_t>(regions), 0);
    for (Eigen::Index r = 1; r < regions; r++)
    {
        double v = model.ranked_variance(r);
        if (v - unique_vars.back() > 1e-12 * std::max(unique_vars.back(), 1e-300))
            unique_vars.push_back(v);
        group[static_cast<std::size_t>(r)] = static_cast<Eigen::Index>(unique_vars.size()) - 1;
    }
    Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(
        unique_vars.data(), static_cast<Eigen::Index>(unique_vars.size()));
    ThresholdSet base = ml_thresholds(uv, model.spreading, snap);

    ThresholdSet t;
    t.edges.resize(regions + 1);
    t.edges(0) = 0.0;
    t.edges(regions) = inf;
    const double unset = -1.0;
    for (Eigen::Index r = 1; r < regions; r++)
        t.edges(r) = group[static_cast<std::size_t>(r)] != group[static_cast<std::size_t>(r - 1)]
                         ? base.edges(group[static_cast<std::size_t>(r)])
                         : unset;
    for (Eigen::Index r = regions - 1; r >= 1; r--)
        if (t.edges(r) == unset)
            t.edges(r) = t.edges(r + 1);
    return t;
}

struct ThresholdBlock
{
    ThresholdSet thresholds;
    double backscatter = 0.0;
    bool warning = false;
};

ThresholdBlock solve_threshold_block(const ReceiveModel& model, const Eigen::VectorXd& p_hyp,
                                     const ExperimentConfig& cfg, const ThresholdSet* incumbent)
{
    const Eigen::Index regions = p_hyp.size();
    ThresholdCandidates cand =
        candidate_grid(model.ranked_variance(0), model.ranked_variance(regions - 1),
                       model.spreading, cfg.grid_bits, cfg.grid_confidence, cfg.grid_log_spaced);
    BinMassTable table = bin_masses(model, cand);

    ThresholdBlock out;
    if (table.bins() < regions)
    {
        // Collapsed grid: hypotheses are indistinguishable, use one live
        // region.
        out.thresholds = trivial_thresholds(regions);
        out.backscatter = backscatter_mi(transition_matrix(model, out.thresholds), p_hyp);
        out.warning = true;
    }
    else
    {
        ThresholdSolveResult res;
        switch (cfg.threshold_scheme)
        {
        case ThresholdScheme::dp:
            res = solve_dp(table, p_hyp);
            break;
        case ThresholdScheme::smawk:
            res = solve_smawk(table, p_hyp);
            break;
        case ThresholdScheme::bisect:
            res = solve_bisection(table, p_hyp,
                                  incumbent != nullptr ? *incumbent : even_split(table, regions));
            break;
        case ThresholdScheme::ml:
            res.thresholds = merged_ml_thresholds(model, &table);
            res.backscatter = backscatter_mi(transition_matrix(model, res.thresholds), p_hyp);
            break;
        }
        out.thresholds = res.thresholds;
        out.backscatter = res.backscatter;
        out.warning = res.warning;
    }

    // Threshold re-solves follow beam moves and grid rebuilds; keeping the
    // incumbent when it scores higher makes the outer objective monotone.
    if (incumbent != nullptr)
    {
        double held = backscatter_mi(transition_matrix(model, *incumbent), p_hyp);
        if (held > out.backscatter)
        {
            out.thresholds = *incumbent;
            out.backscatter = held;
        }
    }
    return out;
}

InfoBreakdown eval_point(const CompositeTable& table, const JointDistribution& joint,
                         const Eigen::VectorXcd& w, const ThresholdSet& thresholds,
                         const ExperimentConfig& cfg, double rho)
{
    RateModel rate = make_rate_model(table, w, cfg.noise_watts(), cfg.spreading, thresholds);
    return weighted_mi(rate, joint, rho);
}

// One input block; candidates that do not improve the weighted MI are
// rejected so restarts (cooperative, exhaustive) never regress the ascent.
void input_block(BcdState& st, const RateModel& rate, const CompositeTable& table,
                 const ExperimentConfig& cfg, double rho, bool record_trace)
{
    InputDistribution cand_input = st.input;
    JointDistribution cand_joint = st.joint;
    std::vector<double> trace;
    switch (cfg.input_scheme)
    {
    case InputScheme::kkt:
    {
        InputSolveResult r = solve_input_distribution(rate, rho, cfg.input_params, st.input);
        cand_input = std::move(r.input);
        cand_joint = joint_distribution(cand_input);
        trace = std::move(r.trace);
        break;
    }
    case InputScheme::cooperative:
    {
        CooperativeResult r = cooperative_solve(rate, rho, cfg.input_params);
        cand_joint = std::move(r.joint);
        cand_input = marginalize(cand_joint, table.space);
        trace = std::move(r.trace);
        break;
    }
    case InputScheme::exhaustive:
    {
        InputSolveResult r = exhaustive_search(rate, rho, cfg.exhaust_resolution);
        cand_input = std::move(r.input);
        cand_joint = joint_distribution(cand_input);
        trace = std::move(r.trace);
        break;
    }
    case InputScheme::equiprobable:
        break;
    }
    if (weighted_mi(rate, cand_joint, rho).weighted >= weighted_mi(rate, st.joint, rho).weighted)
    {
        st.input = std::move(cand_input);
        st.joint = std::move(cand_joint);
    }
    if (record_trace)
        st.input_trace = std::move(trace);
}

void beam_block(BcdState& st, const ChannelDraw& draw, const CompositeTable& table,
                const ExperimentConfig& cfg, double rho, bool record_trace)
{
    Eigen::VectorXcd cand = st.w;
    std::vector<double> trace;
    switch (cfg.beam_scheme)
    {
    case BeamScheme::pga:
    {
        BeamSolveResult r = solve_beamformer(table, st.joint, st.thresholds, cfg.noise_watts(),
                                             cfg.spreading, rho, cfg.beam_params(), st.w);
        cand = std::move(r.w);
        trace = std::move(r.trace);
        break;
    }
    case BeamScheme::ergodic_mrt:
        cand = ergodic_mrt(table, st.joint, cfg.power_watts());
        break;
    case BeamScheme::direct_mrt:
        cand = draw.direct.squaredNorm() > 0.0 ? mrt(draw.direct, cfg.power_watts())
                                               : init_beam(draw, cfg.power_watts());
        break;
    }
    if (eval_point(table, st.joint, cand, st.thresholds, cfg, rho).weighted >=
        eval_point(table, st.joint, st.w, st.thresholds, cfg, rho).weighted)
        st.w = std::move(cand);
    if (record_trace)
        st.beam_trace = std::move(trace);
}

// rho = 1 endpoint: alternate the degenerate (point-mass) input with beam
// ascent, then polish exhaustively over tuples with matched filtering. The
// polish makes the endpoint agree with the deterministic-reflection
// benchmark by construction.
BcdState solve_rho1(const ChannelDraw& draw, const CompositeTable& table,
                    const ExperimentConfig& cfg, const BcdState* warm)
{
    const double P = cfg.power_watts();
    const double nv = cfg.noise_watts();
    const int N = cfg.spreading;
    const Eigen::Index L = table.space.count;

    BcdState st;
    st.rho = 1.0;
    st.thresholds = trivial_thresholds(L);
    st.w = warm != nullptr && warm->w.size() == cfg.num_antennas ? project_power(warm->w, P)
                                                                 : init_beam(draw, P);
    RateModel rate = make_rate_model(table, st.w, nv, N, st.thresholds);
    st.input = solve_degenerate_rho1(rate);
    st.joint = joint_distribution(st.input);
    st.info = weighted_mi(rate, st.joint, 1.0);
    st.trace.push_back(st.info.weighted);

    for (int outer = 1; outer <= cfg.bcd_max_iterations; outer++)
    {
        BeamSolveResult r =
            solve_beamformer(table, st.joint, st.thresholds, nv, N, 1.0, cfg.beam_params(), st.w);
        if (outer == 1)
            st.beam_trace = r.trace;
        if (eval_point(table, st.joint, r.w, st.thresholds, cfg, 1.0).weighted >=
            eval_point(table, st.joint, st.w, st.thresholds, cfg, 1.0).weighted)
            st.w = std::move(r.w);

        rate = make_rate_model(table, st.w, nv, N, st.thresholds);
        InputDistribution cand = solve_degenerate_rho1(rate);
        JointDistribution cand_joint = joint_distribution(cand);
        if (weighted_mi(rate, cand_joint, 1.0).weighted >=
            weighted_mi(rate, st.joint, 1.0).weighted)
        {
            st.input = std::move(cand);
            st.joint = std::move(cand_joint);
        }

        InfoBreakdown next = weighted_mi(rate, st.joint, 1.0);
        double gain = next.weighted - st.info.weighted;
        st.info = next;
        st.trace.push_back(next.weighted);
        st.iterations = outer;
        if (gain <= cfg.bcd_tolerance)
        {
            st.converged = true;
            break;
        }
    }

    Eigen::Index best = -1;
    double best_value = st.info.weighted;
    for (Eigen::Index x = 0; x < L; x++)
    {
        double value = std::log1p(P * table.channels[static_cast<std::size_t>(x)].squaredNorm() / nv);
        if (value > best_value)
        {
            best_value = value;
            best = x;
        }
    }
    if (best >= 0)
    {
        st.w = mrt(table.channels[static_cast<std::size_t>(best)], P);
        std::vector<int> states = table.space.states_of(best);
        st.input.per_node.assign(static_cast<std::size_t>(cfg.num_nodes),
                                 Eigen::VectorXd::Zero(cfg.num_states));
        for (int k = 0; k < cfg.num_nodes; k++)
            st.input.per_node[static_cast<std::size_t>(k)](states[static_cast<std::size_t>(k)]) =
                1.0;
        st.joint = joint_distribution(st.input);
        rate = make_rate_model(table, st.w, nv, N, st.thresholds);
        st.info = weighted_mi(rate, st.joint, 1.0);
        st.trace.push_back(st.info.weighted);
    }
    return st;
}

} // namespace

BcdState bcd_solve(const ChannelDraw& draw, const ExperimentConfig& cfg, double rho,
                   const BcdState* warm)
{
    if (!(rho >= 0.0) || !(rho <= 1.0))
        throw std::domain_error("bcd_solve: rho must lie in [0, 1]");
    CompositeTable table = build_composite_table(draw, make_constellations(cfg));
    if (rho == 1.0)
        return solve_rho1(draw, table, cfg, warm);

    const double P = cfg.power_watts();
    const double nv = cfg.noise_watts();
    const int N = cfg.spreading;
    const Eigen::Index L = table.space.count;

    BcdState st;
    st.rho = rho;
    bool warm_ok = warm != nullptr && warm->joint.prob.size() == L &&
                   warm->w.size() == cfg.num_antennas &&
                   warm->thresholds.edges.size() == L + 1;
    if (warm_ok)
    {
        st.input = warm->input;
        st.joint = warm->joint;
        st.w = project_power(warm->w, P);
    }
    else
    {
        st.input = uniform_input(cfg.num_nodes, cfg.num_states);
        st.joint = joint_distribution(st.input);
        st.w = init_beam(draw, P);
    }

    ReceiveModel model = make_receive_model(table, st.w, nv, N);
    Eigen::VectorXd p_hyp = ranked_probabilities(st.joint, model);
    ThresholdBlock tb =
        solve_threshold_block(model, p_hyp, cfg, warm_ok ? &warm->thresholds : nullptr);
    st.thresholds = tb.thresholds;
    st.warning = tb.warning;
    RateModel rate = make_rate_model_with_order(table, st.w, nv, N, st.thresholds, model.order);
    st.info = weighted_mi(rate, st.joint, rho);
    st.trace.push_back(st.info.weighted);

    for (int outer = 1; outer <= cfg.bcd_max_iterations; outer++)
    {
        input_block(st, rate, table, cfg, rho, outer == 1);
        beam_block(st, draw, table, cfg, rho, outer == 1);

        model = make_receive_model(table, st.w, nv, N);
        p_hyp = ranked_probabilities(st.joint, model);
        tb = solve_threshold_block(model, p_hyp, cfg, &st.thresholds);
        st.thresholds = tb.thresholds;
        st.warning = st.warning || tb.warning;

        rate = make_rate_model_with_order(table, st.w, nv, N, st.thresholds, model.order);
        InfoBreakdown next = weighted_mi(rate, st.joint, rho);
        double gain = next.weighted - st.info.weighted;
        st.info = next;
        st.trace.push_back(next.weighted);
        st.iterations = outer;
        if (gain <= cfg.bcd_tolerance)
        {
            st.converged = true;
            break;
        }
    }
    return st;
}

InfoBreakdown evaluate_design(const ChannelDraw& truth, const ExperimentConfig& cfg,
                              const BcdState& design, double rho)
{
    CompositeTable table = build_composite_table(truth, make_constellations(cfg));
    RateModel rate =
        make_rate_model(table, design.w, cfg.noise_watts(), cfg.spreading, design.thresholds);
    return weighted_mi(rate, design.joint, rho);
}

RegionResult rate_region(const ChannelDraw& truth, const ExperimentConfig& cfg,
                         std::uint64_t realization)
{
    if (cfg.rho_grid.empty() || cfg.rho_grid.front() != 0.0)
        throw std::invalid_argument("rate_region: rho grid must start at 0");
    for (std::size_t i = 1; i < cfg.rho_grid.size(); i++)
        if (!(cfg.rho_grid[i] > cfg.rho_grid[i - 1]))
            throw std::invalid_argument("rate_region: rho grid must be strictly ascending");

    ChannelDraw design_draw =
        cfg.csi_error > 0.0 ? perturb_csi(truth, cfg.csi_error, cfg.seed, realization) : truth;

    RegionResult out;
    out.points.reserve(cfg.rho_grid.size());
    out.states.reserve(cfg.rho_grid.size());
    const BcdState* warm = nullptr;
    for (double rho : cfg.rho_grid)
    {
        BcdState st = bcd_solve(design_draw, cfg, rho, warm);
        RegionPoint pt;
        pt.rho = rho;
        pt.info = cfg.csi_error > 0.0 ? evaluate_design(truth, cfg, st, rho) : st.info;
        pt.iterations = st.iterations;
        pt.converged = st.converged;
        out.points.push_back(pt);
        out.states.push_back(std::move(st));
        warm = &out.states.back();
    }
    return out;
}

BenchmarkResult benchmark_legacy(const ChannelDraw& draw, const ExperimentConfig& cfg)
{
    BenchmarkResult r;
    r.primary = std::log1p(cfg.power_watts() * draw.direct.squaredNorm() / cfg.noise_watts());
    return r;
}

BenchmarkResult benchmark_bbc(const ChannelDraw& draw, const ExperimentConfig& cfg,
                              bool finite_spreading)
{
    BenchmarkResult r;
    r.backscatter = cfg.num_nodes * std::log(static_cast<double>(cfg.num_states));
    if (finite_spreading)
    {
        CompositeTable table = build_composite_table(draw, make_constellations(cfg));
        Eigen::VectorXcd w = init_beam(draw, cfg.power_watts());
        ReceiveModel model = make_receive_model(table, w, cfg.noise_watts(), cfg.spreading);
        JointDistribution joint =
            joint_distribution(uniform_input(cfg.num_nodes, cfg.num_states));
        Eigen::VectorXd p_hyp = ranked_probabilities(joint, model);
        r.backscatter = solve_threshold_block(model, p_hyp, cfg, nullptr).backscatter;
    }
    return r;
}

BenchmarkResult benchmark_ambc(const ChannelDraw& draw, const ExperimentConfig& cfg)
{
    const double P = cfg.power_watts();
    const double nv = cfg.noise_watts();
    Eigen::VectorXcd w = draw.direct.squaredNorm() > 0.0
                             ? mrt(draw.direct, P)
                             : Eigen::VectorXcd::Zero(draw.direct.size()).eval();

    double interference = 0.0;
    for (const auto& c : draw.cascaded)
        interference += cfg.amplitude * cfg.amplitude * std::norm(c.dot(w));

    BenchmarkResult r;
    r.primary = std::log1p(std::norm(draw.direct.dot(w)) / (interference + nv));

    CompositeTable table = build_composite_table(draw, make_constellations(cfg));
    ReceiveModel model = make_receive_model(table, w, nv, cfg.spreading);
    ThresholdSet t = merged_ml_thresholds(model, nullptr);
    JointDistribution joint = joint_distribution(uniform_input(cfg.num_nodes, cfg.num_states));
    r.backscatter = backscatter_mi(transition_matrix(model, t), ranked_probabilities(joint, model));
    return r;
}

BenchmarkResult benchmark_sr(const ChannelDraw& draw, const ExperimentConfig& cfg)
{
    const double P = cfg.power_watts();
    const double nv = cfg.noise_watts();
    CompositeTable table = build_composite_table(draw, make_constellations(cfg));
    Eigen::VectorXcd w = draw.direct.squaredNorm() > 0.0
                             ? mrt(draw.direct, P)
                             : Eigen::VectorXcd::Zero(draw.direct.size()).eval();
    JointDistribution joint = joint_distribution(uniform_input(cfg.num_nodes, cfg.num_states));

    BenchmarkResult r;
    for (Eigen::Index x = 0; x < table.space.count; x++)
        r.primary +=
            joint.prob(x) * primary_info_fn(table.channels[static_cast<std::size_t>(x)], w, nv);
    r.backscatter = cfg.num_nodes * std::log(static_cast<double>(cfg.num_states));
    return r;
}

BenchmarkResult benchmark_ris(const ChannelDraw& draw, const ExperimentConfig& cfg)
{
    const double P = cfg.power_watts();
    const double nv = cfg.noise_watts();
    CompositeTable table = build_composite_table(draw, make_constellations(cfg));
    const Eigen::Index L = table.space.count;

    // Alternate best-tuple selection with matched filtering until fixed.
    Eigen::VectorXcd w = init_beam(draw, P);
    Eigen::Index current = -1;
    for (int it = 0; it < 64; it++)
    {
        Eigen::Index best = 0;
        double best_gain = -1.0;
        for (Eigen::Index x = 0; x < L; x++)
        {
            double gain = std::norm(table.channels[static_cast<std::size_t>(x)].dot(w));
            if (gain > best_gain)
            {
                best_gain = gain;
                best = x;
            }
        }
        if (best == current)
            break;
        current = best;
        if (table.channels[static_cast<std::size_t>(best)].squaredNorm() == 0.0)
            break;
        w = mrt(table.channels[static_cast<std::size_t>(best)], P);
    }
    BenchmarkResult r;
    if (current >= 0)
        r.primary = std::log1p(std::norm(table.channels[static_cast<std::size_t>(current)].dot(w)) / nv);

    // Exhaustive polish over the (capped) tuple alphabet.
    for (Eigen::Index x = 0; x < L; x++)
        r.primary = std::max(
            r.primary,
            std::log1p(P * table.channels[static_cast<std::size_t>(x)].squaredNorm() / nv));
    return r;
}

} // namespace riscatter
