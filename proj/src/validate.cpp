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

#include "riscatter/validate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "riscatter/beam_solver.hpp"
#include "riscatter/input_solver.hpp"
#include "riscatter/rng.hpp"
#include "riscatter/threshold_solver.hpp"

namespace riscatter
{

namespace
{

const double inf = std::numeric_limits<double>::infinity();

double simpson_slice(double a, double fa, double b, double fb, double fm)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double m, double fm, double whole, double tolerance, int depth)
{
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_slice(a, fa, m, fm, flm);
    double right = simpson_slice(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tolerance)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tolerance, depth - 1) +
           simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tolerance, depth - 1);
}

// Dirichlet-like random point on the simplex from iid exponentials.
Eigen::VectorXd random_simplex(Rng& rng, Eigen::Index n)
{
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; i++)
        v(i) = -std::log(1.0 - rng.uniform());
    return v / v.sum();
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tolerance, int max_depth)
{
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = simpson_slice(a, fa, b, fb, fm);
    return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tolerance, max_depth);
}

double gamma_kernel_error()
{
    double worst = 0.0;
    for (int n : {1, 2, 5, 10, 30})
        for (double v : {0.5, 1.0, 3.0})
        {
            double mean = static_cast<double>(n) * v;
            double a = 0.3 * mean;
            double b = 2.5 * mean;
            double closed = reg_inc_gamma(n, a / v, b / v);
            double quad = adaptive_simpson([n, v](double z) { return gamma_energy_pdf(z, n, v); },
                                           a, b, 1e-13);
            worst = std::max(worst, std::abs(closed - quad));
        }
    return worst;
}

double gradient_fd_error(std::uint64_t seed, int instances, double sign)
{
    double worst = 0.0;
    for (int inst = 0; inst < instances; inst++)
    {
        Rng rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(inst + 1)));
        const int antennas = 2;
        const int nodes = 2;
        const int n = 3;
        const double noise = 1.0;
        const double power = 4.0;
        const double rho = inst % 2 == 0 ? 0.3 : 0.7;

        ChannelDraw draw;
        draw.direct.resize(antennas);
        for (int q = 0; q < antennas; q++)
            draw.direct(q) = rng.standard_complex_normal();
        for (int k = 0; k < nodes; k++)
        {
            Eigen::VectorXcd f(antennas);
            for (int q = 0; q < antennas; q++)
                f(q) = rng.standard_complex_normal();
            std::complex<double> b = rng.standard_complex_normal();
            draw.forward.push_back(f);
            draw.backward.push_back(b);
            draw.cascaded.push_back(std::conj(b) * f);
            draw.ap_node_distances.push_back(1.0);
            draw.node_user_distances.push_back(1.0);
            draw.cascaded_loss.push_back(1.0);
        }
        std::vector<Constellation> consts(nodes, build_constellation(2, 0.8));
        CompositeTable table = build_composite_table(draw, consts);

        Eigen::VectorXcd w0(antennas);
        for (int q = 0; q < antennas; q++)
            w0(q) = rng.standard_complex_normal();
        w0 = project_power(w0 * 0.9, power);

        ReceiveModel model = make_receive_model(table, w0, noise, n);
        const Eigen::Index regions = table.space.count;
        ThresholdCandidates cand = candidate_grid(model.ranked_variance(0),
                                                  model.ranked_variance(regions - 1), n, 4, 0.05);
        BinMassTable bins = bin_masses(model, cand);
        ThresholdSet thresholds;
        thresholds.edges.resize(regions + 1);
        thresholds.edges(0) = 0.0;
        for (Eigen::Index r = 1; r < regions; r++)
            thresholds.edges(r) = bins.edges(r * bins.bins() / regions);
        thresholds.edges(regions) = inf;

        Eigen::VectorXd marg = random_simplex(rng, 2);
        InputDistribution input;
        input.per_node.assign(static_cast<std::size_t>(nodes), marg);
        input.per_node[1] = random_simplex(rng, 2);
        JointDistribution joint = joint_distribution(input);

        const std::vector<std::int64_t> order = model.order;
        auto value = [&](const Eigen::VectorXcd& w) {
            RateModel rate = make_rate_model_with_order(table, w, noise, n, thresholds, order);
            return weighted_mi(rate, joint, rho).weighted;
        };

        RateModel rate0 = make_rate_model_with_order(table, w0, noise, n, thresholds, order);
        Eigen::VectorXcd grad = sign * mi_gradient(rate0, joint, rho);

        const double eps = 1e-6;
        for (int q = 0; q < antennas; q++)
            for (int part = 0; part < 2; part++)
            {
                Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(antennas);
                delta(q) = part == 0 ? std::complex<double>(eps, 0.0)
                                     : std::complex<double>(0.0, eps);
                double numeric = (value(w0 + delta) - value(w0 - delta)) / (2.0 * eps);
                // d/d Re gives twice the real part of the conjugate
                // gradient; d/d Im twice the imaginary part.
                double analytic = 2.0 * (part == 0 ? grad(q).real() : grad(q).imag());
                double err = std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic));
                worst = std::max(worst, err);
            }
    }
    return worst;
}

ZChannelCheck z_channel_check()
{
    CompositeTable table;
    table.space = make_tuple_space(1, 2);
    table.channels = {Eigen::VectorXcd::Zero(1), Eigen::VectorXcd::Zero(1)};

    RateModel rate;
    rate.table = &table;
    rate.model.variances = Eigen::Vector2d(1.0, 2.0);
    rate.model.order = {0, 1};
    rate.model.rank = {0, 1};
    rate.model.noise_var = 1.0;
    rate.model.spreading = 1;
    rate.thresholds.edges = Eigen::Vector3d(0.0, 1.0, inf);
    rate.transition.resize(2, 2);
    rate.transition << 1.0, 0.0, 0.5, 0.5;
    rate.primary = Eigen::Vector2d::Zero();
    rate.w = Eigen::VectorXcd::Zero(1);

    InputSolverParams params;
    params.tolerance = 1e-14;
    params.max_iterations = 20000;
    InputSolveResult res = solve_input_distribution(rate, 0.0, params, uniform_input(1, 2));

    ZChannelCheck out;
    out.capacity_error = std::abs(res.info.backscatter - std::log(1.25));
    out.distribution_error = std::max(std::abs(res.input.per_node[0](0) - 0.6),
                                      std::abs(res.input.per_node[0](1) - 0.4));
    out.kkt = kkt_residual(rate, res.input, 0.0);
    return out;
}

double dp_vs_brute_error(std::uint64_t seed, int instances)
{
    Rng rng(splitmix64(seed ^ 0xd1b54a32d192ed03ULL));
    double worst = 0.0;
    for (int inst = 0; inst < instances; inst++)
    {
        Eigen::Index regions = 2 + static_cast<Eigen::Index>(rng.raw() % 3);
        Eigen::Index bins = regions + static_cast<Eigen::Index>(rng.raw() % 11);
        BinMassTable table;
        table.mass.resize(regions, bins);
        for (Eigen::Index l = 0; l < regions; l++)
            table.mass.row(l) = random_simplex(rng, bins).transpose();
        table.edges.resize(bins + 1);
        table.edges(0) = 0.0;
        for (Eigen::Index j = 1; j < bins; j++)
            table.edges(j) = table.edges(j - 1) + rng.uniform() + 1e-3;
        table.edges(bins) = inf;
        Eigen::VectorXd p = random_simplex(rng, regions);
        if (inst % 3 == 0)
        {
            p(0) = 0.0; // exercise the empty-region path
            p /= p.sum();
        }
        double dp = solve_dp(table, p).backscatter;
        double brute = brute_force_thresholds(table, p).backscatter;
        worst = std::max(worst, std::abs(dp - brute));
    }
    return worst;
}

double ml_crossing_error(std::uint64_t seed, int pairs)
{
    Rng rng(splitmix64(seed ^ 0xa0761d6478bd642fULL));
    double worst = 0.0;
    for (int i = 0; i < pairs; i++)
    {
        double v1 = 0.1 + 9.9 * rng.uniform();
        double v2 = v1 * (1.05 + 4.0 * rng.uniform());
        int n = 1 + static_cast<int>(rng.raw() % 8);
        ThresholdSet t = ml_thresholds(Eigen::Vector2d(v1, v2), n);
        double crossing = t.edges(1);
        double f1 = gamma_energy_pdf(crossing, n, v1);
        double f2 = gamma_energy_pdf(crossing, n, v2);
        worst = std::max(worst, std::abs(f1 - f2) / f1);
    }
    ThresholdSet t = ml_thresholds(Eigen::Vector2d(1.0, std::exp(1.0)), 1);
    double e = std::exp(1.0);
    worst = std::max(worst, std::abs(t.edges(1) - e / (e - 1.0)));
    return worst;
}

double instance_kkt_residual(std::uint64_t seed)
{
    FadingConfig fading;
    GeometryConfig geometry;
    ChannelDraw draw = generate_channels(fading, geometry, 2, 1, seed, 0);
    std::vector<Constellation> consts(1, build_constellation(2, 0.5));
    CompositeTable table = build_composite_table(draw, consts);
    const double noise = 1e-7;
    const int n = 5;
    Eigen::VectorXcd w = sum_cascade_mrt(draw, 1.0);
    ReceiveModel model = make_receive_model(table, w, noise, n);
    ThresholdCandidates cand =
        candidate_grid(model.ranked_variance(0), model.ranked_variance(1), n, 8, 1e-3);
    BinMassTable bins = bin_masses(model, cand);
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(2, 0.5);
    ThresholdSolveResult thr = solve_dp(bins, uniform);
    RateModel rate = make_rate_model_with_order(table, w, noise, n, thr.thresholds, model.order);

    InputSolverParams params;
    params.tolerance = 1e-14;
    params.max_iterations = 20000;
    InputSolveResult res = solve_input_distribution(rate, 0.5, params, uniform_input(1, 2));
    return kkt_residual(rate, res.input, 0.5);
}

std::vector<CheckResult> run_validation(std::uint64_t seed)
{
    std::vector<CheckResult> checks;
    auto add = [&checks](const std::string& name, double error, double tolerance,
                         const std::string& detail) {
        CheckResult c;
        c.name = name;
        c.error = error;
        c.tolerance = tolerance;
        c.pass = error <= tolerance;
        c.detail = detail;
        checks.push_back(c);
    };

    add("gamma kernel vs quadrature", gamma_kernel_error(), 1e-10,
        "15 (blocks, variance) cases, adaptive Simpson at 1e-13");
    add("beam gradient vs finite differences", gradient_fd_error(seed, 10), 1e-5,
        "10 random frozen-order instances, central differences");
    ZChannelCheck z = z_channel_check();
    add("z-channel capacity", z.capacity_error, 1e-4, "closed form ln(5/4)");
    add("z-channel input distribution", z.distribution_error, 1e-3, "closed form (0.6, 0.4)");
    add("z-channel stationarity residual", z.kkt, 1e-6, "marginal-information spread on support");
    add("threshold dp vs enumeration", dp_vs_brute_error(seed, 60), 1e-12,
        "60 random bin-mass instances incl. zero-mass hypotheses");
    add("ml crossing density equality", ml_crossing_error(seed, 100), 1e-9,
        "100 random variance pairs plus the (1, e) closed form");
    add("stationarity residual at convergence", instance_kkt_residual(seed), 1e-6,
        "one synthesized draw, weight 0.5");
    return checks;
}

bool all_passed(const std::vector<CheckResult>& checks)
{
    for (const CheckResult& c : checks)
        if (!c.pass)
            return false;
    return true;
}

std::string format_validation(const std::vector<CheckResult>& checks)
{
    std::string out;
    for (const CheckResult& c : checks)
    {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-42s %s  error %.3e  tolerance %.3e  (%s)\n",
                      c.name.c_str(), c.pass ? "PASS" : "FAIL", c.error, c.tolerance,
                      c.detail.c_str());
        out += buf;
    }
    out += all_passed(checks) ? "all checks passed\n" : "CHECKS FAILED\n";
    return out;
}

} // namespace riscatter
