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

#include "riscatter/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace riscatter
{

static constexpr double inf = std::numeric_limits<double>::infinity();

double receive_variance(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w, double noise_var)
{
    if (h.size() != w.size() || h.size() == 0)
        throw std::invalid_argument("receive_variance: dimension mismatch");
    if (noise_var <= 0.0)
        throw std::domain_error("receive_variance: noise variance must be positive");
    return std::norm(h.dot(w)) + noise_var;
}

// e^{-x} sum_{k=0}^{n-1} x^k / k!. Every term is a Poisson mass, so the
// running product never overflows; when e^{-x} itself underflows the loop is
// entered at the first term that is representable (all earlier ones are below
// 1e-300 and irrelevant at the supported tolerances).
static double poisson_tail(double x, int n)
{
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;

    int k0 = 0;
    double term;
    if (x <= 700.0)
    {
        term = std::exp(-x);
    }
    else
    {
        auto log_term = [&](int k) { return -x + k * std::log(x) - std::lgamma(k + 1.0); };
        int peak = static_cast<int>(std::min(static_cast<double>(n - 1), std::floor(x)));
        if (log_term(peak) < -745.0)
            return 0.0;
        int lo = 0, hi = peak;
        while (lo < hi)
        {
            int mid = (lo + hi) / 2;
            if (log_term(mid) < -700.0)
                lo = mid + 1;
            else
                hi = mid;
        }
        k0 = lo;
        term = std::exp(log_term(k0));
    }

    double sum = term;
    for (int k = k0 + 1; k < n; k++)
    {
        term *= x / k;
        sum += term;
    }
    return std::min(sum, 1.0);
}

double reg_inc_gamma(int n, double a, double b)
{
    if (n < 1)
        throw std::invalid_argument("reg_inc_gamma: shape must be at least 1");
    if (!(a >= 0.0) || !(b >= a))
        throw std::domain_error("reg_inc_gamma: need 0 <= a <= b");
    double p = poisson_tail(a, n) - poisson_tail(b, n);
    return std::clamp(p, 0.0, 1.0);
}

double gamma_energy_pdf(double z, int n, double variance)
{
    if (n < 1)
        throw std::invalid_argument("gamma_energy_pdf: shape must be at least 1");
    if (variance <= 0.0)
        throw std::domain_error("gamma_energy_pdf: variance must be positive");
    if (z < 0.0)
        throw std::domain_error("gamma_energy_pdf: energy must be nonnegative");
    if (z == 0.0)
        return n == 1 ? 1.0 / variance : 0.0;
    return std::exp((n - 1) * std::log(z) - z / variance - n * std::log(variance) -
                    std::lgamma(static_cast<double>(n)));
}

double gamma_energy_cdf(double z, int n, double variance)
{
    if (variance <= 0.0)
        throw std::domain_error("gamma_energy_cdf: variance must be positive");
    if (z < 0.0)
        return 0.0;
    return reg_inc_gamma(n, 0.0, z / variance);
}

double gamma_energy_quantile(double prob, int n, double variance)
{
    if (!(prob > 0.0) || !(prob < 1.0))
        throw std::domain_error("gamma_energy_quantile: probability must lie in (0, 1)");
    if (variance <= 0.0)
        throw std::domain_error("gamma_energy_quantile: variance must be positive");

    double hi = variance * (n + 10.0 * std::sqrt(static_cast<double>(n)) + 10.0);
    for (int i = 0; i < 200 && gamma_energy_cdf(hi, n, variance) < prob; i++)
        hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-12 * hi)
    {
        double mid = 0.5 * (lo + hi);
        if (gamma_energy_cdf(mid, n, variance) < prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<std::int64_t> hypothesis_order(const Eigen::VectorXd& variances)
{
    std::vector<std::int64_t> order(variances.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int64_t a, std::int64_t b) { return variances(a) < variances(b); });
    return order;
}

ReceiveModel receive_model_with_order(const CompositeTable& table, const Eigen::VectorXcd& w,
                                      double noise_var, int spreading,
                                      const std::vector<std::int64_t>& order)
{
    if (spreading < 1)
        throw std::invalid_argument("receive_model: spreading factor must be at least 1");
    if (order.size() != table.channels.size())
        throw std::invalid_argument("receive_model: order size mismatch");

    ReceiveModel model;
    model.noise_var = noise_var;
    model.spreading = spreading;
    model.variances.resize(static_cast<Eigen::Index>(table.channels.size()));
    for (std::size_t t = 0; t < table.channels.size(); t++)
        model.variances(static_cast<Eigen::Index>(t)) =
            receive_variance(table.channels[t], w, noise_var);

    model.order = order;
    model.rank.assign(order.size(), 0);
    std::vector<bool> seen(order.size(), false);
    for (std::size_t r = 0; r < order.size(); r++)
    {
        std::int64_t t = order[r];
        if (t < 0 || t >= static_cast<std::int64_t>(order.size()) || seen[t])
            throw std::invalid_argument("receive_model: order is not a permutation");
        seen[t] = true;
        model.rank[t] = static_cast<std::int64_t>(r);
    }
    return model;
}

ReceiveModel make_receive_model(const CompositeTable& table, const Eigen::VectorXcd& w,
                                double noise_var, int spreading)
{
    Eigen::VectorXd variances(static_cast<Eigen::Index>(table.channels.size()));
    for (std::size_t t = 0; t < table.channels.size(); t++)
        variances(static_cast<Eigen::Index>(t)) = receive_variance(table.channels[t], w, noise_var);
    return receive_model_with_order(table, w, noise_var, spreading, hypothesis_order(variances));
}

ThresholdCandidates candidate_grid(double var_lo, double var_hi, int n, int bits,
                                   double confidence, bool log_spaced)
{
    if (var_lo <= 0.0 || var_hi < var_lo)
        throw std::domain_error("candidate_grid: need 0 < var_lo <= var_hi");
    if (bits < 1 || bits > 20)
        throw std::invalid_argument("candidate_grid: bits must lie in [1, 20]");
    if (!(confidence > 0.0) || !(confidence < 0.5))
        throw std::domain_error("candidate_grid: confidence must lie in (0, 0.5)");

    double z_lo = gamma_energy_quantile(confidence, n, var_lo);
    double z_hi = gamma_energy_quantile(1.0 - confidence, n, var_hi);

    ThresholdCandidates cand;
    if (z_hi - z_lo <= 1e-12 * z_hi)
    {
        cand.grid = Eigen::VectorXd::Constant(1, 0.5 * (z_lo + z_hi));
        cand.degenerate = true;
        return cand;
    }

    Eigen::Index count = (Eigen::Index(1) << bits) + 1;
    if (log_spaced)
    {
        cand.grid = Eigen::VectorXd::LinSpaced(count, std::log(z_lo), std::log(z_hi));
        cand.grid = cand.grid.array().exp();
        cand.grid(0) = z_lo; // endpoints exact despite exp/log round trip
        cand.grid(count - 1) = z_hi;
    }
    else
    {
        cand.grid = Eigen::VectorXd::LinSpaced(count, z_lo, z_hi);
    }
    return cand;
}

ThresholdSet make_threshold_set(const Eigen::VectorXd& interior)
{
    ThresholdSet t;
    t.edges.resize(interior.size() + 2);
    t.edges(0) = 0.0;
    for (Eigen::Index i = 0; i < interior.size(); i++)
    {
        if (!(interior(i) >= 0.0) || std::isinf(interior(i)))
            throw std::domain_error("make_threshold_set: interior edges must be finite and nonnegative");
        if (i > 0 && interior(i) < interior(i - 1))
            throw std::invalid_argument("make_threshold_set: edges must be nondecreasing");
        t.edges(i + 1) = interior(i);
    }
    t.edges(t.edges.size() - 1) = inf;
    return t;
}

Eigen::MatrixXd transition_matrix(const ReceiveModel& model, const ThresholdSet& thresholds)
{
    const Eigen::VectorXd& e = thresholds.edges;
    if (e.size() < 2 || e(0) != 0.0 || !std::isinf(e(e.size() - 1)))
        throw std::invalid_argument("transition_matrix: edges must run from 0 to +inf");
    for (Eigen::Index i = 1; i < e.size(); i++)
        if (e(i) < e(i - 1))
            throw std::invalid_argument("transition_matrix: edges must be nondecreasing");

    Eigen::Index num_hyp = model.variances.size();
    Eigen::Index num_reg = e.size() - 1;
    Eigen::MatrixXd q(num_hyp, num_reg);
    for (Eigen::Index l = 0; l < num_hyp; l++)
    {
        double s2 = model.ranked_variance(l);
        for (Eigen::Index r = 0; r < num_reg; r++)
            q(l, r) = reg_inc_gamma(model.spreading, e(r) / s2, e(r + 1) / s2);
    }
    return q;
}

} // namespace riscatter
