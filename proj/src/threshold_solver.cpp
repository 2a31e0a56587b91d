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

#include "riscatter/threshold_solver.hpp"
#include "riscatter/rates.hpp"
#include "riscatter/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace riscatter
{

static constexpr double inf = std::numeric_limits<double>::infinity();

BinMassTable bin_masses(const ReceiveModel& model, const ThresholdCandidates& candidates)
{
    Eigen::Index cand = candidates.grid.size();
    if (cand < 1)
        throw std::invalid_argument("bin_masses: empty candidate grid");

    BinMassTable table;
    if (cand == 1)
    {
        table.edges = Eigen::VectorXd(2);
        table.edges << 0.0, inf;
    }
    else
    {
        // Interior candidates become usable edges; the outermost candidates
        // are widened to 0 and +inf so the bins cover the whole energy axis.
        table.edges = Eigen::VectorXd(cand);
        table.edges(0) = 0.0;
        for (Eigen::Index i = 1; i < cand - 1; i++)
            table.edges(i) = candidates.grid(i);
        table.edges(cand - 1) = inf;
    }

    Eigen::Index num_hyp = model.variances.size();
    Eigen::Index bins = table.edges.size() - 1;
    table.mass.resize(num_hyp, bins);
    for (Eigen::Index l = 0; l < num_hyp; l++)
    {
        double s2 = model.ranked_variance(l);
        for (Eigen::Index j = 0; j < bins; j++)
            table.mass(l, j) =
                reg_inc_gamma(model.spreading, table.edges(j) / s2, table.edges(j + 1) / s2);
    }
    return table;
}

// ------------------------------------------------------------------------
// Shared interval machinery. All solvers maximize a sum of per-region
// contributions c(a, b) over contiguous (possibly empty) bin runs; c is
// evaluated from row prefix sums in O(hypotheses).
// ------------------------------------------------------------------------

namespace
{

struct IntervalScore
{
    Eigen::MatrixXd prefix; // hypotheses x (bins + 1)
    Eigen::VectorXd p;

    IntervalScore(const BinMassTable& table, const Eigen::VectorXd& p_hyp) : p(p_hyp)
    {
        prefix.resize(table.hypotheses(), table.bins() + 1);
        prefix.col(0).setZero();
        for (Eigen::Index j = 0; j < table.bins(); j++)
            prefix.col(j + 1) = prefix.col(j) + table.mass.col(j);
    }

    // Contribution of bins [a, b] inclusive; empty when a > b.
    double operator()(Eigen::Index a, Eigen::Index b) const
    {
        if (a > b)
            return 0.0;
        double out = 0.0;
        for (Eigen::Index l = 0; l < p.size(); l++)
            out += p(l) * std::max(prefix(l, b + 1) - prefix(l, a), 0.0);
        double value = 0.0;
        for (Eigen::Index l = 0; l < p.size(); l++)
        {
            double mass = std::max(prefix(l, b + 1) - prefix(l, a), 0.0);
            value += info_term(p(l) * mass, mass, out);
        }
        return value;
    }
};

void check_inputs(const BinMassTable& table, const Eigen::VectorXd& p_hyp)
{
    if (p_hyp.size() != table.hypotheses())
        throw std::invalid_argument("threshold solver: distribution size mismatch");
    if (table.bins() < p_hyp.size())
        throw std::invalid_argument("threshold solver: infeasible, fewer bins than regions");
    if (p_hyp.minCoeff() < -1e-12)
        throw std::domain_error("threshold solver: negative probabilities");
}

ThresholdSolveResult assemble(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                              std::vector<Eigen::Index> splits)
{
    ThresholdSolveResult result;
    result.backscatter = split_objective(table, p_hyp, splits);
    result.thresholds.edges.resize(splits.size() + 2);
    result.thresholds.edges(0) = 0.0;
    for (std::size_t r = 0; r < splits.size(); r++)
        result.thresholds.edges(static_cast<Eigen::Index>(r) + 1) = table.edges(splits[r]);
    result.thresholds.edges(result.thresholds.edges.size() - 1) = inf;
    result.splits = std::move(splits);
    return result;
}

} // namespace

double region_contribution(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                           Eigen::Index first_bin, Eigen::Index last_bin)
{
    if (p_hyp.size() != table.hypotheses())
        throw std::invalid_argument("region_contribution: distribution size mismatch");
    if (first_bin > last_bin)
        return 0.0;
    if (first_bin < 0 || last_bin >= table.bins())
        throw std::out_of_range("region_contribution: bin range out of bounds");

    double out = 0.0;
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(p_hyp.size());
    for (Eigen::Index l = 0; l < p_hyp.size(); l++)
    {
        for (Eigen::Index j = first_bin; j <= last_bin; j++)
            mass(l) += table.mass(l, j);
        out += p_hyp(l) * mass(l);
    }
    double value = 0.0;
    for (Eigen::Index l = 0; l < p_hyp.size(); l++)
        value += info_term(p_hyp(l) * mass(l), mass(l), out);
    return value;
}

double split_objective(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                       const std::vector<Eigen::Index>& splits)
{
    IntervalScore c(table, p_hyp);
    double value = 0.0;
    Eigen::Index start = 0;
    for (Eigen::Index s : splits)
    {
        if (s < start || s > table.bins())
            throw std::invalid_argument("split_objective: splits must be nondecreasing");
        value += c(start, s - 1);
        start = s;
    }
    value += c(start, table.bins() - 1);
    return value;
}

// ------------------------------------------------------------------------
// Exact DP
// ------------------------------------------------------------------------

ThresholdSolveResult solve_dp(const BinMassTable& table, const Eigen::VectorXd& p_hyp)
{
    check_inputs(table, p_hyp);
    IntervalScore c(table, p_hyp);
    Eigen::Index regions = p_hyp.size();
    Eigen::Index bins = table.bins();

    if (regions == 1)
        return assemble(table, p_hyp, {});

    // value[i] after layer r: best split of the first i bins into r regions
    std::vector<double> value(bins + 1), next(bins + 1);
    Eigen::MatrixXi parent(regions + 1, bins + 1);
    for (Eigen::Index i = 0; i <= bins; i++)
    {
        value[i] = c(0, i - 1);
        parent(1, i) = 0;
    }
    for (Eigen::Index r = 2; r <= regions; r++)
    {
        for (Eigen::Index i = 0; i <= bins; i++)
        {
            double best = -inf;
            Eigen::Index best_j = 0;
            for (Eigen::Index j = 0; j <= i; j++)
            {
                double v = value[j] + c(j, i - 1);
                if (v > best)
                {
                    best = v;
                    best_j = j;
                }
            }
            next[i] = best;
            parent(r, i) = static_cast<int>(best_j);
        }
        std::swap(value, next);
    }

    std::vector<Eigen::Index> splits(regions - 1);
    Eigen::Index at = bins;
    for (Eigen::Index r = regions; r >= 2; r--)
    {
        at = parent(r, at);
        splits[r - 2] = at;
    }
    return assemble(table, p_hyp, std::move(splits));
}

// ------------------------------------------------------------------------
// SMAWK row maxima (leftmost argmax on ties)
// ------------------------------------------------------------------------

namespace
{

using Evaluator = std::function<double(Eigen::Index, Eigen::Index)>;

void smawk(const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols,
           const Evaluator& m, std::vector<Eigen::Index>& argmax)
{
    if (rows.empty())
        return;

    // Reduce: keep at most |rows| candidate columns.
    std::vector<Eigen::Index> keep;
    keep.reserve(rows.size());
    for (Eigen::Index col : cols)
    {
        while (!keep.empty())
        {
            Eigen::Index r = rows[keep.size() - 1];
            if (m(r, col) > m(r, keep.back()))
                keep.pop_back();
            else
                break;
        }
        if (keep.size() < rows.size())
            keep.push_back(col);
    }

    std::vector<Eigen::Index> odd;
    for (std::size_t i = 1; i < rows.size(); i += 2)
        odd.push_back(rows[i]);
    smawk(odd, keep, m, argmax);

    // Interpolate even rows between the odd rows' (monotone) argmaxes.
    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows.size(); i += 2)
    {
        Eigen::Index row = rows[i];
        Eigen::Index stop = (i + 1 < rows.size()) ? argmax[rows[i + 1]] : keep.back();
        Eigen::Index best = keep[pos];
        double best_value = m(row, keep[pos]);
        while (keep[pos] != stop)
        {
            pos++;
            double v = m(row, keep[pos]);
            if (v > best_value)
            {
                best_value = v;
                best = keep[pos];
            }
        }
        argmax[row] = best;
    }
}

// Sampled check of the inverse quadrangle inequality
// c(j1, i1) + c(j2, i2) >= c(j1, i2) + c(j2, i1) for j1 <= j2 <= i1 <= i2.
bool quadrangle_holds(const IntervalScore& c, Eigen::Index bins)
{
    if (bins < 4)
        return true;
    Rng rng(0x5eedULL);
    for (int trial = 0; trial < 256; trial++)
    {
        std::array<Eigen::Index, 4> s;
        for (auto& v : s)
            v = static_cast<Eigen::Index>(rng.uniform() * bins);
        std::sort(s.begin(), s.end());
        double lhs = c(s[0], s[2]) + c(s[1], s[3]);
        double rhs = c(s[0], s[3]) + c(s[1], s[2]);
        double tol = 1e-10 * (1.0 + std::abs(lhs) + std::abs(rhs));
        if (lhs + tol < rhs)
            return false;
    }
    return true;
}

} // namespace

ThresholdSolveResult solve_smawk(const BinMassTable& table, const Eigen::VectorXd& p_hyp)
{
    check_inputs(table, p_hyp);
    IntervalScore c(table, p_hyp);
    Eigen::Index regions = p_hyp.size();
    Eigen::Index bins = table.bins();

    if (regions == 1)
        return assemble(table, p_hyp, {});

    if (!quadrangle_holds(c, bins))
    {
        ThresholdSolveResult fallback = solve_dp(table, p_hyp);
        fallback.warning = true;
        return fallback;
    }

    std::vector<double> value(bins + 1);
    Eigen::MatrixXi parent(regions + 1, bins + 1);
    for (Eigen::Index i = 0; i <= bins; i++)
    {
        value[i] = c(0, i - 1);
        parent(1, i) = 0;
    }

    std::vector<Eigen::Index> all(bins + 1), argmax(bins + 1);
    for (Eigen::Index i = 0; i <= bins; i++)
        all[i] = i;

    for (Eigen::Index r = 2; r <= regions; r++)
    {
        Evaluator m = [&](Eigen::Index i, Eigen::Index j) {
            if (j > i) // padded corner, consistently below every valid entry
                return -1e250 * static_cast<double>(j - i + 1);
            return value[j] + c(j, i - 1);
        };
        smawk(all, all, m, argmax);
        std::vector<double> next(bins + 1);
        for (Eigen::Index i = 0; i <= bins; i++)
        {
            next[i] = m(i, argmax[i]);
            parent(r, i) = static_cast<int>(argmax[i]);
        }
        value = std::move(next);
    }

    std::vector<Eigen::Index> splits(regions - 1);
    Eigen::Index at = bins;
    for (Eigen::Index r = regions; r >= 2; r--)
    {
        at = parent(r, at);
        splits[r - 2] = at;
    }
    return assemble(table, p_hyp, std::move(splits));
}

// ------------------------------------------------------------------------
// Coordinate ascent with per-bin preference bisection
// ------------------------------------------------------------------------

ThresholdSolveResult solve_bisection(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                                     const ThresholdSet& init)
{
    check_inputs(table, p_hyp);
    IntervalScore c(table, p_hyp);
    Eigen::Index regions = p_hyp.size();
    Eigen::Index bins = table.bins();
    if (init.edges.size() != regions + 1)
        throw std::invalid_argument("solve_bisection: initializer region count mismatch");

    if (regions == 1)
        return assemble(table, p_hyp, {});

    // Snap the initializer onto bin-edge positions.
    std::vector<Eigen::Index> splits(regions - 1);
    for (Eigen::Index r = 1; r < regions; r++)
    {
        double t = init.edges(r);
        Eigen::Index best = 0;
        double best_gap = inf;
        for (Eigen::Index s = 0; s <= bins; s++)
        {
            double edge = table.edges(s);
            double gap = std::isinf(edge) ? (std::isinf(t) ? 0.0 : inf) : std::abs(edge - t);
            if (gap < best_gap)
            {
                best_gap = gap;
                best = s;
            }
        }
        splits[r - 1] = best;
    }
    for (std::size_t r = 1; r < splits.size(); r++)
        splits[r] = std::max(splits[r], splits[r - 1]);

    // Fixed-aggregate preference of bin j between two regions. A vanished
    // side is maximally dispreferred; the explicit objective test below
    // keeps every accepted move an ascent step.
    auto swap_point = [&](Eigen::Index a, Eigen::Index b, Eigen::Index s0) {
        Eigen::Index s = s0;
        for (int round = 0; round < 16; round++)
        {
            Eigen::VectorXd left(p_hyp.size()), right(p_hyp.size());
            double out_left = 0.0, out_right = 0.0;
            for (Eigen::Index l = 0; l < p_hyp.size(); l++)
            {
                left(l) = std::max(c.prefix(l, s) - c.prefix(l, a), 0.0);
                right(l) = std::max(c.prefix(l, b) - c.prefix(l, s), 0.0);
                out_left += p_hyp(l) * left(l);
                out_right += p_hyp(l) * right(l);
            }
            auto delta = [&](Eigen::Index j) {
                double d = 0.0;
                for (Eigen::Index l = 0; l < p_hyp.size(); l++)
                {
                    double w = p_hyp(l) * table.mass(l, j);
                    if (w <= 0.0)
                        continue;
                    double ls = (left(l) > 0.0 && out_left > 0.0)
                                    ? std::log(left(l) / out_left)
                                    : -1e30;
                    double rs = (right(l) > 0.0 && out_right > 0.0)
                                    ? std::log(right(l) / out_right)
                                    : -1e30;
                    d += w * (ls - rs);
                }
                return d;
            };
            // First bin preferring the right side; the preference is
            // monotone along the energy axis for these likelihood families.
            Eigen::Index lo = a, hi = b;
            while (lo < hi)
            {
                Eigen::Index mid = (lo + hi) / 2;
                if (delta(mid) < 0.0)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            if (lo == s)
                break;
            s = lo;
        }
        return s;
    };

    for (int pass = 0; pass < 100; pass++)
    {
        bool moved = false;
        for (Eigen::Index r = 0; r < regions - 1; r++)
        {
            Eigen::Index a = (r == 0) ? 0 : splits[r - 1];
            Eigen::Index b = (r + 2 <= regions - 1) ? splits[r + 1] : bins;
            Eigen::Index cur = splits[r];
            Eigen::Index cand = swap_point(a, b, std::clamp(cur, a, b));
            if (cand == cur)
                continue;
            double before = c(a, cur - 1) + c(cur, b - 1);
            double after = c(a, cand - 1) + c(cand, b - 1);
            if (after > before + 1e-15 * (1.0 + std::abs(before)))
            {
                splits[r] = cand;
                moved = true;
            }
        }
        if (!moved)
            break;
    }
    return assemble(table, p_hyp, std::move(splits));
}

// ------------------------------------------------------------------------
// Pairwise density crossings and the enumeration oracle
// ------------------------------------------------------------------------

ThresholdSet ml_thresholds(const Eigen::VectorXd& ordered_variances, int n,
                           const BinMassTable* snap_to)
{
    Eigen::Index regions = ordered_variances.size();
    if (regions < 1)
        throw std::invalid_argument("ml_thresholds: need at least one hypothesis");
    if (n < 1)
        throw std::invalid_argument("ml_thresholds: shape must be at least 1");

    Eigen::VectorXd interior(regions - 1);
    for (Eigen::Index l = 0; l + 1 < regions; l++)
    {
        double va = ordered_variances(l), vb = ordered_variances(l + 1);
        if (!(va > 0.0) || !(vb > 0.0))
            throw std::domain_error("ml_thresholds: variances must be positive");
        if (vb <= va)
            throw std::domain_error("ml_thresholds: variances must be strictly ascending");
        interior(l) = n * va * vb * std::log(vb / va) / (vb - va);
    }

    if (snap_to != nullptr)
    {
        for (Eigen::Index l = 0; l < interior.size(); l++)
        {
            double t = interior(l);
            Eigen::Index best = 1;
            double best_gap = inf;
            for (Eigen::Index s = 1; s < snap_to->bins(); s++) // usable interior edges
            {
                double gap = std::abs(snap_to->edges(s) - t);
                if (gap < best_gap)
                {
                    best_gap = gap;
                    best = s;
                }
            }
            interior(l) = snap_to->edges(best);
        }
        for (Eigen::Index l = 1; l < interior.size(); l++)
            interior(l) = std::max(interior(l), interior(l - 1));
    }
    return make_threshold_set(interior);
}

ThresholdSolveResult brute_force_thresholds(const BinMassTable& table,
                                            const Eigen::VectorXd& p_hyp)
{
    check_inputs(table, p_hyp);
    Eigen::Index regions = p_hyp.size();
    Eigen::Index bins = table.bins();

    double combinations = 1.0;
    for (Eigen::Index i = 1; i < regions; i++)
        combinations *= static_cast<double>(bins - i) / static_cast<double>(i);
    if (combinations > 1e6)
        throw std::invalid_argument("brute_force_thresholds: search space exceeds 1e6 partitions");

    if (regions == 1)
        return assemble(table, p_hyp, {});

    // Direct per-region mass sums, independent of the prefix-sum path used
    // by the DP solvers.
    auto evaluate = [&](const std::vector<Eigen::Index>& splits) {
        double value = 0.0;
        Eigen::Index start = 0;
        for (Eigen::Index r = 0; r <= static_cast<Eigen::Index>(splits.size()); r++)
        {
            Eigen::Index stop = r < static_cast<Eigen::Index>(splits.size()) ? splits[r] : bins;
            double out = 0.0;
            Eigen::VectorXd mass = Eigen::VectorXd::Zero(p_hyp.size());
            for (Eigen::Index l = 0; l < p_hyp.size(); l++)
            {
                for (Eigen::Index j = start; j < stop; j++)
                    mass(l) += table.mass(l, j);
                out += p_hyp(l) * mass(l);
            }
            for (Eigen::Index l = 0; l < p_hyp.size(); l++)
                value += info_term(p_hyp(l) * mass(l), mass(l), out);
            start = stop;
        }
        return value;
    };

    std::vector<Eigen::Index> splits(regions - 1), best_splits(regions - 1);
    double best = -inf;
    std::function<void(Eigen::Index, Eigen::Index)> visit = [&](Eigen::Index r, Eigen::Index from) {
        if (r == regions - 1)
        {
            double v = evaluate(splits);
            if (v > best)
            {
                best = v;
                best_splits = splits;
            }
            return;
        }
        for (Eigen::Index s = from; s <= bins; s++)
        {
            splits[r] = s;
            visit(r + 1, s);
        }
    };
    visit(0, 0);
    return assemble(table, p_hyp, std::move(best_splits));
}

} // namespace riscatter
