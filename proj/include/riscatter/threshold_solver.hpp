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

#ifndef riscatter_threshold_solver_H
#define riscatter_threshold_solver_H

#include <vector>

#include "riscatter/detector.hpp"

namespace riscatter
{

// Decision thresholds are restricted to a candidate energy grid. The grid
// induces consecutive bins whose outermost edges are widened to 0 and +inf,
// so each hypothesis row of the bin-mass table sums to one. A decision
// region is a (possibly empty) run of consecutive bins; empty regions are
// how zero-probability hypotheses bow out without wasting bins.

struct BinMassTable
{
    Eigen::MatrixXd mass;   // hypotheses (ranked) x bins
    Eigen::VectorXd edges;  // bins + 1 effective edges: 0, interior candidates, +inf

    Eigen::Index bins() const { return mass.cols(); }
    Eigen::Index hypotheses() const { return mass.rows(); }
};

BinMassTable bin_masses(const ReceiveModel& model, const ThresholdCandidates& candidates);

// Backscatter-MI contribution of one decision region covering bins
// [first_bin, last_bin] (inclusive; first_bin > last_bin denotes an empty
// region). Always nonnegative.
double region_contribution(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                           Eigen::Index first_bin, Eigen::Index last_bin);

struct ThresholdSolveResult
{
    ThresholdSet thresholds;
    std::vector<Eigen::Index> splits; // region r covers bins [splits[r-1], splits[r])
    double backscatter = 0.0;         // nats per backscatter block
    bool warning = false;
};

// Exact dynamic program over contiguous bin partitions into L regions
// (L = p_hyp size), empty regions allowed.
ThresholdSolveResult solve_dp(const BinMassTable& table, const Eigen::VectorXd& p_hyp);

// Same recurrence with SMAWK row-maxima acceleration. The required
// quadrangle inequality is spot checked on sampled 4-tuples; a detected
// violation falls back to solve_dp with `warning` set.
ThresholdSolveResult solve_smawk(const BinMassTable& table, const Eigen::VectorXd& p_hyp);

// Cyclic coordinate ascent starting from `init`: each interior threshold is
// relocated between its fixed neighbors to the per-bin preference swap point
// (found by bisection), and a move is kept only if it improves the
// objective. Terminates at a single-move local optimum.
ThresholdSolveResult solve_bisection(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                                     const ThresholdSet& init);

// Pairwise density-crossing thresholds of consecutive (ascending) variances:
// t_l = N v_l v_{l+1} ln(v_{l+1} / v_l) / (v_{l+1} - v_l). When a candidate
// table is supplied each crossing is snapped to the nearest usable bin edge.
ThresholdSet ml_thresholds(const Eigen::VectorXd& ordered_variances, int n,
                           const BinMassTable* snap_to = nullptr);

// Exhaustive partition enumeration (oracle-grade, C(bins-1, L-1) <= 1e6).
ThresholdSolveResult brute_force_thresholds(const BinMassTable& table,
                                            const Eigen::VectorXd& p_hyp);

// Objective of an arbitrary split vector, shared by the solvers above.
double split_objective(const BinMassTable& table, const Eigen::VectorXd& p_hyp,
                       const std::vector<Eigen::Index>& splits);

} // namespace riscatter

#endif
