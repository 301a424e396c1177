// Copyright 2026 The magickit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MAGICKIT_PSD_CUTS_HPP
#define MAGICKIT_PSD_CUTS_HPP

#include <vector>

#include "magickit/lp.hpp"

namespace magickit {

/// Linear matrix inequality  sum_j x_j F_j - C >= 0  over the LP variables.
struct PsdBlock {
    std::vector<CMatrix> coefficients;
    CMatrix constant;
};

struct ConicProblem {
    LpProblem lp;
    std::vector<PsdBlock> blocks;
    /// Optional point satisfying every constraint with all blocks PD. When given, each round also
    /// cuts at the boundary point between it and the relaxation optimum, which yields feasible
    /// upper bounds and lets the loop stop on the bound gap.
    RVector interior;
};

enum class CutSeeding { none, basis, basis_and_pairs };

struct CutOptions {
    int max_cuts = 10000;
    double psd_tolerance = 1e-9;
    CutSeeding seeding = CutSeeding::basis_and_pairs;
    /// Stop once best feasible value - relaxation value <= gap_tolerance * max(1, |value|).
    double gap_tolerance = 1e-9;
    /// solve_conic uses the barrier method whenever an interior point is supplied.
    bool use_barrier = true;
    /// Barrier method stops when the duality-gap bound nu/t falls below this (relative).
    double barrier_tolerance = 1e-10;
    /// Duals come from the last central point with nu/t at or above this (relative).
    double dual_tolerance = 1e-7;
    int max_newton_steps = 5000;
    LpOptions lp;
};

struct ConicSolution {
    LpStatus status = LpStatus::optimal;
    /// Objective at x. x is the relaxation optimum when it passed the PSD test, otherwise the
    /// best boundary point found (feasible).
    double value = 0.0;
    /// Objective of the last LP relaxation, a lower bound on the optimum.
    double lower_bound = 0.0;
    RVector x;
    /// Per block, the minimum eigenvalue of the final sum_j x_j F_j - C.
    std::vector<double> min_eigenvalues;
    /// Per block, sum_k mu_k v_k v_k^dagger from the cut multipliers (a PSD dual point).
    std::vector<CMatrix> dual_matrices;
    /// Multipliers of the caller's own equality / inequality rows.
    RVector eq_duals;
    RVector ineq_duals;
    /// Total cuts generated, including seeds and cuts dropped once inactive.
    int cuts = 0;
    int rounds = 0;
};

/// Kelley cutting planes: solve the LP relaxation, cut off the most negative eigenvectors
/// of every violated block, repeat until all blocks are PSD within tolerance.
/// Throws numerical_failure once more than max_cuts cuts have been generated.
ConicSolution solve_with_psd_cuts(const ConicProblem &problem, const CutOptions &options = {});

/// Log-barrier interior-point method started at problem.interior (required). The returned x is
/// strictly feasible; dual_matrices are F(x)^{-1}/t and the LP duals follow solve_lp's convention.
ConicSolution solve_with_psd_barrier(const ConicProblem &problem, const CutOptions &options = {});

/// Barrier method when an interior point is given and options.use_barrier, cutting planes otherwise.
ConicSolution solve_conic(const ConicProblem &problem, const CutOptions &options = {});

struct PsdMixture {
    double value = 0.0;
    RVector weights;
    double min_eigenvalue = 0.0;
};

/// min objective.d  s.t.  sum_i d_i phi_i - C >= 0,  eq_matrix d = eq_rhs,  d >= 0.
PsdMixture minimize_over_psd_cone(
    const RVector &objective,
    const std::vector<CMatrix> &components,
    const CMatrix &c,
    const RMatrix &eq_matrix = RMatrix(),
    const RVector &eq_rhs = RVector(),
    const CutOptions &options = {});

}  // namespace magickit

#endif
