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

#ifndef MAGICKIT_LP_HPP
#define MAGICKIT_LP_HPP

#include <optional>

#include "magickit/linalg.hpp"

namespace magickit {

/// minimize c.x  s.t.  A_eq x = b_eq,  A_in x <= b_in,  x >= lower.
/// An empty `lower` means all zeros; entries may be -infinity.
struct LpProblem {
    RVector objective;
    RMatrix eq_matrix;
    RVector eq_rhs;
    RMatrix ineq_matrix;
    RVector ineq_rhs;
    RVector lower;

    int variables() const {
        return (int)objective.size();
    }
    /// Throws invalid_input on inconsistent shapes.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    RVector x;
    /// Multipliers y for the equalities and mu >= 0 for the inequalities such that
    /// c - A_eq^T y + A_in^T mu >= 0 (componentwise, = 0 on free variables) and
    /// value = b_eq.y - b_in.mu + lower.(c - A_eq^T y + A_in^T mu).
    RVector eq_duals;
    RVector ineq_duals;
    long iterations = 0;
};

struct LpOptions {
    long max_iterations = 1000000;
    double feasibility_tolerance = 1e-9;
    double optimality_tolerance = 1e-9;
};

LpSolution solve_lp(const LpProblem &problem, const LpOptions &options = {});

/// Answer to "exists x >= 0 with A x = b".
struct FeasibilityOutcome {
    bool feasible = false;
    RVector x;            // when feasible
    RVector certificate;  // when infeasible: A^T y >= 0, b.y < 0
};

FeasibilityOutcome lp_feasibility_with_certificate(const RMatrix &a, const RVector &b, const LpOptions &options = {});

/// Max violation of the certificate or solution conditions; <= 0 means valid.
double farkas_violation(const RMatrix &a, const RVector &b, const RVector &y);

}  // namespace magickit

#endif
