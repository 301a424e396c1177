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

#ifndef MAGICKIT_MONOTONES_HPP
#define MAGICKIT_MONOTONES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "magickit/channels.hpp"
#include "magickit/psd_cuts.hpp"

namespace magickit {

struct MonotoneReport {
    std::string name;
    /// Bits (log base 2) for logarithmic quantities.
    double value = 0.0;
    /// Named side quantities in emission order (e.g. "R", "R_HC", "dual_bound").
    std::vector<std::pair<std::string, double>> details;
    /// Mixture weights over the stabilizer set (signed for robustness).
    RVector weights;
    /// Witness or dual matrix; empty when not applicable.
    CMatrix witness;
    std::string convention;

    double detail(const std::string &key) const;
};

/// l1 robustness: R = (|c|_1 - 1)/2, R_HC = |c|_1. Value is R.
MonotoneReport robustness_state(const DensityOperator &rho, const StabilizerSet &s);

struct SignedChannelDecomposition {
    double r = 0.0;
    /// N = (1 + r) plus - r minus, both CSPOs.
    ChoiOperator plus;
    ChoiOperator minus;
    double l1() const {
        return 1.0 + 2.0 * r;
    }
};

SignedChannelDecomposition robustness_channel_decomposition(const ChoiOperator &c, const StabilizerSet &s);
/// Value is R (channel); details carry LR = log2(1 + R) and l1 = 1 + 2R.
MonotoneReport robustness_channel(const ChoiOperator &c, const StabilizerSet &s);

struct GeneralizedRobustnessOptions {
    CutOptions cuts;
};

/// Value is LR_g = log2 t with t the certified feasible primal; details carry R_g, dual bound and gap.
MonotoneReport generalized_robustness_state(const DensityOperator &rho, const StabilizerSet &s, const GeneralizedRobustnessOptions &options = {});

struct ChannelGeneralizedRobustness {
    double lambda = 1.0;
    double dual_lambda = 1.0;
    /// Feasible omega with omega >= J and proportional identity input marginal.
    CMatrix omega;
    RVector weights;
    /// Dual point (alpha, beta).
    CMatrix alpha;
    CMatrix beta;
    double min_eigenvalue = 0.0;
    int cuts = 0;
};

ChannelGeneralizedRobustness solve_generalized_robustness_channel(const ChoiOperator &c, const StabilizerSet &s, const GeneralizedRobustnessOptions &options = {});
/// Evaluates the dual objective at (alpha, beta) after scaling into the feasible set.
double generalized_robustness_channel_dual_value(const ChoiOperator &c, const StabilizerSet &s, const CMatrix &alpha, const CMatrix &beta);
MonotoneReport log_generalized_robustness_channel(const ChoiOperator &c, const StabilizerSet &s, const GeneralizedRobustnessOptions &options = {});

MonotoneReport dmin_state(const DensityOperator &rho, const StabilizerSet &s);

/// Operator-smoothed variant; witness holds the optimal test E.
MonotoneReport dmin_eps_state(const DensityOperator &rho, const StabilizerSet &s, double epsilon, const CutOptions &options = {});

struct DminBracket {
    double lower = 0.0;
    double upper_estimate = 0.0;
    bool upper_certified = false;
};

DminBracket dmin_channel_bracket(const ChoiOperator &c, const StabilizerSet &s, std::uint64_t seed = 1, int starts = 20);

struct GeometricOptions {
    double tolerance = 1e-9;
    /// Newton step cap of the interior-point solve.
    int max_iterations = 10000;
};

MonotoneReport geometric_measure(const DensityOperator &rho, const StabilizerSet &s, const GeometricOptions &options = {});

struct QuasiDecomposition {
    double lambda = 1.0;
    ChoiOperator positive;
    ChoiOperator negative;
    double l1() const {
        return 2.0 * lambda - 1.0;
    }
    /// max |lambda*positive - (lambda-1)*negative - target|.
    double reconstruction_error(const ChoiOperator &target) const;
};

QuasiDecomposition quasi_decompose_channel(const ChoiOperator &c, const StabilizerSet &s, const GeneralizedRobustnessOptions &options = {});

/// Stabilizer set matching a channel's Choi dimension; unsupported_dimension above 3 qubits.
const StabilizerSet &stabilizer_set_for_dim(int dim);

}  // namespace magickit

#endif
