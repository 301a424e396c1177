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

#ifndef MAGICKIT_BOUNDS_HPP
#define MAGICKIT_BOUNDS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magickit/linalg.hpp"

namespace magickit {

/// ceil(lr_channel / dmin_psi); ratios within 1e-9 (relative) of an integer round to it.
long cost_upper_bound(double lr_channel, double dmin_psi);

/// LR_g(N) / LR_g(psi).
double cost_lower_bound(double lrg_channel, double lrg_psi);

/// D_min(N) / D_min(psi). Pass a certified lower bound of D_min(N) when only a bracket is known.
double distill_upper_bound(double dmin_channel, double dmin_psi);

/// floor(dmin_eps_choi / lr_psi) with the same 1e-9 guard band.
long distill_lower_bound(double dmin_eps_choi, double lr_psi);

/// Existence condition for a dimension: max D_min over states of that dimension >= LR(N).
bool cost_dimension_sufficient(double lr_channel, double dmin_max_for_dim);

enum class BoundQuantity { cost_upper, cost_lower, distill_upper, distill_lower };

std::string to_string(BoundQuantity q);

struct BoundReport {
    BoundQuantity quantity = BoundQuantity::cost_upper;
    double value = 0.0;
    bool integral = false;
    /// Set when an input was itself a bound (e.g. the certified side of a D_min bracket).
    bool bound_on_bound = false;
    std::vector<std::pair<std::string, double>> inputs;
    std::string convention;
};

struct Table1Row {
    std::string label;
    std::string construction;
    int qubits = 0;
    double r_hc = 0.0;
    /// log2(1 + R) with R = (R_HC - 1)/2, the negative weight of the state decomposition.
    double lr_state = 0.0;
    long bound_state = 0;
    /// log2 R_HC, the alternative reading of "log robustness".
    double lr_hc = 0.0;
    long bound_hc = 0;
    /// Channel reading, only for single-qubit gates (the Choi of larger gates exceeds 3 qubits).
    std::optional<double> lr_channel;
    std::optional<long> bound_channel;
    /// Published cost bound for this state.
    int expected = 0;
    /// Earlier, weaker published bound.
    int prior_bound = 0;
    /// bound_state differs from expected by more than one.
    bool flagged = false;
    bool matches_expected = false;
};

struct Table1Report {
    std::string resource = "T";
    double dmin_resource = 0.0;
    std::vector<Table1Row> rows;
    std::string convention;
};

/// Cost upper bounds with |T> as the resource. 3-qubit rows need the 3-qubit stabilizer set.
Table1Report table1_report(bool include_three_qubit_rows = true);

}  // namespace magickit

#endif
