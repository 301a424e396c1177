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

#ifndef MAGICKIT_SIMULATE_HPP
#define MAGICKIT_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "magickit/channels.hpp"

namespace magickit {

inline constexpr int kMaxCircuitQubits = 3;

/// A channel on `targets` (listed in the channel's own factor order) of the register.
struct CircuitElement {
    ChoiOperator channel;
    std::vector<int> targets;
    std::string label;
};

/// Elements applied in order to |0...0>, then the Pauli observable is measured.
struct Circuit {
    int qubits = 1;
    std::vector<CircuitElement> elements;
    PauliString observable;

    /// Throws invalid_input / dimension_mismatch / unsupported_dimension.
    void validate() const;
};

/// Applies a local map to a register operator (targets first in the map's factor order).
CMatrix apply_local(const ChoiOperator &c, const std::vector<int> &targets, int qubits, const CMatrix &x);

/// Choi operator of the element lifted to the whole register.
ChoiOperator lift_to_register(const ChoiOperator &c, const std::vector<int> &targets, int qubits);

double expectation_exact(const Circuit &circuit);

struct ElementDecomposition {
    /// Clifford unitary elements are free: lambda = 1, r = 0.
    bool free = false;
    /// N = lambda E - (lambda - 1) M.
    double lambda = 1.0;
    ChoiOperator free_part;
    ChoiOperator rest;
    /// N = (1 + r) plus - r minus, both free; drives the Monte Carlo branches.
    double r = 0.0;
    ChoiOperator plus;
    ChoiOperator minus;

    double l1() const {
        return 1.0 + 2.0 * r;
    }
};

/// Per-element decompositions. Non-Clifford elements must act on one qubit.
std::vector<ElementDecomposition> decompose_circuit(const Circuit &circuit);

/// Whole-register identity N = lambda E - (lambda - 1) M with lambda the product of the element
/// values; M collects every term of the expanded product except the all-free one.
struct ComposedDecomposition {
    double lambda = 1.0;
    ChoiOperator free_part;
    ChoiOperator rest;
    ChoiOperator target;

    double reconstruction_error() const;
};

ComposedDecomposition compose_decompositions(const Circuit &circuit, const std::vector<ElementDecomposition> &parts);

/// ceil(2 eps^-2 q1^2 ln(2 / p_fail)).
long static_sample_count(double epsilon, double q1, double p_fail);

struct SimulationConfig {
    double epsilon = 0.1;
    double c = 0.01;
    double p_fail = 0.05;
    double delta_star = 1.0;
    std::uint64_t seed = 1;
    int workers = 1;
    /// Use (delta* + 1)^(1/n) instead of ((delta* + 1)/(1 + c))^(1/n).
    bool approximate_lambda_star = false;

    void validate_static() const;
    void validate_constrained() const;
};

struct SimEstimate {
    double estimate = 0.0;
    double error_bound = 0.0;
    long samples = 0;
    std::vector<int> replaced;
    /// Product of the replaced elements' lambda values.
    double lambda = 1.0;
    double lambda_star = 0.0;
    /// l1 norm of the sampled quasiprobability (unreplaced elements only).
    double q1 = 1.0;
};

SimEstimate static_monte_carlo(const Circuit &circuit, const SimulationConfig &config);
SimEstimate static_monte_carlo(const Circuit &circuit, const std::vector<ElementDecomposition> &parts, const SimulationConfig &config);

struct LambdaStar {
    double guaranteed = 0.0;
    double approximate = 0.0;
};

LambdaStar lambda_star(double delta_star, int elements, double c);

SimEstimate constrained_path(const Circuit &circuit, const SimulationConfig &config);
SimEstimate constrained_path(const Circuit &circuit, const std::vector<ElementDecomposition> &parts, const SimulationConfig &config);

}  // namespace magickit

#endif
