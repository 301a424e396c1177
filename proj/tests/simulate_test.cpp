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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "magickit/monotones.hpp"
#include "magickit/simulate.hpp"
#include "test_support.hpp"

using namespace magickit;
using namespace magickit::testing;

namespace {

CircuitElement element(const CMatrix &u, std::vector<int> targets, const char *label) {
    return {choi_from_unitary(u), std::move(targets), label};
}

Circuit single(std::vector<CMatrix> gates_in_order, const char *obs) {
    Circuit c;
    c.qubits = 1;
    for (const auto &g : gates_in_order) {
        c.elements.push_back(element(g, {0}, "u"));
    }
    c.observable = PauliString::parse(obs);
    return c;
}

// T after H: a non-Clifford rotation whose X expectation on |0> is 1/sqrt 2.
CMatrix th() {
    return gates::T() * gates::H();
}

Circuit three_th() {
    return single({th(), th(), th()}, "X");
}

Circuit two_qubit_mixed() {
    Circuit c;
    c.qubits = 2;
    c.elements = {element(gates::H(), {0}, "h"), element(gates::T(), {0}, "t"), element(gates::CNOT(), {0, 1}, "cx"),
                  element(th(), {1}, "th"), element(gates::S(), {1}, "s")};
    c.observable = PauliString::parse("XY");
    return c;
}

}  // namespace

TEST(expectation_exact, examples) {
    EXPECT_NEAR(expectation_exact(single({}, "Z")), 1.0, 1e-12);
    EXPECT_NEAR(expectation_exact(single({gates::H()}, "X")), 1.0, 1e-12);
    EXPECT_NEAR(expectation_exact(single({gates::T(), gates::H()}, "Z")), 0.0, 1e-12);
    // Written order is application order: T first, then H.
    Circuit c = single({gates::H(), gates::T(), gates::H()}, "Z");
    EXPECT_NEAR(expectation_exact(c), std::cos(kPi / 4), 1e-12);
    EXPECT_NEAR(expectation_exact(single({th()}, "X")), 1 / std::sqrt(2.0), 1e-12);
}

TEST(expectation_exact, matches_dense_unitary) {
    Circuit c = two_qubit_mixed();
    CMatrix u = CMatrix::Identity(4, 4);
    for (const auto &e : c.elements) {
        CMatrix full = embed_gate(*[&] {
            static CMatrix m;
            m = kraus_from_choi(e.channel)[0];
            return &m;
        }(), e.targets, 2);
        u = full * u;
    }
    CVector psi = u.col(0);
    double want = (psi.adjoint() * pauli_matrix(c.observable) * psi)(0, 0).real();
    EXPECT_NEAR(expectation_exact(c), want, 1e-10);
}

TEST(circuit, validation_errors) {
    Circuit c = single({gates::T()}, "XZ");
    EXPECT_THROW(c.validate(), Error);
    c.observable = PauliString::parse("iX");
    EXPECT_THROW(c.validate(), Error);
    c.observable = PauliString::parse("-X");
    c.validate();
    c.elements[0].targets = {1};
    EXPECT_THROW(c.validate(), Error);
    Circuit big;
    big.qubits = 4;
    big.observable = PauliString::parse("ZZZZ");
    try {
        big.validate();
        ADD_FAILURE();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::unsupported_dimension);
    }
}

TEST(decompose_circuit, clifford_and_t_elements) {
    auto parts = decompose_circuit(single({gates::H(), gates::S(), gates::T()}, "Z"));
    ASSERT_EQ(parts.size(), 3u);
    EXPECT_TRUE(parts[0].free);
    EXPECT_TRUE(parts[1].free);
    EXPECT_EQ(parts[0].lambda, 1.0);
    EXPECT_FALSE(parts[2].free);
    EXPECT_GT(parts[2].lambda, 1.0);
    EXPECT_GT(parts[2].r, 0.0);
    const auto &s2 = shared_stabilizer_set(2);
    EXPECT_TRUE(is_cspo(parts[2].free_part, s2).inside.feasible);
    EXPECT_TRUE(is_cspo(parts[2].plus, s2).inside.feasible);
    EXPECT_TRUE(is_cspo(parts[2].minus, s2).inside.feasible);
    CMatrix rebuilt = parts[2].lambda * parts[2].free_part.matrix() - (parts[2].lambda - 1) * parts[2].rest.matrix();
    EXPECT_LE((rebuilt - t_gate().matrix()).cwiseAbs().maxCoeff(), 1e-6);
    CMatrix signed_mix = (1 + parts[2].r) * parts[2].plus.matrix() - parts[2].r * parts[2].minus.matrix();
    EXPECT_LE((signed_mix - t_gate().matrix()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(decompose_circuit, rejects_multi_qubit_magic) {
    Circuit c;
    c.qubits = 2;
    CMatrix cs = CMatrix::Identity(4, 4);
    cs(3, 3) = Complex(0, 1);
    c.elements = {element(cs, {0, 1}, "cs")};
    c.observable = PauliString::parse("ZZ");
    try {
        decompose_circuit(c);
        ADD_FAILURE();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::unsupported_dimension);
    }
}

TEST(compose_decompositions, reconstructs_register_channel) {
    for (const Circuit &c : {three_th(), two_qubit_mixed(), single({gates::T(), gates::T()}, "X")}) {
        auto parts = decompose_circuit(c);
        auto composed = compose_decompositions(c, parts);
        EXPECT_LE(composed.reconstruction_error(), 1e-6);
        double product = 1.0;
        for (const auto &p : parts) {
            product *= p.lambda;
        }
        EXPECT_NEAR(composed.lambda, product, 1e-12);
        EXPECT_GE(composed.lambda, 1.0);
    }
    // T then T is S, a free gate; the product of the element values still bounds it.
    auto parts = decompose_circuit(single({gates::T(), gates::T()}, "X"));
    EXPECT_NEAR(compose_decompositions(single({gates::T(), gates::T()}, "X"), parts).lambda,
                parts[0].lambda * parts[0].lambda, 1e-12);
}

TEST(static_sample_count, formula) {
    EXPECT_EQ(static_sample_count(0.1, 1.0, 0.05), 738);
    EXPECT_EQ(static_sample_count(0.1, 2.0, 0.05), (long)std::ceil(800 * std::log(40.0)));
    EXPECT_EQ(static_sample_count(0.01, 1.0, 0.05), (long)std::ceil(2e4 * std::log(40.0)));
    EXPECT_THROW(static_sample_count(0.0, 1.0, 0.05), Error);
    EXPECT_THROW(static_sample_count(0.1, 1.0, 1.0), Error);
}

TEST(static_monte_carlo, clifford_circuit_has_zero_variance) {
    Circuit c = single({gates::H(), gates::S(), gates::H()}, "Y");
    const double exact = expectation_exact(c);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SimulationConfig cfg;
        cfg.seed = seed;
        auto est = static_monte_carlo(c, cfg);
        EXPECT_EQ(est.samples, 738);
        EXPECT_NEAR(est.estimate, exact, 1e-12);
    }
}

TEST(static_monte_carlo, failure_rate_within_hoeffding) {
    for (const Circuit &c : {single({gates::T()}, "X"), single({th()}, "X")}) {
        auto parts = decompose_circuit(c);
        const double exact = expectation_exact(c);
        SimulationConfig cfg;
        int failures = 0;
        for (int trial = 0; trial < 200; ++trial) {
            cfg.seed = 1000 + trial;
            auto est = static_monte_carlo(c, parts, cfg);
            EXPECT_EQ(est.samples, static_sample_count(0.1, est.q1, 0.05));
            failures += std::abs(est.estimate - exact) > cfg.epsilon;
        }
        EXPECT_LE(failures / 200.0, cfg.p_fail + 0.02);
    }
}

TEST(static_monte_carlo, deterministic_across_workers) {
    Circuit c = two_qubit_mixed();
    auto parts = decompose_circuit(c);
    SimulationConfig cfg;
    cfg.epsilon = 0.02;
    cfg.seed = 99;
    auto one = static_monte_carlo(c, parts, cfg);
    ASSERT_GT(one.samples, 3 * 4096);
    for (int w : {2, 3, 8}) {
        cfg.workers = w;
        auto many = static_monte_carlo(c, parts, cfg);
        EXPECT_EQ(std::memcmp(&one.estimate, &many.estimate, sizeof(double)), 0) << w;
        EXPECT_EQ(one.samples, many.samples);
    }
    cfg.seed = 100;
    cfg.workers = 1;
    EXPECT_NE(static_monte_carlo(c, parts, cfg).estimate, one.estimate);
}

TEST(lambda_star, examples) {
    EXPECT_LT(lambda_star(0.0, 3, 0.01).guaranteed, 1.0);
    EXPECT_NEAR(lambda_star(3.0, 2, 1e-12).guaranteed, 2.0, 1e-9);
    EXPECT_NEAR(lambda_star(3.0, 2, 0.01).guaranteed, std::sqrt(4 / 1.01), 1e-12);
    // sqrt(4 / 1.01) = 1.990074; the reference value is printed to four places.
    EXPECT_NEAR(lambda_star(3.0, 2, 0.01).guaranteed, 1.9900, 1e-4);
    EXPECT_NEAR(lambda_star(3.0, 2, 0.01).approximate, 2.0, 1e-12);
    EXPECT_THROW(lambda_star(1.0, 0, 0.01), Error);
}

TEST(constrained_path, large_delta_star_gives_constant_runtime) {
    const long constant = (long)std::ceil(2e4 * std::log(40.0));
    for (const Circuit &c : {three_th(), single({gates::T(), gates::H(), gates::T()}, "Z")}) {
        SimulationConfig cfg;
        cfg.delta_star = 10.0;
        auto est = constrained_path(c, cfg);
        EXPECT_EQ(est.samples, constant);
        EXPECT_EQ(est.replaced.size(), c.elements.size());
        EXPECT_LE(est.error_bound, 10.0);
    }
}

TEST(constrained_path, zero_delta_star_replaces_nothing_non_free) {
    Circuit c = three_th();
    auto parts = decompose_circuit(c);
    SimulationConfig cfg;
    cfg.delta_star = 0.0;
    auto est = constrained_path(c, parts, cfg);
    EXPECT_TRUE(est.replaced.empty());
    double q1 = 1.0;
    for (const auto &p : parts) {
        q1 *= p.l1();
    }
    EXPECT_EQ(est.samples, static_sample_count(cfg.c, q1, cfg.p_fail));
    EXPECT_NEAR(est.error_bound, cfg.c, 1e-12);
}

TEST(constrained_path, samples_nonincreasing_in_delta_star) {
    Circuit c = three_th();
    auto parts = decompose_circuit(c);
    SimulationConfig cfg;
    long previous = std::numeric_limits<long>::max();
    for (double d : {0.0, 0.2, 0.5, 1.0, 10.0}) {
        cfg.delta_star = d;
        auto est = constrained_path(c, parts, cfg);
        EXPECT_LE(est.samples, previous) << d;
        EXPECT_LE(est.error_bound, std::max(d, cfg.c) + 1e-12) << d;
        previous = est.samples;
    }
}

TEST(constrained_path, error_bound_and_coverage) {
    Circuit c = three_th();
    auto parts = decompose_circuit(c);
    const double exact = expectation_exact(c);
    SimulationConfig cfg;
    cfg.delta_star = 0.5;
    int covered = 0;
    for (int run = 0; run < 100; ++run) {
        cfg.seed = 7 + run;
        auto est = constrained_path(c, parts, cfg);
        EXPECT_LE(est.error_bound, 0.5);
        EXPECT_GE(est.estimate, -1.0);
        EXPECT_LE(est.estimate, 1.0);
        covered += std::abs(est.estimate - exact) <= est.error_bound;
    }
    EXPECT_GE(covered, 99);
}
