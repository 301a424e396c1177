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
#include <random>

#include "magickit/monotones.hpp"

#include "test_support.hpp"

using namespace magickit;
using namespace magickit::testing;

namespace {

CVector t_ket() {
    return fixture_ket("T");
}

CVector face_ket() {
    return fixture_ket("H");
}

CVector chi_ket() {
    return fixture_ket("chi");
}

CVector hoggar_ket() {
    return fixture_ket("hoggar");
}

}  // namespace

TEST(robustness_state, reference_values) {
    const auto &s1 = shared_stabilizer_set(1);
    auto zero = robustness_state(pure(CVector::Unit(2, 0)), s1);
    EXPECT_NEAR(zero.detail("R"), 0.0, 1e-9);
    EXPECT_NEAR(zero.detail("R_HC"), 1.0, 1e-9);
    EXPECT_NEAR(robustness_state(pure(face_ket()), s1).detail("R_HC"), std::sqrt(3.0), 1e-7);
    EXPECT_NEAR(robustness_state(pure(t_ket()), s1).detail("R_HC"), std::sqrt(2.0), 1e-7);
    EXPECT_NEAR(robustness_state(pure(chi_ket()), shared_stabilizer_set(2)).detail("R_HC"), std::sqrt(5.0), 1e-3);
}

TEST(robustness_state, hoggar) {
    auto r = robustness_state(pure(hoggar_ket()), shared_stabilizer_set(3));
    EXPECT_NEAR(r.detail("R_HC"), 3.8, 0.05);
}

TEST(robustness_state, decomposition_and_witness) {
    const auto &s = shared_stabilizer_set(2);
    auto rho = pure(chi_ket());
    auto r = robustness_state(rho, s);
    CMatrix rebuilt = unhvec(s.vectorized() * r.weights, s.dim());
    EXPECT_LT((rebuilt - rho.matrix()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(r.weights.cwiseAbs().sum(), r.detail("l1"), 1e-9);
    RVector scores = s.vectorized().transpose() * hvec(r.witness);
    EXPECT_LE(scores.cwiseAbs().maxCoeff(), 1.0 + 1e-7);
    EXPECT_NEAR((r.witness * rho.matrix()).trace().real(), r.detail("l1"), 1e-7);
}

TEST(robustness_channel, clifford_t_and_mixture) {
    const auto &s = shared_stabilizer_set(2);
    EXPECT_NEAR(robustness_channel(choi_from_unitary(gates::H()), s).value, 0.0, 1e-9);
    auto t = robustness_channel(t_gate(), s);
    EXPECT_NEAR(t.value, (std::sqrt(2.0) - 1.0) / 2.0, 1e-7);
    EXPECT_LE(t.detail("residual"), 1e-7);
    auto d = robustness_channel_decomposition(t_gate(), s);
    EXPECT_TRUE(is_cspo(d.plus, s).inside.feasible);
    EXPECT_TRUE(is_cspo(d.minus, s).inside.feasible);
    auto half = robustness_channel(mix({t_gate(), choi_from_unitary(gates::S())}, {0.5, 0.5}), s);
    EXPECT_LE(half.value, 0.5 * (1.0 + t.value) - 0.5 + 1e-9);
}

TEST(generalized_robustness_state, free_inputs) {
    const auto &s1 = shared_stabilizer_set(1);
    EXPECT_LE(generalized_robustness_state(DensityOperator::maximally_mixed(2), s1).value, 1e-9);
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 2; ++n) {
        auto rho = random_stabilizer_mixture(shared_stabilizer_set(n), rng);
        EXPECT_LE(generalized_robustness_state(rho, shared_stabilizer_set(n)).value, 1e-7);
    }
}

TEST(generalized_robustness_state, face_state_against_dual_grid) {
    const auto &s1 = shared_stabilizer_set(1);
    auto rho = pure(face_ket());
    auto g = generalized_robustness_state(rho, s1);
    EXPECT_GT(g.value, 0.0);
    EXPECT_LE(g.value, std::log2(std::sqrt(3.0)) + 1e-9);
    EXPECT_LE(g.detail("gap"), 1e-6);
    // alpha = a I + b m.sigma with |m|_inf = 1 is feasible for a >= b |m|_2 and a + b <= 1.
    Bloch r = bloch_vector(rho);
    double best = 1.0;
    const int steps = 100;
    for (int face = 0; face < 6; ++face) {
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                Bloch m;
                m[face % 3] = face < 3 ? 1.0 : -1.0;
                m[(face + 1) % 3] = -1.0 + 2.0 * i / steps;
                m[(face + 2) % 3] = -1.0 + 2.0 * j / steps;
                double b = 1.0 / (1.0 + m.norm());
                best = std::max(best, 1.0 + b * (m.dot(r) - 1.0));
            }
        }
    }
    double t = std::exp2(g.value);
    EXPECT_LE(best, t + 1e-7);
    EXPECT_LE(t - best, 1e-6);
    double r_state = robustness_state(rho, s1).value;
    EXPECT_LE(t - 1.0, r_state + 1e-7);
}

TEST(generalized_robustness_state, ordering_on_fixtures) {
    for (auto [ket, n] : {std::pair{t_ket(), 1}, std::pair{face_ket(), 1}, std::pair{chi_ket(), 2}}) {
        const auto &s = shared_stabilizer_set(n);
        auto rho = pure(ket);
        auto g = generalized_robustness_state(rho, s);
        auto r = robustness_state(rho, s);
        EXPECT_LE(g.detail("R_g"), r.value + 1e-7);
        EXPECT_LE(g.value, r.detail("LR") + 1e-7);
    }
}

TEST(log_generalized_robustness_channel, identity_and_t_gate) {
    const auto &s = shared_stabilizer_set(2);
    EXPECT_LE(log_generalized_robustness_channel(identity_channel(2), s).value, 1e-9);
    auto t = log_generalized_robustness_channel(t_gate(), s);
    EXPECT_NEAR(t.detail("lambda"), 4.0 - 2.0 * std::sqrt(2.0), 1e-6);
    EXPECT_GT(t.value, 1e-4);
    EXPECT_LE(t.detail("gap"), 1e-5);
    EXPECT_GE(t.detail("gap"), -1e-9);
}

TEST(log_generalized_robustness_channel, dual_never_exceeds_primal) {
    const auto &s = shared_stabilizer_set(2);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
        CMatrix u = random_clifford(1, trial) * gates::T() * random_clifford(1, trial + 100);
        ChoiOperator c = mix({choi_from_unitary(u), random_qubit_cspo(rng)}, {0.7, 0.3});
        auto sol = solve_generalized_robustness_channel(c, s);
        EXPECT_GE(sol.min_eigenvalue, -1e-12);
        EXPECT_LE(sol.dual_lambda, sol.lambda + 1e-9);
        // Random (alpha, beta) rescaled into the feasible set are also lower bounds.
        CMatrix a = CMatrix::Random(4, 4);
        CMatrix b = CMatrix::Random(2, 2);
        double v = generalized_robustness_channel_dual_value(c, s, a * a.adjoint(), hermitian_part(b));
        EXPECT_LE(v, sol.lambda + 1e-9);
    }
}

TEST(dmin_state, reference_values) {
    const auto &s1 = shared_stabilizer_set(1);
    EXPECT_NEAR(dmin_state(pure(CVector::Unit(2, 0)), s1).value, 0.0, 1e-12);
    EXPECT_NEAR(dmin_state(pure(t_ket()), s1).value, 0.22844669683638807, 1e-9);
    EXPECT_NEAR(dmin_state(pure(face_ket()), s1).value, -std::log2((1 + 1 / std::sqrt(3.0)) / 2), 1e-9);
}

TEST(dmin_state, additive_over_case_classes) {
    const auto &s1 = shared_stabilizer_set(1);
    const auto &s2 = shared_stabilizer_set(2);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        for (int mask = 0; mask < 4; ++mask) {
            auto a = random_qubit_state(rng, mask & 1);
            auto b = random_qubit_state(rng, mask & 2);
            double lhs = dmin_state(tensor(a, b), s2).value;
            double rhs = dmin_state(a, s1).value + dmin_state(b, s1).value;
            EXPECT_NEAR(lhs, rhs, 1e-6) << "mask " << mask;
        }
    }
}

TEST(dmin_eps_state, zero_epsilon_and_monotone) {
    const auto &s1 = shared_stabilizer_set(1);
    auto rho = pure(t_ket());
    double d0 = dmin_state(rho, s1).value;
    EXPECT_NEAR(dmin_eps_state(rho, s1, 0.0).value, d0, 1e-5);
    double prev = -1;
    for (double eps : {0.0, 0.05, 0.1, 0.3, 0.6, 0.9, 0.99}) {
        double v = dmin_eps_state(rho, s1, eps).value;
        EXPECT_GE(v, prev - 1e-7) << eps;
        prev = v;
    }
    EXPECT_GE(dmin_eps_state(rho, s1, 0.1).value, d0 - 1e-7);
    EXPECT_THROW(dmin_eps_state(rho, s1, 1.0), Error);
}

TEST(dmin_eps_state, test_operator_is_feasible) {
    const auto &s2 = shared_stabilizer_set(2);
    DensityOperator choi(t_gate().normalized());
    auto r = dmin_eps_state(choi, s2, 0.01);
    EXPECT_NEAR(r.value, dmin_state(choi, s2).value, 0.2);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r.witness);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-8);
    EXPECT_GE((r.witness * choi.matrix()).trace().real(), 0.99 - 1e-8);
}

TEST(dmin_channel_bracket, free_and_t_gate) {
    const auto &s = shared_stabilizer_set(2);
    for (const auto &c : {choi_from_unitary(gates::H()), replacement_channel(2, DensityOperator::pure(CVector::Unit(2, 1)).matrix())}) {
        auto b = dmin_channel_bracket(c, s, 7, 4);
        EXPECT_LE(b.lower, 1e-9);
        EXPECT_LE(b.upper_estimate, 1e-9);
    }
    auto t = dmin_channel_bracket(t_gate(), s, 7);
    EXPECT_GT(t.lower, 1e-4);
    EXPECT_GE(t.upper_estimate, t.lower);
    EXPECT_FALSE(t.upper_certified);
}

TEST(geometric_measure, reference_values) {
    const auto &s1 = shared_stabilizer_set(1);
    EXPECT_NEAR(geometric_measure(pure(CVector::Unit(2, 0)), s1).value, 0.0, 1e-12);
    EXPECT_NEAR(geometric_measure(pure(t_ket()), s1).value, 1 - std::pow(std::cos(kPi / 8), 2), 1e-9);
    auto mixed = DensityOperator(0.9 * pure(t_ket()).matrix() + 0.05 * CMatrix::Identity(2, 2));
    double g = geometric_measure(mixed, s1).value;
    EXPECT_GT(g, 0.0);
    EXPECT_LT(g, geometric_measure(pure(t_ket()), s1).value);
}

TEST(geometric_measure, free_mixtures_and_subadditivity) {
    std::mt19937_64 rng(9);
    for (int n = 1; n <= 2; ++n) {
        const auto &s = shared_stabilizer_set(n);
        for (int k = 0; k < 5; ++k) {
            EXPECT_LE(geometric_measure(random_stabilizer_mixture(s, rng), s).value, 1e-7);
        }
    }
    const auto &s1 = shared_stabilizer_set(1);
    const auto &s2 = shared_stabilizer_set(2);
    for (int k = 0; k < 5; ++k) {
        auto a = random_qubit_state(rng, true);
        auto b = random_qubit_state(rng, k % 2);
        double lhs = geometric_measure(tensor(a, b), s2).value;
        EXPECT_LE(lhs, geometric_measure(a, s1).value + geometric_measure(b, s1).value + 1e-5);
    }
}

TEST(quasi_decompose_channel, clifford_and_t_gate) {
    const auto &s = shared_stabilizer_set(2);
    auto cl = quasi_decompose_channel(choi_from_unitary(gates::from_word("SH")), s);
    EXPECT_EQ(cl.lambda, 1.0);
    EXPECT_EQ(cl.l1(), 1.0);
    auto t = quasi_decompose_channel(t_gate(), s);
    EXPECT_GT(t.lambda, 1.0);
    EXPECT_LE(t.reconstruction_error(t_gate()), 1e-7);
    EXPECT_TRUE(is_cspo(t.positive, s).inside.feasible);
    EXPECT_GE(t.negative.min_eigenvalue(), -1e-9);
    EXPECT_LE(t.negative.trace_preservation_error(), 1e-8);
}

TEST(monotones, faithful_on_free_and_positive_on_magic) {
    const auto &s1 = shared_stabilizer_set(1);
    const auto &s2 = shared_stabilizer_set(2);
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
        auto rho = random_stabilizer_mixture(s1, rng);
        EXPECT_LE(robustness_state(rho, s1).value, 1e-7);
        EXPECT_LE(dmin_state(rho, s1).value, 1e-7);
        if (k % 10 == 0) {
            EXPECT_LE(generalized_robustness_state(rho, s1).value, 1e-7);
            EXPECT_LE(geometric_measure(rho, s1).value, 1e-7);
            auto c = random_qubit_cspo(rng);
            EXPECT_LE(robustness_channel(c, s2).value, 1e-7);
            EXPECT_LE(log_generalized_robustness_channel(c, s2).value, 1e-7);
        }
    }
    for (const auto &ket : {t_ket(), face_ket()}) {
        auto rho = pure(ket);
        EXPECT_GT(robustness_state(rho, s1).value, 1e-4);
        EXPECT_GT(generalized_robustness_state(rho, s1).value, 1e-4);
        EXPECT_GT(dmin_state(rho, s1).value, 1e-4);
        EXPECT_GT(geometric_measure(rho, s1).value, 1e-4);
    }
    EXPECT_GT(robustness_channel(t_gate(), s2).value, 1e-4);
}

TEST(monotones, nonincreasing_under_sampled_cspos) {
    const auto &s1 = shared_stabilizer_set(1);
    std::mt19937_64 rng(33);
    for (int k = 0; k < 100; ++k) {
        auto rho = random_qubit_state(rng, k % 2);
        auto e = random_qubit_cspo(rng);
        auto out = apply_channel(e, rho);
        EXPECT_LE(robustness_state(out, s1).value, robustness_state(rho, s1).value + 1e-6);
        EXPECT_LE(generalized_robustness_state(out, s1).value, generalized_robustness_state(rho, s1).value + 1e-6);
        EXPECT_LE(dmin_state(out, s1).value, dmin_state(rho, s1).value + 1e-6);
        EXPECT_LE(geometric_measure(out, s1).value, geometric_measure(rho, s1).value + 1e-6);
    }
}

TEST(stabilizer_set_for_dim, caps) {
    EXPECT_EQ(stabilizer_set_for_dim(4).qubits(), 2);
    EXPECT_THROW(stabilizer_set_for_dim(16), Error);
    EXPECT_THROW(stabilizer_set_for_dim(6), Error);
}
