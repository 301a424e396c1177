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

#include "magickit/bounds.hpp"
#include "magickit/channels.hpp"
#include "magickit/monotones.hpp"
#include "test_support.hpp"

using namespace magickit;
using namespace magickit::testing;

namespace {

constexpr double kDminT = 0.22844669683638807;

void expect_code(ErrorCode code, const std::function<void()> &f) {
    try {
        f();
        ADD_FAILURE() << "no throw";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

}  // namespace

TEST(cost_upper_bound, examples) {
    EXPECT_EQ(cost_upper_bound(0.0, 0.2284), 0);
    EXPECT_EQ(cost_upper_bound(std::log2(std::sqrt(3.0)), 0.2284), 4);
    EXPECT_EQ(cost_upper_bound(2 * 0.2284, 0.2284), 2);
    // Within the guard band of an integer the ratio snaps down.
    EXPECT_EQ(cost_upper_bound(2 * 0.2284 * (1 + 5e-10), 0.2284), 2);
    EXPECT_EQ(cost_upper_bound(2 * 0.2284 * (1 + 1e-6), 0.2284), 3);
    expect_code(ErrorCode::free_resource_state, [] { cost_upper_bound(1.0, 0.0); });
    expect_code(ErrorCode::free_resource_state, [] { cost_upper_bound(1.0, 1e-13); });
    expect_code(ErrorCode::invalid_input, [] { cost_upper_bound(-1.0, 0.3); });
    expect_code(ErrorCode::invalid_input, [] { cost_upper_bound(NAN, 0.3); });
}

TEST(cost_upper_bound, monotone_on_grid) {
    for (int i = 0; i <= 40; ++i) {
        double lr = 0.05 * i;
        for (int j = 1; j <= 40; ++j) {
            double d = 0.025 * j;
            EXPECT_GE(cost_upper_bound(lr, d), cost_upper_bound(lr, d + 0.025));
            EXPECT_LE(cost_upper_bound(lr, d), cost_upper_bound(lr + 0.05, d));
        }
    }
}

TEST(cost_lower_bound, examples_and_cross_module) {
    EXPECT_EQ(cost_lower_bound(0.0, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(cost_lower_bound(0.37, 0.37), 1.0);
    expect_code(ErrorCode::free_resource_state, [] { cost_lower_bound(1.0, 0.0); });

    auto t_choi = t_gate();
    const auto &s1 = shared_stabilizer_set(1);
    const auto &s2 = shared_stabilizer_set(2);
    double lrg_gate = log_generalized_robustness_channel(t_choi, s2).value;
    double lrg_state = generalized_robustness_state(fixture_state("T"), s1).value;
    double lower = cost_lower_bound(lrg_gate, lrg_state);
    double lr_gate = robustness_channel(t_choi, s2).detail("LR");
    long upper = cost_upper_bound(lr_gate, dmin_state(fixture_state("T"), s1).value);
    EXPECT_GT(lower, 0.0);
    EXPECT_LE(lower, upper + 1e-9);
}

TEST(distill_upper_bound, examples) {
    EXPECT_EQ(distill_upper_bound(0.0, kDminT), 0.0);
    EXPECT_DOUBLE_EQ(distill_upper_bound(0.2284, 0.2284), 1.0);
    expect_code(ErrorCode::free_resource_state, [] { distill_upper_bound(0.2, 0.0); });

    auto bracket = dmin_channel_bracket(t_gate(), shared_stabilizer_set(2));
    EXPECT_GT(distill_upper_bound(bracket.lower, kDminT), 0.0);

    auto cspo = choi_from_unitary(gates::H());
    EXPECT_NEAR(dmin_channel_bracket(cspo, shared_stabilizer_set(2)).lower, 0.0, 1e-9);
}

TEST(distill_lower_bound, examples_and_monotone_in_epsilon) {
    EXPECT_EQ(distill_lower_bound(0.0, 0.5), 0);
    EXPECT_EQ(distill_lower_bound(2 * 0.5, 0.5), 2);
    EXPECT_EQ(distill_lower_bound(2 * 0.5 * (1 - 5e-10), 0.5), 2);
    EXPECT_EQ(distill_lower_bound(2 * 0.5 * (1 - 1e-6), 0.5), 1);
    expect_code(ErrorCode::free_resource_state, [] { distill_lower_bound(1.0, 0.0); });

    // log2 R_HC of |T> is log2 sqrt 2.
    double lr_t = std::log2(robustness_state(fixture_state("T"), shared_stabilizer_set(1)).detail("R_HC"));
    EXPECT_NEAR(lr_t, 0.5, 1e-7);
    DensityOperator choi_state(t_gate().normalized());
    const auto &s2 = shared_stabilizer_set(2);
    long previous = -1;
    for (double eps : {0.0, 0.01, 0.05, 0.1, 0.2}) {
        long k = distill_lower_bound(dmin_eps_state(choi_state, s2, eps).value, lr_t);
        EXPECT_GE(k, 0);
        EXPECT_GE(k, previous) << eps;
        previous = k;
    }
}

TEST(bounds, base_invariance) {
    const double ln2 = std::log(2.0);
    for (double lr : {0.1, 0.45, 0.79, 1.3}) {
        for (double d : {0.2284, 0.3425, 0.5}) {
            EXPECT_EQ(cost_upper_bound(lr, d), cost_upper_bound(lr * ln2, d * ln2));
            EXPECT_NEAR(cost_lower_bound(lr, d), cost_lower_bound(lr * ln2, d * ln2), 1e-12);
            EXPECT_NEAR(distill_upper_bound(lr, d), distill_upper_bound(lr * ln2, d * ln2), 1e-12);
            EXPECT_EQ(distill_lower_bound(lr, d), distill_lower_bound(lr * ln2, d * ln2));
        }
    }
}

TEST(bounds, distill_lower_not_above_upper_on_fixtures) {
    const auto &s1 = shared_stabilizer_set(1);
    const auto &s2 = shared_stabilizer_set(2);
    for (const char *name : {"T", "H"}) {
        auto psi = fixture_state(name);
        double lr = std::log2(robustness_state(psi, s1).detail("R_HC"));
        double dmin = dmin_state(psi, s1).value;
        for (const char *gate : {"T-gate", "H-state-gate"}) {
            auto c = choi_from_unitary(fixture_gate(gate));
            long lower = distill_lower_bound(dmin_eps_state(DensityOperator(c.normalized()), s2, 0.0).value, lr);
            double upper = distill_upper_bound(dmin_channel_bracket(c, s2).upper_estimate, dmin);
            EXPECT_LE(lower, upper + 1e-9) << name << " " << gate;
        }
    }
}

TEST(cost_dimension_sufficient, threshold) {
    EXPECT_TRUE(cost_dimension_sufficient(0.4, 0.5));
    EXPECT_TRUE(cost_dimension_sufficient(0.5, 0.5));
    EXPECT_FALSE(cost_dimension_sufficient(0.6, 0.5));
}

TEST(table1_report, frozen_rows) {
    auto report = table1_report();
    EXPECT_NEAR(report.dmin_resource, kDminT, 1e-9);
    struct Row {
        const char *label;
        double r_hc;
        long bound;
        long bound_hc;
    };
    const Row frozen[] = {
        {"H", 1.732050807569, 2, 4},        {"CS_{1,2}", 2.2, 3, 5},
        {"T_{1,2,3}", 2.218951416497, 4, 6}, {"chi", 2.236067977500, 4, 6},
        {"CCZ", 2.555555555556, 4, 6},       {"CS_{12,13}", 2.555555555556, 4, 6},
        {"T_1 CS_{2,3}", 2.800609665441, 5, 7}, {"T_1 CS_{12,13}", 3.121320343560, 5, 8},
        {"Hoggar", 3.8, 6, 9},
    };
    ASSERT_EQ(report.rows.size(), std::size(frozen));
    for (size_t k = 0; k < report.rows.size(); ++k) {
        const auto &r = report.rows[k];
        EXPECT_EQ(r.label, frozen[k].label);
        EXPECT_NEAR(r.r_hc, frozen[k].r_hc, 1e-7) << r.label;
        EXPECT_EQ(r.bound_state, frozen[k].bound) << r.label;
        EXPECT_EQ(r.bound_hc, frozen[k].bound_hc) << r.label;
        EXPECT_TRUE(r.matches_expected) << r.label;
        EXPECT_FALSE(r.flagged) << r.label;
    }
    ASSERT_TRUE(report.rows[0].bound_channel.has_value());
    EXPECT_EQ(*report.rows[0].bound_channel, 2);
    EXPECT_NEAR(*report.rows[0].lr_channel, report.rows[0].lr_state, 1e-6);
    EXPECT_EQ(report.rows[3].expected, 4);
    EXPECT_EQ(report.rows[8].expected, 6);

    auto small = table1_report(false);
    EXPECT_EQ(small.rows.size(), 3u);
}
