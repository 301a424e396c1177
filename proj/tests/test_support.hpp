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

#ifndef MAGICKIT_TESTS_TEST_SUPPORT_HPP
#define MAGICKIT_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "magickit/channels.hpp"
#include "magickit/fixtures.hpp"

namespace magickit::testing {

inline const double kPi = std::acos(-1.0);

inline DensityOperator pure(const CVector &v) {
    return DensityOperator::pure(v);
}

inline DensityOperator fixture_state(const char *name) {
    return DensityOperator::pure(fixture_ket(name));
}

inline DensityOperator random_qubit_state(std::mt19937_64 &rng, bool mixed) {
    std::normal_distribution<double> g;
    Bloch r(g(rng), g(rng), g(rng));
    r.normalize();
    if (mixed) {
        r *= std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    }
    return from_bloch(r);
}

inline DensityOperator random_stabilizer_mixture(const StabilizerSet &s, std::mt19937_64 &rng) {
    std::exponential_distribution<double> e;
    RVector w(s.size());
    for (auto &x : w) {
        x = e(rng);
    }
    w /= w.sum();
    return DensityOperator(unhvec(s.vectorized() * w, s.dim()));
}

/// Random mixture of three qubit CSPO polytope vertices.
inline ChoiOperator random_qubit_cspo(std::mt19937_64 &rng) {
    const auto &verts = qubit_cspo_vertices();
    std::uniform_int_distribution<size_t> pick(0, verts.size() - 1);
    std::vector<ChoiOperator> chosen;
    std::vector<double> w;
    std::exponential_distribution<double> e;
    double total = 0;
    for (int k = 0; k < 3; ++k) {
        chosen.push_back(verts[pick(rng)]);
        w.push_back(e(rng));
        total += w.back();
    }
    for (auto &x : w) {
        x /= total;
    }
    return mix(chosen, w);
}

inline ChoiOperator t_gate() {
    return choi_from_unitary(gates::T());
}

}  // namespace magickit::testing

#endif
