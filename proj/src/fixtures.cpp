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

#include "magickit/fixtures.hpp"

#include <cmath>

#include "magickit/stabilizer.hpp"

namespace magickit {

namespace {

const double kPi = std::acos(-1.0);

CMatrix diagonal(std::initializer_list<Complex> d) {
    CVector v(d.size());
    int k = 0;
    for (Complex x : d) {
        v[k++] = x;
    }
    return v.asDiagonal();
}

}  // namespace

CVector fixture_ket(std::string_view name) {
    if (name == "zero") {
        return CVector::Unit(2, 0);
    }
    if (name == "plus") {
        return CVector::Constant(2, 1.0 / std::sqrt(2.0));
    }
    if (name == "T") {
        CVector v(2);
        v << 1.0, std::polar(1.0, kPi / 4);
        return v / std::sqrt(2.0);
    }
    if (name == "H") {
        double theta = std::acos(1.0 / std::sqrt(3.0));
        CVector v(2);
        v << std::cos(theta / 2), std::polar(std::sin(theta / 2), kPi / 4);
        return v;
    }
    if (name == "chi") {
        // +1 eigenvector of (XX + XY + XZ + YI + ZI)/sqrt 5.
        CVector v(4);
        v << 1.0 + std::sqrt(5.0), 0.0, Complex(1, 1), Complex(1, 1);
        return v.normalized();
    }
    if (name == "hoggar") {
        CVector v = CVector::Ones(8);
        v[0] = Complex(-1, 2);
        return v / std::sqrt(12.0);
    }
    throw Error(ErrorCode::missing_fixture, "unknown state fixture '" + std::string(name) + "'");
}

std::vector<std::string> fixture_state_names() {
    return {"zero", "plus", "T", "H", "chi", "hoggar"};
}

CMatrix fixture_gate(std::string_view name) {
    if (name == "T-gate") {
        return gates::T();
    }
    if (name == "CS-gate") {
        return diagonal({1, 1, 1, Complex(0, 1)});
    }
    if (name == "CCZ-gate") {
        return diagonal({1, 1, 1, 1, 1, 1, 1, -1});
    }
    if (name == "H-state-gate") {
        // Shortest rotation taking +x to (1,1,1)/sqrt 3.
        Bloch from(1, 0, 0), to = Bloch::Ones().normalized();
        Bloch axis = from.cross(to).normalized();
        double angle = std::acos(from.dot(to));
        CMatrix n = axis[0] * gates::X() + axis[1] * gates::Y() + axis[2] * gates::Z();
        return std::cos(angle / 2) * gates::I() - Complex(0, 1) * std::sin(angle / 2) * n;
    }
    throw Error(ErrorCode::missing_fixture, "unknown gate fixture '" + std::string(name) + "'");
}

std::vector<std::string> fixture_gate_names() {
    return {"T-gate", "CS-gate", "CCZ-gate", "H-state-gate"};
}

CVector gate_state(const CMatrix &u) {
    const auto dim = u.rows();
    return u * CVector::Constant(dim, 1.0 / std::sqrt(double(dim)));
}

}  // namespace magickit
