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

#ifndef MAGICKIT_INTERCONVERT_HPP
#define MAGICKIT_INTERCONVERT_HPP

#include <array>
#include <string>
#include <vector>

#include "magickit/stabilizer.hpp"

namespace magickit {

/// Signed permutation of Bloch coordinates: out[k] = sign[k] * in[source[k]].
struct BlochTransform {
    std::string gate;
    std::array<int, 3> source;
    std::array<int, 3> sign;

    Bloch apply(const Bloch &r) const;
};

/// The 24 single-qubit Clifford actions on Bloch vectors, in table order (identity first).
const std::vector<BlochTransform> &bloch_transforms();

/// Clifford images of rho's Bloch vector, deduplicated within 1e-9 (first occurrence kept).
std::vector<Bloch> clifford_orbit(const DensityOperator &rho);

/// (+-1,0,0), (0,+-1,0), (0,0,+-1).
std::vector<Bloch> octahedron_vertices();

/// A x = b, x >= 0, with 31 columns: 24 orbit images (padded by repetition), the 6 octahedron
/// vertices, and a slack on the normalization row.
struct InterconversionSystem {
    RMatrix a;
    RVector b;
    std::vector<Bloch> orbit;
    std::vector<Bloch> stab_vertices;
};

InterconversionSystem build_interconversion_system(const DensityOperator &rho, const DensityOperator &sigma);

/// Feasible iff sigma is reachable from rho by a qubit CSPO; otherwise carries a Farkas certificate.
FeasibilityOutcome qubit_convertible(const DensityOperator &rho, const DensityOperator &sigma);

/// Outward plane n.p <= offset with |n| = 1.
struct Plane {
    Bloch normal;
    double offset = 0.0;
};

/// Convex hull of the orbit plus the octahedron. Always three dimensional.
struct ReachableHull {
    std::vector<Bloch> points;
    /// Every supporting triple; coplanar faces appear once per triple.
    std::vector<std::array<int, 3>> facets;
    std::vector<Plane> planes;

    bool contains(const Bloch &r, double tolerance = 1e-9) const;
    /// Euclidean distance from r to the hull, 0 inside.
    double distance(const Bloch &r) const;
};

ReachableHull reachable_hull(const DensityOperator &rho);

/// Hull membership test, independent of the LP.
bool geometric_convertible(const DensityOperator &rho, const DensityOperator &sigma);

struct CanonicalBloch {
    Bloch canonical;
    /// Index into bloch_transforms().
    int transform = 0;
};

/// Maps r into P_X = {0 <= r1, r1 <= r2, r1 <= r3}; first table row that lands there.
CanonicalBloch canonicalize_to_px(const Bloch &r);

/// r_1 ... r_10 for a canonical r_1 (index 0 holds r_1).
std::array<Bloch, 10> facet_neighbors(const Bloch &r1);

struct FacetSet {
    int possibility = 0;
    /// 1-based neighbor labels, as r_i.
    std::vector<std::array<int, 3>> facets;
    std::vector<Plane> planes;
    /// True when every orbit and octahedron point lies on the inner side of every plane.
    bool matches = false;

    bool contains(const Bloch &r, double tolerance = 1e-9) const;
};

/// The three candidate facet lists covering P_X around r_1.
std::vector<FacetSet> facet_sets(const Bloch &r1);

/// Half the Euclidean distance from bloch(sigma) to the hull reachable from rho.
double interconversion_distance(const DensityOperator &rho, const DensityOperator &sigma);

}  // namespace magickit

#endif
