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

#include "magickit/interconvert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magickit {

namespace {

constexpr double kDedupe = 1e-9;

// Supporting-plane tolerance for hull construction; points are unit-scale.
constexpr double kPlaneTol = 1e-10;

std::vector<Bloch> orbit_of(const Bloch &r) {
    std::vector<Bloch> out;
    for (const auto &t : bloch_transforms()) {
        Bloch v = t.apply(r);
        bool seen = std::any_of(out.begin(), out.end(), [&](const Bloch &u) {
            return (u - v).cwiseAbs().maxCoeff() <= kDedupe;
        });
        if (!seen) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<Bloch> hull_points(const Bloch &r) {
    std::vector<Bloch> pts = orbit_of(r);
    for (const Bloch &v : octahedron_vertices()) {
        bool seen = std::any_of(pts.begin(), pts.end(), [&](const Bloch &u) {
            return (u - v).cwiseAbs().maxCoeff() <= kDedupe;
        });
        if (!seen) {
            pts.push_back(v);
        }
    }
    return pts;
}

// Plane through a, b, c oriented away from the origin; false when the points are collinear.
bool plane_through(const Bloch &a, const Bloch &b, const Bloch &c, Plane &out) {
    Bloch n = (b - a).cross(c - a);
    double len = n.norm();
    if (len < 1e-12) {
        return false;
    }
    n /= len;
    double off = n.dot(a);
    if (off < 0) {
        n = -n;
        off = -off;
    }
    out.normal = n;
    out.offset = off;
    return true;
}

double point_triangle_distance(const Bloch &p, const Bloch &a, const Bloch &b, const Bloch &c) {
    // Closest point by region classification over the triangle's Voronoi regions.
    Bloch ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) {
        return ap.norm();
    }
    Bloch bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) {
        return bp.norm();
    }
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        double v = d1 / (d1 - d3);
        return (p - (a + v * ab)).norm();
    }
    Bloch cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) {
        return cp.norm();
    }
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        double w = d2 / (d2 - d6);
        return (p - (a + w * ac)).norm();
    }
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + w * (c - b))).norm();
    }
    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return (p - (a + ab * v + ac * w)).norm();
}

}  // namespace

Bloch BlochTransform::apply(const Bloch &r) const {
    return Bloch(sign[0] * r[source[0]], sign[1] * r[source[1]], sign[2] * r[source[2]]);
}

const std::vector<BlochTransform> &bloch_transforms() {
    static const std::vector<BlochTransform> table = {
        {"I", {0, 1, 2}, {1, 1, 1}},        {"SH", {1, 2, 0}, {1, 1, 1}},
        {"HSZ", {2, 0, 1}, {1, 1, 1}},      {"X", {0, 1, 2}, {1, -1, -1}},
        {"SHXZ", {1, 2, 0}, {1, -1, -1}},   {"HS", {2, 0, 1}, {1, -1, -1}},
        {"Z", {0, 1, 2}, {-1, -1, 1}},      {"SHX", {1, 2, 0}, {-1, -1, 1}},
        {"HXSZ", {2, 0, 1}, {-1, -1, 1}},   {"Y", {0, 1, 2}, {-1, 1, -1}},
        {"SHZ", {1, 2, 0}, {-1, 1, -1}},    {"HXS", {2, 0, 1}, {-1, 1, -1}},
        {"SHS", {0, 2, 1}, {1, 1, -1}},     {"HZ", {2, 1, 0}, {1, 1, -1}},
        {"XZS", {1, 0, 2}, {1, 1, -1}},     {"SHSX", {0, 2, 1}, {1, -1, 1}},
        {"H", {2, 1, 0}, {1, -1, 1}},       {"ZS", {1, 0, 2}, {1, -1, 1}},
        {"SHSZ", {0, 2, 1}, {-1, 1, 1}},    {"HX", {2, 1, 0}, {-1, 1, 1}},
        {"S", {1, 0, 2}, {-1, 1, 1}},       {"SHSXZ", {0, 2, 1}, {-1, -1, -1}},
        {"HY", {2, 1, 0}, {-1, -1, -1}},    {"XS", {1, 0, 2}, {-1, -1, -1}},
    };
    return table;
}

std::vector<Bloch> clifford_orbit(const DensityOperator &rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "clifford_orbit: qubit states only");
    }
    return orbit_of(bloch_vector(rho));
}

std::vector<Bloch> octahedron_vertices() {
    return {Bloch(1, 0, 0), Bloch(-1, 0, 0), Bloch(0, 1, 0), Bloch(0, -1, 0), Bloch(0, 0, 1), Bloch(0, 0, -1)};
}

InterconversionSystem build_interconversion_system(const DensityOperator &rho, const DensityOperator &sigma) {
    if (rho.dim() != 2 || sigma.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "interconversion: qubit states only");
    }
    InterconversionSystem sys;
    sys.orbit = clifford_orbit(rho);
    sys.stab_vertices = octahedron_vertices();
    sys.a = RMatrix::Zero(4, 31);
    for (int k = 0; k < 24; ++k) {
        sys.a.block(0, k, 3, 1) = sys.orbit[k % sys.orbit.size()];
    }
    for (int k = 0; k < 6; ++k) {
        sys.a.block(0, 24 + k, 3, 1) = sys.stab_vertices[k];
    }
    sys.a.row(3).head(30).setOnes();
    sys.a(3, 30) = 1.0;
    sys.b.resize(4);
    sys.b.head(3) = bloch_vector(sigma);
    sys.b[3] = 1.0;
    return sys;
}

FeasibilityOutcome qubit_convertible(const DensityOperator &rho, const DensityOperator &sigma) {
    auto sys = build_interconversion_system(rho, sigma);
    return lp_feasibility_with_certificate(sys.a, sys.b);
}

bool ReachableHull::contains(const Bloch &r, double tolerance) const {
    return std::all_of(planes.begin(), planes.end(), [&](const Plane &p) { return p.normal.dot(r) <= p.offset + tolerance; });
}

double ReachableHull::distance(const Bloch &r) const {
    if (contains(r, 0.0)) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto &f : facets) {
        best = std::min(best, point_triangle_distance(r, points[f[0]], points[f[1]], points[f[2]]));
    }
    return best;
}

ReachableHull reachable_hull(const DensityOperator &rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "reachable_hull: qubit states only");
    }
    ReachableHull h;
    h.points = hull_points(bloch_vector(rho));
    const int n = (int)h.points.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                Plane pl;
                if (!plane_through(h.points[i], h.points[j], h.points[k], pl)) {
                    continue;
                }
                bool supporting = std::all_of(h.points.begin(), h.points.end(),
                                              [&](const Bloch &p) { return pl.normal.dot(p) <= pl.offset + kPlaneTol; });
                if (supporting) {
                    h.facets.push_back({i, j, k});
                    h.planes.push_back(pl);
                }
            }
        }
    }
    return h;
}

bool geometric_convertible(const DensityOperator &rho, const DensityOperator &sigma) {
    if (sigma.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "interconversion: qubit states only");
    }
    return reachable_hull(rho).contains(bloch_vector(sigma));
}

CanonicalBloch canonicalize_to_px(const Bloch &r) {
    const auto &table = bloch_transforms();
    const double tol = 1e-12;
    for (size_t k = 0; k < table.size(); ++k) {
        Bloch v = table[k].apply(r);
        if (v.minCoeff() >= -tol && v[0] <= v[1] + tol && v[0] <= v[2] + tol) {
            return {v, (int)k};
        }
    }
    // P_X is a fundamental domain of the 24 rotations, so this is not reached.
    throw Error(ErrorCode::numerical_failure, "canonicalize_to_px: no table row reaches P_X");
}

std::array<Bloch, 10> facet_neighbors(const Bloch &r1) {
    const double x = r1[0], y = r1[1], z = r1[2];
    return {Bloch(x, y, z),  Bloch(z, x, y), Bloch(y, z, x), Bloch(-x, z, y), Bloch(-y, x, z),
            Bloch(y, -x, z), Bloch(0, 0, 1), Bloch(0, 1, 0), Bloch(-z, y, x), Bloch(z, y, -x)};
}

bool FacetSet::contains(const Bloch &r, double tolerance) const {
    return std::all_of(planes.begin(), planes.end(), [&](const Plane &p) { return p.normal.dot(r) <= p.offset + tolerance; });
}

std::vector<FacetSet> facet_sets(const Bloch &r1) {
    static const std::vector<std::vector<std::array<int, 3>>> lists = {
        {{1, 6, 7}, {1, 7, 5}, {1, 5, 4}, {1, 4, 3}, {1, 3, 2}, {1, 2, 6}, {3, 4, 8}},
        {{1, 3, 2}, {1, 2, 7}, {1, 7, 4}, {1, 4, 8}, {1, 8, 3}},
        {{1, 10, 3}, {1, 3, 2}, {1, 2, 4}, {1, 4, 9}, {1, 9, 8}, {1, 8, 10}, {4, 2, 7}},
    };
    auto nb = facet_neighbors(r1);
    auto pts = hull_points(r1);
    std::vector<FacetSet> out;
    for (size_t k = 0; k < lists.size(); ++k) {
        FacetSet fs;
        fs.possibility = (int)k + 1;
        fs.facets = lists[k];
        bool ok = true;
        for (const auto &f : fs.facets) {
            Plane pl;
            if (!plane_through(nb[f[0] - 1], nb[f[1] - 1], nb[f[2] - 1], pl)) {
                ok = false;
                pl.normal = Bloch::Zero();
                pl.offset = 1.0;
            }
            fs.planes.push_back(pl);
        }
        fs.matches = ok && std::all_of(pts.begin(), pts.end(), [&](const Bloch &p) { return fs.contains(p); });
        out.push_back(std::move(fs));
    }
    return out;
}

double interconversion_distance(const DensityOperator &rho, const DensityOperator &sigma) {
    if (sigma.dim() != 2) {
        throw Error(ErrorCode::unsupported_dimension, "interconversion: qubit states only");
    }
    return reachable_hull(rho).distance(bloch_vector(sigma)) / 2.0;
}

}  // namespace magickit
