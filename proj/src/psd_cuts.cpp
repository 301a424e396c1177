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

#include "magickit/psd_cuts.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace magickit {

namespace {

struct Cut {
    int block;
    CVector v;
    RVector row;
    double rhs;
};

struct BlockData {
    int dim;
    RMatrix coeffs;  // column j = hvec(F_j)
    RVector constant;
};

Cut make_cut(const BlockData &b, int index, const CVector &v) {
    CVector u = v.normalized();
    RVector h = hvec(u * u.adjoint());
    // v^dagger (sum x_j F_j - C) v >= 0  written as  -(h^T F) x <= -h.C
    return {index, u, -(b.coeffs.transpose() * h), -h.dot(b.constant)};
}

std::vector<CVector> seed_vectors(int d, CutSeeding seeding) {
    std::vector<CVector> out;
    if (seeding == CutSeeding::none) {
        return out;
    }
    for (int i = 0; i < d; ++i) {
        out.push_back(CVector::Unit(d, i));
    }
    if (seeding == CutSeeding::basis_and_pairs) {
        const Complex phases[] = {1.0, -1.0, Complex(0, 1), Complex(0, -1)};
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                for (Complex ph : phases) {
                    CVector v = CVector::Zero(d);
                    v[i] = 1.0;
                    v[j] = ph;
                    out.push_back(v);
                }
            }
        }
    }
    return out;
}

double block_min_eig(const BlockData &b, const RVector &x) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(unhvec(b.coeffs * x - b.constant, b.dim), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

bool all_psd(const std::vector<BlockData> &blocks, const RVector &x) {
    for (const auto &b : blocks) {
        if (block_min_eig(b, x) < 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

ConicSolution solve_with_psd_cuts(const ConicProblem &p, const CutOptions &o) {
    p.lp.validate();
    const int n = p.lp.variables();
    std::vector<BlockData> blocks;
    for (const auto &blk : p.blocks) {
        if ((int)blk.coefficients.size() != n) {
            throw Error(ErrorCode::dimension_mismatch, "psd block needs one coefficient matrix per variable");
        }
        BlockData bd;
        bd.dim = (int)blk.constant.rows();
        bd.coeffs.resize(bd.dim * bd.dim, n);
        for (int j = 0; j < n; ++j) {
            if (blk.coefficients[j].rows() != bd.dim || blk.coefficients[j].cols() != bd.dim) {
                throw Error(ErrorCode::dimension_mismatch, "psd block coefficient has wrong shape");
            }
            if (hermitian_error(blk.coefficients[j]) > tol::hermitian * std::max(1.0, blk.coefficients[j].cwiseAbs().maxCoeff())) {
                throw Error(ErrorCode::not_hermitian, "psd block coefficient is not Hermitian");
            }
            bd.coeffs.col(j) = hvec(blk.coefficients[j]);
        }
        if (hermitian_error(blk.constant) > tol::hermitian * std::max(1.0, blk.constant.cwiseAbs().maxCoeff())) {
            throw Error(ErrorCode::not_hermitian, "psd block constant is not Hermitian");
        }
        bd.constant = hvec(blk.constant);
        blocks.push_back(std::move(bd));
    }

    std::vector<Cut> cuts;
    for (size_t b = 0; b < blocks.size(); ++b) {
        for (const auto &v : seed_vectors(blocks[b].dim, o.seeding)) {
            cuts.push_back(make_cut(blocks[b], (int)b, v));
        }
    }

    const int base_ineq = (int)p.lp.ineq_rhs.size();
    const bool have_interior = p.interior.size() > 0;
    if (have_interior) {
        if (p.interior.size() != n) {
            throw Error(ErrorCode::dimension_mismatch, "interior point has the wrong length");
        }
        for (const auto &b : blocks) {
            if (block_min_eig(b, p.interior) <= 0) {
                throw Error(ErrorCode::invalid_input, "interior point is not strictly inside the PSD blocks");
            }
        }
    }
    RVector center = p.interior;
    double best_value = std::numeric_limits<double>::infinity();
    RVector best_x;
    ConicSolution out;
    out.cuts = (int)cuts.size();
    for (;;) {
        ++out.rounds;
        LpProblem lp = p.lp;
        const int rows = base_ineq + (int)cuts.size();
        lp.ineq_matrix.resize(rows, n);
        lp.ineq_rhs.resize(rows);
        if (base_ineq) {
            lp.ineq_matrix.topRows(base_ineq) = p.lp.ineq_matrix;
            lp.ineq_rhs.head(base_ineq) = p.lp.ineq_rhs;
        }
        for (size_t k = 0; k < cuts.size(); ++k) {
            lp.ineq_matrix.row(base_ineq + k) = cuts[k].row.transpose();
            lp.ineq_rhs[base_ineq + k] = cuts[k].rhs;
        }
        LpSolution sol = solve_lp(lp, o.lp);
        if (sol.status == LpStatus::infeasible) {
            out.status = LpStatus::infeasible;
            return out;
        }
        if (sol.status == LpStatus::unbounded) {
            throw Error(ErrorCode::numerical_failure, "cutting-plane relaxation is unbounded");
        }

        out.min_eigenvalues.assign(blocks.size(), 0.0);
        std::vector<Cut> fresh;
        for (size_t b = 0; b < blocks.size(); ++b) {
            CMatrix g = unhvec(blocks[b].coeffs * sol.x - blocks[b].constant, blocks[b].dim);
            Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
            out.min_eigenvalues[b] = es.eigenvalues()[0];
            for (int k = 0; k < blocks[b].dim; ++k) {
                if (es.eigenvalues()[k] < -o.psd_tolerance) {
                    fresh.push_back(make_cut(blocks[b], (int)b, es.eigenvectors().col(k)));
                }
            }
        }
        auto finish = [&](const RVector &x, double value) {
            out.value = value;
            out.lower_bound = sol.value;
            out.x = x;
            out.eq_duals = sol.eq_duals;
            out.ineq_duals = sol.ineq_duals.head(base_ineq);
            out.dual_matrices.clear();
            for (const auto &bd : blocks) {
                out.dual_matrices.push_back(CMatrix::Zero(bd.dim, bd.dim));
            }
            for (size_t k = 0; k < cuts.size(); ++k) {
                double mu = sol.ineq_duals[base_ineq + k];
                if (mu > 0) {
                    out.dual_matrices[cuts[k].block] += mu * cuts[k].v * cuts[k].v.adjoint();
                }
            }
            for (size_t b = 0; b < blocks.size(); ++b) {
                out.min_eigenvalues[b] = block_min_eig(blocks[b], x);
            }
            return out;
        };
        if (fresh.empty()) {
            return finish(sol.x, sol.value);
        }
        if (have_interior) {
            // Boundary point on the segment center -> relaxation optimum; the center then moves
            // halfway to it, so later separation points sit close to the optimal face.
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                double mid = (lo + hi) / 2;
                (all_psd(blocks, center + mid * (sol.x - center)) ? lo : hi) = mid;
            }
            RVector xb = center + lo * (sol.x - center);
            double vb = p.lp.objective.dot(xb);
            if (vb < best_value) {
                best_value = vb;
                best_x = xb;
            }
            RVector xo = center + hi * (sol.x - center);
            for (size_t b = 0; b < blocks.size(); ++b) {
                Eigen::SelfAdjointEigenSolver<CMatrix> es(unhvec(blocks[b].coeffs * xo - blocks[b].constant, blocks[b].dim));
                if (es.eigenvalues()[0] < 0) {
                    fresh.push_back(make_cut(blocks[b], (int)b, es.eigenvectors().col(0)));
                }
            }
            center += (lo / 2) * (sol.x - center);
            if (best_value - sol.value <= o.gap_tolerance * std::max(1.0, std::abs(sol.value))) {
                return finish(best_x, best_value);
            }
        }
        // Non-binding cuts do not change the relaxation optimum; dropping them keeps the basis
        // small and well conditioned.
        std::vector<Cut> kept;
        for (size_t k = 0; k < cuts.size(); ++k) {
            double slack = cuts[k].rhs - cuts[k].row.dot(sol.x);
            if (sol.ineq_duals[base_ineq + k] > 0 || slack <= 1e-9 * std::max(1.0, std::abs(cuts[k].rhs))) {
                kept.push_back(std::move(cuts[k]));
            }
        }
        cuts = std::move(kept);
        out.cuts += (int)fresh.size();
        if (out.cuts > o.max_cuts) {
            throw Error(ErrorCode::numerical_failure, "cutting-plane cap reached before the PSD constraint was met");
        }
        for (auto &c : fresh) {
            cuts.push_back(std::move(c));
        }
    }
}

PsdMixture minimize_over_psd_cone(
    const RVector &objective,
    const std::vector<CMatrix> &components,
    const CMatrix &c,
    const RMatrix &eq_matrix,
    const RVector &eq_rhs,
    const CutOptions &options) {
    ConicProblem p;
    p.lp.objective = objective;
    if (eq_matrix.size()) {
        p.lp.eq_matrix = eq_matrix;
        p.lp.eq_rhs = eq_rhs;
    } else {
        p.lp.eq_matrix.resize(0, objective.size());
    }
    p.lp.ineq_matrix.resize(0, objective.size());
    p.blocks.push_back({components, c});
    auto sol = solve_with_psd_cuts(p, options);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "psd mixture program is infeasible");
    }
    return {sol.value, sol.x, sol.min_eigenvalues[0]};
}

}  // namespace magickit
