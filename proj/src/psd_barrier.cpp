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

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "magickit/psd_cuts.hpp"

namespace magickit {

namespace {

struct Barrier {
    const ConicProblem &p;
    int n;
    RMatrix a;
    RVector b;
    std::vector<int> eq_rows;
    RVector lower;
    std::vector<int> bounded;
    std::vector<RMatrix> coeff;  // per block, column j = hvec(F_j)
    std::vector<int> dims;
    double nu = 0.0;

    explicit Barrier(const ConicProblem &problem) : p(problem), n(problem.lp.variables()) {
        const RMatrix &eq = p.lp.eq_matrix;
        if (eq.rows() > 0) {
            Eigen::ColPivHouseholderQR<RMatrix> qr(eq.transpose());
            qr.setThreshold(1e-10);
            for (Eigen::Index k = 0; k < qr.rank(); ++k) {
                eq_rows.push_back((int)qr.colsPermutation().indices()[k]);
            }
            std::sort(eq_rows.begin(), eq_rows.end());
        }
        a.resize(eq_rows.size(), n);
        b.resize(eq_rows.size());
        for (size_t k = 0; k < eq_rows.size(); ++k) {
            a.row(k) = eq.row(eq_rows[k]);
            b[k] = p.lp.eq_rhs[eq_rows[k]];
        }
        lower = p.lp.lower.size() ? p.lp.lower : RVector::Zero(n);
        for (int j = 0; j < n; ++j) {
            if (std::isfinite(lower[j])) {
                bounded.push_back(j);
            }
        }
        for (const auto &blk : p.blocks) {
            if ((int)blk.coefficients.size() != n) {
                throw Error(ErrorCode::dimension_mismatch, "psd block needs one coefficient matrix per variable");
            }
            const int d = (int)blk.constant.rows();
            RMatrix c(d * d, n);
            for (int j = 0; j < n; ++j) {
                c.col(j) = hvec(hermitian_part(blk.coefficients[j]));
            }
            coeff.push_back(std::move(c));
            dims.push_back(d);
        }
        nu = double(bounded.size() + p.lp.ineq_rhs.size());
        for (int d : dims) {
            nu += d;
        }
    }

    CMatrix block_matrix(size_t k, const RVector &x) const {
        return unhvec(coeff[k] * x - hvec(hermitian_part(p.blocks[k].constant)), dims[k]);
    }

    // Barrier function, +infinity outside the interior.
    double phi(const RVector &x) const {
        double f = 0.0;
        for (int j : bounded) {
            double d = x[j] - lower[j];
            if (!(d > 0)) {
                return INFINITY;
            }
            f -= std::log(d);
        }
        if (p.lp.ineq_rhs.size()) {
            RVector s = p.lp.ineq_rhs - p.lp.ineq_matrix * x;
            for (double v : s) {
                if (!(v > 0)) {
                    return INFINITY;
                }
                f -= std::log(v);
            }
        }
        for (size_t k = 0; k < coeff.size(); ++k) {
            Eigen::LLT<CMatrix> llt(block_matrix(k, x));
            if (llt.info() != Eigen::Success) {
                return INFINITY;
            }
            for (int i = 0; i < dims[k]; ++i) {
                double d = llt.matrixL()(i, i).real();
                if (!(d > 0)) {
                    return INFINITY;
                }
                f -= 2.0 * std::log(d);
            }
        }
        return f;
    }

    // Gradient of phi plus a factor V with Hessian = diag(lam) + G^T diag(1/s^2) G + V^T V.
    struct Local {
        RVector grad;
        RVector lam;
        RMatrix v;
    };

    Local local(const RVector &x) const {
        Local out;
        out.grad = RVector::Zero(n);
        out.lam = RVector::Zero(n);
        for (int j : bounded) {
            double d = x[j] - lower[j];
            out.grad[j] -= 1.0 / d;
            out.lam[j] += 1.0 / (d * d);
        }
        if (p.lp.ineq_rhs.size()) {
            RVector s = p.lp.ineq_rhs - p.lp.ineq_matrix * x;
            out.grad += p.lp.ineq_matrix.transpose() * s.cwiseInverse();
        }
        int rows = 0;
        for (int d : dims) {
            rows += d * d;
        }
        out.v.resize(rows, n);
        int offset = 0;
        for (size_t k = 0; k < coeff.size(); ++k) {
            const int d = dims[k];
            Eigen::SelfAdjointEigenSolver<CMatrix> es(block_matrix(k, x));
            RVector isq = es.eigenvalues().cwiseSqrt().cwiseInverse();
            CMatrix r = es.eigenvectors() * isq.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
            for (int j = 0; j < n; ++j) {
                CMatrix kj = r * unhvec(coeff[k].col(j), d) * r;
                RVector h = hvec(hermitian_part(kj));
                out.v.block(offset, j, d * d, 1) = h;
                out.grad[j] -= kj.trace().real();
            }
            offset += d * d;
        }
        return out;
    }

    // Newton step for t*c.x + phi(x) on {Ax = b}; returns (dx, w) with H dx + A^T w = -g.
    // Works in coordinates scaled by the distance to each bound, where the barrier diagonal is
    // the identity, and factors the square root of the Hessian instead of the Hessian itself.
    std::pair<RVector, RVector> newton(double t, const RVector &x) const {
        Local loc = local(x);
        RVector sc = RVector::Ones(n);
        for (int j : bounded) {
            sc[j] = x[j] - lower[j];
        }
        const RVector g = sc.cwiseProduct(t * p.lp.objective + loc.grad);
        const RMatrix v = loc.v * sc.asDiagonal();
        const int me = (int)a.rows();
        const RMatrix as = a * sc.asDiagonal();

        const bool low_rank = p.lp.ineq_rhs.size() == 0 && (int)bounded.size() == n && n > 400;
        if (low_rank) {
            // H = I + V^T V; apply the inverse through the SVD of V.
            Eigen::BDCSVD<RMatrix> svd(v, Eigen::ComputeThinV);
            const RMatrix &wv = svd.matrixV();
            const RVector sig2 = svd.singularValues().cwiseAbs2();
            const RVector shrink = sig2.cwiseQuotient((sig2.array() + 1.0).matrix());
            auto hinv = [&](const RMatrix &r) -> RMatrix {
                return r - wv * (shrink.asDiagonal() * (wv.transpose() * r));
            };
            RVector z = hinv(g);
            RVector w = RVector::Zero(me);
            if (me) {
                RMatrix za = hinv(as.transpose());
                w = (as * za).ldlt().solve(-(as * z));
                z += za * w;
            }
            return {-sc.cwiseProduct(z), w};
        }

        // Null space of the scaled equality rows.
        RMatrix basis = RMatrix::Identity(n, n);
        Eigen::HouseholderQR<RMatrix> qa;
        if (me) {
            qa.compute(as.transpose());
            basis = qa.householderQ() * RMatrix::Identity(n, n);
        }
        const RMatrix zb = basis.rightCols(n - me);

        RVector lam_s = loc.lam.cwiseProduct(sc.cwiseAbs2());
        int ni = (int)p.lp.ineq_rhs.size();
        RMatrix m(v.rows() + n + ni, n);
        m.topRows(v.rows()) = v;
        m.middleRows(v.rows(), n) = lam_s.cwiseSqrt().asDiagonal();
        if (ni) {
            RVector s = p.lp.ineq_rhs - p.lp.ineq_matrix * x;
            m.bottomRows(ni) = s.cwiseInverse().asDiagonal() * p.lp.ineq_matrix * sc.asDiagonal();
        }
        Eigen::HouseholderQR<RMatrix> qr(m * zb);
        const auto r = qr.matrixQR().topRows(n - me).template triangularView<Eigen::Upper>();
        RVector y = -(zb.transpose() * g);
        r.transpose().solveInPlace(y);
        r.solveInPlace(y);
        RVector dxs = zb * y;
        RVector w = RVector::Zero(me);
        if (me) {
            RVector resid = -g - m.transpose() * (m * dxs);
            RVector qt = basis.leftCols(me).transpose() * resid;
            w = qa.matrixQR().topRows(me).template triangularView<Eigen::Upper>().solve(qt);
        }
        return {sc.cwiseProduct(dxs), w};
    }
};

}  // namespace

ConicSolution solve_with_psd_barrier(const ConicProblem &p, const CutOptions &o) {
    p.lp.validate();
    Barrier bar(p);
    const int n = bar.n;
    if (p.interior.size() != n) {
        throw Error(ErrorCode::invalid_input, "barrier method needs an interior point of the right length");
    }
    RVector x = p.interior;
    if (!std::isfinite(bar.phi(x))) {
        throw Error(ErrorCode::invalid_input, "barrier start point is not strictly feasible");
    }
    if (bar.a.rows() && (bar.a * x - bar.b).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, bar.b.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::invalid_input, "barrier start point violates the equality constraints");
    }
    const RVector &c = p.lp.objective;
    double t = 1.0;
    int newton_steps = 0;
    // Last iterate known to sit near the central path, with its t and equality multipliers.
    RVector x_ok = x;
    RVector w_ok;
    double t_ok = 0.0;
    // Duals are read off at a moderate t: F^{-1}/t loses digits once the slack matrix has
    // eigenvalues near round-off.
    RVector x_dual, w_dual;
    double t_dual = 0.0;
    for (int outer = 0; outer <= 60; ++outer) {
        RVector w;
        double dec = INFINITY;
        for (int it = 0; it < 200; ++it) {
            if (++newton_steps > o.max_newton_steps) {
                throw Error(ErrorCode::numerical_failure, "barrier method: Newton iteration limit");
            }
            auto [dx, wk] = bar.newton(t, x);
            w = wk;
            dec = -(t * c + bar.local(x).grad).dot(dx);
            if (!(dec > 0) || dec / 2 <= 1e-11) {
                break;
            }
            // Decrease measured as t*c.(step dx) + phi difference; the absolute objective is
            // too large at high t for the comparison to resolve.
            const double phi0 = bar.phi(x);
            const double slope = t * c.dot(dx);
            double step = 1.0;
            bool moved = false;
            while (step > 1e-14) {
                RVector trial = x + step * dx;
                double delta = step * slope + (bar.phi(trial) - phi0);
                if (std::isfinite(delta) && delta <= -0.25 * step * dec) {
                    x = trial;
                    moved = true;
                    break;
                }
                step /= 2;
            }
            if (!moved || (step < 1.0 && dec < 1e-6)) {
                break;
            }
        }
        if (!(dec < 1e-4)) {
            // Centering broke down (round-off at large t); keep the previous central point.
            break;
        }
        x_ok = x;
        w_ok = w;
        t_ok = t;
        if (t_dual == 0.0 || bar.nu / t >= o.dual_tolerance * std::max(1.0, std::abs(c.dot(x)))) {
            x_dual = x;
            w_dual = w;
            t_dual = t;
        }
        if (bar.nu / t <= o.barrier_tolerance * std::max(1.0, std::abs(c.dot(x)))) {
            break;
        }
        t *= 10.0;
    }
    if (t_ok == 0.0) {
        throw Error(ErrorCode::numerical_failure, "barrier method failed to center at the start point");
    }
    x = x_ok;

    ConicSolution out;
    out.status = LpStatus::optimal;
    out.x = x;
    out.value = c.dot(x);
    out.lower_bound = c.dot(x_dual) - bar.nu / t_dual;
    out.rounds = newton_steps;
    for (size_t k = 0; k < bar.coeff.size(); ++k) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(bar.block_matrix(k, x));
        out.min_eigenvalues.push_back(es.eigenvalues()[0]);
        CMatrix f = bar.block_matrix(k, x_dual);
        out.dual_matrices.push_back(hermitian_part(CMatrix(f.inverse() / t_dual)));
    }
    t = t_dual;
    const RVector &w = w_dual;
    out.eq_duals = RVector::Zero(p.lp.eq_rhs.size());
    for (size_t k = 0; k < bar.eq_rows.size(); ++k) {
        out.eq_duals[bar.eq_rows[k]] = -w[k] / t;
    }
    if (p.lp.ineq_rhs.size()) {
        RVector s = p.lp.ineq_rhs - p.lp.ineq_matrix * x_dual;
        out.ineq_duals = s.cwiseInverse() / t;
    } else {
        out.ineq_duals = RVector();
    }
    return out;
}

ConicSolution solve_conic(const ConicProblem &p, const CutOptions &o) {
    if (o.use_barrier && p.interior.size()) {
        return solve_with_psd_barrier(p, o);
    }
    return solve_with_psd_cuts(p, o);
}

}  // namespace magickit
