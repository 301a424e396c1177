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

#include "magickit/lp.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace magickit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kBlandAfter = 50;

// Dense revised simplex on  min c.z  s.t.  A z = b, z >= 0.
// Rows with b < 0 are negated internally. Artificial columns are appended only for rows
// without an identity slack column.
class Simplex {
   public:
    Simplex(const RMatrix &a, const RVector &b, const LpOptions &opt) : opt_(opt), m_((int)a.rows()), n_((int)a.cols()) {
        sign_ = RVector::Ones(m_);
        for (int i = 0; i < m_; ++i) {
            if (b[i] < 0) {
                sign_[i] = -1;
            }
        }
        a_ = sign_.asDiagonal() * a;
        b_ = sign_.cwiseProduct(b);
        basis_.assign(m_, -1);
        // Slack detection: a column equal to e_i.
        for (int j = 0; j < n_; ++j) {
            int row = -1;
            bool unit = true;
            for (int i = 0; i < m_ && unit; ++i) {
                double v = a_(i, j);
                if (v == 0.0) {
                    continue;
                }
                if (v == 1.0 && row < 0) {
                    row = i;
                } else {
                    unit = false;
                }
            }
            if (unit && row >= 0 && basis_[row] < 0) {
                basis_[row] = j;
            }
        }
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < 0) {
                art_row_.push_back(i);
                basis_[i] = n_ + (int)art_row_.size() - 1;
            }
        }
        total_ = n_ + (int)art_row_.size();
        in_basis_.assign(total_, -1);
        for (int i = 0; i < m_; ++i) {
            in_basis_[basis_[i]] = i;
        }
        binv_ = RMatrix::Identity(m_, m_);
        xb_ = b_;
    }

    bool is_artificial(int j) const {
        return j >= n_;
    }

    // Phase I. Returns the sum of artificials at optimum.
    double phase_one() {
        if (art_row_.empty()) {
            return 0.0;
        }
        RVector cost = RVector::Zero(total_);
        cost.tail(total_ - n_).setOnes();
        run(cost, false);
        double w = 0;
        for (int i = 0; i < m_; ++i) {
            if (is_artificial(basis_[i])) {
                w += std::max(0.0, xb_[i]);
            }
        }
        phase_one_duals_ = duals(cost);
        return w;
    }

    // Pivots zero-level artificials out of the basis where a structural column allows it.
    void expel_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (!is_artificial(basis_[r])) {
                continue;
            }
            RVector row = binv_.row(r) * a_;
            int best = -1;
            double best_abs = 1e-7;
            for (int j = 0; j < n_; ++j) {
                if (in_basis_[j] < 0 && std::abs(row[j]) > best_abs) {
                    best_abs = std::abs(row[j]);
                    best = j;
                }
            }
            if (best >= 0) {
                RVector u = binv_ * a_.col(best);
                pivot(r, best, u, 0.0);
            }
        }
        refactor();
    }

    LpStatus phase_two(const RVector &c) {
        RVector cost = RVector::Zero(total_);
        cost.head(n_) = c;
        return run(cost, true);
    }

    RVector primal() const {
        RVector z = RVector::Zero(n_);
        for (int i = 0; i < m_; ++i) {
            if (!is_artificial(basis_[i])) {
                z[basis_[i]] = xb_[i];
            }
        }
        return z;
    }

    // Duals in the caller's (unflipped) row space.
    RVector original_duals(const RVector &c) const {
        RVector cost = RVector::Zero(total_);
        cost.head(n_) = c;
        return sign_.cwiseProduct(duals(cost));
    }

    RVector phase_one_certificate() const {
        return -sign_.cwiseProduct(phase_one_duals_);
    }

    long iterations() const {
        return iterations_;
    }

   private:
    double column_dot(int j, const RVector &y) const {
        if (j < n_) {
            return a_.col(j).dot(y);
        }
        return y[art_row_[j - n_]];
    }

    RVector column_ftran(int j) const {
        if (j < n_) {
            return binv_ * a_.col(j);
        }
        return binv_.col(art_row_[j - n_]);
    }

    RVector duals(const RVector &cost) const {
        RVector cb(m_);
        for (int i = 0; i < m_; ++i) {
            cb[i] = cost[basis_[i]];
        }
        return binv_.transpose() * cb;
    }

    void refactor() {
        RMatrix bmat(m_, m_);
        for (int i = 0; i < m_; ++i) {
            int j = basis_[i];
            if (j < n_) {
                bmat.col(i) = a_.col(j);
            } else {
                bmat.col(i).setZero();
                bmat(art_row_[j - n_], i) = 1.0;
            }
        }
        Eigen::PartialPivLU<RMatrix> lu(bmat);
        binv_ = lu.inverse();
        if (!binv_.allFinite()) {
            throw Error(ErrorCode::numerical_failure, "simplex: singular basis");
        }
        xb_ = binv_ * b_;
        since_refactor_ = 0;
    }

    void pivot(int r, int q, const RVector &u, double theta) {
        xb_ -= theta * u;
        xb_[r] = theta;
        double ur = u[r];
        binv_.row(r) /= ur;
        for (int i = 0; i < m_; ++i) {
            if (i != r && u[i] != 0.0) {
                binv_.row(i) -= u[i] * binv_.row(r);
            }
        }
        in_basis_[basis_[r]] = -1;
        basis_[r] = q;
        in_basis_[q] = r;
        if (++since_refactor_ >= kRefactorEvery) {
            refactor();
        }
    }

    // Pinned artificials (phase II) leave on any nonzero entry; returns -1 if none.
    int pinned_artificial(const RVector &u, bool phase2) const {
        if (!phase2) {
            return -1;
        }
        int r = -1;
        for (int i = 0; i < m_; ++i) {
            if (is_artificial(basis_[i]) && std::abs(u[i]) > kPivotTol && (r < 0 || std::abs(u[i]) > std::abs(u[r]))) {
                r = i;
            }
        }
        return r;
    }

    // Smallest ratio, ties to the smallest basic index (anti-cycling).
    int bland_ratio(const RVector &u, bool phase2) const {
        int r = pinned_artificial(u, phase2);
        if (r >= 0) {
            return r;
        }
        double theta = kInf;
        for (int i = 0; i < m_; ++i) {
            if (u[i] <= kPivotTol || (phase2 && is_artificial(basis_[i]))) {
                continue;
            }
            double ratio = std::max(xb_[i], 0.0) / u[i];
            if (r < 0 || ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && basis_[i] < basis_[r])) {
                theta = std::min(theta, ratio);
                r = i;
            }
        }
        return r;
    }

    // Smallest ratio; near-ties go to the largest pivot entry.
    int largest_pivot_ratio(const RVector &u, bool phase2) const {
        int r = pinned_artificial(u, phase2);
        if (r >= 0) {
            return r;
        }
        double theta = kInf;
        for (int i = 0; i < m_; ++i) {
            if (u[i] <= kPivotTol || (phase2 && is_artificial(basis_[i]))) {
                continue;
            }
            double ratio = std::max(xb_[i], 0.0) / u[i];
            if (r < 0 || ratio < theta - 1e-12) {
                theta = ratio;
                r = i;
            } else if (ratio <= theta + 1e-12 && u[i] > u[r]) {
                theta = std::min(theta, ratio);
                r = i;
            }
        }
        return r;
    }

    LpStatus run(const RVector &cost, bool phase2) {
        int degenerate_streak = 0;
        const double opt_tol = phase2 ? opt_.optimality_tolerance : std::min(1e-11, opt_.optimality_tolerance);
        for (;;) {
            if (++iterations_ > opt_.max_iterations) {
                throw Error(ErrorCode::numerical_failure, "simplex: iteration limit exceeded");
            }
            RVector y = duals(cost);
            bool bland = degenerate_streak >= kBlandAfter;
            int q = -1;
            double best = -opt_tol;
            RVector d = cost.head(n_) - a_.transpose() * y;
            for (int j = 0; j < total_; ++j) {
                if (in_basis_[j] >= 0) {
                    continue;
                }
                if (phase2 && is_artificial(j)) {
                    continue;
                }
                double dj = j < n_ ? d[j] : cost[j] - y[art_row_[j - n_]];
                if (dj < best) {
                    q = j;
                    best = dj;
                    if (bland) {
                        break;
                    }
                }
            }
            if (q < 0) {
                if (since_refactor_ > 0) {
                    // Confirm optimality on a fresh factorization.
                    refactor();
                    continue;
                }
                return LpStatus::optimal;
            }
            RVector u = column_ftran(q);
            int r = bland ? bland_ratio(u, phase2) : largest_pivot_ratio(u, phase2);
            if (r < 0) {
                return LpStatus::unbounded;
            }
            double theta = std::max(xb_[r], 0.0) / u[r];
            if (phase2 && is_artificial(basis_[r])) {
                theta = 0.0;
            }
            degenerate_streak = theta <= 1e-12 ? degenerate_streak + 1 : 0;
            pivot(r, q, u, theta);
        }
    }

    LpOptions opt_;
    int m_, n_, total_ = 0;
    RMatrix a_;
    RVector b_, sign_, xb_, phase_one_duals_;
    RMatrix binv_;
    std::vector<int> basis_, in_basis_, art_row_;
    int since_refactor_ = 0;
    long iterations_ = 0;
};

double feasibility_threshold(const RVector &b, const LpOptions &opt) {
    double scale = b.size() ? std::max(1.0, b.cwiseAbs().maxCoeff()) : 1.0;
    return opt.feasibility_tolerance * scale;
}

}  // namespace

void LpProblem::validate() const {
    const Eigen::Index n = objective.size();
    if (eq_matrix.size() && eq_matrix.cols() != n) {
        throw Error(ErrorCode::invalid_input, "lp: equality matrix column count differs from variable count");
    }
    if (ineq_matrix.size() && ineq_matrix.cols() != n) {
        throw Error(ErrorCode::invalid_input, "lp: inequality matrix column count differs from variable count");
    }
    if (eq_matrix.rows() != eq_rhs.size() || ineq_matrix.rows() != ineq_rhs.size()) {
        throw Error(ErrorCode::invalid_input, "lp: rhs length differs from row count");
    }
    if (lower.size() && lower.size() != n) {
        throw Error(ErrorCode::invalid_input, "lp: lower bound length differs from variable count");
    }
}

namespace {

// Indices of a maximal linearly independent subset of the rows, in ascending order.
std::vector<int> independent_rows(const RMatrix &m) {
    std::vector<int> keep;
    if (m.rows() == 0) {
        return keep;
    }
    Eigen::ColPivHouseholderQR<RMatrix> qr(m.transpose());
    qr.setThreshold(1e-10);
    const auto &perm = qr.colsPermutation().indices();
    for (Eigen::Index k = 0; k < qr.rank(); ++k) {
        keep.push_back(perm[k]);
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

}  // namespace

LpSolution solve_lp(const LpProblem &problem, const LpOptions &options) {
    problem.validate();
    // Redundant equality rows would leave a structurally singular basis once their artificial
    // is pivoted out, so they are dropped here and checked again after the solve.
    std::vector<int> kept_rows = independent_rows(problem.eq_matrix);
    const bool reduced = (Eigen::Index)kept_rows.size() < problem.eq_matrix.rows();
    LpProblem reduced_problem;
    if (reduced) {
        reduced_problem = problem;
        reduced_problem.eq_matrix.resize(kept_rows.size(), problem.variables());
        reduced_problem.eq_rhs.resize(kept_rows.size());
        for (size_t k = 0; k < kept_rows.size(); ++k) {
            reduced_problem.eq_matrix.row(k) = problem.eq_matrix.row(kept_rows[k]);
            reduced_problem.eq_rhs[k] = problem.eq_rhs[kept_rows[k]];
        }
    }
    const LpProblem &p = reduced ? reduced_problem : problem;
    const int n = p.variables();
    const int me = (int)p.eq_rhs.size();
    const int mi = (int)p.ineq_rhs.size();
    RVector lower = p.lower.size() ? p.lower : RVector::Zero(n);

    // Standard form columns: one per bounded variable, two per free variable, one slack per inequality.
    std::vector<int> pos(n), neg(n, -1);
    int cols = 0;
    for (int j = 0; j < n; ++j) {
        pos[j] = cols++;
        if (!std::isfinite(lower[j])) {
            neg[j] = cols++;
        }
    }
    const int slack0 = cols;
    cols += mi;
    RVector shift = RVector::Zero(n);
    for (int j = 0; j < n; ++j) {
        if (std::isfinite(lower[j])) {
            shift[j] = lower[j];
        }
    }

    RMatrix a = RMatrix::Zero(me + mi, cols);
    RVector b(me + mi);
    RVector c = RVector::Zero(cols);
    for (int j = 0; j < n; ++j) {
        c[pos[j]] = p.objective[j];
        if (me) {
            a.block(0, pos[j], me, 1) = p.eq_matrix.col(j);
        }
        if (mi) {
            a.block(me, pos[j], mi, 1) = p.ineq_matrix.col(j);
        }
        if (neg[j] >= 0) {
            c[neg[j]] = -p.objective[j];
            a.col(neg[j]) = -a.col(pos[j]);
        }
    }
    for (int k = 0; k < mi; ++k) {
        a(me + k, slack0 + k) = 1.0;
    }
    if (me) {
        b.head(me) = p.eq_rhs - p.eq_matrix * shift;
    }
    if (mi) {
        b.tail(mi) = p.ineq_rhs - p.ineq_matrix * shift;
    }

    LpSolution out;
    Simplex s(a, b, options);
    double w = s.phase_one();
    if (w > feasibility_threshold(b, options)) {
        out.status = LpStatus::infeasible;
        out.iterations = s.iterations();
        return out;
    }
    s.expel_artificials();
    out.status = s.phase_two(c);
    out.iterations = s.iterations();
    if (out.status != LpStatus::optimal) {
        return out;
    }
    RVector z = s.primal();
    for (int k = 0; k < z.size(); ++k) {
        if (z[k] < 0 && z[k] > -1e-7) {
            z[k] = 0;
        }
    }
    out.x = shift;
    for (int j = 0; j < n; ++j) {
        out.x[j] += z[pos[j]];
        if (neg[j] >= 0) {
            out.x[j] -= z[neg[j]];
        }
    }
    out.value = p.objective.dot(out.x);
    RVector y = s.original_duals(c);
    out.eq_duals = y.head(me);
    if (reduced) {
        RVector residual = problem.eq_matrix * out.x - problem.eq_rhs;
        if (residual.size() && residual.cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, problem.eq_rhs.cwiseAbs().maxCoeff())) {
            out = LpSolution{};
            out.status = LpStatus::infeasible;
            return out;
        }
        out.eq_duals = RVector::Zero(problem.eq_rhs.size());
        for (size_t k = 0; k < kept_rows.size(); ++k) {
            out.eq_duals[kept_rows[k]] = y[k];
        }
    }
    out.ineq_duals = (-y.tail(mi)).cwiseMax(0.0);
    return out;
}

FeasibilityOutcome lp_feasibility_with_certificate(const RMatrix &a, const RVector &b, const LpOptions &options) {
    if (a.cols() < 1 || a.rows() != b.size()) {
        throw Error(ErrorCode::invalid_input, "feasibility: A must have columns and match b");
    }
    FeasibilityOutcome out;
    Simplex s(a, b, options);
    double w = s.phase_one();
    if (w > feasibility_threshold(b, options)) {
        out.feasible = false;
        out.certificate = s.phase_one_certificate();
        return out;
    }
    out.feasible = true;
    out.x = s.primal().cwiseMax(0.0);
    return out;
}

double farkas_violation(const RMatrix &a, const RVector &b, const RVector &y) {
    double v = b.dot(y);
    if (a.cols()) {
        v = std::max(v, -(a.transpose() * y).minCoeff());
    }
    return v;
}

}  // namespace magickit
