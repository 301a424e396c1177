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

#include "magickit/monotones.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace magickit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_state_dim(const DensityOperator &rho, const StabilizerSet &s) {
    if (rho.dim() != s.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "state dimension does not match the stabilizer set");
    }
}

void check_channel_dim(const ChoiOperator &c, const StabilizerSet &s) {
    if (c.dim_in() * c.dim_out() != s.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "channel dimensions do not match the stabilizer set");
    }
}

// Column i: hvec(Tr_out phi_i - I/din). A mixture sum d_i phi_i has input marginal
// proportional to the identity iff this matrix annihilates d.
RMatrix marginal_rows(const StabilizerSet &s, int din, int dout) {
    RMatrix out(din * din, s.size());
    RVector id = hvec(CMatrix::Identity(din, din) / double(din));
    for (size_t i = 0; i < s.size(); ++i) {
        out.col(i) = hvec(partial_trace(s.projector(i), {din, dout}, {true, false})) - id;
    }
    return out;
}

std::vector<CMatrix> projectors(const StabilizerSet &s) {
    std::vector<CMatrix> out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        out.push_back(s.projector(i));
    }
    return out;
}

// Indices of the computational basis states; their uniform sum is the identity.
std::vector<size_t> computational_indices(const StabilizerSet &s) {
    std::vector<size_t> out;
    for (int k = 0; k < s.dim(); ++k) {
        auto idx = s.find(CVector::Unit(s.dim(), k));
        if (!idx) {
            throw Error(ErrorCode::numerical_failure, "computational basis state missing from stabilizer set");
        }
        out.push_back(*idx);
    }
    return out;
}

CMatrix mixture(const StabilizerSet &s, const RVector &w) {
    return unhvec(s.vectorized() * w, s.dim());
}

double min_eig(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

ConicSolution solve_cuts_or_no_convergence(const ConicProblem &p, const CutOptions &o) {
    try {
        return solve_conic(p, o);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::numerical_failure) {
            throw Error(ErrorCode::no_convergence, e.what());
        }
        throw;
    }
}

}  // namespace

double MonotoneReport::detail(const std::string &key) const {
    for (const auto &[k, v] : details) {
        if (k == key) {
            return v;
        }
    }
    throw Error(ErrorCode::invalid_input, "monotone report has no detail '" + key + "'");
}

const StabilizerSet &stabilizer_set_for_dim(int dim) {
    int n = 0;
    while ((1 << n) < dim) {
        ++n;
    }
    if (dim < 2 || (1 << n) != dim) {
        throw Error(ErrorCode::unsupported_dimension, "dimension is not a power of two");
    }
    if (n > kMaxStabilizerQubits) {
        throw Error(ErrorCode::unsupported_dimension, "stabilizer enumeration is capped at 3 qubits");
    }
    return shared_stabilizer_set(n);
}

MonotoneReport robustness_state(const DensityOperator &rho, const StabilizerSet &s) {
    check_state_dim(rho, s);
    const RMatrix &v = s.vectorized();
    const int m = (int)s.size();
    LpProblem lp;
    lp.objective = RVector::Ones(2 * m);
    lp.eq_matrix.resize(v.rows(), 2 * m);
    lp.eq_matrix << v, -v;
    lp.eq_rhs = hvec(rho.matrix());
    lp.ineq_matrix.resize(0, 2 * m);
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "robustness LP did not reach an optimum");
    }
    const double l1 = std::max(1.0, sol.value);
    const double r = (l1 - 1.0) / 2.0;
    MonotoneReport out;
    out.name = "robustness";
    out.value = r;
    out.weights = sol.x.head(m) - sol.x.tail(m);
    out.witness = unhvec(sol.eq_duals, s.dim());
    out.details = {{"R", r}, {"R_HC", l1}, {"l1", l1}, {"LR", std::log2(1.0 + r)}, {"LR_HC", std::log2(l1)}};
    out.convention = "R = (l1 - 1)/2, R_HC = l1";
    return out;
}

SignedChannelDecomposition robustness_channel_decomposition(const ChoiOperator &c, const StabilizerSet &s) {
    check_channel_dim(c, s);
    const int din = c.dim_in(), dout = c.dim_out();
    const RMatrix &v = s.vectorized();
    const int m = (int)s.size();
    RMatrix marg = marginal_rows(s, din, dout);
    const int rows = (int)v.rows(), mrows = (int)marg.rows();

    // Variables [a, b]: sum b phi - sum a phi = J, both with proportional identity marginal.
    LpProblem lp;
    lp.objective = RVector::Zero(2 * m);
    lp.objective.head(m).setConstant(1.0 / din);
    lp.eq_matrix = RMatrix::Zero(rows + 2 * mrows, 2 * m);
    lp.eq_matrix.block(0, 0, rows, m) = -v;
    lp.eq_matrix.block(0, m, rows, m) = v;
    lp.eq_matrix.block(rows, 0, mrows, m) = marg;
    lp.eq_matrix.block(rows + mrows, m, mrows, m) = marg;
    lp.eq_rhs = RVector::Zero(rows + 2 * mrows);
    lp.eq_rhs.head(rows) = hvec(c.matrix());
    lp.ineq_matrix.resize(0, 2 * m);
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "channel robustness LP did not reach an optimum");
    }
    SignedChannelDecomposition out;
    out.r = std::max(0.0, sol.value);
    CMatrix plus = mixture(s, sol.x.tail(m));
    CMatrix minus = mixture(s, sol.x.head(m));
    out.plus = ChoiOperator(plus / (1.0 + out.r), din, dout);
    out.minus = out.r > 1e-12 ? ChoiOperator(minus / out.r, din, dout) : out.plus;
    return out;
}

MonotoneReport robustness_channel(const ChoiOperator &c, const StabilizerSet &s) {
    auto d = robustness_channel_decomposition(c, s);
    CMatrix rebuilt = (1.0 + d.r) * d.plus.matrix() - d.r * d.minus.matrix();
    MonotoneReport out;
    out.name = "channel-robustness";
    out.value = d.r;
    out.details = {
        {"R", d.r},
        {"l1", d.l1()},
        {"LR", std::log2(1.0 + d.r)},
        {"residual", (rebuilt - c.matrix()).cwiseAbs().maxCoeff()},
    };
    out.convention = "R = sum(a)/|A0|, l1 = 1 + 2R, LR = log2(1 + R)";
    return out;
}

MonotoneReport generalized_robustness_state(const DensityOperator &rho, const StabilizerSet &s, const GeneralizedRobustnessOptions &options) {
    check_state_dim(rho, s);
    const int m = (int)s.size();
    ConicProblem p;
    p.lp.objective = RVector::Ones(m);
    p.lp.eq_matrix.resize(0, m);
    p.lp.ineq_matrix.resize(0, m);
    p.blocks.push_back({projectors(s), rho.matrix()});
    // Stabilizer states form a 2-design, so the uniform mixture is proportional to I.
    p.interior = RVector::Constant(m, 2.0 * s.dim() / m);
    auto sol = solve_cuts_or_no_convergence(p, options.cuts);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "generalized robustness program is infeasible");
    }

    // Repair: lift the mixture by delta*I so that it dominates rho exactly.
    RVector w = sol.x;
    double lam = min_eig(mixture(s, w) - rho.matrix());
    if (lam < 0) {
        for (size_t k : computational_indices(s)) {
            w[k] += -lam;
        }
    }
    const double t = std::max(1.0, w.sum());

    // Dual: alpha >= 0 with Tr[alpha phi] <= 1 bounds t from below by Tr[alpha rho].
    CMatrix alpha = sol.dual_matrices[0];
    RVector scores = s.vectorized().transpose() * hvec(alpha);
    double scale = std::max(1.0, scores.maxCoeff());
    double dual = std::max(1.0, (alpha * rho.matrix()).trace().real() / scale);

    MonotoneReport out;
    out.name = "generalized-robustness";
    out.value = std::log2(t);
    out.weights = w;
    out.witness = alpha / scale;
    out.details = {
        {"R_g", t - 1.0},
        {"t", t},
        {"dual_t", dual},
        {"gap", std::log2(t) - std::log2(dual)},
        {"cuts", (double)sol.cuts},
    };
    out.convention = "LR_g = log2(1 + R_g)";
    return out;
}

double generalized_robustness_channel_dual_value(const ChoiOperator &c, const StabilizerSet &s, const CMatrix &alpha, const CMatrix &beta) {
    check_channel_dim(c, s);
    const int din = c.dim_in(), dout = c.dim_out();
    const int d = din * dout;
    CMatrix shifted = alpha + kron(beta, CMatrix::Identity(dout, dout)) - beta.trace() * CMatrix::Identity(d, d) / double(din);
    RVector scores = s.vectorized().transpose() * hvec(hermitian_part(shifted));
    double worst = scores.maxCoeff();
    double kappa = worst > 1.0 / din ? (1.0 / din) / worst : 1.0;
    return kappa * (alpha * c.matrix()).trace().real();
}

ChannelGeneralizedRobustness solve_generalized_robustness_channel(const ChoiOperator &c, const StabilizerSet &s, const GeneralizedRobustnessOptions &options) {
    check_channel_dim(c, s);
    const int din = c.dim_in(), dout = c.dim_out();
    const int m = (int)s.size();
    ConicProblem p;
    p.lp.objective = RVector::Constant(m, 1.0 / din);
    p.lp.eq_matrix = marginal_rows(s, din, dout);
    p.lp.eq_rhs = RVector::Zero(p.lp.eq_matrix.rows());
    p.lp.ineq_matrix.resize(0, m);
    p.blocks.push_back({projectors(s), c.matrix()});
    p.interior = RVector::Constant(m, 2.0 * din * s.dim() / m);
    auto sol = solve_cuts_or_no_convergence(p, options.cuts);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "generalized robustness program is infeasible");
    }

    ChannelGeneralizedRobustness out;
    out.weights = sol.x;
    double lam = min_eig(mixture(s, out.weights) - c.matrix());
    if (lam < 0) {
        for (size_t k : computational_indices(s)) {
            out.weights[k] += -lam;
        }
    }
    out.omega = mixture(s, out.weights);
    out.min_eigenvalue = min_eig(out.omega - c.matrix());
    out.lambda = std::max(1.0, out.weights.sum() / din);
    out.alpha = sol.dual_matrices[0];
    out.beta = unhvec(sol.eq_duals, din);
    out.dual_lambda = generalized_robustness_channel_dual_value(c, s, out.alpha, out.beta);
    out.cuts = sol.cuts;
    return out;
}

MonotoneReport log_generalized_robustness_channel(const ChoiOperator &c, const StabilizerSet &s, const GeneralizedRobustnessOptions &options) {
    auto sol = solve_generalized_robustness_channel(c, s, options);
    MonotoneReport out;
    out.name = "channel-generalized-robustness";
    out.value = std::log2(sol.lambda);
    out.weights = sol.weights;
    out.witness = sol.alpha;
    double dual = std::max(1.0, sol.dual_lambda);
    out.details = {
        {"lambda", sol.lambda},
        {"R_g", sol.lambda - 1.0},
        {"dual_lambda", sol.dual_lambda},
        {"dual_bound", std::log2(dual)},
        {"gap", std::log2(sol.lambda) - std::log2(dual)},
        {"cuts", (double)sol.cuts},
    };
    out.convention = "LR_g = log2(Tr omega / |A0|)";
    return out;
}

MonotoneReport dmin_state(const DensityOperator &rho, const StabilizerSet &s) {
    check_state_dim(rho, s);
    CMatrix proj = support_projector(rho);
    RVector overlap = s.vectorized().transpose() * hvec(proj);
    Eigen::Index best;
    double f = std::min(1.0, overlap.maxCoeff(&best));
    MonotoneReport out;
    out.name = "dmin";
    out.value = std::max(0.0, -std::log2(f));
    out.weights = RVector::Zero(s.size());
    out.weights[best] = 1.0;
    out.witness = proj;
    out.details = {{"max_overlap", f}};
    return out;
}

MonotoneReport dmin_eps_state(const DensityOperator &rho, const StabilizerSet &s, double epsilon, const CutOptions &options) {
    check_state_dim(rho, s);
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw Error(ErrorCode::invalid_input, "dmin_eps_state: epsilon must lie in [0, 1)");
    }
    if (epsilon == 0.0) {
        // Tr[E rho] = 1 with E <= I pins E to the support projector; the program has no interior.
        MonotoneReport out = dmin_state(rho, s);
        out.name = "dmin-eps";
        out.weights = RVector();
        out.details = {{"epsilon", 0.0}, {"t", std::pow(2.0, -out.value)}, {"cuts", 0.0}};
        return out;
    }
    const int d = s.dim();
    const int ne = d * d;
    const int m = (int)s.size();
    // Variables [hvec(E), t].
    ConicProblem p;
    p.lp.objective = RVector::Zero(ne + 1);
    p.lp.objective[ne] = 1.0;
    p.lp.eq_matrix.resize(0, ne + 1);
    p.lp.ineq_matrix = RMatrix::Zero(m + 1, ne + 1);
    p.lp.ineq_matrix.block(0, 0, m, ne) = s.vectorized().transpose();
    p.lp.ineq_matrix.block(0, ne, m, 1).setConstant(-1.0);
    p.lp.ineq_matrix.block(m, 0, 1, ne) = -hvec(rho.matrix()).transpose();
    p.lp.ineq_rhs = RVector::Zero(m + 1);
    p.lp.ineq_rhs[m] = -(1.0 - epsilon);
    p.lp.lower = RVector::Constant(ne + 1, -kInf);
    p.lp.lower[ne] = 0.0;

    PsdBlock lower_block, upper_block;
    for (int k = 0; k < ne; ++k) {
        CMatrix basis = unhvec(RVector::Unit(ne, k), d);
        lower_block.coefficients.push_back(basis);
        upper_block.coefficients.push_back(-basis);
    }
    lower_block.coefficients.push_back(CMatrix::Zero(d, d));
    upper_block.coefficients.push_back(CMatrix::Zero(d, d));
    lower_block.constant = CMatrix::Zero(d, d);
    upper_block.constant = -CMatrix::Identity(d, d);
    p.blocks = {lower_block, upper_block};
    p.interior = RVector::Zero(ne + 1);
    p.interior.head(ne) = hvec((1.0 - epsilon / 2) * CMatrix::Identity(d, d));
    p.interior[ne] = 1.0;

    auto sol = solve_cuts_or_no_convergence(p, options);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "smoothed min-entropy program is infeasible");
    }
    const double t = std::clamp(sol.x[ne], 1e-300, 1.0);
    MonotoneReport out;
    out.name = "dmin-eps";
    out.value = std::max(0.0, -std::log2(t));
    out.witness = unhvec(sol.x.head(ne), d);
    out.details = {{"epsilon", epsilon}, {"t", t}, {"cuts", (double)sol.cuts}};
    return out;
}

namespace {

// D_min of (id (x) N)(psi) against (id (x) E)(psi), both given as Choi matrices on R A0 -> R A1.
struct InputSearch {
    CMatrix j_target;
    int din;
    int dout;

    CMatrix image(const CMatrix &j, const CVector &psi) const {
        return apply_choi(j, din * din, din * dout, psi * psi.adjoint());
    }
    CMatrix target_support(const CVector &psi) const {
        CMatrix img = image(j_target, psi);
        return support_projector(img, 1e-9 * std::max(1.0, img.trace().real()));
    }
    double value(const CMatrix &j_free, const CVector &psi) const {
        double f = (target_support(psi) * image(j_free, psi)).trace().real();
        return -std::log2(std::clamp(f, 1e-300, 1.0));
    }
};

CVector random_input(int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CVector v(dim);
    for (int i = 0; i < dim; ++i) {
        v[i] = Complex(g(rng), g(rng));
    }
    return v.normalized();
}

CVector max_entangled(int din) {
    CVector v = CVector::Zero(din * din);
    for (int i = 0; i < din; ++i) {
        v[i * din + i] = 1.0;
    }
    return v / std::sqrt(double(din));
}

// Random-perturbation hill climb with a shrinking step.
std::pair<double, CVector> climb(const InputSearch &q, const CMatrix &j_free, CVector psi, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    double best = q.value(j_free, psi);
    double step = 0.3;
    int fails = 0;
    for (int it = 0; it < 2000 && step > 1e-5; ++it) {
        CVector trial = psi;
        for (Eigen::Index i = 0; i < trial.size(); ++i) {
            trial[i] += step * Complex(g(rng), g(rng));
        }
        trial.normalize();
        double v = q.value(j_free, trial);
        if (v > best) {
            best = v;
            psi = trial;
            fails = 0;
        } else if (++fails >= 15) {
            step /= 2;
            fails = 0;
        }
    }
    return {best, psi};
}

// max_p min_k sum_i p_i g[k][i] over the CSPO hull; returns (value, weights).
std::pair<double, RVector> best_free_channel(const std::vector<RVector> &gains, const RMatrix &marg) {
    const int m = (int)marg.cols();
    const int nk = (int)gains.size();
    // Variables [p, t]; t is free.
    LpProblem lp;
    lp.objective = RVector::Zero(m + 1);
    lp.objective[m] = -1.0;
    lp.eq_matrix = RMatrix::Zero(marg.rows() + 1, m + 1);
    lp.eq_matrix.block(0, 0, marg.rows(), m) = marg;
    lp.eq_matrix.block(marg.rows(), 0, 1, m).setOnes();
    lp.eq_rhs = RVector::Zero(marg.rows() + 1);
    lp.eq_rhs[marg.rows()] = 1.0;
    lp.ineq_matrix = RMatrix::Zero(nk, m + 1);
    for (int k = 0; k < nk; ++k) {
        lp.ineq_matrix.block(k, 0, 1, m) = -gains[k].transpose();
        lp.ineq_matrix(k, m) = 1.0;
    }
    lp.ineq_rhs = RVector::Zero(nk);
    lp.lower = RVector::Zero(m + 1);
    lp.lower[m] = -kInf;
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
        throw Error(ErrorCode::numerical_failure, "CSPO overlap LP did not reach an optimum");
    }
    return {-sol.value, sol.x.head(m)};
}

}  // namespace

DminBracket dmin_channel_bracket(const ChoiOperator &c, const StabilizerSet &s, std::uint64_t seed, int starts) {
    check_channel_dim(c, s);
    const int din = c.dim_in(), dout = c.dim_out();
    const int m = (int)s.size();
    RMatrix marg = marginal_rows(s, din, dout);
    auto phis = projectors(s);

    // Lower bound: maximally entangled input, where (id (x) E)(Phi) = J^E / din.
    CMatrix p0 = support_projector(c.normalized(), 1e-9);
    std::vector<RVector> gains = {s.vectorized().transpose() * hvec(p0)};
    auto [f0, w0] = best_free_channel(gains, marg);
    DminBracket out;
    out.lower = std::max(0.0, -std::log2(std::min(1.0, f0)));

    InputSearch q{tensor(identity_channel(din), c).matrix(), din, dout};
    auto lifted = [&](const RVector &w) {
        CMatrix j = double(din) * mixture(s, w);
        return tensor(identity_channel(din), ChoiOperator::unchecked(j, din, dout)).matrix();
    };
    // Per stabilizer state phi_i, the lifted map with Choi din*phi_i (linear in the weights).
    std::vector<CMatrix> lifted_vertices;
    for (int i = 0; i < m; ++i) {
        lifted_vertices.push_back(tensor(identity_channel(din), ChoiOperator::unchecked(double(din) * phis[i], din, dout)).matrix());
    }

    std::mt19937_64 rng(seed);
    RVector w = w0;
    double upper = kInf;
    for (int round = 0; round < 8; ++round) {
        CMatrix jf = lifted(w);
        double best = -kInf;
        CVector arg;
        for (int k = 0; k <= starts; ++k) {
            CVector start = k == 0 ? max_entangled(din) : random_input(din * din, rng);
            auto [v, psi] = climb(q, jf, start, rng);
            if (v > best) {
                best = v;
                arg = psi;
            }
        }
        best = std::max(0.0, best);
        upper = std::min(upper, best);
        if (best <= out.lower + 1e-9) {
            break;
        }
        CMatrix proj = q.target_support(arg);
        RVector g(m);
        CMatrix rho_in = arg * arg.adjoint();
        for (int i = 0; i < m; ++i) {
            g[i] = (proj * apply_choi(lifted_vertices[i], din * din, din * dout, rho_in)).trace().real();
        }
        gains.push_back(g);
        w = best_free_channel(gains, marg).second;
    }
    out.upper_estimate = std::max(upper, out.lower);
    out.upper_certified = false;
    return out;
}

namespace {

// Root fidelity and its gradient in sigma for a fixed sqrt(rho).
}  // namespace

MonotoneReport geometric_measure(const DensityOperator &rho, const StabilizerSet &s, const GeometricOptions &options) {
    check_state_dim(rho, s);
    MonotoneReport out;
    out.name = "geometric";
    const RMatrix &v = s.vectorized();
    const int m = (int)s.size();
    RVector overlap = v.transpose() * hvec(rho.matrix());
    Eigen::Index best;
    double fmax = overlap.maxCoeff(&best);
    out.weights = RVector::Zero(m);
    out.weights[best] = 1.0;
    if (rho.is_pure()) {
        out.value = std::max(0.0, 1.0 - fmax);
        out.details = {{"fidelity_sq", fmax}, {"iterations", 0.0}};
        return out;
    }

    // Root fidelity as an SDP: max Re Tr X over [[L, X], [X^dagger, V^dagger sigma V]] >= 0,
    // with rho = V L V^dagger restricted to its support so that sigma = I/d, X = 0 is interior.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
    std::vector<int> support;
    for (int k = 0; k < s.dim(); ++k) {
        if (es.eigenvalues()[k] > 1e-12) {
            support.push_back(k);
        }
    }
    const int r = (int)support.size();
    CMatrix basis(s.dim(), r);
    CMatrix lam = CMatrix::Zero(r, r);
    for (int k = 0; k < r; ++k) {
        basis.col(k) = es.eigenvectors().col(support[k]);
        lam(k, k) = es.eigenvalues()[support[k]];
    }
    const int nx = 2 * r * r;
    ConicProblem p;
    p.lp.objective = RVector::Zero(m + nx);
    p.lp.eq_matrix = RMatrix::Zero(1, m + nx);
    p.lp.eq_matrix.leftCols(m).setOnes();
    p.lp.eq_rhs = RVector::Ones(1);
    p.lp.ineq_matrix.resize(0, m + nx);
    // |X_ij| <= 1 for any feasible point, so these bounds never bind.
    p.lp.lower = RVector::Zero(m + nx);
    p.lp.lower.tail(nx).setConstant(-2.0);
    PsdBlock blk;
    blk.constant = CMatrix::Zero(2 * r, 2 * r);
    blk.constant.topLeftCorner(r, r) = -lam;
    for (int i = 0; i < m; ++i) {
        CMatrix c = CMatrix::Zero(2 * r, 2 * r);
        c.bottomRightCorner(r, r) = basis.adjoint() * s.projector(i) * basis;
        blk.coefficients.push_back(c);
    }
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            for (Complex unit : {Complex(1, 0), Complex(0, 1)}) {
                CMatrix c = CMatrix::Zero(2 * r, 2 * r);
                c(i, r + j) = unit;
                c(r + j, i) = std::conj(unit);
                blk.coefficients.push_back(c);
                if (i == j && unit.real() == 1.0) {
                    p.lp.objective[(int)blk.coefficients.size() - 1] = -1.0;
                }
            }
        }
    }
    p.blocks.push_back(std::move(blk));
    p.interior = RVector::Zero(m + nx);
    p.interior.head(m).setConstant(1.0 / m);
    CutOptions o;
    o.barrier_tolerance = options.tolerance;
    o.max_newton_steps = options.max_iterations;
    auto sol = solve_cuts_or_no_convergence(p, o);
    double f = std::max(-sol.value, std::sqrt(std::max(0.0, fmax)));
    out.value = std::max(0.0, 1.0 - std::min(1.0, f * f));
    out.weights = sol.x.head(m);
    out.details = {{"fidelity_sq", f * f}, {"newton_steps", (double)sol.rounds}, {"gap", sol.value - sol.lower_bound}};
    return out;
}

double QuasiDecomposition::reconstruction_error(const ChoiOperator &target) const {
    CMatrix rebuilt = lambda * positive.matrix() - (lambda - 1.0) * negative.matrix();
    return (rebuilt - target.matrix()).cwiseAbs().maxCoeff();
}

QuasiDecomposition quasi_decompose_channel(const ChoiOperator &c, const StabilizerSet &s, const GeneralizedRobustnessOptions &options) {
    auto sol = solve_generalized_robustness_channel(c, s, options);
    const int din = c.dim_in(), dout = c.dim_out();
    QuasiDecomposition out;
    out.lambda = sol.lambda;
    if (out.lambda - 1.0 <= 1e-7) {
        out.lambda = 1.0;
        out.positive = c;
        out.negative = c;
        return out;
    }
    // Tr omega = lambda*din, so this keeps the positive part exactly a stabilizer mixture.
    CMatrix jp = sol.omega / (sol.omega.trace().real() / din);
    out.lambda = sol.omega.trace().real() / din;
    out.positive = ChoiOperator::unchecked(jp, din, dout);
    try {
        out.negative = ChoiOperator((sol.omega - c.matrix()) / (out.lambda - 1.0), din, dout);
    } catch (const Error &e) {
        throw Error(ErrorCode::not_cptp_residual, std::string("negative part is not CPTP: ") + e.what());
    }
    if (out.positive.trace_preservation_error() > tol::constraint) {
        throw Error(ErrorCode::not_cptp_residual, "positive part is not trace preserving");
    }
    return out;
}

}  // namespace magickit
