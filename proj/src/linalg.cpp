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

#include "magickit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace magickit {

namespace detail {

SubsystemSplit split_subsystems(const std::vector<int> &dims, const std::vector<bool> &keep) {
    if (dims.size() != keep.size()) {
        throw Error(ErrorCode::dimension_mismatch, "partial_trace: keep mask length differs from dims");
    }
    int total = 1;
    for (int d : dims) {
        total *= d;
    }
    SubsystemSplit s;
    s.kept.resize(total);
    s.traced.resize(total);
    for (size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
            s.kept_dim *= dims[k];
        }
    }
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx;
        int kept = 0, traced = 0, kept_stride = 1, traced_stride = 1;
        for (int k = (int)dims.size() - 1; k >= 0; --k) {
            int digit = rem % dims[k];
            rem /= dims[k];
            if (keep[k]) {
                kept += digit * kept_stride;
                kept_stride *= dims[k];
            } else {
                traced += digit * traced_stride;
                traced_stride *= dims[k];
            }
        }
        s.kept[idx] = kept;
        s.traced[idx] = traced;
    }
    return s;
}

std::vector<int> permutation_map(const std::vector<int> &dims, const std::vector<int> &order) {
    size_t k = dims.size();
    if (order.size() != k) {
        throw Error(ErrorCode::dimension_mismatch, "permute_subsystems: order length differs from dims");
    }
    int total = 1;
    for (int d : dims) {
        total *= d;
    }
    std::vector<int> digits(k);
    std::vector<int> out(total);
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx;
        for (int f = (int)k - 1; f >= 0; --f) {
            digits[f] = rem % dims[f];
            rem /= dims[f];
        }
        int target = 0;
        for (size_t f = 0; f < k; ++f) {
            target = target * dims[order[f]] + digits[order[f]];
        }
        out[idx] = target;
    }
    return out;
}

}  // namespace detail

RVector hvec(const CMatrix &m) {
    const int d = (int)m.rows();
    RVector v(d * d);
    int k = 0;
    for (int i = 0; i < d; ++i) {
        v[k++] = m(i, i).real();
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            v[k++] = M_SQRT2 * m(i, j).real();
            v[k++] = M_SQRT2 * m(i, j).imag();
        }
    }
    return v;
}

CMatrix unhvec(const RVector &v, int dim) {
    if (v.size() != (Eigen::Index)dim * dim) {
        throw Error(ErrorCode::dimension_mismatch, "unhvec: vector length is not dim^2");
    }
    CMatrix m = CMatrix::Zero(dim, dim);
    int k = 0;
    for (int i = 0; i < dim; ++i) {
        m(i, i) = v[k++];
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            Complex z(v[k], v[k + 1]);
            k += 2;
            m(i, j) = z / M_SQRT2;
            m(j, i) = std::conj(z) / M_SQRT2;
        }
    }
    return m;
}

EigenPair eig_min(const CMatrix &m) {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (hermitian_error(m) > tol::hermitian * scale) {
        throw Error(ErrorCode::not_hermitian, "eig_min: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

CMatrix psd_sqrt(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    RVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix support_projector(const CMatrix &m, double threshold) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    const int d = (int)m.rows();
    CMatrix p = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        if (es.eigenvalues()[k] > threshold) {
            p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
        }
    }
    return p;
}

DensityOperator::DensityOperator(const CMatrix &m, double tolerance) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw Error(ErrorCode::not_a_state, "density operator must be a non-empty square matrix");
    }
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (hermitian_error(m) > std::max(tolerance, tol::hermitian) * scale) {
        throw Error(ErrorCode::not_hermitian, "density operator is not Hermitian");
    }
    CMatrix h = hermitian_part(m);
    double tr = h.trace().real();
    if (std::abs(tr - 1.0) > tolerance) {
        throw Error(ErrorCode::not_a_state, "density operator trace is " + std::to_string(tr));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()[0] < -tolerance) {
        throw Error(ErrorCode::not_a_state, "density operator has eigenvalue " + std::to_string(es.eigenvalues()[0]));
    }
    rho_ = std::move(h);
}

DensityOperator DensityOperator::pure(const CVector &psi) {
    double n = psi.norm();
    if (n == 0) {
        throw Error(ErrorCode::not_a_state, "zero state vector");
    }
    CVector u = psi / n;
    return DensityOperator(u * u.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
    return DensityOperator(CMatrix::Identity(dim, dim) / double(dim));
}

int DensityOperator::qubits() const {
    int d = dim();
    int n = 0;
    while ((1 << n) < d) {
        ++n;
    }
    if ((1 << n) != d) {
        throw Error(ErrorCode::unsupported_dimension, "dimension is not a power of two");
    }
    return n;
}

bool DensityOperator::is_pure(double tolerance) const {
    return std::abs((rho_ * rho_).trace().real() - 1.0) <= tolerance;
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    return DensityOperator(kron(a.matrix(), b.matrix()));
}

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "fidelity: dimensions differ");
    }
    CMatrix s = psd_sqrt(sigma.matrix());
    CMatrix k = hermitian_part(CMatrix(s * rho.matrix() * s));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(k, Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (double ev : es.eigenvalues()) {
        // Roundoff-level eigenvalues would otherwise contribute ~1e-8 after the square root.
        if (ev > 1e-14) {
            f += std::sqrt(ev);
        }
    }
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace magickit
