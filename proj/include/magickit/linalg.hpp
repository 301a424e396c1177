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

#ifndef MAGICKIT_LINALG_HPP
#define MAGICKIT_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

#include "magickit/errors.hpp"

namespace magickit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Bloch = Eigen::Vector3d;

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double constraint = 1e-8;
inline constexpr double optimum = 1e-6;
}  // namespace tol

template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b) {
    Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Largest absolute entry of M - M^dagger.
template <typename D>
double hermitian_error(const Eigen::MatrixBase<D> &m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename D>
Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_part(const Eigen::MatrixBase<D> &m) {
    return (m + m.adjoint()) / 2.0;
}

namespace detail {

// Splits every composite index into (kept, traced) sub-indices. Factor 0 is most significant.
struct SubsystemSplit {
    std::vector<int> kept;
    std::vector<int> traced;
    int kept_dim = 1;
};

SubsystemSplit split_subsystems(const std::vector<int> &dims, const std::vector<bool> &keep);

std::vector<int> permutation_map(const std::vector<int> &dims, const std::vector<int> &order);

}  // namespace detail

/// Traces out every factor i with keep[i] == false.
template <typename D>
Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<D> &m, const std::vector<int> &dims, const std::vector<bool> &keep) {
    auto split = detail::split_subsystems(dims, keep);
    if ((Eigen::Index)split.kept.size() != m.rows() || m.rows() != m.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "partial_trace: matrix size does not match subsystem dims");
    }
    Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(split.kept_dim, split.kept_dim);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (split.traced[i] == split.traced[j]) {
                out(split.kept[i], split.kept[j]) += m(i, j);
            }
        }
    }
    return out;
}

/// Reorders tensor factors: output factor k is input factor order[k].
template <typename D>
Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> permute_subsystems(
    const Eigen::MatrixBase<D> &m, const std::vector<int> &dims, const std::vector<int> &order) {
    auto map = detail::permutation_map(dims, order);
    if ((Eigen::Index)map.size() != m.rows() || m.rows() != m.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "permute_subsystems: matrix size does not match subsystem dims");
    }
    Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(map[i], map[j]) = m(i, j);
        }
    }
    return out;
}

/// Real coordinates of a Hermitian matrix: diagonal, then sqrt(2)*Re and sqrt(2)*Im of the
/// upper triangle in row-major order. Isometric: Tr[AB] = hvec(A).dot(hvec(B)).
RVector hvec(const CMatrix &m);
CMatrix unhvec(const RVector &v, int dim);

struct EigenPair {
    double value;
    CVector vector;
};

/// Minimum eigenpair of a Hermitian matrix. Throws not_hermitian.
EigenPair eig_min(const CMatrix &m);

/// Principal square root of a PSD matrix (negative eigenvalues clipped).
CMatrix psd_sqrt(const CMatrix &m);

/// Projector onto the eigenspaces with eigenvalue above threshold.
CMatrix support_projector(const CMatrix &m, double threshold = 1e-9);

/// Hermitian, unit trace, PSD within tolerance.
class DensityOperator {
   public:
    DensityOperator() = default;
    explicit DensityOperator(const CMatrix &m, double tolerance = tol::psd);

    static DensityOperator pure(const CVector &psi);
    static DensityOperator maximally_mixed(int dim);

    const CMatrix &matrix() const {
        return rho_;
    }
    int dim() const {
        return (int)rho_.rows();
    }
    /// log2(dim); throws unsupported_dimension when dim is not a power of two.
    int qubits() const;
    bool is_pure(double tolerance = 1e-9) const;

   private:
    CMatrix rho_;
};

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);

double fidelity(const DensityOperator &rho, const DensityOperator &sigma);

}  // namespace magickit

#endif
