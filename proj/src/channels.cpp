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

#include "magickit/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace magickit {

namespace {

void check_shape(const CMatrix &j, int dim_in, int dim_out) {
    if (dim_in < 1 || dim_out < 1 || j.rows() != dim_in * dim_out || j.cols() != j.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "choi matrix shape does not match dim_in*dim_out");
    }
}

std::vector<long long> rounded_key(const RVector &v) {
    std::vector<long long> key(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        key[i] = std::llround(v[i] * 1e7);
    }
    return key;
}

}  // namespace

ChoiOperator ChoiOperator::unchecked(const CMatrix &j, int dim_in, int dim_out) {
    check_shape(j, dim_in, dim_out);
    ChoiOperator c;
    c.j_ = hermitian_part(j);
    c.dim_in_ = dim_in;
    c.dim_out_ = dim_out;
    return c;
}

ChoiOperator::ChoiOperator(const CMatrix &j, int dim_in, int dim_out) {
    *this = unchecked(j, dim_in, dim_out);
    double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
    if (hermitian_error(j) > tol::psd * scale) {
        throw Error(ErrorCode::not_hermitian, "choi matrix is not Hermitian");
    }
    if (trace_preservation_error() > tol::constraint) {
        throw Error(ErrorCode::not_trace_preserving, "choi matrix input marginal is not the identity");
    }
    if (min_eigenvalue() < -tol::psd * scale) {
        throw Error(ErrorCode::invalid_input, "choi matrix is not positive semidefinite");
    }
}

double ChoiOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(j_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

double ChoiOperator::trace_preservation_error() const {
    CMatrix marginal = partial_trace(j_, {dim_in_, dim_out_}, {true, false});
    return (marginal - CMatrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
}

ChoiOperator choi_from_kraus(const std::vector<CMatrix> &kraus) {
    if (kraus.empty()) {
        throw Error(ErrorCode::invalid_input, "choi_from_kraus: no Kraus operators");
    }
    const int dout = (int)kraus[0].rows(), din = (int)kraus[0].cols();
    CMatrix sum = CMatrix::Zero(din, din);
    CMatrix j = CMatrix::Zero(din * dout, din * dout);
    for (const auto &k : kraus) {
        if (k.rows() != dout || k.cols() != din) {
            throw Error(ErrorCode::dimension_mismatch, "choi_from_kraus: Kraus operators differ in shape");
        }
        sum += k.adjoint() * k;
        CVector v(din * dout);
        for (int i = 0; i < din; ++i) {
            for (int a = 0; a < dout; ++a) {
                v[i * dout + a] = k(a, i);
            }
        }
        j += v * v.adjoint();
    }
    if ((sum - CMatrix::Identity(din, din)).cwiseAbs().maxCoeff() > tol::constraint) {
        throw Error(ErrorCode::not_trace_preserving, "sum of K^dagger K differs from the identity");
    }
    return ChoiOperator(j, din, dout);
}

ChoiOperator choi_from_unitary(const CMatrix &u) {
    return choi_from_kraus({u});
}

std::vector<CMatrix> kraus_from_choi(const ChoiOperator &c) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c.matrix());
    const int din = c.dim_in(), dout = c.dim_out();
    std::vector<CMatrix> out;
    for (int k = (int)es.eigenvalues().size() - 1; k >= 0; --k) {
        double lam = es.eigenvalues()[k];
        if (lam <= 1e-12) {
            continue;
        }
        CMatrix op(dout, din);
        for (int i = 0; i < din; ++i) {
            for (int a = 0; a < dout; ++a) {
                op(a, i) = std::sqrt(lam) * es.eigenvectors()(i * dout + a, k);
            }
        }
        out.push_back(std::move(op));
    }
    return out;
}

CMatrix apply_choi(const CMatrix &j, int dim_in, int dim_out, const CMatrix &x) {
    if (x.rows() != dim_in || x.cols() != dim_in) {
        throw Error(ErrorCode::dimension_mismatch, "apply: operator dimension differs from the channel input");
    }
    CMatrix out = CMatrix::Zero(dim_out, dim_out);
    for (int i = 0; i < dim_in; ++i) {
        for (int k = 0; k < dim_in; ++k) {
            if (x(i, k) != Complex(0, 0)) {
                out += x(i, k) * j.block(i * dim_out, k * dim_out, dim_out, dim_out);
            }
        }
    }
    return out;
}

DensityOperator apply_channel(const ChoiOperator &c, const DensityOperator &rho) {
    return DensityOperator(apply_choi(c.matrix(), c.dim_in(), c.dim_out(), rho.matrix()));
}

ChoiOperator compose(const ChoiOperator &second, const ChoiOperator &first) {
    if (first.dim_out() != second.dim_in()) {
        throw Error(ErrorCode::dimension_mismatch, "compose: output of the first map differs from input of the second");
    }
    const int din = first.dim_in(), dout = second.dim_out();
    CMatrix j(din * dout, din * dout);
    for (int i = 0; i < din; ++i) {
        for (int k = 0; k < din; ++k) {
            CMatrix mid = first.matrix().block(i * first.dim_out(), k * first.dim_out(), first.dim_out(), first.dim_out());
            j.block(i * dout, k * dout, dout, dout) = apply_choi(second.matrix(), second.dim_in(), dout, mid);
        }
    }
    return ChoiOperator::unchecked(j, din, dout);
}

ChoiOperator tensor(const ChoiOperator &a, const ChoiOperator &b) {
    CMatrix j = permute_subsystems(kron(a.matrix(), b.matrix()), {a.dim_in(), a.dim_out(), b.dim_in(), b.dim_out()}, {0, 2, 1, 3});
    return ChoiOperator::unchecked(j, a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out());
}

ChoiOperator identity_channel(int dim) {
    return choi_from_unitary(CMatrix::Identity(dim, dim));
}

ChoiOperator replacement_channel(int dim_in, const CMatrix &sigma) {
    return ChoiOperator(kron(CMatrix::Identity(dim_in, dim_in), sigma), dim_in, (int)sigma.rows());
}

ChoiOperator measure_prepare(const std::vector<CVector> &basis, const std::vector<CMatrix> &preparations) {
    if (basis.empty() || basis.size() != preparations.size()) {
        throw Error(ErrorCode::invalid_input, "measure_prepare: need one preparation per basis vector");
    }
    const int din = (int)basis[0].size(), dout = (int)preparations[0].rows();
    CMatrix j = CMatrix::Zero(din * dout, din * dout);
    for (size_t k = 0; k < basis.size(); ++k) {
        CVector b = basis[k].conjugate();
        j += kron(CMatrix(b * b.adjoint()), preparations[k]);
    }
    return ChoiOperator(j, din, dout);
}

ChoiOperator mix(const std::vector<ChoiOperator> &channels, const std::vector<double> &weights) {
    if (channels.empty() || channels.size() != weights.size()) {
        throw Error(ErrorCode::invalid_input, "mix: need one weight per channel");
    }
    CMatrix j = CMatrix::Zero(channels[0].matrix().rows(), channels[0].matrix().cols());
    for (size_t k = 0; k < channels.size(); ++k) {
        if (channels[k].dim_in() != channels[0].dim_in() || channels[k].dim_out() != channels[0].dim_out()) {
            throw Error(ErrorCode::dimension_mismatch, "mix: channels differ in dimensions");
        }
        j += weights[k] * channels[k].matrix();
    }
    return ChoiOperator(j, channels[0].dim_in(), channels[0].dim_out());
}

StabMembership is_cspo(const ChoiOperator &c, const StabilizerSet &s) {
    if (c.dim_in() * c.dim_out() != s.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "is_cspo: channel dimensions do not match the stabilizer set");
    }
    return is_stabilizer_mixed(c.normalized(), s);
}

std::vector<NamedChannel> prepared_channel_library() {
    std::vector<NamedChannel> out;
    for (auto &u : clifford_unitaries_single_qubit()) {
        out.push_back({"unitary:" + u.name, choi_from_unitary(u.matrix)});
    }
    static const char *labels[] = {"0", "1", "+", "-", "+i", "-i"};
    std::vector<CVector> kets;
    std::vector<std::string> names;
    for (int k = 0; k < 6; ++k) {
        CVector v(2);
        switch (k) {
            case 0: v << 1, 0; break;
            case 1: v << 0, 1; break;
            case 2: v << 1, 1; break;
            case 3: v << 1, -1; break;
            case 4: v << 1, Complex(0, 1); break;
            default: v << 1, Complex(0, -1); break;
        }
        kets.push_back(v.normalized());
        names.push_back(labels[k]);
    }
    for (int k = 0; k < 6; ++k) {
        out.push_back({std::string("replace:") + names[k], replacement_channel(2, kets[k] * kets[k].adjoint())});
    }
    const char *bases[] = {"Z", "X", "Y"};
    for (int b = 0; b < 3; ++b) {
        std::vector<CVector> basis = {kets[2 * b], kets[2 * b + 1]};
        for (int p = 0; p < 6; ++p) {
            for (int q = 0; q < 6; ++q) {
                std::vector<CMatrix> preps = {kets[p] * kets[p].adjoint(), kets[q] * kets[q].adjoint()};
                out.push_back({std::string("measure") + bases[b] + ":" + names[p] + "," + names[q], measure_prepare(basis, preps)});
            }
        }
    }
    return out;
}

SuperchannelChoi superchannel_from_pre_post(const ChoiOperator &pre, const ChoiOperator &post, int dim_a0, int dim_a1) {
    if (dim_a0 < 1 || dim_a1 < 1 || pre.dim_out() % dim_a0 != 0) {
        throw Error(ErrorCode::dimension_mismatch, "superchannel: pre-processing output is not A0 (x) E");
    }
    const int e = pre.dim_out() / dim_a0;
    if (post.dim_in() != dim_a1 * e) {
        throw Error(ErrorCode::dimension_mismatch, "superchannel: post-processing input is not A1 (x) E");
    }
    SuperchannelDims d{dim_a0, dim_a1, pre.dim_in(), post.dim_out()};
    const int a = d.a0 * d.a1, bb = d.b0 * d.b1;
    std::vector<CMatrix> pre_images(d.b0 * d.b0);
    for (int p = 0; p < d.b0; ++p) {
        for (int q = 0; q < d.b0; ++q) {
            CMatrix unit = CMatrix::Zero(d.b0, d.b0);
            unit(p, q) = 1;
            pre_images[p * d.b0 + q] = apply_choi(pre.matrix(), d.b0, pre.dim_out(), unit);
        }
    }
    SuperchannelChoi out{CMatrix::Zero(a * bb, a * bb), d};
    for (int x = 0; x < a; ++x) {
        const int x0 = x / d.a1, x1 = x % d.a1;
        for (int y = 0; y < a; ++y) {
            const int y0 = y / d.a1, y1 = y % d.a1;
            CMatrix a1_unit = CMatrix::Zero(d.a1, d.a1);
            a1_unit(x1, y1) = 1;
            for (int p = 0; p < d.b0; ++p) {
                for (int q = 0; q < d.b0; ++q) {
                    CMatrix sub = pre_images[p * d.b0 + q].block(x0 * e, y0 * e, e, e);
                    CMatrix img = apply_choi(post.matrix(), post.dim_in(), d.b1, kron(a1_unit, sub));
                    out.j.block((x * d.b0 + p) * d.b1, (y * d.b0 + q) * d.b1, d.b1, d.b1) = img;
                }
            }
        }
    }
    return out;
}

std::vector<std::string> validate_superchannel(const SuperchannelChoi &theta, double tolerance) {
    const auto &d = theta.dims;
    if (theta.j.rows() != d.total() || theta.j.cols() != d.total()) {
        return {"shape"};
    }
    std::vector<std::string> violated;
    const CMatrix &j = theta.j;
    double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(j), Eigen::EigenvaluesOnly);
    if (hermitian_error(j) > tolerance * scale || es.eigenvalues()[0] < -tolerance * scale) {
        violated.push_back("positivity");
    }
    const std::vector<int> dims = {d.a0, d.a1, d.b0, d.b1};
    CMatrix a1b0 = partial_trace(j, dims, {false, true, true, false});
    if ((a1b0 - CMatrix::Identity(d.a1 * d.b0, d.a1 * d.b0)).cwiseAbs().maxCoeff() > tolerance) {
        violated.push_back("a1b0-marginal");
    }
    CMatrix ab0 = partial_trace(j, dims, {true, true, true, false});
    CMatrix a0b0 = partial_trace(ab0, {d.a0, d.a1, d.b0}, {true, false, true});
    CMatrix expected = permute_subsystems(kron(a0b0, CMatrix(CMatrix::Identity(d.a1, d.a1) / double(d.a1))), {d.a0, d.b0, d.a1}, {0, 2, 1});
    if ((ab0 - expected).cwiseAbs().maxCoeff() > tolerance) {
        violated.push_back("ab0-factorization");
    }
    return violated;
}

ChoiOperator apply_superchannel(const SuperchannelChoi &theta, const ChoiOperator &c) {
    const auto &d = theta.dims;
    if (c.dim_in() != d.a0 || c.dim_out() != d.a1) {
        throw Error(ErrorCode::dimension_mismatch, "apply_superchannel: input channel dimensions differ from A0, A1");
    }
    const int a = d.a0 * d.a1, bb = d.b0 * d.b1;
    CMatrix out = CMatrix::Zero(bb, bb);
    for (int x = 0; x < a; ++x) {
        for (int y = 0; y < a; ++y) {
            Complex w = c.matrix()(x, y);
            if (w != Complex(0, 0)) {
                out += w * theta.j.block(x * bb, y * bb, bb, bb);
            }
        }
    }
    return ChoiOperator(out, d.b0, d.b1);
}

StabMembership is_completely_cspo_preserving(const SuperchannelChoi &theta, const StabilizerSet &s) {
    if (theta.dims.total() > (1 << kMaxStabilizerQubits)) {
        throw Error(ErrorCode::unsupported_dimension, "superchannel membership is limited to 3 qubits in total");
    }
    if (theta.dims.total() != s.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "superchannel dimensions do not match the stabilizer set");
    }
    return is_stabilizer_mixed(theta.j / double(theta.dims.a1 * theta.dims.b0), s);
}

const std::vector<ChoiOperator> &qubit_cspo_vertices() {
    static std::once_flag once;
    static std::vector<ChoiOperator> vertices;
    std::call_once(once, [] {
        const auto &s = shared_stabilizer_set(2);
        const int m = (int)s.size();
        std::vector<Eigen::Vector4d> marg(m);
        for (int i = 0; i < m; ++i) {
            marg[i] = hvec(partial_trace(s.projector(i), {2, 2}, {true, false}));
        }
        Eigen::Vector4d target = hvec(CMatrix(CMatrix::Identity(2, 2) / 2.0));
        std::map<std::vector<long long>, bool> seen;
        auto add = [&](const CMatrix &normalized) {
            auto key = rounded_key(hvec(normalized));
            if (seen.emplace(key, true).second) {
                vertices.emplace_back(2.0 * normalized, 2, 2);
            }
        };
        for (const auto &u : clifford_unitaries_single_qubit()) {
            add(choi_from_unitary(u.matrix).normalized());
        }
        int idx[4];
        for (idx[0] = 0; idx[0] < m; ++idx[0]) {
            for (idx[1] = idx[0] + 1; idx[1] < m; ++idx[1]) {
                for (idx[2] = idx[1] + 1; idx[2] < m; ++idx[2]) {
                    for (idx[3] = idx[2] + 1; idx[3] < m; ++idx[3]) {
                        Eigen::Matrix4d b;
                        for (int k = 0; k < 4; ++k) {
                            b.col(k) = marg[idx[k]];
                        }
                        Eigen::FullPivLU<Eigen::Matrix4d> lu(b);
                        if (lu.rank() < 4) {
                            continue;
                        }
                        Eigen::Vector4d c = lu.solve(target);
                        if (c.minCoeff() < -1e-9) {
                            continue;
                        }
                        CMatrix normalized = CMatrix::Zero(4, 4);
                        for (int k = 0; k < 4; ++k) {
                            if (c[k] > 1e-12) {
                                normalized += c[k] * s.projector(idx[k]);
                            }
                        }
                        add(normalized);
                    }
                }
            }
        }
    });
    return vertices;
}

PreservingCheck is_cspo_preserving_qubit(const SuperchannelChoi &theta) {
    const auto &d = theta.dims;
    if (d.a0 != 2 || d.a1 != 2 || d.b0 != 2 || d.b1 != 2) {
        throw Error(ErrorCode::unsupported_dimension, "CSPO-preservation check is implemented for qubit channels only");
    }
    const auto &s = shared_stabilizer_set(2);
    PreservingCheck out;
    for (const auto &v : qubit_cspo_vertices()) {
        ++out.vertices_checked;
        ChoiOperator image = apply_superchannel(theta, v);
        if (!is_cspo(image, s).inside.feasible) {
            out.preserving = false;
            out.counterexample = v;
            return out;
        }
    }
    return out;
}

}  // namespace magickit
