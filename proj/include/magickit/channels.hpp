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

#ifndef MAGICKIT_CHANNELS_HPP
#define MAGICKIT_CHANNELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "magickit/stabilizer.hpp"

namespace magickit {

/// Choi matrix J = sum_ij |i><j| (x) N(|i><j|) on A0 (x) A1.
class ChoiOperator {
   public:
    ChoiOperator() = default;
    /// Validates complete positivity and trace preservation.
    ChoiOperator(const CMatrix &j, int dim_in, int dim_out);
    /// Skips the CPTP checks (shape is still checked). Used for Hermiticity-preserving maps.
    static ChoiOperator unchecked(const CMatrix &j, int dim_in, int dim_out);

    const CMatrix &matrix() const {
        return j_;
    }
    int dim_in() const {
        return dim_in_;
    }
    int dim_out() const {
        return dim_out_;
    }
    /// J / dim_in, a density operator when the map is CPTP.
    CMatrix normalized() const {
        return j_ / double(dim_in_);
    }
    double min_eigenvalue() const;
    /// max |Tr_A1 J - I|.
    double trace_preservation_error() const;

   private:
    CMatrix j_;
    int dim_in_ = 0;
    int dim_out_ = 0;
};

ChoiOperator choi_from_kraus(const std::vector<CMatrix> &kraus);
ChoiOperator choi_from_unitary(const CMatrix &u);
std::vector<CMatrix> kraus_from_choi(const ChoiOperator &c);

/// Linear action of the map with Choi matrix j on an arbitrary operator x.
CMatrix apply_choi(const CMatrix &j, int dim_in, int dim_out, const CMatrix &x);
DensityOperator apply_channel(const ChoiOperator &c, const DensityOperator &rho);

/// Choi of second o first.
ChoiOperator compose(const ChoiOperator &second, const ChoiOperator &first);
/// Choi of a (x) b, ordered (A0 B0) (x) (A1 B1).
ChoiOperator tensor(const ChoiOperator &a, const ChoiOperator &b);
ChoiOperator identity_channel(int dim);
/// rho -> Tr[rho] sigma.
ChoiOperator replacement_channel(int dim_in, const CMatrix &sigma);
/// Measures the projective basis {|b_k>} and prepares sigma_k on outcome k.
ChoiOperator measure_prepare(const std::vector<CVector> &basis, const std::vector<CMatrix> &preparations);
/// Convex combination sum_k w_k C_k.
ChoiOperator mix(const std::vector<ChoiOperator> &channels, const std::vector<double> &weights);

/// J / dim_in tested against the stabilizer polytope of dim_in*dim_out.
StabMembership is_cspo(const ChoiOperator &c, const StabilizerSet &s);

struct NamedChannel {
    std::string name;
    ChoiOperator choi;
};

/// 24 Clifford unitaries, 6 replacement channels and Pauli-basis measure-and-prepare channels.
std::vector<NamedChannel> prepared_channel_library();

struct SuperchannelDims {
    int a0 = 1, a1 = 1, b0 = 1, b1 = 1;
    int total() const {
        return a0 * a1 * b0 * b1;
    }
};

/// Choi matrix on A0 (x) A1 (x) B0 (x) B1.
struct SuperchannelChoi {
    CMatrix j;
    SuperchannelDims dims;
};

/// pre: B0 -> A0 (x) E, post: A1 (x) E -> B1. Memory dimension E = pre.dim_out / dim_a0.
SuperchannelChoi superchannel_from_pre_post(const ChoiOperator &pre, const ChoiOperator &post, int dim_a0, int dim_a1);

/// Violated conditions among "positivity", "a1b0-marginal", "ab0-factorization"; empty when valid.
std::vector<std::string> validate_superchannel(const SuperchannelChoi &theta, double tolerance = tol::constraint);

ChoiOperator apply_superchannel(const SuperchannelChoi &theta, const ChoiOperator &c);

/// J / (|A1||B0|) tested against the stabilizer polytope of the whole A0A1B0B1 system.
StabMembership is_completely_cspo_preserving(const SuperchannelChoi &theta, const StabilizerSet &s);

/// Extreme points of the qubit CSPO polytope (normalized Choi in the 2-qubit stabilizer hull
/// with maximally mixed input marginal).
const std::vector<ChoiOperator> &qubit_cspo_vertices();

struct PreservingCheck {
    bool preserving = true;
    std::optional<ChoiOperator> counterexample;
    size_t vertices_checked = 0;
};

PreservingCheck is_cspo_preserving_qubit(const SuperchannelChoi &theta);

}  // namespace magickit

#endif
