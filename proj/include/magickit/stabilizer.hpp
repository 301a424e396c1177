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

#ifndef MAGICKIT_STABILIZER_HPP
#define MAGICKIT_STABILIZER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magickit/linalg.hpp"
#include "magickit/lp.hpp"

namespace magickit {

/// Letters over {I,X,Y,Z}; letter k acts on tensor factor k (factor 0 is the most significant bit).
struct PauliString {
    std::string letters;
    Complex phase{1.0, 0.0};

    /// Accepts an optional sign prefix: "+", "-", "i", "+i", "-i". E.g. "-Y", "XZ", "iXX".
    static PauliString parse(std::string_view text);
    int qubits() const {
        return (int)letters.size();
    }
    std::string str() const;
};

CMatrix pauli_matrix(const PauliString &p);

namespace gates {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
CMatrix H();
CMatrix S();
CMatrix T();
/// Controlled-NOT on two qubits, control first.
CMatrix CNOT();
/// Product of single-letter gates in written order, e.g. "SHZ" = S*H*Z.
CMatrix from_word(std::string_view word);
}  // namespace gates

/// Lifts a gate acting on `targets` (in the gate's own factor order) to an n-qubit register.
CMatrix embed_gate(const CMatrix &u, const std::vector<int> &targets, int n);

/// Product of `depth` uniformly chosen generators H_i, S_i, CNOT_ij (default 8n^2).
CMatrix random_clifford(int n, std::uint64_t seed, int depth = 0);

struct NamedUnitary {
    std::string name;
    CMatrix matrix;
};

/// The 24 single-qubit Clifford unitaries, one representative per global phase class.
std::vector<NamedUnitary> clifford_unitaries_single_qubit();

enum class StabSource { computed, cache };

class StabilizerSet {
   public:
    StabilizerSet(int n, std::vector<CVector> states, StabSource source);

    int qubits() const {
        return n_;
    }
    int dim() const {
        return 1 << n_;
    }
    size_t size() const {
        return states_.size();
    }
    const std::vector<CVector> &states() const {
        return states_;
    }
    const CVector &state(size_t i) const {
        return states_[i];
    }
    CMatrix projector(size_t i) const {
        return states_[i] * states_[i].adjoint();
    }
    /// Column i is hvec of the i-th projector.
    const RMatrix &vectorized() const {
        return vectorized_;
    }
    StabSource source() const {
        return source_;
    }
    /// Index of the state equal to psi up to phase, if any.
    std::optional<size_t> find(const CVector &psi, double tolerance = 1e-9) const;

   private:
    int n_;
    std::vector<CVector> states_;
    RMatrix vectorized_;
    StabSource source_;
};

inline constexpr int kMaxStabilizerQubits = 3;

std::filesystem::path default_cache_dir();

struct EnumerateOptions {
    /// Empty means default_cache_dir().
    std::filesystem::path cache_dir;
    bool use_cache = true;
};

/// Breadth-first closure of |0...0> under H_i, S_i, CNOT_ij with phase-insensitive deduplication.
StabilizerSet enumerate_pure_stabilizer_states(int n, const EnumerateOptions &options = {});

/// Process-wide memoized enumeration (thread-safe, read-only after first build).
const StabilizerSet &shared_stabilizer_set(int n);

/// All signed Pauli strings P with P|psi> = |psi> (within tolerance).
std::vector<PauliString> stabilizer_group(const CVector &psi, double tolerance = 1e-10);

bool is_entangled(const CVector &psi, int dim_a, int dim_b, double tolerance = 1e-9);

struct StabWitness {
    CMatrix w;
    double violation = 0.0;
};

struct StabMembership {
    FeasibilityOutcome inside;
    std::optional<StabWitness> witness;
};

/// Convex-combination test against the enumerated polytope; witness built from the Farkas certificate.
StabMembership is_stabilizer_mixed(const CMatrix &rho, const StabilizerSet &s);
StabMembership is_stabilizer_mixed(const DensityOperator &rho, const StabilizerSet &s);

Bloch bloch_vector(const DensityOperator &rho);
DensityOperator from_bloch(const Bloch &r);

CMatrix support_projector(const DensityOperator &rho);

}  // namespace magickit

#endif
