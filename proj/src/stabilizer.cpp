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

#include "magickit/stabilizer.hpp"

#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <nlohmann/json.hpp>
#include <sstream>

namespace magickit {

namespace {

constexpr int kCacheVersion = 1;
constexpr double kDedupTolerance = 1e-9;

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Phase-fixed, rounded amplitudes; equal keys mean equal rays for stabilizer amplitudes.
std::vector<long long> ray_key(const CVector &v) {
    Complex ref = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-6) {
            ref = std::conj(v[i]) / std::abs(v[i]);
            break;
        }
    }
    std::vector<long long> key;
    key.reserve(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        Complex z = v[i] * ref;
        key.push_back(std::llround(z.real() * 1e6));
        key.push_back(std::llround(z.imag() * 1e6));
    }
    return key;
}

std::filesystem::path cache_file(const std::filesystem::path &dir, int n) {
    return dir / ("stab_n" + std::to_string(n) + ".bin");
}

std::optional<std::vector<CVector>> load_cache(const std::filesystem::path &file, int n) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::string header;
    if (!std::getline(in, header)) {
        return std::nullopt;
    }
    nlohmann::json h = nlohmann::json::parse(header, nullptr, false);
    if (h.is_discarded() || h.value("version", 0) != kCacheVersion || h.value("n", -1) != n) {
        return std::nullopt;
    }
    size_t count = h.value("count", (size_t)0);
    int dim = 1 << n;
    std::vector<double> raw(count * dim * 2);
    in.read(reinterpret_cast<char *>(raw.data()), (std::streamsize)(raw.size() * sizeof(double)));
    if ((size_t)in.gcount() != raw.size() * sizeof(double)) {
        return std::nullopt;
    }
    std::vector<CVector> states(count, CVector(dim));
    for (size_t s = 0; s < count; ++s) {
        for (int k = 0; k < dim; ++k) {
            states[s][k] = Complex(raw[(s * dim + k) * 2], raw[(s * dim + k) * 2 + 1]);
        }
    }
    return states;
}

void save_cache(const std::filesystem::path &dir, int n, const std::vector<CVector> &states) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        return;
    }
    auto target = cache_file(dir, n);
    auto tmp = target;
    tmp += ".tmp" + std::to_string(std::rand());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            return;
        }
        nlohmann::json h = {{"version", kCacheVersion}, {"n", n}, {"count", states.size()}, {"tolerance", kDedupTolerance}};
        out << h.dump() << "\n";
        for (const auto &v : states) {
            for (Eigen::Index k = 0; k < v.size(); ++k) {
                double re = v[k].real(), im = v[k].imag();
                out.write(reinterpret_cast<const char *>(&re), sizeof re);
                out.write(reinterpret_cast<const char *>(&im), sizeof im);
            }
        }
        if (!out) {
            std::filesystem::remove(tmp, ec);
            return;
        }
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
    }
}

std::vector<CVector> bfs_enumerate(int n) {
    const int dim = 1 << n;
    std::vector<CMatrix> generators;
    for (int q = 0; q < n; ++q) {
        generators.push_back(embed_gate(gates::H(), {q}, n));
        generators.push_back(embed_gate(gates::S(), {q}, n));
    }
    for (int c = 0; c < n; ++c) {
        for (int t = 0; t < n; ++t) {
            if (c != t) {
                generators.push_back(embed_gate(gates::CNOT(), {c, t}, n));
            }
        }
    }
    std::vector<CVector> states;
    std::map<std::vector<long long>, size_t> seen;
    std::deque<size_t> queue;
    CVector zero = CVector::Unit(dim, 0);
    states.push_back(zero);
    seen[ray_key(zero)] = 0;
    queue.push_back(0);
    while (!queue.empty()) {
        size_t cur = queue.front();
        queue.pop_front();
        for (const auto &g : generators) {
            CVector next = g * states[cur];
            auto key = ray_key(next);
            auto it = seen.find(key);
            if (it != seen.end()) {
                if (std::abs(states[it->second].dot(next)) < 1 - kDedupTolerance) {
                    throw Error(ErrorCode::numerical_failure, "stabilizer enumeration: rounding collision");
                }
                continue;
            }
            seen.emplace(std::move(key), states.size());
            queue.push_back(states.size());
            states.push_back(std::move(next));
        }
    }
    return states;
}

}  // namespace

PauliString PauliString::parse(std::string_view text) {
    PauliString p;
    size_t pos = 0;
    bool negative = false, imaginary = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        imaginary = true;
        ++pos;
    }
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '_') {
            c = 'I';
        }
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw Error(ErrorCode::invalid_input, "pauli string: unexpected character '" + std::string(1, text[pos]) + "'");
        }
        p.letters.push_back(c);
    }
    if (p.letters.empty()) {
        throw Error(ErrorCode::invalid_input, "pauli string: no letters");
    }
    p.phase = Complex(imaginary ? 0.0 : 1.0, imaginary ? 1.0 : 0.0) * (negative ? -1.0 : 1.0);
    return p;
}

std::string PauliString::str() const {
    std::string prefix;
    if (phase == Complex(-1, 0)) {
        prefix = "-";
    } else if (phase == Complex(0, 1)) {
        prefix = "i";
    } else if (phase == Complex(0, -1)) {
        prefix = "-i";
    } else if (phase != Complex(1, 0)) {
        prefix = "?";
    }
    return prefix + letters;
}

CMatrix pauli_matrix(const PauliString &p) {
    if (p.letters.empty()) {
        throw Error(ErrorCode::invalid_input, "pauli string: no letters");
    }
    CMatrix m = CMatrix::Identity(1, 1);
    for (char c : p.letters) {
        switch (c) {
            case 'I':
                m = kron(m, gates::I());
                break;
            case 'X':
                m = kron(m, gates::X());
                break;
            case 'Y':
                m = kron(m, gates::Y());
                break;
            case 'Z':
                m = kron(m, gates::Z());
                break;
            default:
                throw Error(ErrorCode::invalid_input, "pauli string: bad letter");
        }
    }
    return p.phase * m;
}

namespace gates {
CMatrix I() {
    return CMatrix::Identity(2, 2);
}
CMatrix X() {
    return mat2(0, 1, 1, 0);
}
CMatrix Y() {
    return mat2(0, Complex(0, -1), Complex(0, 1), 0);
}
CMatrix Z() {
    return mat2(1, 0, 0, -1);
}
CMatrix H() {
    return mat2(1, 1, 1, -1) / std::sqrt(2.0);
}
CMatrix S() {
    return mat2(1, 0, 0, Complex(0, 1));
}
CMatrix T() {
    return mat2(1, 0, 0, std::polar(1.0, M_PI / 4));
}
CMatrix CNOT() {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}
CMatrix from_word(std::string_view word) {
    CMatrix u = I();
    for (char c : word) {
        switch (c) {
            case 'I':
                break;
            case 'X':
                u = u * X();
                break;
            case 'Y':
                u = u * Y();
                break;
            case 'Z':
                u = u * Z();
                break;
            case 'H':
                u = u * H();
                break;
            case 'S':
                u = u * S();
                break;
            case 'T':
                u = u * T();
                break;
            default:
                throw Error(ErrorCode::invalid_input, "gate word: unknown letter '" + std::string(1, c) + "'");
        }
    }
    return u;
}
}  // namespace gates

CMatrix embed_gate(const CMatrix &u, const std::vector<int> &targets, int n) {
    const int k = (int)targets.size();
    if (u.rows() != (1 << k) || u.cols() != (1 << k)) {
        throw Error(ErrorCode::dimension_mismatch, "embed_gate: gate size does not match target count");
    }
    for (int t : targets) {
        if (t < 0 || t >= n) {
            throw Error(ErrorCode::dimension_mismatch, "embed_gate: target qubit out of range");
        }
    }
    const int dim = 1 << n;
    CMatrix out = CMatrix::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        int sub = 0, rest = col;
        for (int t = 0; t < k; ++t) {
            int bit = n - 1 - targets[t];
            sub = (sub << 1) | ((col >> bit) & 1);
            rest &= ~(1 << bit);
        }
        for (int s = 0; s < (1 << k); ++s) {
            Complex amp = u(s, sub);
            if (amp == Complex(0, 0)) {
                continue;
            }
            int row = rest;
            for (int t = 0; t < k; ++t) {
                int bit = n - 1 - targets[t];
                row |= ((s >> (k - 1 - t)) & 1) << bit;
            }
            out(row, col) += amp;
        }
    }
    return out;
}

CMatrix random_clifford(int n, std::uint64_t seed, int depth) {
    std::mt19937_64 rng(seed);
    if (depth <= 0) {
        depth = 8 * n * n;
    }
    const int choices = 2 * n + n * (n - 1);
    CMatrix u = CMatrix::Identity(1 << n, 1 << n);
    for (int step = 0; step < depth; ++step) {
        int g = (int)(rng() % choices);
        if (g < n) {
            u = embed_gate(gates::H(), {g}, n) * u;
        } else if (g < 2 * n) {
            u = embed_gate(gates::S(), {g - n}, n) * u;
        } else {
            g -= 2 * n;
            int c = g / (n - 1), t = g % (n - 1);
            if (t >= c) {
                ++t;
            }
            u = embed_gate(gates::CNOT(), {c, t}, n) * u;
        }
    }
    return u;
}

std::vector<NamedUnitary> clifford_unitaries_single_qubit() {
    static const char *names[] = {"I",   "X",    "Z",   "XZ",   "H",    "HX",  "HZ",   "HXZ",
                                  "S",   "XS",   "ZS",  "XZS",  "HS",   "HSZ", "HXS",  "HXSZ",
                                  "SH",  "SHZ",  "SHX", "SHXZ", "SHS",  "SHSZ", "SHSX", "SHSXZ"};
    std::vector<NamedUnitary> out;
    for (const char *name : names) {
        out.push_back({name, gates::from_word(name)});
    }
    return out;
}

StabilizerSet::StabilizerSet(int n, std::vector<CVector> states, StabSource source)
    : n_(n), states_(std::move(states)), source_(source) {
    vectorized_.resize(dim() * dim(), states_.size());
    for (size_t i = 0; i < states_.size(); ++i) {
        vectorized_.col(i) = hvec(projector(i));
    }
}

std::optional<size_t> StabilizerSet::find(const CVector &psi, double tolerance) const {
    if (psi.size() != dim()) {
        return std::nullopt;
    }
    CVector u = psi.normalized();
    for (size_t i = 0; i < states_.size(); ++i) {
        if (std::abs(states_[i].dot(u)) > 1 - tolerance) {
            return i;
        }
    }
    return std::nullopt;
}

std::filesystem::path default_cache_dir() {
    if (const char *env = std::getenv("MAGICKIT_CACHE"); env && *env) {
        return env;
    }
    return ".magicache";
}

StabilizerSet enumerate_pure_stabilizer_states(int n, const EnumerateOptions &options) {
    if (n < 1 || n > kMaxStabilizerQubits) {
        throw Error(ErrorCode::unsupported_dimension, "stabilizer enumeration supports 1 to 3 qubits, got " + std::to_string(n));
    }
    size_t expected = 1u << n;
    for (int k = 1; k <= n; ++k) {
        expected *= (1u << k) + 1;
    }
    auto dir = options.cache_dir.empty() ? default_cache_dir() : options.cache_dir;
    if (options.use_cache) {
        if (auto cached = load_cache(cache_file(dir, n), n); cached && cached->size() == expected) {
            return StabilizerSet(n, std::move(*cached), StabSource::cache);
        }
    }
    auto states = bfs_enumerate(n);
    if (states.size() != expected) {
        throw Error(ErrorCode::numerical_failure, "stabilizer enumeration produced " + std::to_string(states.size()) + " states");
    }
    if (options.use_cache) {
        save_cache(dir, n, states);
    }
    return StabilizerSet(n, std::move(states), StabSource::computed);
}

const StabilizerSet &shared_stabilizer_set(int n) {
    static std::mutex mu;
    static std::array<std::unique_ptr<StabilizerSet>, kMaxStabilizerQubits + 1> sets;
    if (n < 1 || n > kMaxStabilizerQubits) {
        throw Error(ErrorCode::unsupported_dimension, "stabilizer enumeration supports 1 to 3 qubits, got " + std::to_string(n));
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!sets[n]) {
        sets[n] = std::make_unique<StabilizerSet>(enumerate_pure_stabilizer_states(n));
    }
    return *sets[n];
}

std::vector<PauliString> stabilizer_group(const CVector &psi, double tolerance) {
    int n = 0;
    while ((1 << n) < psi.size()) {
        ++n;
    }
    std::vector<PauliString> out;
    const char letters[] = {'I', 'X', 'Y', 'Z'};
    int total = 1 << (2 * n);
    for (int code = 0; code < total; ++code) {
        PauliString p;
        for (int q = 0; q < n; ++q) {
            p.letters.push_back(letters[(code >> (2 * (n - 1 - q))) & 3]);
        }
        CVector image = pauli_matrix(p) * psi;
        Complex e = psi.dot(image);
        if (std::abs(e) < 1 - 1e-6) {
            continue;
        }
        double sign = e.real() > 0 ? 1.0 : -1.0;
        if ((image - sign * psi).norm() <= tolerance) {
            p.phase = sign;
            out.push_back(p);
        }
    }
    return out;
}

bool is_entangled(const CVector &psi, int dim_a, int dim_b, double tolerance) {
    if (psi.size() != dim_a * dim_b) {
        throw Error(ErrorCode::dimension_mismatch, "is_entangled: vector length differs from dim_a*dim_b");
    }
    CMatrix m(dim_a, dim_b);
    for (int a = 0; a < dim_a; ++a) {
        for (int b = 0; b < dim_b; ++b) {
            m(a, b) = psi[a * dim_b + b];
        }
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().size() > 1 && svd.singularValues()[1] > tolerance;
}

StabMembership is_stabilizer_mixed(const CMatrix &rho, const StabilizerSet &s) {
    if (rho.rows() != s.dim() || rho.cols() != s.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "is_stabilizer_mixed: operator dimension differs from the stabilizer set");
    }
    if (hermitian_error(rho) > tol::psd * std::max(1.0, rho.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::not_hermitian, "is_stabilizer_mixed: operator is not Hermitian");
    }
    StabMembership out;
    RVector b = hvec(hermitian_part(rho));
    out.inside = lp_feasibility_with_certificate(s.vectorized(), b);
    if (!out.inside.feasible) {
        StabWitness w;
        w.w = unhvec(out.inside.certificate, s.dim());
        w.violation = out.inside.certificate.dot(b);
        out.witness = std::move(w);
    }
    return out;
}

StabMembership is_stabilizer_mixed(const DensityOperator &rho, const StabilizerSet &s) {
    return is_stabilizer_mixed(rho.matrix(), s);
}

Bloch bloch_vector(const DensityOperator &rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::not_a_state, "bloch_vector needs a qubit state");
    }
    const CMatrix &m = rho.matrix();
    return Bloch(2 * m(0, 1).real(), -2 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real());
}

DensityOperator from_bloch(const Bloch &r) {
    if (!r.allFinite() || r.norm() > 1 + 1e-9) {
        throw Error(ErrorCode::not_a_state, "Bloch vector outside the unit ball");
    }
    CMatrix m = (gates::I() + r[0] * gates::X() + r[1] * gates::Y() + r[2] * gates::Z()) / 2.0;
    if (r.norm() > 1) {
        // Within tolerance of the sphere: land exactly on it.
        m = (gates::I() + (r[0] * gates::X() + r[1] * gates::Y() + r[2] * gates::Z()) / r.norm()) / 2.0;
    }
    return DensityOperator(m);
}

CMatrix support_projector(const DensityOperator &rho) {
    return support_projector(rho.matrix(), 1e-9);
}

}  // namespace magickit
