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

#include "magickit/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>
#include <unordered_map>

#include "magickit/monotones.hpp"

namespace magickit {

namespace {

std::vector<int> qubit_dims(int n) {
    return std::vector<int>(n, 2);
}

std::optional<CMatrix> unitary_of(const ChoiOperator &c) {
    const int din = c.dim_in(), dout = c.dim_out();
    if (din != dout) {
        return std::nullopt;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c.matrix());
    const auto &ev = es.eigenvalues();
    const int top = (int)ev.size() - 1;
    if (std::abs(ev[top] - din) > 1e-9 || (top > 0 && std::abs(ev[top - 1]) > 1e-9)) {
        return std::nullopt;
    }
    CMatrix u(dout, din);
    for (int i = 0; i < din; ++i) {
        for (int a = 0; a < dout; ++a) {
            u(a, i) = std::sqrt(double(din)) * es.eigenvectors()(i * dout + a, top);
        }
    }
    return u;
}

std::vector<CMatrix> pauli_basis(int n) {
    std::vector<CMatrix> out;
    const char letters[] = {'I', 'X', 'Y', 'Z'};
    for (int code = 0; code < (1 << (2 * n)); ++code) {
        PauliString p;
        for (int q = 0; q < n; ++q) {
            p.letters += letters[(code >> (2 * (n - 1 - q))) & 3];
        }
        out.push_back(pauli_matrix(p));
    }
    return out;
}

// U maps every single-qubit X and Z to a signed Pauli string.
bool is_clifford(const CMatrix &u) {
    const int dim = (int)u.rows();
    const int n = (int)std::lround(std::log2((double)dim));
    auto basis = pauli_basis(n);
    for (int q = 0; q < n; ++q) {
        for (const CMatrix &g : {gates::X(), gates::Z()}) {
            CMatrix image = u * embed_gate(g, {q}, n) * u.adjoint();
            bool pauli = std::any_of(basis.begin(), basis.end(), [&](const CMatrix &p) {
                return std::abs(std::abs((p.adjoint() * image).trace()) / dim - 1.0) < 1e-9;
            });
            if (!pauli) {
                return false;
            }
        }
    }
    return true;
}

ChoiOperator combine(double a, const ChoiOperator &x, double b, const ChoiOperator &y) {
    return ChoiOperator::unchecked(a * x.matrix() + b * y.matrix(), x.dim_in(), x.dim_out());
}

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream per (seed, sample index).
struct SampleStream {
    std::uint64_t state;

    SampleStream(std::uint64_t seed, std::uint64_t index) : state(seed) {
        state ^= splitmix64(index);
        splitmix64(state);
    }
    double uniform() {
        return double(splitmix64(state) >> 11) * 0x1.0p-53;
    }
};

struct Branching {
    bool stochastic = false;
    double p_minus = 0.0;
    ChoiOperator plus;
    ChoiOperator minus;
};

constexpr long kChunk = 4096;

// Mean over `samples` of scale * sign * Tr[E rho_branch], reduced chunk by chunk in order.
double run_sampler(const Circuit &circuit, const std::vector<Branching> &branches, double scale, long samples,
                   std::uint64_t seed, int workers) {
    const CMatrix obs = pauli_matrix(circuit.observable);
    const int dim = 1 << circuit.qubits;
    int stochastic = 0;
    for (const auto &b : branches) {
        stochastic += b.stochastic;
    }
    if (stochastic > 63) {
        throw Error(ErrorCode::invalid_input, "simulate: at most 63 non-free circuit elements");
    }
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sums(chunks, 0.0);

    auto work = [&](int w, int stride) {
        std::unordered_map<std::uint64_t, double> cache;
        auto branch_value = [&](std::uint64_t mask) {
            auto it = cache.find(mask);
            if (it != cache.end()) {
                return it->second;
            }
            CMatrix rho = CMatrix::Zero(dim, dim);
            rho(0, 0) = 1.0;
            int bit = 0;
            for (size_t i = 0; i < branches.size(); ++i) {
                const auto &b = branches[i];
                bool minus = b.stochastic && ((mask >> bit) & 1);
                bit += b.stochastic;
                rho = apply_local(minus ? b.minus : b.plus, circuit.elements[i].targets, circuit.qubits, rho);
            }
            double v = (obs * rho).trace().real();
            cache.emplace(mask, v);
            return v;
        };
        for (long chunk = w; chunk < chunks; chunk += stride) {
            double sum = 0.0;
            const long end = std::min(samples, (chunk + 1) * kChunk);
            for (long k = chunk * kChunk; k < end; ++k) {
                SampleStream rng(seed, (std::uint64_t)k);
                std::uint64_t mask = 0;
                int bit = 0, sign = 1;
                for (const auto &b : branches) {
                    if (!b.stochastic) {
                        continue;
                    }
                    if (rng.uniform() < b.p_minus) {
                        mask |= 1ULL << bit;
                        sign = -sign;
                    }
                    ++bit;
                }
                sum += sign * branch_value(mask);
            }
            sums[chunk] = sum;
        }
    };

    workers = std::max(1, std::min<int>(workers, (int)std::max<long>(1, chunks)));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    double total = 0.0;
    for (double s : sums) {
        total += s;
    }
    return scale * total / double(samples);
}

Branching robustness_branching(const ElementDecomposition &d) {
    Branching b;
    b.plus = d.plus;
    b.minus = d.minus;
    b.stochastic = d.r > 0;
    b.p_minus = d.r / d.l1();
    return b;
}

}  // namespace

void Circuit::validate() const {
    if (qubits < 1 || qubits > kMaxCircuitQubits) {
        throw Error(ErrorCode::unsupported_dimension, "circuit: 1 to 3 qubits supported, got " + std::to_string(qubits));
    }
    if (observable.qubits() != qubits) {
        throw Error(ErrorCode::dimension_mismatch, "circuit: observable length differs from the qubit count");
    }
    if (std::abs(observable.phase.imag()) > 0 || std::abs(std::abs(observable.phase.real()) - 1.0) > 0) {
        throw Error(ErrorCode::invalid_input, "circuit: observable must be a Hermitian Pauli string (sign +1 or -1)");
    }
    for (size_t i = 0; i < elements.size(); ++i) {
        const auto &e = elements[i];
        const int k = (int)e.targets.size();
        std::vector<int> sorted = e.targets;
        std::sort(sorted.begin(), sorted.end());
        if (k == 0 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
            sorted.back() >= qubits) {
            throw Error(ErrorCode::invalid_input, "circuit: element " + std::to_string(i) + " has invalid targets");
        }
        if (e.channel.dim_in() != (1 << k) || e.channel.dim_out() != (1 << k)) {
            throw Error(ErrorCode::dimension_mismatch, "circuit: element " + std::to_string(i) + " does not match its target count");
        }
    }
}

CMatrix apply_local(const ChoiOperator &c, const std::vector<int> &targets, int qubits, const CMatrix &x) {
    const int k = (int)targets.size();
    const int dt = 1 << k, dr = 1 << (qubits - k);
    std::vector<int> order = targets;
    for (int q = 0; q < qubits; ++q) {
        if (std::find(targets.begin(), targets.end(), q) == targets.end()) {
            order.push_back(q);
        }
    }
    CMatrix xp = permute_subsystems(x, qubit_dims(qubits), order);
    CMatrix y = CMatrix::Zero(x.rows(), x.cols());
    for (int a = 0; a < dt; ++a) {
        for (int b = 0; b < dt; ++b) {
            auto xab = xp.block(a * dr, b * dr, dr, dr);
            if (xab.isZero(0.0)) {
                continue;
            }
            y += kron(c.matrix().block(a * dt, b * dt, dt, dt), xab);
        }
    }
    std::vector<int> back(qubits);
    for (int pos = 0; pos < qubits; ++pos) {
        back[order[pos]] = pos;
    }
    return permute_subsystems(y, qubit_dims(qubits), back);
}

ChoiOperator lift_to_register(const ChoiOperator &c, const std::vector<int> &targets, int qubits) {
    const int dim = 1 << qubits;
    CMatrix j(dim * dim, dim * dim);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < dim; ++k) {
            CMatrix e = CMatrix::Zero(dim, dim);
            e(i, k) = 1.0;
            j.block(i * dim, k * dim, dim, dim) = apply_local(c, targets, qubits, e);
        }
    }
    return ChoiOperator::unchecked(j, dim, dim);
}

double expectation_exact(const Circuit &circuit) {
    circuit.validate();
    const int dim = 1 << circuit.qubits;
    CMatrix rho = CMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    for (const auto &e : circuit.elements) {
        rho = apply_local(e.channel, e.targets, circuit.qubits, rho);
    }
    return (pauli_matrix(circuit.observable) * rho).trace().real();
}

std::vector<ElementDecomposition> decompose_circuit(const Circuit &circuit) {
    circuit.validate();
    std::vector<ElementDecomposition> out;
    for (size_t i = 0; i < circuit.elements.size(); ++i) {
        const ChoiOperator &ch = circuit.elements[i].channel;
        ElementDecomposition d;
        auto u = unitary_of(ch);
        if (u && is_clifford(*u)) {
            d.free = true;
            d.free_part = d.rest = d.plus = d.minus = ch;
        } else if (circuit.elements[i].targets.size() == 1) {
            const auto &s = shared_stabilizer_set(2);
            auto q = quasi_decompose_channel(ch, s);
            auto r = robustness_channel_decomposition(ch, s);
            d.free = q.lambda == 1.0 && r.r == 0.0;
            d.lambda = q.lambda;
            d.free_part = q.positive;
            d.rest = q.negative;
            d.r = r.r;
            d.plus = r.plus;
            d.minus = r.minus;
        } else {
            throw Error(ErrorCode::unsupported_dimension,
                        "decompose_circuit: element " + std::to_string(i) + " is a multi-qubit non-Clifford map; its Choi exceeds 3 qubits");
        }
        out.push_back(std::move(d));
    }
    return out;
}

double ComposedDecomposition::reconstruction_error() const {
    CMatrix rebuilt = lambda * free_part.matrix() - (lambda - 1.0) * rest.matrix();
    return (rebuilt - target.matrix()).cwiseAbs().maxCoeff();
}

ComposedDecomposition compose_decompositions(const Circuit &circuit, const std::vector<ElementDecomposition> &parts) {
    circuit.validate();
    if (parts.size() != circuit.elements.size()) {
        throw Error(ErrorCode::invalid_input, "compose_decompositions: one decomposition per element required");
    }
    const int dim = 1 << circuit.qubits;
    ComposedDecomposition out;
    out.target = identity_channel(dim);
    out.free_part = identity_channel(dim);
    for (size_t i = 0; i < parts.size(); ++i) {
        const auto &t = circuit.elements[i].targets;
        out.free_part = compose(lift_to_register(parts[i].free_part, t, circuit.qubits), out.free_part);
        out.target = compose(lift_to_register(circuit.elements[i].channel, t, circuit.qubits), out.target);
        out.lambda *= parts[i].lambda;
    }
    // Expanding the product, every term other than lambda E carries at least one M; summed they equal
    // lambda E - N.
    if (out.lambda > 1.0) {
        out.rest = combine(out.lambda / (out.lambda - 1.0), out.free_part, -1.0 / (out.lambda - 1.0), out.target);
    } else {
        out.rest = out.free_part;
    }
    return out;
}

long static_sample_count(double epsilon, double q1, double p_fail) {
    if (!(epsilon > 0) || !(q1 >= 1.0 - 1e-12) || !(p_fail > 0 && p_fail < 1)) {
        throw Error(ErrorCode::invalid_input, "sample count needs epsilon > 0, q1 >= 1 and 0 < p_fail < 1");
    }
    double n = std::ceil(2.0 * q1 * q1 * std::log(2.0 / p_fail) / (epsilon * epsilon));
    if (n > 1e12) {
        throw Error(ErrorCode::invalid_input, "sample count exceeds 1e12");
    }
    return std::max(1L, (long)n);
}

void SimulationConfig::validate_static() const {
    if (!(epsilon > 0)) {
        throw Error(ErrorCode::invalid_input, "epsilon must be positive");
    }
    if (!(p_fail > 0 && p_fail < 1)) {
        throw Error(ErrorCode::invalid_input, "p_fail must lie in (0, 1)");
    }
    if (workers < 1) {
        throw Error(ErrorCode::invalid_input, "workers must be at least 1");
    }
}

void SimulationConfig::validate_constrained() const {
    if (!(c > 0 && c < 1)) {
        throw Error(ErrorCode::invalid_input, "c must lie in (0, 1)");
    }
    if (!(p_fail > 0 && p_fail < 1)) {
        throw Error(ErrorCode::invalid_input, "p_fail must lie in (0, 1)");
    }
    if (!(delta_star >= 0) || !std::isfinite(delta_star)) {
        throw Error(ErrorCode::invalid_input, "delta* must be a finite nonnegative number");
    }
    if (workers < 1) {
        throw Error(ErrorCode::invalid_input, "workers must be at least 1");
    }
}

SimEstimate static_monte_carlo(const Circuit &circuit, const SimulationConfig &config) {
    return static_monte_carlo(circuit, decompose_circuit(circuit), config);
}

SimEstimate static_monte_carlo(const Circuit &circuit, const std::vector<ElementDecomposition> &parts, const SimulationConfig &config) {
    circuit.validate();
    config.validate_static();
    std::vector<Branching> branches;
    SimEstimate out;
    for (const auto &p : parts) {
        branches.push_back(robustness_branching(p));
        out.q1 *= p.l1();
    }
    out.samples = static_sample_count(config.epsilon, out.q1, config.p_fail);
    double mean = run_sampler(circuit, branches, out.q1, out.samples, config.seed, config.workers);
    out.estimate = std::clamp(mean, -1.0, 1.0);
    out.error_bound = config.epsilon;
    return out;
}

LambdaStar lambda_star(double delta_star, int elements, double c) {
    if (elements < 1) {
        throw Error(ErrorCode::invalid_input, "lambda*: circuit needs at least one element");
    }
    LambdaStar out;
    out.guaranteed = std::pow((delta_star + 1.0) / (1.0 + c), 1.0 / elements);
    out.approximate = std::pow(delta_star + 1.0, 1.0 / elements);
    return out;
}

SimEstimate constrained_path(const Circuit &circuit, const SimulationConfig &config) {
    return constrained_path(circuit, decompose_circuit(circuit), config);
}

SimEstimate constrained_path(const Circuit &circuit, const std::vector<ElementDecomposition> &parts, const SimulationConfig &config) {
    circuit.validate();
    config.validate_constrained();
    SimEstimate out;
    const int n = (int)parts.size();
    if (n > 0) {
        auto ls = lambda_star(config.delta_star, n, config.c);
        out.lambda_star = config.approximate_lambda_star ? ls.approximate : ls.guaranteed;
    }
    std::vector<Branching> branches;
    for (int i = 0; i < n; ++i) {
        if (parts[i].lambda <= out.lambda_star) {
            Branching b;
            b.plus = parts[i].free_part;
            branches.push_back(b);
            out.replaced.push_back(i);
            out.lambda *= parts[i].lambda;
        } else {
            branches.push_back(robustness_branching(parts[i]));
            out.q1 *= parts[i].l1();
        }
    }
    const double lambda = out.lambda;
    const double eps = config.c * lambda;
    out.samples = static_sample_count(config.c, out.q1, config.p_fail);
    double e_prime = run_sampler(circuit, branches, lambda * out.q1, out.samples, config.seed, config.workers);
    // lambda Tr[E N'(rho)] lies in [-lambda, lambda]; clamping keeps E_min <= E_max.
    e_prime = std::clamp(e_prime, -lambda, lambda);
    const double e_max = std::min(1.0, e_prime + eps + lambda - 1.0);
    const double e_min = std::max(-1.0, e_prime - eps - lambda + 1.0);
    out.estimate = (e_max + e_min) / 2.0;
    out.error_bound = (e_max - e_min) / 2.0;
    return out;
}

}  // namespace magickit
