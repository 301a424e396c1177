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

#include "json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>

#include "magickit/stabilizer.hpp"

#ifndef MAGICKIT_FIXTURE_DIR
#define MAGICKIT_FIXTURE_DIR "fixtures"
#endif

namespace magickit::cli {

namespace {

[[noreturn]] void bad(const std::string &where, const std::string &what) {
    throw Error(ErrorCode::invalid_input, where + ": " + what);
}

const Json &field(const Json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        bad(where, std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

int int_from_json(const Json &j, const std::string &where) {
    if (!j.is_number_integer()) {
        bad(where, "expected an integer");
    }
    return j.get<int>();
}

Json parse_text(const std::string &text, const std::string &origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw Error(ErrorCode::invalid_input, origin + ": " + e.what());
    }
}

Json read_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    if (!in) {
        throw Error(ErrorCode::invalid_input, "cannot read " + p.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_text(text, p.string());
}

// A named reference is an object carrying only "name" (and possibly notes).
bool is_reference(const Json &j) {
    return j.is_object() && j.contains("name") && !j.contains("matrix") && !j.contains("ket") && !j.contains("bloch") &&
           !j.contains("operators") && !j.contains("kind");
}

}  // namespace

std::filesystem::path fixture_dir(const std::filesystem::path &override_dir) {
    if (!override_dir.empty()) {
        return override_dir;
    }
    if (const char *env = std::getenv("MAGICKIT_FIXTURES"); env && *env) {
        return env;
    }
    return MAGICKIT_FIXTURE_DIR;
}

Json load_fixture(const std::string &name, const std::filesystem::path &dir) {
    static const std::regex ok("[A-Za-z0-9_-]+");
    if (!std::regex_match(name, ok)) {
        throw Error(ErrorCode::missing_fixture, "invalid fixture name '" + name + "'");
    }
    auto path = dir / (name + ".json");
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorCode::missing_fixture, "no fixture '" + name + "' in " + dir.string());
    }
    return read_file(path);
}

Json resolve_argument(const std::string &text, const std::filesystem::path &dir) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        return parse_text(text, "argument");
    }
    std::error_code ec;
    if (text.find('/') != std::string::npos || text.size() > 5 && text.substr(text.size() - 5) == ".json") {
        if (std::filesystem::is_regular_file(text, ec)) {
            return read_file(text);
        }
    }
    (void)dir;
    return Json{{"name", text}};
}

double round12(double x) {
    if (x == 0.0 || !std::isfinite(x)) {
        return x == 0.0 ? 0.0 : x;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

Json complex_to_json(Complex z) {
    return Json::array({round12(z.real()), round12(z.imag())});
}

Json matrix_to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(complex_to_json(m(i, k)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const CVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_to_json(v[i]));
    }
    return out;
}

Json real_vector_to_json(const RVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(round12(v[i]));
    }
    return out;
}

Complex complex_from_json(const Json &j, const std::string &where) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        bad(where, "expected a number or an [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

CVector vector_from_json(const Json &j, const std::string &where) {
    if (!j.is_array() || j.empty()) {
        bad(where, "expected a nonempty array");
    }
    CVector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        v[(Eigen::Index)i] = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

CMatrix matrix_from_json(const Json &j, const std::string &where) {
    if (!j.is_array() || j.empty()) {
        bad(where, "expected a nonempty array of rows");
    }
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    CMatrix m(j.size(), cols);
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string row = where + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != cols || cols == 0) {
            bad(row, "rows must be nonempty arrays of equal length");
        }
        for (size_t k = 0; k < cols; ++k) {
            m((Eigen::Index)i, (Eigen::Index)k) = complex_from_json(j[i][k], row + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

DensityOperator state_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    if (is_reference(j)) {
        if (!j["name"].is_string()) {
            bad(where + ".name", "expected a string");
        }
        const std::string name = j["name"].get<std::string>();
        Json fx = load_fixture(name, dir);
        if (fx.value("kind", "state") != "state") {
            bad(where, "fixture '" + name + "' is a " + fx.value("kind", "?") + ", not a state");
        }
        fx.erase("name");
        return state_from_json(fx, dir, "fixture " + name);
    }
    if (j.contains("bloch")) {
        const Json &b = j["bloch"];
        if (!b.is_array() || b.size() != 3) {
            bad(where + ".bloch", "expected three numbers");
        }
        Bloch r;
        for (int k = 0; k < 3; ++k) {
            if (!b[k].is_number()) {
                bad(where + ".bloch[" + std::to_string(k) + "]", "expected a number");
            }
            r[k] = b[k].get<double>();
        }
        if (r.norm() > 1.0 + 1e-9) {
            throw Error(ErrorCode::not_a_state, where + ".bloch: vector lies outside the unit ball");
        }
        return from_bloch(r);
    }
    if (j.contains("ket")) {
        CVector v = vector_from_json(j["ket"], where + ".ket");
        if (v.norm() < 1e-12) {
            throw Error(ErrorCode::not_a_state, where + ".ket: zero vector");
        }
        return DensityOperator::pure(v.normalized());
    }
    if (j.contains("matrix")) {
        return DensityOperator(matrix_from_json(j["matrix"], where + ".matrix"));
    }
    bad(where, "expected one of \"name\", \"bloch\", \"ket\", \"matrix\"");
}

Json state_to_json(const DensityOperator &rho) {
    return Json{{"matrix", matrix_to_json(rho.matrix())}};
}

ChoiOperator channel_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    if (is_reference(j)) {
        if (!j["name"].is_string()) {
            bad(where + ".name", "expected a string");
        }
        const std::string name = j["name"].get<std::string>();
        Json fx = load_fixture(name, dir);
        if (fx.value("kind", "state") == "state") {
            bad(where, "fixture '" + name + "' is a state, not a channel");
        }
        fx.erase("name");
        return channel_from_json(fx, dir, "fixture " + name);
    }
    const Json &kind = field(j, "kind", where);
    if (!kind.is_string()) {
        bad(where + ".kind", "expected a string");
    }
    const std::string k = kind.get<std::string>();
    if (k == "unitary") {
        CMatrix u = matrix_from_json(field(j, "matrix", where), where + ".matrix");
        if (u.rows() != u.cols() || (u.adjoint() * u - CMatrix::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() > 1e-8) {
            throw Error(ErrorCode::not_trace_preserving, where + ".matrix: not unitary");
        }
        return choi_from_unitary(u);
    }
    if (k == "kraus") {
        const Json &ops = field(j, "operators", where);
        if (!ops.is_array() || ops.empty()) {
            bad(where + ".operators", "expected a nonempty array of matrices");
        }
        std::vector<CMatrix> kraus;
        for (size_t i = 0; i < ops.size(); ++i) {
            kraus.push_back(matrix_from_json(ops[i], where + ".operators[" + std::to_string(i) + "]"));
        }
        return choi_from_kraus(kraus);
    }
    if (k == "choi") {
        const Json &dims = field(j, "dims", where);
        if (!dims.is_array() || dims.size() != 2) {
            bad(where + ".dims", "expected [dim_in, dim_out]");
        }
        return ChoiOperator(matrix_from_json(field(j, "matrix", where), where + ".matrix"),
                            int_from_json(dims[0], where + ".dims[0]"), int_from_json(dims[1], where + ".dims[1]"));
    }
    bad(where + ".kind", "unknown channel kind '" + k + "' (unitary, kraus, choi)");
}

Json channel_to_json(const ChoiOperator &c) {
    return Json{{"kind", "choi"}, {"dims", {c.dim_in(), c.dim_out()}}, {"matrix", matrix_to_json(c.matrix())}};
}

Circuit circuit_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    Circuit c;
    c.qubits = int_from_json(field(j, "qubits", where), where + ".qubits");
    const Json &obs = field(j, "observable", where);
    if (!obs.is_string()) {
        bad(where + ".observable", "expected a Pauli string such as \"XZ\"");
    }
    try {
        c.observable = PauliString::parse(obs.get<std::string>());
    } catch (const Error &) {
        bad(where + ".observable", "not a Pauli string: '" + obs.get<std::string>() + "'");
    }
    const Json &elements = field(j, "elements", where);
    if (!elements.is_array()) {
        bad(where + ".elements", "expected an array");
    }
    for (size_t i = 0; i < elements.size(); ++i) {
        const std::string at = where + ".elements[" + std::to_string(i) + "]";
        const Json &e = elements[i];
        CircuitElement el;
        el.channel = channel_from_json(field(e, "channel", at), dir, at + ".channel");
        const Json &targets = field(e, "targets", at);
        if (!targets.is_array()) {
            bad(at + ".targets", "expected an array of qubit indices");
        }
        for (size_t k = 0; k < targets.size(); ++k) {
            el.targets.push_back(int_from_json(targets[k], at + ".targets[" + std::to_string(k) + "]"));
        }
        el.label = e.value("label", "");
        c.elements.push_back(std::move(el));
    }
    c.validate();
    return c;
}

Json circuit_to_json(const Circuit &c) {
    Json elements = Json::array();
    for (const auto &e : c.elements) {
        elements.push_back(Json{{"label", e.label}, {"targets", e.targets}, {"channel", channel_to_json(e.channel)}});
    }
    return Json{{"qubits", c.qubits}, {"observable", c.observable.str()}, {"elements", elements}};
}

SuperchannelChoi superchannel_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where) {
    if (!j.is_object()) {
        bad(where, "expected an object");
    }
    if (j.contains("pre")) {
        auto pre = channel_from_json(j["pre"], dir, where + ".pre");
        auto post = channel_from_json(field(j, "post", where), dir, where + ".post");
        return superchannel_from_pre_post(pre, post, int_from_json(field(j, "dim_a0", where), where + ".dim_a0"),
                                          int_from_json(field(j, "dim_a1", where), where + ".dim_a1"));
    }
    const Json &dims = field(j, "dims", where);
    if (!dims.is_array() || dims.size() != 4) {
        bad(where + ".dims", "expected [a0, a1, b0, b1]");
    }
    SuperchannelChoi s;
    s.dims.a0 = int_from_json(dims[0], where + ".dims[0]");
    s.dims.a1 = int_from_json(dims[1], where + ".dims[1]");
    s.dims.b0 = int_from_json(dims[2], where + ".dims[2]");
    s.dims.b1 = int_from_json(dims[3], where + ".dims[3]");
    s.j = matrix_from_json(field(j, "choi", where), where + ".choi");
    if (s.j.rows() != s.dims.total() || s.j.cols() != s.dims.total()) {
        throw Error(ErrorCode::dimension_mismatch, where + ".choi: size does not match dims");
    }
    return s;
}

Json superchannel_to_json(const SuperchannelChoi &s) {
    return Json{{"dims", {s.dims.a0, s.dims.a1, s.dims.b0, s.dims.b1}}, {"choi", matrix_to_json(s.j)}};
}

}  // namespace magickit::cli
