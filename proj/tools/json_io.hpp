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

#ifndef MAGICKIT_TOOLS_JSON_IO_HPP
#define MAGICKIT_TOOLS_JSON_IO_HPP

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>
#include "magickit/channels.hpp"
#include "magickit/simulate.hpp"

namespace magickit::cli {

using Json = nlohmann::ordered_json;

/// Where {"name": ...} references are resolved: --fixtures, then MAGICKIT_FIXTURES, then the
/// directory configured at build time.
std::filesystem::path fixture_dir(const std::filesystem::path &override_dir = {});

/// Reads fixtures/<name>.json; missing_fixture when absent.
Json load_fixture(const std::string &name, const std::filesystem::path &dir);

/// Inline JSON when the text starts with '{', else a file path when one exists, else a fixture name.
Json resolve_argument(const std::string &text, const std::filesystem::path &dir);

/// Rounds to 12 significant digits (emitted floats).
double round12(double x);

Json complex_to_json(Complex z);
Json matrix_to_json(const CMatrix &m);
Json vector_to_json(const CVector &v);
Json real_vector_to_json(const RVector &v);

/// `where` prefixes error messages with the JSON location, e.g. "state.matrix[1][0]".
Complex complex_from_json(const Json &j, const std::string &where);
CMatrix matrix_from_json(const Json &j, const std::string &where);
CVector vector_from_json(const Json &j, const std::string &where);

/// {"name"} | {"bloch": [x,y,z]} | {"ket": [...]} | {"matrix": [[...]]}.
DensityOperator state_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where = "state");
Json state_to_json(const DensityOperator &rho);

/// {"name"} | {"kind": "unitary", "matrix"} | {"kind": "kraus", "operators"} | {"kind": "choi", "dims", "matrix"}.
ChoiOperator channel_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where = "channel");
Json channel_to_json(const ChoiOperator &c);

/// {"qubits", "observable", "elements": [{"channel", "targets", "label"}]}.
Circuit circuit_from_json(const Json &j, const std::filesystem::path &dir, const std::string &where = "circuit");
Json circuit_to_json(const Circuit &c);

/// {"pre", "post", "dim_a0", "dim_a1"} | {"choi": matrix, "dims": [a0, a1, b0, b1]}.
SuperchannelChoi superchannel_from_json(const Json &j, const std::filesystem::path &dir,
                                        const std::string &where = "superchannel");
Json superchannel_to_json(const SuperchannelChoi &s);

}  // namespace magickit::cli

#endif
