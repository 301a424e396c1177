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

#ifndef MAGICKIT_FIXTURES_HPP
#define MAGICKIT_FIXTURES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "magickit/linalg.hpp"

namespace magickit {

/// Named pure states: "zero", "plus", "T", "H" (Bloch vector (1,1,1)/sqrt 3), "chi", "hoggar".
CVector fixture_ket(std::string_view name);
std::vector<std::string> fixture_state_names();

/// Named unitaries: "T-gate", "CS-gate", "CCZ-gate", "H-state-gate" (takes |+> to the H state).
CMatrix fixture_gate(std::string_view name);
std::vector<std::string> fixture_gate_names();

/// U applied to |+...+>.
CVector gate_state(const CMatrix &u);

}  // namespace magickit

#endif
