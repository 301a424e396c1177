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

#include "magickit/errors.hpp"

namespace magickit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::numerical_failure:
            return "numerical-failure";
        case ErrorCode::not_hermitian:
            return "not-hermitian";
        case ErrorCode::not_a_state:
            return "not-a-state";
        case ErrorCode::unsupported_dimension:
            return "unsupported-dimension";
        case ErrorCode::not_trace_preserving:
            return "not-trace-preserving";
        case ErrorCode::dimension_mismatch:
            return "dimension-mismatch";
        case ErrorCode::no_convergence:
            return "no-convergence";
        case ErrorCode::not_cptp_residual:
            return "not-cptp-residual";
        case ErrorCode::free_resource_state:
            return "free-resource-state";
        case ErrorCode::missing_fixture:
            return "missing-fixture";
        case ErrorCode::invalid_input:
            return "invalid-input";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {
}

}  // namespace magickit
