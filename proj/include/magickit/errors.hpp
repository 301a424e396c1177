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

#ifndef MAGICKIT_ERRORS_HPP
#define MAGICKIT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace magickit {

enum class ErrorCode {
    numerical_failure,
    not_hermitian,
    not_a_state,
    unsupported_dimension,
    not_trace_preserving,
    dimension_mismatch,
    no_convergence,
    not_cptp_residual,
    free_resource_state,
    missing_fixture,
    invalid_input,
};

/// Kebab-case identifier, e.g. "numerical-failure".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace magickit

#endif
