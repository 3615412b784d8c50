// Copyright 2026 The freqbin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FREQBIN_ERROR_HPP
#define FREQBIN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace freqbin {

enum class ErrorCode {
    InvalidArgument,
    ZeroState,
    ModeCollision,
    QuadratureFailure,
    DegenerateSource,
    NonUnitaryCoupler,
    ImpossiblePattern,
    NotColourSeparable,
    ArityMismatch,
};

std::string_view error_code_name(ErrorCode code);

/// Raised by every simulation-level failure. The code identifies which
/// contract was broken; the message carries the human-readable detail.
class SimulationError : public std::runtime_error {
   public:
    SimulationError(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace freqbin

#endif
