// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace widecorr {

/// Raised when a symbolic instance is too large for exact treatment
/// (layer factor count or expansion term count above the configured cap).
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a correlation spec cannot be evaluated by the
/// directional-derivative strategy of the numeric simulator.
class UnsupportedTopology : public std::runtime_error {
public:
    explicit UnsupportedTopology(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax or index-arity error in the correlation-spec DSL.
class SpecParseError : public std::runtime_error {
public:
    SpecParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

} // namespace widecorr
