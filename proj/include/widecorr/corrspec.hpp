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

#include "widecorr/errors.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace widecorr {

/// One factor of a correlation function: the rank-k parameter-derivative
/// tensor of the network output at input `input_label`.  The slot names
/// are the index identifiers from the DSL, one per derivative.
struct DerivativeTensor {
    std::string input_label;
    std::vector<std::string> slot_names;

    int rank() const { return static_cast<int>(slot_names.size()); }

    bool operator==(const DerivativeTensor&) const = default;
};

struct SlotRef {
    int tensor = 0; // 0-based tensor position
    int slot = 0;   // 0-based slot within the tensor

    auto operator<=>(const SlotRef&) const = default;
};

/// An unordered pair of slots whose derivative indices are summed together.
struct SlotPairing {
    SlotRef first;
    SlotRef second; // normalized: first < second

    auto operator<=>(const SlotPairing&) const = default;
};

/// A product of derivative tensors with all derivative indices summed in
/// pairs.  Invariants: every slot of every tensor appears in exactly one
/// pairing, no slot is paired with itself, and the total slot count is even.
class CorrelationSpec {
public:
    CorrelationSpec() = default;
    CorrelationSpec(std::vector<DerivativeTensor> tensors, std::vector<SlotPairing> pairings);

    int tensor_count() const { return static_cast<int>(tensors_.size()); }
    const std::vector<DerivativeTensor>& tensors() const { return tensors_; }
    const std::vector<SlotPairing>& pairings() const { return pairings_; }

    int total_slots() const;
    std::vector<int> ranks() const;

    /// Distinct input labels in first-appearance order.
    std::vector<std::string> input_labels() const;

    bool operator==(const CorrelationSpec&) const = default;

private:
    std::vector<DerivativeTensor> tensors_;
    std::vector<SlotPairing> pairings_; // sorted
};

/// Parse the correlation-spec DSL.
///
///   spec    = factor { ["*"] factor } ;
///   factor  = "f" "(" label ")" [ "[" index { "," index } "]" ] ;
///
/// Every index identifier must occur exactly twice in the whole spec.
/// Throws SpecParseError on syntax or index-arity violations.
CorrelationSpec parse_spec(std::string_view text);

/// Render a spec back into DSL text; parse_spec(render(s)) == s.
std::string render(const CorrelationSpec& spec);

/// The six named correlation functions used throughout the test and report
/// machinery, in a fixed order.
const std::vector<std::pair<std::string, CorrelationSpec>>& builtin_specs();

std::optional<CorrelationSpec> find_builtin(std::string_view name);

/// Accepts either a builtin name or DSL text.
CorrelationSpec resolve_spec(std::string_view name_or_text);

} // namespace widecorr
