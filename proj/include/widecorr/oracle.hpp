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

#include "widecorr/corrspec.hpp"
#include "widecorr/rational.hpp"
#include "widecorr/wick.hpp"

#include <map>
#include <string>
#include <vector>

namespace widecorr::wick {

struct OracleOptions {
    /// The oracle enumerates concrete index values, so it only makes sense
    /// for very small widths.
    int max_width = 4;
    /// Upper bound on intermediate polynomial sizes.
    std::size_t poly_cap = 2000000;
    /// Same derivative restrictions as EvalOptions, so restricted
    /// evaluations can be cross-checked too.
    std::vector<int> derivative_layers;
    std::vector<int> pairing_layers;
};

/// Expectation of the correlation product computed by brute force at a
/// concrete width: every network copy is written as an exact polynomial in
/// the individual weight entries, summed derivatives loop over concrete
/// entries, and Gaussian moments enter through E[g^{2k}] = (2k-1)!!.  No
/// pair-partition enumeration is shared with evaluate_expectation.
Rational exact_oracle(const CorrelationSpec& spec, const MonomialNetworkConfig& config, int width,
                      const std::map<std::string, std::vector<Rational>>& inputs,
                      const OracleOptions& options = {});

} // namespace widecorr::wick
