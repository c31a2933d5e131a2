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

#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace widecorr {

/// Exact half-integer, stored as twice its value.  Predicted exponents are
/// compared exactly in tests, so they are never carried as floats.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt whole(int v) { return HalfInt{2 * v}; }
    static constexpr HalfInt halves(int t) { return HalfInt{t}; }

    bool is_integer() const { return twice % 2 == 0; }
    double to_double() const { return twice / 2.0; }

    HalfInt operator+(HalfInt o) const { return HalfInt{twice + o.twice}; }
    HalfInt operator-(HalfInt o) const { return HalfInt{twice - o.twice}; }

    auto operator<=>(const HalfInt&) const = default;

    std::string to_string() const
    {
        if (twice % 2 == 0) {
            return std::to_string(twice / 2);
        }
        return std::to_string(twice) + "/2";
    }
};

/// The cluster graph of a correlation spec: one vertex per derivative
/// tensor, an edge wherever two tensors share a summed derivative index,
/// and the even/odd census of its connected components.
struct ClusterGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;     // i < j, deduplicated, sorted
    std::vector<std::vector<int>> components;   // each sorted; list sorted by first vertex
    int n_even = 0;
    int n_odd = 0;
};

ClusterGraph build_cluster_graph(const CorrelationSpec& spec);

/// Build directly from an edge list (used by property tests on random graphs).
ClusterGraph cluster_graph_from_edges(int vertex_count,
                                      const std::vector<std::pair<int, int>>& edges);

/// Scaling exponent of the mean: n_even + (n_odd - m) / 2.
HalfInt predict_exponent(const ClusterGraph& graph);

/// Scaling exponent of the variance: 2 s_C - 1 when every component is
/// even, otherwise 2 s_C.
HalfInt predict_variance_exponent(const ClusterGraph& graph);

struct CovarianceExponent {
    bool exact_zero = false; // odd total parity forces the covariance to vanish
    HalfInt exponent;

    bool operator==(const CovarianceExponent&) const = default;
};

HalfInt predict_exponent(const ClusterGraph& graph);

CovarianceExponent predict_covariance_exponent(const ClusterGraph& gx, const ClusterGraph& gy);

} // namespace widecorr
