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
#include "widecorr/errors.hpp"
#include "widecorr/laurent.hpp"
#include "widecorr/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace widecorr::wick {

/// Per-layer activation as an exact sum of monomials c * z^r.
struct ActivationPolynomial {
    std::vector<std::pair<int, Rational>> terms; // (degree, coefficient), coefficient != 0

    static ActivationPolynomial monomial(int degree, Rational coeff = 1);
    static ActivationPolynomial linear() { return monomial(1); }
    /// coeffs[i] is the coefficient of z^i.
    static ActivationPolynomial from_coefficients(const std::vector<Rational>& coeffs);
};

/// Architecture handled by the symbolic engine: depth, input dimension and
/// one polynomial activation per hidden layer.  The width n stays formal.
struct MonomialNetworkConfig {
    int depth = 1;     // L >= 1 hidden layers
    int input_dim = 1; // d >= 1

    std::vector<ActivationPolynomial> layers; // size == depth

    static MonomialNetworkConfig monomial(int depth, int input_dim, int degree);
    static MonomialNetworkConfig linear(int depth, int input_dim);

    void validate() const;
};

// Weight layers are numbered 1..L+1: layer 1 is the input matrix, layers
// 2..L the hidden matrices, layer L+1 the readout vector.
constexpr int kInputLayer = 1;
inline int readout_layer(const MonomialNetworkConfig& config) { return config.depth + 1; }

/// One Gaussian weight symbol inside an expanded network monomial.  Index
/// slots refer to equality classes of summed hidden indices; slots sharing
/// a class are constrained equal.
struct WeightFactor {
    int layer = 0;      // 1 = input matrix, 2..L = hidden, L+1 = readout
    int tensor = -1;    // 0-based position in the correlation product
    int row_class = -1; // n-ranged index class
    int col_class = -1; // hidden matrices only

    bool operator==(const WeightFactor&) const = default;
    auto operator<=>(const WeightFactor&) const = default;
};

/// A single weight monomial of one network factor, before it is combined
/// into a correlation product.
struct Monomial {
    Rational coeff = 1;
    std::vector<WeightFactor> factors;
    int class_count = 0;
    int half_n = 0; // number of explicit n^{-1/2} normalization factors

    int factor_count(int layer) const;
};

/// A term of the expanded correlation product: the surviving weight factors
/// of all m network copies, their index-class constraints, normalization
/// bookkeeping, input contractions already produced by derivative pairs,
/// and the tensor links those pairs force into every contraction.
struct Term {
    Rational coeff = 1;
    std::vector<WeightFactor> factors;
    std::vector<int> class_parent; // union-find storage over index classes
    int class_count = 0;
    int half_n = 0;
    int orphan_classes = 0; // classes whose factors were all consumed; each keeps one free n sum
    InputMonomial dots;     // (x_I . x_J) factors, 1/d already folded into coeff
    std::vector<std::array<int, 3>> forced_links; // (layer, tensor, tensor) consumed by derivatives

    int merge_classes(int a, int b);
};

struct EvalOptions {
    /// Maximum surviving weight factors in any single layer at enumeration
    /// time; 12 keeps every layer at most 10395 pair partitions.
    int layer_factor_budget = 12;
    /// Cap on expansion/differentiation term counts.
    std::size_t term_cap = 200000;
    /// Restrict the summed parameter derivatives to these weight layers
    /// (1 = input matrix, ...); empty means all layers.
    std::vector<int> derivative_layers;
    /// Per-pairing layer override, indexed like the spec's sorted pairings;
    /// 0 keeps the derivative_layers default.  Used to evaluate a single
    /// type assignment of the derivative sum.
    std::vector<int> pairing_layers;
};

/// Snapshot of one enumerated contraction, offered to test observers.
struct ContractionRecord {
    std::vector<std::pair<int, int>> edges; // contraction-graph edges between distinct tensors
    /// Sorted (layer, tensor, tensor) multiset of every pairing, derivative
    /// links included; identifies a contraction family up to index labels.
    std::vector<std::array<int, 3>> layer_edges;
    int component_count = 0;
    std::vector<int> component_sizes;
    int n_power = 0;
    Rational coeff; // contribution coefficient, term multiplicity included
};

using ContractionObserver = std::function<void(const ContractionRecord&)>;

/// Expand the network function at one input into its weight monomials.
/// Polynomial activations multiply out eagerly; throws BudgetExceeded when
/// the monomial count would exceed `term_cap`.
std::vector<Monomial> expand_network(const MonomialNetworkConfig& config,
                                     std::size_t term_cap = EvalOptions{}.term_cap);

/// Combine per-tensor expansions into correlation-product terms (no
/// derivatives applied yet).
std::vector<Term> combine_tensor_expansions(const CorrelationSpec& spec,
                                            const MonomialNetworkConfig& config,
                                            const EvalOptions& options = {});

/// Apply the spec's summed derivative pairs to the terms by the product
/// rule.  Each pair consumes one weight factor on both sides, equates
/// their index slots, and for input-matrix factors emits an input
/// contraction.  Structurally identical results are merged, accumulating
/// integer multiplicities in the coefficients.
std::vector<Term> differentiate(std::vector<Term> terms, const CorrelationSpec& spec,
                                const MonomialNetworkConfig& config,
                                const EvalOptions& options = {});

/// Sum over all per-layer pair partitions of the surviving weight factors
/// (zero whenever some layer holds an odd count) and return the exact value.
CorrelationValue evaluate_expectation(const std::vector<Term>& terms,
                                      const CorrelationSpec& spec,
                                      const MonomialNetworkConfig& config,
                                      const EvalOptions& options = {},
                                      const ContractionObserver& observer = nullptr);

/// expand -> combine -> differentiate -> evaluate.
CorrelationValue evaluate_correlation(const CorrelationSpec& spec,
                                      const MonomialNetworkConfig& config,
                                      const EvalOptions& options = {},
                                      const ContractionObserver& observer = nullptr);

/// Highest power of n carried by the polynomial; empty for zero.
std::optional<int> leading_exponent(const LaurentPolynomial& poly);

/// Count of pair partitions of 2k elements, (2k-1)!!; exposed for tests of
/// the matching enumerator.
std::uint64_t pair_partition_count(int elements);

} // namespace widecorr::wick
