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

#include "widecorr/wick.hpp"

#include "widecorr/unionfind.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>

namespace widecorr::wick {

ActivationPolynomial ActivationPolynomial::monomial(int degree, Rational coeff)
{
    if (degree < 0) {
        throw std::invalid_argument("negative activation degree");
    }
    ActivationPolynomial p;
    if (coeff != 0) {
        p.terms.emplace_back(degree, std::move(coeff));
    }
    return p;
}

ActivationPolynomial ActivationPolynomial::from_coefficients(const std::vector<Rational>& coeffs)
{
    ActivationPolynomial p;
    for (int degree = 0; degree < static_cast<int>(coeffs.size()); ++degree) {
        if (coeffs[degree] != 0) {
            p.terms.emplace_back(degree, coeffs[degree]);
        }
    }
    return p;
}

MonomialNetworkConfig MonomialNetworkConfig::monomial(int depth, int input_dim, int degree)
{
    MonomialNetworkConfig c;
    c.depth = depth;
    c.input_dim = input_dim;
    c.layers.assign(depth, ActivationPolynomial::monomial(degree));
    c.validate();
    return c;
}

MonomialNetworkConfig MonomialNetworkConfig::linear(int depth, int input_dim)
{
    return monomial(depth, input_dim, 1);
}

void MonomialNetworkConfig::validate() const
{
    if (depth < 1) {
        throw std::invalid_argument("network depth must be >= 1");
    }
    if (input_dim < 1) {
        throw std::invalid_argument("input dimension must be >= 1");
    }
    if (static_cast<int>(layers.size()) != depth) {
        throw std::invalid_argument("need one activation polynomial per hidden layer");
    }
    for (const auto& layer : layers) {
        for (const auto& [degree, coeff] : layer.terms) {
            if (degree < 0) {
                throw std::invalid_argument("negative activation degree");
            }
        }
    }
}

int Monomial::factor_count(int layer) const
{
    int count = 0;
    for (const auto& f : factors) {
        if (f.layer == layer) {
            ++count;
        }
    }
    return count;
}

int Term::merge_classes(int a, int b)
{
    auto find = [&](int v) {
        while (class_parent[v] != v) {
            class_parent[v] = class_parent[class_parent[v]];
            v = class_parent[v];
        }
        return v;
    };
    a = find(a);
    b = find(b);
    if (a != b) {
        class_parent[b] = a;
    }
    return a;
}

std::uint64_t pair_partition_count(int elements)
{
    if (elements % 2 != 0) {
        return 0;
    }
    std::uint64_t r = 1;
    for (int v = elements - 1; v > 1; v -= 2) {
        r *= static_cast<std::uint64_t>(v);
    }
    return r;
}

std::optional<int> leading_exponent(const LaurentPolynomial& poly)
{
    return poly.leading_exponent();
}

// ---------------------------------------------------------------------------
// Network expansion

namespace {

struct PendingComponent {
    int level;       // hidden layer whose post-activation component is expanded
    int index_class; // class of that component's neuron index
};

void expand_rec(const MonomialNetworkConfig& config, std::vector<PendingComponent> pending,
                Monomial current, std::vector<Monomial>& out, std::size_t term_cap)
{
    if (pending.empty()) {
        if (out.size() >= term_cap) {
            throw BudgetExceeded("network expansion exceeds " + std::to_string(term_cap) +
                                 " monomials");
        }
        out.push_back(std::move(current));
        return;
    }
    PendingComponent node = pending.back();
    pending.pop_back();

    for (const auto& [degree, coeff] : config.layers[node.level - 1].terms) {
        Monomial next = current;
        next.coeff *= coeff;
        std::vector<PendingComponent> next_pending = pending;
        if (node.level == 1) {
            // (U_c(x))^degree: all copies share the component's index class.
            for (int t = 0; t < degree; ++t) {
                next.factors.push_back(WeightFactor{kInputLayer, -1, node.index_class, -1});
            }
        } else {
            // One hidden-matrix factor and one fresh summed column index per
            // copy of the pre-activation; each carries an explicit n^{-1/2}.
            for (int t = 0; t < degree; ++t) {
                int col = next.class_count++;
                next.factors.push_back(WeightFactor{node.level, -1, node.index_class, col});
                next.half_n += 1;
                next_pending.push_back(PendingComponent{node.level - 1, col});
            }
        }
        expand_rec(config, std::move(next_pending), std::move(next), out, term_cap);
    }
}

} // namespace

std::vector<Monomial> expand_network(const MonomialNetworkConfig& config, std::size_t term_cap)
{
    config.validate();
    Monomial root;
    root.class_count = 1; // readout neuron index
    root.half_n = 1;      // readout normalization
    root.factors.push_back(WeightFactor{readout_layer(config), -1, 0, -1});

    std::vector<Monomial> out;
    expand_rec(config, {PendingComponent{config.depth, 0}}, std::move(root), out, term_cap);
    return out;
}

// ---------------------------------------------------------------------------
// Term canonicalization and merging

namespace {

void canonicalize(Term& term)
{
    // Resolve every slot to its class root.
    auto find = [&](int v) {
        while (term.class_parent[v] != v) {
            term.class_parent[v] = term.class_parent[term.class_parent[v]];
            v = term.class_parent[v];
        }
        return v;
    };
    for (auto& f : term.factors) {
        f.row_class = find(f.row_class);
        if (f.col_class >= 0) {
            f.col_class = find(f.col_class);
        }
    }

    // Classes whose factors were all consumed by derivatives keep their
    // n sum but never join another class again; count and drop them.
    std::vector<char> referenced(term.class_count, 0);
    for (const auto& f : term.factors) {
        referenced[f.row_class] = 1;
        if (f.col_class >= 0) {
            referenced[f.col_class] = 1;
        }
    }
    std::vector<int> roots;
    for (int c = 0; c < term.class_count; ++c) {
        if (find(c) == c) {
            if (referenced[c]) {
                roots.push_back(c);
            } else {
                ++term.orphan_classes;
            }
        }
    }

    // Relabel the surviving classes by iterative signature refinement so
    // that structurally identical terms produced by different derivative
    // choices compare equal and merge.
    std::vector<int> label(term.class_count, 0);
    for (int round = 0; round < 3; ++round) {
        std::map<int, std::vector<std::array<int, 4>>> sig;
        for (int r : roots) {
            sig[r]; // ensure entry
        }
        for (const auto& f : term.factors) {
            int other = f.col_class >= 0 ? label[f.col_class] : -1;
            sig[f.row_class].push_back({f.layer, f.tensor, 0, other});
            if (f.col_class >= 0) {
                sig[f.col_class].push_back({f.layer, f.tensor, 1, label[f.row_class]});
            }
        }
        std::vector<std::pair<std::pair<int, std::vector<std::array<int, 4>>>, int>> ordered;
        for (int r : roots) {
            auto& s = sig[r];
            std::sort(s.begin(), s.end());
            ordered.push_back({{label[r], s}, r});
        }
        std::sort(ordered.begin(), ordered.end());
        int next = 0;
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            if (i > 0 && ordered[i].first != ordered[i - 1].first) {
                ++next;
            }
            label[ordered[i].second] = next;
        }
    }
    // Final dense ids: refinement label first, root id as tie-break.
    std::vector<std::pair<std::pair<int, int>, int>> order;
    for (int r : roots) {
        order.push_back({{label[r], r}, r});
    }
    std::sort(order.begin(), order.end());
    std::vector<int> dense(term.class_count, -1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        dense[order[i].second] = static_cast<int>(i);
    }
    for (auto& f : term.factors) {
        f.row_class = dense[f.row_class];
        if (f.col_class >= 0) {
            f.col_class = dense[f.col_class];
        }
    }
    term.class_count = static_cast<int>(roots.size());
    term.class_parent.resize(term.class_count);
    for (int c = 0; c < term.class_count; ++c) {
        term.class_parent[c] = c;
    }
    std::sort(term.factors.begin(), term.factors.end());
    std::sort(term.forced_links.begin(), term.forced_links.end());
}

std::string term_key(const Term& term)
{
    std::ostringstream key;
    key << term.class_count << "|" << term.orphan_classes << "|" << term.half_n << "|";
    for (const auto& f : term.factors) {
        key << f.layer << "," << f.tensor << "," << f.row_class << "," << f.col_class << ";";
    }
    key << "|";
    for (const auto& [layer, a, b] : term.forced_links) {
        key << layer << "," << a << "," << b << ";";
    }
    key << "|" << term.dots.to_string();
    return key.str();
}

void merge_into(std::map<std::string, Term>& pool, Term term)
{
    std::string key = term_key(term);
    auto it = pool.find(key);
    if (it == pool.end()) {
        pool.emplace(std::move(key), std::move(term));
    } else {
        it->second.coeff += term.coeff;
    }
}

std::vector<Term> drain(std::map<std::string, Term>& pool)
{
    std::vector<Term> out;
    out.reserve(pool.size());
    for (auto& [key, term] : pool) {
        if (term.coeff != 0) {
            out.push_back(std::move(term));
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Combining per-tensor expansions

std::vector<Term> combine_tensor_expansions(const CorrelationSpec& spec,
                                            const MonomialNetworkConfig& config,
                                            const EvalOptions& options)
{
    config.validate();
    std::vector<Monomial> expansion = expand_network(config, options.term_cap);

    const int m = spec.tensor_count();
    std::size_t total = 1;
    for (int t = 0; t < m; ++t) {
        total *= expansion.size();
        if (total > options.term_cap) {
            throw BudgetExceeded("correlation product exceeds " +
                                 std::to_string(options.term_cap) + " terms");
        }
    }

    std::map<std::string, Term> pool;
    std::vector<std::size_t> choice(m, 0);
    while (true) {
        Term term;
        for (int t = 0; t < m; ++t) {
            const Monomial& mono = expansion[choice[t]];
            int offset = term.class_count;
            term.coeff *= mono.coeff;
            term.half_n += mono.half_n;
            term.class_count += mono.class_count;
            for (WeightFactor f : mono.factors) {
                f.tensor = t;
                f.row_class += offset;
                if (f.col_class >= 0) {
                    f.col_class += offset;
                }
                term.factors.push_back(f);
            }
        }
        term.class_parent.resize(term.class_count);
        for (int c = 0; c < term.class_count; ++c) {
            term.class_parent[c] = c;
        }
        canonicalize(term);
        merge_into(pool, std::move(term));

        int t = m - 1;
        while (t >= 0 && ++choice[t] == expansion.size()) {
            choice[t] = 0;
            --t;
        }
        if (t < 0) {
            break;
        }
    }
    return drain(pool);
}

// ---------------------------------------------------------------------------
// Summed derivative pairs

namespace {

std::vector<int> allowed_layers_for(const EvalOptions& options, const MonomialNetworkConfig& config,
                                    std::size_t pairing_index)
{
    if (pairing_index < options.pairing_layers.size() &&
        options.pairing_layers[pairing_index] != 0) {
        return {options.pairing_layers[pairing_index]};
    }
    if (!options.derivative_layers.empty()) {
        return options.derivative_layers;
    }
    std::vector<int> all;
    for (int layer = 1; layer <= readout_layer(config); ++layer) {
        all.push_back(layer);
    }
    return all;
}

} // namespace

std::vector<Term> differentiate(std::vector<Term> terms, const CorrelationSpec& spec,
                                const MonomialNetworkConfig& config, const EvalOptions& options)
{
    const Rational inv_d = Rational(1, config.input_dim);

    for (std::size_t pi = 0; pi < spec.pairings().size(); ++pi) {
        const auto& pairing = spec.pairings()[pi];
        const int ti = pairing.first.tensor;
        const int tj = pairing.second.tensor;
        const std::vector<int> layers = allowed_layers_for(options, config, pi);

        std::map<std::string, Term> pool;
        for (const Term& term : terms) {
            for (int layer : layers) {
                std::vector<int> left;
                std::vector<int> right;
                for (int fi = 0; fi < static_cast<int>(term.factors.size()); ++fi) {
                    if (term.factors[fi].layer != layer) {
                        continue;
                    }
                    if (term.factors[fi].tensor == ti) {
                        left.push_back(fi);
                    }
                    if (term.factors[fi].tensor == tj) {
                        right.push_back(fi);
                    }
                }
                for (int a : left) {
                    for (int b : right) {
                        if (a == b) {
                            continue; // weight symbols are linear in each entry
                        }
                        Term next = term;
                        const WeightFactor fa = next.factors[a];
                        const WeightFactor fb = next.factors[b];
                        next.merge_classes(fa.row_class, fb.row_class);
                        if (fa.col_class >= 0) {
                            next.merge_classes(fa.col_class, fb.col_class);
                        }
                        if (layer == kInputLayer) {
                            next.dots.mul_dot(spec.tensors()[ti].input_label,
                                              spec.tensors()[tj].input_label, 1);
                            next.coeff *= inv_d;
                        }
                        next.factors.erase(next.factors.begin() + std::max(a, b));
                        next.factors.erase(next.factors.begin() + std::min(a, b));
                        next.forced_links.push_back({layer, std::min(ti, tj), std::max(ti, tj)});
                        canonicalize(next);
                        merge_into(pool, std::move(next));
                        if (pool.size() > options.term_cap) {
                            throw BudgetExceeded("derivative expansion exceeds " +
                                                 std::to_string(options.term_cap) + " terms");
                        }
                    }
                }
            }
        }
        terms = drain(pool);
        if (terms.empty()) {
            return terms; // derivative found no matching weights anywhere
        }
    }
    return terms;
}

// ---------------------------------------------------------------------------
// Contraction enumeration

namespace {

struct TermEvaluator {
    const Term& term;
    const CorrelationSpec& spec;
    const MonomialNetworkConfig& config;
    const ContractionObserver& observer;
    CorrelationValue& result;

    std::vector<std::vector<int>> layer_factors; // factor indices grouped by layer
    std::vector<std::pair<int, int>> matched;    // current matching (factor indices)
    std::vector<int> scratch_parent;
    Rational scaled_coeff;
    int tensor_count = 0;

    // Accumulator: contractions sharing (n_power, input monomial) are
    // counted with integers and flushed with one rational op each.
    std::map<std::pair<int, InputMonomial>, long long> buckets;
    bool constant_dots = false; // input monomial identical for every contraction
    InputMonomial const_dots;

    void run(const EvalOptions& options)
    {
        tensor_count = spec.tensor_count();
        layer_factors.assign(readout_layer(config) + 1, std::vector<int>{});
        for (int fi = 0; fi < static_cast<int>(term.factors.size()); ++fi) {
            layer_factors[term.factors[fi].layer].push_back(fi);
        }
        int input_pairs = 0;
        for (int layer = 1; layer < static_cast<int>(layer_factors.size()); ++layer) {
            const int count = static_cast<int>(layer_factors[layer].size());
            if (count > options.layer_factor_budget) {
                throw BudgetExceeded("layer " + std::to_string(layer) + " holds " +
                                     std::to_string(count) + " weight factors, budget is " +
                                     std::to_string(options.layer_factor_budget));
            }
            if (count % 2 != 0) {
                return; // odd Gaussian moment
            }
            if (layer == kInputLayer) {
                input_pairs = count / 2;
            }
        }
        assert(term.half_n % 2 == 0);

        scaled_coeff = term.coeff;
        for (int k = 0; k < input_pairs; ++k) {
            scaled_coeff *= Rational(1, config.input_dim);
        }

        // With a one-dimensional input space every contraction of this term
        // carries the same scalar input monomial.
        if (config.input_dim == 1) {
            const_dots = term.dots;
            for (int fi : layer_factors[kInputLayer]) {
                const_dots.mul_scalar(spec.tensors()[term.factors[fi].tensor].input_label, 1);
            }
            // Derivative dots were stored as dot products; collapse them.
            InputMonomial collapsed;
            collapsed.scalar_powers = const_dots.scalar_powers;
            for (const auto& [pair, power] : const_dots.dot_powers) {
                collapsed.mul_scalar(pair.first, power);
                collapsed.mul_scalar(pair.second, power);
            }
            const_dots = std::move(collapsed);
            constant_dots = true;
        }

        recurse_layer(1);
        flush();
    }

    void recurse_layer(int layer)
    {
        if (layer >= static_cast<int>(layer_factors.size())) {
            evaluate_leaf();
            return;
        }
        std::vector<int> remaining = layer_factors[layer];
        recurse_matching(layer, remaining);
    }

    void recurse_matching(int layer, std::vector<int>& remaining)
    {
        if (remaining.empty()) {
            recurse_layer(layer + 1);
            return;
        }
        const int first = remaining.front();
        for (std::size_t k = 1; k < remaining.size(); ++k) {
            const int partner = remaining[k];
            std::vector<int> rest;
            rest.reserve(remaining.size() - 2);
            for (std::size_t j = 1; j < remaining.size(); ++j) {
                if (j != k) {
                    rest.push_back(remaining[j]);
                }
            }
            matched.emplace_back(first, partner);
            recurse_matching(layer, rest);
            matched.pop_back();
        }
    }

    int find_root(int v)
    {
        while (scratch_parent[v] != v) {
            scratch_parent[v] = scratch_parent[scratch_parent[v]];
            v = scratch_parent[v];
        }
        return v;
    }

    void evaluate_leaf()
    {
        scratch_parent = term.class_parent;
        for (const auto& [a, b] : matched) {
            const WeightFactor& fa = term.factors[a];
            const WeightFactor& fb = term.factors[b];
            int ra = find_root(fa.row_class);
            int rb = find_root(fb.row_class);
            if (ra != rb) {
                scratch_parent[rb] = ra;
            }
            if (fa.col_class >= 0) {
                int ca = find_root(fa.col_class);
                int cb = find_root(fb.col_class);
                if (ca != cb) {
                    scratch_parent[cb] = ca;
                }
            }
        }
        int free_classes = term.orphan_classes;
        for (int c = 0; c < term.class_count; ++c) {
            if (find_root(c) == c) {
                ++free_classes;
            }
        }
        const int n_power = free_classes - term.half_n / 2;

        std::pair<int, InputMonomial> key{n_power, InputMonomial{}};
        if (!constant_dots) {
            key.second = term.dots;
            for (const auto& [a, b] : matched) {
                if (term.factors[a].layer == kInputLayer) {
                    key.second.mul_dot(spec.tensors()[term.factors[a].tensor].input_label,
                                       spec.tensors()[term.factors[b].tensor].input_label, 1);
                }
            }
        }
        buckets[key] += 1;

        if (observer) {
            ContractionRecord record;
            record.layer_edges = term.forced_links;
            for (const auto& [a, b] : matched) {
                int ta = term.factors[a].tensor;
                int tb = term.factors[b].tensor;
                record.layer_edges.push_back(
                    {term.factors[a].layer, std::min(ta, tb), std::max(ta, tb)});
            }
            std::sort(record.layer_edges.begin(), record.layer_edges.end());
            for (const auto& [layer, ta, tb] : record.layer_edges) {
                if (ta != tb) {
                    record.edges.emplace_back(ta, tb);
                }
            }
            std::sort(record.edges.begin(), record.edges.end());
            record.edges.erase(std::unique(record.edges.begin(), record.edges.end()),
                               record.edges.end());
            UnionFind uf(tensor_count);
            for (auto [a, b] : record.edges) {
                uf.merge(a, b);
            }
            std::map<int, int> sizes;
            for (int v = 0; v < tensor_count; ++v) {
                ++sizes[uf.find(v)];
            }
            for (const auto& [root, size] : sizes) {
                record.component_sizes.push_back(size);
            }
            record.component_count = static_cast<int>(sizes.size());
            record.n_power = n_power;
            record.coeff = scaled_coeff;
            observer(record);
        }
    }

    void flush()
    {
        for (const auto& [key, count] : buckets) {
            const auto& [n_power, dots] = key;
            result.add(constant_dots ? const_dots : dots, n_power, scaled_coeff * count);
        }
    }
};

} // namespace

CorrelationValue evaluate_expectation(const std::vector<Term>& terms,
                                      const CorrelationSpec& spec,
                                      const MonomialNetworkConfig& config,
                                      const EvalOptions& options,
                                      const ContractionObserver& observer)
{
    CorrelationValue value;
    for (const Term& term : terms) {
        TermEvaluator eval{term, spec, config, observer, value};
        eval.run(options);
    }
    return value;
}

CorrelationValue evaluate_correlation(const CorrelationSpec& spec,
                                      const MonomialNetworkConfig& config,
                                      const EvalOptions& options,
                                      const ContractionObserver& observer)
{
    std::vector<Term> terms = combine_tensor_expansions(spec, config, options);
    terms = differentiate(std::move(terms), spec, config, options);
    return evaluate_expectation(terms, spec, config, options, observer);
}

} // namespace widecorr::wick
