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

#include "widecorr/oracle.hpp"

#include "widecorr/errors.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <vector>

namespace widecorr::wick {

namespace {

// Multivariate polynomial over concrete weight entries plus two bookkeeping
// variables for the n^{-1/2} and d^{-1/2} normalization factors (kept
// symbolic so all coefficients stay rational).
constexpr int kSqrtNInv = 0;
constexpr int kSqrtDInv = 1;
constexpr int kFirstWeightVar = 2;

using Mono = std::vector<std::pair<int, int>>; // (variable, exponent), sorted by variable
using Poly = std::map<Mono, Rational>;

Mono mono_mul(const Mono& a, const Mono& b)
{
    Mono r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            r.push_back(a[i]);
            ++i;
        } else {
            r.push_back(b[j]);
            ++j;
        }
    }
    for (; i < a.size(); ++i) {
        r.push_back(a[i]);
    }
    for (; j < b.size(); ++j) {
        r.push_back(b[j]);
    }
    return r;
}

void poly_add_term(Poly& p, Mono mono, const Rational& c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = p.emplace(std::move(mono), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            p.erase(it);
        }
    }
}

Poly poly_mul(const Poly& a, const Poly& b, std::size_t cap)
{
    if (a.size() > cap / std::max<std::size_t>(b.size(), 1)) {
        throw BudgetExceeded("oracle polynomial product too large");
    }
    Poly r;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            poly_add_term(r, mono_mul(ma, mb), ca * cb);
        }
    }
    if (r.size() > cap) {
        throw BudgetExceeded("oracle polynomial too large");
    }
    return r;
}

Poly poly_pow(const Poly& base, int exponent, std::size_t cap)
{
    Poly r;
    poly_add_term(r, {}, 1);
    for (int k = 0; k < exponent; ++k) {
        r = poly_mul(r, base, cap);
    }
    return r;
}

Poly poly_scale_var(const Poly& p, int var)
{
    Poly r;
    for (const auto& [mono, c] : p) {
        poly_add_term(r, mono_mul(mono, Mono{{var, 1}}), c);
    }
    return r;
}

Poly poly_derivative(const Poly& p, int var)
{
    Poly r;
    for (const auto& [mono, c] : p) {
        for (std::size_t k = 0; k < mono.size(); ++k) {
            if (mono[k].first != var) {
                continue;
            }
            Mono reduced = mono;
            if (--reduced[k].second == 0) {
                reduced.erase(reduced.begin() + k);
            }
            poly_add_term(r, std::move(reduced), c * mono[k].second);
            break;
        }
    }
    return r;
}

struct EntryTable {
    int width = 0;
    int input_dim = 0;
    int depth = 0;
    int total = 0;
    std::vector<int> layer_first; // first var id of each weight layer (index 1..L+1)

    EntryTable(const MonomialNetworkConfig& config, int width_in)
        : width(width_in), input_dim(config.input_dim), depth(config.depth)
    {
        layer_first.assign(depth + 2, 0);
        int next = kFirstWeightVar;
        layer_first[1] = next;
        next += width * input_dim;
        for (int layer = 2; layer <= depth; ++layer) {
            layer_first[layer] = next;
            next += width * width;
        }
        layer_first[depth + 1] = next;
        next += width;
        total = next;
    }

    int input_entry(int i, int alpha) const { return layer_first[1] + i * input_dim + alpha; }
    int hidden_entry(int layer, int i, int j) const { return layer_first[layer] + i * width + j; }
    int readout_entry(int i) const { return layer_first[depth + 1] + i; }

    int layer_of(int var) const
    {
        for (int layer = depth + 1; layer >= 1; --layer) {
            if (var >= layer_first[layer]) {
                return layer;
            }
        }
        return 0;
    }
};

Poly apply_activation(const ActivationPolynomial& activation, const Poly& z, std::size_t cap)
{
    Poly out;
    for (const auto& [degree, coeff] : activation.terms) {
        Poly powed = poly_pow(z, degree, cap);
        for (const auto& [mono, c] : powed) {
            poly_add_term(out, mono, c * coeff);
        }
    }
    return out;
}

Poly network_poly(const MonomialNetworkConfig& config, const EntryTable& entries,
                  const std::vector<Rational>& x, std::size_t cap)
{
    const int n = entries.width;
    const int d = entries.input_dim;

    // Post-activations of layer 1.
    std::vector<Poly> comp(n);
    for (int i = 0; i < n; ++i) {
        Poly z;
        for (int alpha = 0; alpha < d; ++alpha) {
            poly_add_term(z, Mono{{kSqrtDInv, 1}, {entries.input_entry(i, alpha), 1}},
                          x.at(alpha));
        }
        comp[i] = apply_activation(config.layers[0], z, cap);
    }
    for (int layer = 2; layer <= config.depth; ++layer) {
        std::vector<Poly> next(n);
        for (int i = 0; i < n; ++i) {
            Poly z;
            for (int j = 0; j < n; ++j) {
                Poly wj = poly_scale_var(comp[j], entries.hidden_entry(layer, i, j));
                for (const auto& [mono, c] : wj) {
                    poly_add_term(z, mono_mul(mono, Mono{{kSqrtNInv, 1}}), c);
                }
            }
            next[i] = apply_activation(config.layers[layer - 1], z, cap);
        }
        comp = std::move(next);
    }
    Poly f;
    for (int i = 0; i < n; ++i) {
        Poly vi = poly_scale_var(comp[i], entries.readout_entry(i));
        for (const auto& [mono, c] : vi) {
            poly_add_term(f, mono_mul(mono, Mono{{kSqrtNInv, 1}}), c);
        }
    }
    if (f.size() > cap) {
        throw BudgetExceeded("oracle network polynomial too large");
    }
    return f;
}

/// E over the i.i.d. standard normal entries; the two normalization
/// variables substitute their concrete values.  Returns zero whenever any
/// weight entry appears with odd power.
Rational mono_moment(const Mono& mono, int n, int d)
{
    Rational value = 1;
    for (const auto& [var, exponent] : mono) {
        if (var == kSqrtNInv || var == kSqrtDInv) {
            assert(exponent % 2 == 0);
            const int base = var == kSqrtNInv ? n : d;
            Rational p(1, base);
            for (int k = 1; k < exponent / 2; ++k) {
                p /= base;
            }
            value *= p;
        } else {
            if (exponent % 2 != 0) {
                return 0;
            }
            value *= Rational(double_factorial(exponent - 1));
        }
    }
    return value;
}

Rational product_expectation(std::vector<const Poly*> polys, int n, int d, std::size_t cap)
{
    if (polys.empty()) {
        return 1;
    }
    // Fold the smaller factors first and stream the largest one.
    std::sort(polys.begin(), polys.end(),
              [](const Poly* a, const Poly* b) { return a->size() < b->size(); });
    Poly head;
    poly_add_term(head, {}, 1);
    for (std::size_t k = 0; k + 1 < polys.size(); ++k) {
        head = poly_mul(head, *polys[k], cap);
    }
    const Poly& tail = *polys.back();
    Rational sum = 0;
    for (const auto& [ma, ca] : head) {
        for (const auto& [mb, cb] : tail) {
            Rational moment = mono_moment(mono_mul(ma, mb), n, d);
            if (moment != 0) {
                sum += ca * cb * moment;
            }
        }
    }
    return sum;
}

struct OracleRun {
    const CorrelationSpec& spec;
    const EntryTable& entries;
    const OracleOptions& options;
    std::vector<Poly> tensor_polys;
    Rational total = 0;

    std::vector<int> layers_for(std::size_t pairing_index) const
    {
        if (pairing_index < options.pairing_layers.size() &&
            options.pairing_layers[pairing_index] != 0) {
            return {options.pairing_layers[pairing_index]};
        }
        if (!options.derivative_layers.empty()) {
            return options.derivative_layers;
        }
        std::vector<int> all;
        for (int layer = 1; layer <= entries.depth + 1; ++layer) {
            all.push_back(layer);
        }
        return all;
    }

    void recurse(std::size_t pairing_index)
    {
        if (pairing_index == spec.pairings().size()) {
            std::vector<const Poly*> ptrs;
            ptrs.reserve(tensor_polys.size());
            for (const auto& p : tensor_polys) {
                ptrs.push_back(&p);
            }
            total += product_expectation(std::move(ptrs), entries.width, entries.input_dim,
                                         options.poly_cap);
            return;
        }
        const auto& pairing = spec.pairings()[pairing_index];
        const int ti = pairing.first.tensor;
        const int tj = pairing.second.tensor;
        for (int layer : layers_for(pairing_index)) {
            const int first = entries.layer_first[layer];
            const int count = layer == 1              ? entries.width * entries.input_dim
                              : layer <= entries.depth ? entries.width * entries.width
                                                       : entries.width;
            for (int var = first; var < first + count; ++var) {
                Poly di = poly_derivative(tensor_polys[ti], var);
                if (di.empty()) {
                    continue;
                }
                Poly dj;
                if (ti == tj) {
                    dj = poly_derivative(di, var);
                } else {
                    dj = poly_derivative(tensor_polys[tj], var);
                }
                if (dj.empty()) {
                    continue;
                }
                Poly saved_i = std::move(tensor_polys[ti]);
                Poly saved_j;
                if (ti == tj) {
                    tensor_polys[ti] = std::move(dj);
                } else {
                    saved_j = std::move(tensor_polys[tj]);
                    tensor_polys[ti] = std::move(di);
                    tensor_polys[tj] = std::move(dj);
                }
                recurse(pairing_index + 1);
                tensor_polys[ti] = std::move(saved_i);
                if (ti != tj) {
                    tensor_polys[tj] = std::move(saved_j);
                }
            }
        }
    }
};

} // namespace

Rational exact_oracle(const CorrelationSpec& spec, const MonomialNetworkConfig& config, int width,
                      const std::map<std::string, std::vector<Rational>>& inputs,
                      const OracleOptions& options)
{
    config.validate();
    if (width < 1 || width > options.max_width) {
        throw BudgetExceeded("oracle width " + std::to_string(width) + " outside 1.." +
                             std::to_string(options.max_width));
    }
    EntryTable entries(config, width);

    OracleRun run{spec, entries, options, {}, 0};
    run.tensor_polys.reserve(spec.tensor_count());
    for (const auto& tensor : spec.tensors()) {
        auto it = inputs.find(tensor.input_label);
        if (it == inputs.end()) {
            throw std::invalid_argument("no input bound to label '" + tensor.input_label + "'");
        }
        if (static_cast<int>(it->second.size()) != config.input_dim) {
            throw std::invalid_argument("input '" + tensor.input_label + "' has dimension " +
                                        std::to_string(it->second.size()) + ", expected " +
                                        std::to_string(config.input_dim));
        }
        run.tensor_polys.push_back(network_poly(config, entries, it->second, options.poly_cap));
    }
    run.recurse(0);
    return run.total;
}

} // namespace widecorr::wick
