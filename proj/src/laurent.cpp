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

#include "widecorr/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace widecorr {

LaurentPolynomial LaurentPolynomial::constant(Rational c)
{
    return term(std::move(c), 0);
}

LaurentPolynomial LaurentPolynomial::term(Rational c, int power)
{
    LaurentPolynomial p;
    p.add_term(power, c);
    return p;
}

void LaurentPolynomial::add_term(int power, const Rational& c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = coeffs_.emplace(power, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            coeffs_.erase(it);
        }
    }
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& other)
{
    for (const auto& [power, c] : other.coeffs_) {
        add_term(power, c);
    }
    return *this;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& other) const
{
    LaurentPolynomial r = *this;
    r += other;
    return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& other) const
{
    LaurentPolynomial r;
    for (const auto& [pa, ca] : coeffs_) {
        for (const auto& [pb, cb] : other.coeffs_) {
            r.add_term(pa + pb, ca * cb);
        }
    }
    return r;
}

LaurentPolynomial& LaurentPolynomial::operator*=(const Rational& c)
{
    if (c == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [power, coeff] : coeffs_) {
        coeff *= c;
    }
    return *this;
}

std::optional<int> LaurentPolynomial::leading_exponent() const
{
    if (coeffs_.empty()) {
        return std::nullopt;
    }
    return coeffs_.rbegin()->first;
}

Rational LaurentPolynomial::coefficient(int power) const
{
    auto it = coeffs_.find(power);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

Rational LaurentPolynomial::evaluate(const Rational& n) const
{
    Rational sum = 0;
    for (const auto& [power, c] : coeffs_) {
        Rational p = 1;
        for (int k = 0; k < (power < 0 ? -power : power); ++k) {
            p *= n;
        }
        if (power >= 0) {
            sum += c * p;
        } else {
            sum += c / p;
        }
    }
    return sum;
}

std::string LaurentPolynomial::to_string() const
{
    if (coeffs_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        const auto& [power, c] = *it;
        if (!first) {
            out << (c < 0 ? " - " : " + ");
        } else if (c < 0) {
            out << "-";
        }
        Rational mag = c < 0 ? Rational(-c) : c;
        if (power == 0) {
            out << mag.str();
        } else {
            if (mag != 1) {
                out << mag.str() << "*";
            }
            out << "n^" << power;
        }
        first = false;
    }
    return out.str();
}

void InputMonomial::mul_scalar(const std::string& label, int power)
{
    if (power == 0) {
        return;
    }
    scalar_powers[label] += power;
    if (scalar_powers[label] == 0) {
        scalar_powers.erase(label);
    }
}

void InputMonomial::mul_dot(const std::string& a, const std::string& b, int power)
{
    if (power == 0) {
        return;
    }
    auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    dot_powers[key] += power;
    if (dot_powers[key] == 0) {
        dot_powers.erase(key);
    }
}

Rational InputMonomial::evaluate(const std::map<std::string, std::vector<Rational>>& inputs) const
{
    auto vec = [&](const std::string& label) -> const std::vector<Rational>& {
        auto it = inputs.find(label);
        if (it == inputs.end()) {
            throw std::invalid_argument("no input bound to label '" + label + "'");
        }
        return it->second;
    };
    Rational r = 1;
    for (const auto& [label, power] : scalar_powers) {
        const auto& x = vec(label);
        for (int k = 0; k < power; ++k) {
            r *= x.at(0);
        }
    }
    for (const auto& [pair, power] : dot_powers) {
        const auto& a = vec(pair.first);
        const auto& b = vec(pair.second);
        if (a.size() != b.size()) {
            throw std::invalid_argument("input dimension mismatch between '" + pair.first +
                                        "' and '" + pair.second + "'");
        }
        Rational dot = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
        }
        for (int k = 0; k < power; ++k) {
            r *= dot;
        }
    }
    return r;
}

std::string InputMonomial::to_string() const
{
    if (empty()) {
        return "1";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [label, power] : scalar_powers) {
        if (!first) {
            out << " ";
        }
        out << label;
        if (power != 1) {
            out << "^" << power;
        }
        first = false;
    }
    for (const auto& [pair, power] : dot_powers) {
        if (!first) {
            out << " ";
        }
        out << "(" << pair.first << "." << pair.second << ")";
        if (power != 1) {
            out << "^" << power;
        }
        first = false;
    }
    return out.str();
}

void CorrelationValue::add(const InputMonomial& monomial, int n_power, const Rational& c)
{
    if (c == 0) {
        return;
    }
    auto& poly = terms_[monomial];
    poly.add_term(n_power, c);
    if (poly.is_zero()) {
        terms_.erase(monomial);
    }
}

void CorrelationValue::add(const InputMonomial& monomial, const LaurentPolynomial& poly)
{
    if (poly.is_zero()) {
        return;
    }
    auto& dst = terms_[monomial];
    dst += poly;
    if (dst.is_zero()) {
        terms_.erase(monomial);
    }
}

CorrelationValue& CorrelationValue::operator+=(const CorrelationValue& other)
{
    for (const auto& [monomial, poly] : other.terms_) {
        add(monomial, poly);
    }
    return *this;
}

std::optional<int> CorrelationValue::leading_exponent() const
{
    std::optional<int> best;
    for (const auto& [monomial, poly] : terms_) {
        auto e = poly.leading_exponent();
        if (e && (!best || *e > *best)) {
            best = e;
        }
    }
    return best;
}

LaurentPolynomial CorrelationValue::single_polynomial() const
{
    if (terms_.empty()) {
        return {};
    }
    if (terms_.size() > 1) {
        throw std::logic_error("correlation value has " + std::to_string(terms_.size()) +
                               " input monomials, expected one");
    }
    return terms_.begin()->second;
}

const InputMonomial& CorrelationValue::single_monomial() const
{
    if (terms_.size() != 1) {
        throw std::logic_error("correlation value has " + std::to_string(terms_.size()) +
                               " input monomials, expected one");
    }
    return terms_.begin()->first;
}

Rational CorrelationValue::evaluate(const Rational& n,
                                    const std::map<std::string, std::vector<Rational>>& inputs) const
{
    Rational sum = 0;
    for (const auto& [monomial, poly] : terms_) {
        sum += poly.evaluate(n) * monomial.evaluate(inputs);
    }
    return sum;
}

std::string CorrelationValue::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [monomial, poly] : terms_) {
        if (!first) {
            out << " + ";
        }
        out << "(" << poly.to_string() << ")";
        if (!monomial.empty()) {
            out << " * " << monomial.to_string();
        }
        first = false;
    }
    return out.str();
}

} // namespace widecorr
