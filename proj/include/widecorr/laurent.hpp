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

#include "widecorr/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace widecorr {

/// Finite sum of rational coefficients times integer powers of the width n.
/// Zero coefficients are never stored.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default;

    static LaurentPolynomial constant(Rational c);
    static LaurentPolynomial term(Rational c, int power);

    void add_term(int power, const Rational& c);

    LaurentPolynomial& operator+=(const LaurentPolynomial& other);
    LaurentPolynomial operator+(const LaurentPolynomial& other) const;
    LaurentPolynomial operator*(const LaurentPolynomial& other) const;
    LaurentPolynomial& operator*=(const Rational& c);

    bool is_zero() const { return coeffs_.empty(); }

    /// Highest power of n with a nonzero coefficient; empty for the zero
    /// polynomial.
    std::optional<int> leading_exponent() const;

    Rational coefficient(int power) const;
    Rational evaluate(const Rational& n) const;

    const std::map<int, Rational>& coefficients() const { return coeffs_; }

    bool operator==(const LaurentPolynomial&) const = default;

    std::string to_string() const;

private:
    std::map<int, Rational> coeffs_;
};

/// Formal product of network inputs attached to a Laurent coefficient.
/// With a one-dimensional input space, contractions collapse to powers of
/// scalar input symbols; otherwise they stay as formal dot products.
struct InputMonomial {
    std::map<std::string, int> scalar_powers;
    std::map<std::pair<std::string, std::string>, int> dot_powers;

    void mul_scalar(const std::string& label, int power);
    void mul_dot(const std::string& a, const std::string& b, int power);

    bool empty() const { return scalar_powers.empty() && dot_powers.empty(); }

    Rational evaluate(const std::map<std::string, std::vector<Rational>>& inputs) const;

    std::string to_string() const;

    bool operator==(const InputMonomial&) const = default;
    bool operator<(const InputMonomial& other) const
    {
        if (scalar_powers != other.scalar_powers) {
            return scalar_powers < other.scalar_powers;
        }
        return dot_powers < other.dot_powers;
    }
};

/// Exact value of a symbolically evaluated correlation function: a sum of
/// input monomials, each with its own Laurent polynomial in the width.
class CorrelationValue {
public:
    void add(const InputMonomial& monomial, int n_power, const Rational& c);
    void add(const InputMonomial& monomial, const LaurentPolynomial& poly);
    CorrelationValue& operator+=(const CorrelationValue& other);

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    const std::map<InputMonomial, LaurentPolynomial>& terms() const { return terms_; }

    /// Maximum leading exponent over all input monomials.
    std::optional<int> leading_exponent() const;

    /// The Laurent polynomial of the unique input monomial.  Zero values
    /// yield the zero polynomial; multi-monomial values throw.
    LaurentPolynomial single_polynomial() const;
    const InputMonomial& single_monomial() const;

    Rational evaluate(const Rational& n,
                      const std::map<std::string, std::vector<Rational>>& inputs) const;

    bool operator==(const CorrelationValue&) const = default;

    std::string to_string() const;

private:
    std::map<InputMonomial, LaurentPolynomial> terms_;
};

} // namespace widecorr
