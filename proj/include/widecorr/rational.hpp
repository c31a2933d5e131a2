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

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace widecorr {

// Exact arithmetic used by the symbolic engine.  Coefficients grow
// combinatorially (Gaussian moments are double factorials), so fixed-width
// integers are not an option.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// k!! for odd k >= -1; the number of pair partitions of k+1 elements.
inline BigInt double_factorial(long k)
{
    BigInt r = 1;
    for (long v = k; v > 1; v -= 2) {
        r *= v;
    }
    return r;
}

inline std::string to_string(const Rational& q)
{
    return q.str();
}

inline double to_double(const Rational& q)
{
    return static_cast<double>(q);
}

} // namespace widecorr
