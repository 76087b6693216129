#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bvdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Accepts "p", "p/q", or a finite decimal such as "0.3" (read exactly as 3/10).
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

double to_double(const Rational& value);

/// Least common multiple of the denominators.
BigInt common_denominator(const Rational* begin, const Rational* end);

}  // namespace bvdyn
