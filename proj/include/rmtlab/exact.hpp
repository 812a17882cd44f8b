// Exact arithmetic carriers shared by the combinatorial and oracle modules.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace rmtlab {

using BigInt = boost::multiprecision::cpp_int;

/// Reduced fraction with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "NUM/DEN", an integer, or a finite decimal such as "0.0316".
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "NUM/DEN", or just "NUM" when the denominator is one.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

BigInt parse_bigint(std::string_view text);

double to_double(const Rational& value);
double to_double(const BigInt& value);

Rational pow(const Rational& base, unsigned exponent);

}  // namespace rmtlab
