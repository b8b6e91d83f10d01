#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fodd {

/// Exact leaf values. All symbolic arithmetic stays in this type.
using Rational = boost::multiprecision::cpp_rational;

/// Accepts integers ("10"), decimals ("0.9", "-1.25") and fractions ("81/10").
Rational parse_rational(std::string_view text);

/// "81/10", "10", "-3/4".
std::string to_exact_string(const Rational& value);

/// Exact decimal when the denominator only has factors 2 and 5 and at
/// most 15 places are needed, otherwise 15 significant digits.
std::string to_decimal_string(const Rational& value);

double to_double(const Rational& value);

/// Sign of a - b by cross multiplication; much cheaper than the
/// built-in ordering on large values.
int compare(const Rational& a, const Rational& b);

inline bool less(const Rational& a, const Rational& b) { return compare(a, b) < 0; }

}  // namespace fodd
