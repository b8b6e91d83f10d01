#include "fodd/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fodd {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// cpp_int reads a leading 0 as an octal prefix
cpp_int decimal_int(std::string_view digits) {
  std::size_t first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? cpp_int(0) : cpp_int(std::string(digits.substr(first)));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    cpp_int d = decimal_int(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(decimal_int(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    cpp_int digits = decimal_int(std::string(whole) + std::string(frac));
    result = Rational(digits, scale);
  } else {
    if (!all_digits(body)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    result = Rational(decimal_int(body));
  }
  return negative ? Rational(-result) : result;
}

std::string to_exact_string(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal_string(const Rational& value) {
  cpp_int num = boost::multiprecision::numerator(value);
  cpp_int den = boost::multiprecision::denominator(value);
  cpp_int rest = den;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1 || std::max(twos, fives) > 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", to_double(value));
    return buf;
  }
  int places = std::max(twos, fives);
  bool negative = num < 0;
  if (negative) num = -num;
  cpp_int scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  cpp_int scaled = num * scale / den;
  std::string digits = scaled.str();
  std::string out;
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places))
      digits.insert(0, places - digits.size() + 1, '0');
    out = digits.substr(0, digits.size() - places) + "." + digits.substr(digits.size() - places);
  } else {
    out = digits;
  }
  return negative ? "-" + out : out;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

int compare(const Rational& a, const Rational& b) {
  using boost::multiprecision::cpp_int;
  cpp_int lhs = boost::multiprecision::numerator(a) * boost::multiprecision::denominator(b);
  cpp_int rhs = boost::multiprecision::numerator(b) * boost::multiprecision::denominator(a);
  return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
}

}  // namespace fodd
