#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "twdet/errors.hpp"

namespace twdet {

using Integer = boost::multiprecision::cpp_int;
// cpp_rational normalizes on every operation: lowest terms, positive
// denominator. Equality is therefore canonical-form equality.
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

inline std::string to_string(const Integer& z) { return z.str(); }

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline Integer parse_integer(std::string_view s) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ParseError("empty integer literal");
  Integer z = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("invalid integer literal: " + std::string(s));
    z = z * 10 + (c - '0');
  }
  return negative ? Integer(-z) : z;
}

inline Integer pow10(unsigned e) {
  Integer p = 1;
  for (unsigned i = 0; i < e; ++i) p *= 10;
  return p;
}

} // namespace detail

inline Integer parse_integer(std::string_view s) { return detail::parse_integer(s); }

/// Parses "a", "a/b" or a finite decimal such as "-1.25e-3". Decimals are
/// converted exactly; "nan", "inf" and friends are rejected.
inline Rational parse_rational(std::string_view text) {
  auto s = detail::trim(text);
  if (s.empty()) throw ParseError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = detail::parse_integer(s.substr(0, slash));
    Integer den = detail::parse_integer(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator: " + std::string(s));
    if (den < 0) { // the two-argument constructor wants a positive denominator
      num = -num;
      den = -den;
    }
    return Rational(num, den);
  }
  bool decimal = s.find_first_of(".eE") != std::string_view::npos;
  if (!decimal) return Rational(detail::parse_integer(s));

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    Integer ez = detail::parse_integer(s.substr(e + 1));
    if (ez > 4096 || ez < -4096) throw ParseError("exponent out of range: " + std::string(text));
    exponent = ez.convert_to<long>();
  }
  Integer digits = 0;
  long frac = 0;
  bool seen_point = false, seen_digit = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) throw ParseError("invalid decimal literal: " + std::string(text));
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      seen_digit = true;
      if (seen_point) ++frac;
    } else {
      throw ParseError("invalid decimal literal: " + std::string(text));
    }
  }
  if (!seen_digit) throw ParseError("invalid decimal literal: " + std::string(text));
  long shift = exponent - frac;
  Rational q = shift >= 0 ? Rational(digits * detail::pow10(static_cast<unsigned>(shift)))
                          : Rational(digits, detail::pow10(static_cast<unsigned>(-shift)));
  return negative ? Rational(-q) : q;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Rational pow(const Rational& base, unsigned e) {
  Rational r = 1;
  Rational b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

} // namespace twdet
