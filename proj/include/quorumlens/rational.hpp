// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace quorumlens {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt ceil_of(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r);
  BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;
  if (q * d != n && n > 0) ++q;
  return q;
}

inline BigInt floor_of(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r);
  BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;
  if (q * d != n && n < 0) --q;
  return q;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  auto d = boost::multiprecision::denominator(r);
  if (d == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + d.str();
}

// Parses "3", "-2", "0.75", "1e-3" style decimals exactly, or "p/q".
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw InputError("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail();
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  BigInt digits = 0;
  int scale = 0;
  bool any = false;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_dot) ++scale;
      any = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) fail();
  int exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') fail();
    ++pos;
    auto rest = text.substr(pos);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) fail();
  }
  exponent -= scale;
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational value = exponent < 0 ? Rational(digits, ten_pow) : Rational(digits * ten_pow);
  return negative ? Rational(-value) : value;
}

// Exact value of the shortest decimal that round-trips to `x`, so that a JSON
// literal 0.8 becomes 4/5 rather than the nearest binary fraction.
inline Rational from_decimal(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw InputError("cannot format number");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

}  // namespace quorumlens
