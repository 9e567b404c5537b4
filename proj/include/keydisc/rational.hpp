#pragma once

// Exact rational arithmetic for scores, thresholds and reduction ratios.

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace keydisc {

using Rational = boost::rational<std::int64_t>;

namespace detail {

inline std::int64_t parse_digits(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  std::int64_t value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    if (value > (INT64_MAX - 9) / 10) throw std::invalid_argument("number too large: '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace detail

// Accepts "1", "0.999", ".5" and "2/3". Negative values are rejected.
inline Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = detail::parse_digits(text.substr(0, slash), text);
    auto den = detail::parse_digits(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(detail::parse_digits(text, text));
  auto int_part = text.substr(0, dot);
  auto frac_part = text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  if (frac_part.size() > 15) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
  std::int64_t whole = int_part.empty() ? 0 : detail::parse_digits(int_part, text);
  std::int64_t frac = frac_part.empty() ? 0 : detail::parse_digits(frac_part, text);
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  return Rational(whole) + Rational(frac, scale);
}

// "n/d", or just "n" for integers.
inline std::string to_fraction_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace detail {

inline std::string fixed_point(__int128 num, __int128 den, int places) {
  bool negative = num < 0;
  if (negative) num = -num;
  __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  __int128 scaled = (num * scale * 2 + den) / (den * 2);
  std::string out = negative && scaled != 0 ? "-" : "";
  out += std::to_string(static_cast<std::int64_t>(scaled / scale));
  if (places > 0) {
    std::string frac = std::to_string(static_cast<std::int64_t>(scaled % scale));
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace detail

// Fixed-point rendering, rounded half away from zero.
inline std::string to_decimal(const Rational& r, int places) {
  return detail::fixed_point(r.numerator(), r.denominator(), places);
}

// r * 100 with `places` decimals, without forming the scaled rational.
inline std::string to_percent(const Rational& r, int places = 2) {
  return detail::fixed_point(static_cast<__int128>(r.numerator()) * 100, r.denominator(), places);
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace keydisc
