#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "qmlab/errors.hpp"

namespace qmlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Lowest terms, integers without a denominator: "3", "-1/2".
inline std::string to_string(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {
inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}
}  // namespace detail

// Accepts "p", "p/q" with optional sign on p; q must be positive.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!detail::is_integer_literal(num))
    throw InputError("invalid rational '" + std::string(text) + "'");
  Integer p(std::string(num[0] == '+' ? num.substr(1) : num));
  if (slash == std::string_view::npos) return Rational(p);
  const std::string_view den = text.substr(slash + 1);
  if (!detail::is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw InputError("invalid rational '" + std::string(text) + "'");
  Integer q{std::string(den)};
  if (q == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(p, q);
}

}  // namespace qmlab
