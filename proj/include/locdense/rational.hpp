#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "locdense/error.hpp"

namespace locdense {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer ipow(const Integer& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

inline Rational rpow(const Rational& base, unsigned exponent) {
  return Rational(ipow(boost::multiprecision::numerator(base), exponent),
                  ipow(boost::multiprecision::denominator(base), exponent));
}

/// Serializes as "p/q" in lowest terms; integers keep the "/1" suffix.
inline std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// Accepts "p/q", "p" and finite decimals such as "-0.125"; the result is exact.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) -> Rational {
    throw ParseError(std::string("invalid rational '") + std::string(text) + "': " + why, 0, 0);
  };
  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
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
    if (!digits_only(num) || !digits_only(den)) return fail("expected digits around '/'");
    Integer q{std::string(den)};
    if (q == 0) return fail("zero denominator");
    result = Rational(Integer(std::string(num)), q);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits_only(whole) || !digits_only(frac)) return fail("expected a decimal number");
    Integer scale = ipow(Integer(10), static_cast<unsigned>(frac.size()));
    result = Rational(Integer(std::string(whole)) * scale + Integer(std::string(frac)), scale);
  } else {
    if (!digits_only(body)) return fail("expected an integer, decimal or p/q");
    result = Rational(Integer(std::string(body)));
  }
  return negative ? Rational(-result) : result;
}

}  // namespace locdense
