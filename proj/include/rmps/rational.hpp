#pragma once

#include <gmpxx.h>

#include <string>

namespace rmps {

using BigInt = mpz_class;
using Rational = mpq_class;

/// "num/den" in lowest terms; integers print without a denominator.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// Parses "a/b" or "a"; throws ParseError on anything else.
Rational parse_rational(const std::string& text);

}  // namespace rmps
