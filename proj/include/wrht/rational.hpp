#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace wrht {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator) as long as every value is built through the helpers
// below or through arithmetic on already-canonical values.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rat(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// Parses "p", "-p", "p/q".  Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

std::string to_string(const Rational& q);

}  // namespace wrht
