#ifndef MECHKERNEL_RATIONAL_HPP
#define MECHKERNEL_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace mechkernel {

// All arithmetic in the decision procedures is exact. mpq_class keeps
// values canonical (reduced, positive denominator) after canonicalize().
using Rational = mpq_class;
using RatVec = std::vector<Rational>;

// Canonicalized quotient. The raw two-argument mpq_class constructor skips
// reduction, which breaks comparisons; use this instead.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p/q", "-3", "0.35", ".5", "1e-3" into an exact rational. Decimals
// become numerator/10^k before reduction, so "0.35" == 7/20 exactly.
Rational parse_rational(const std::string& text);

// Canonical "p/q" (or "p" when q == 1). Inverse of parse_rational on
// fraction strings.
std::string to_string(const Rational& value);

// Decimal expansion for plot-ready output. Exact when the denominator is
// 2^a 5^b and max_digits suffices, otherwise truncated toward zero.
std::string to_decimal_string(const Rational& value, int max_digits = 12);

}  // namespace mechkernel

#endif  // MECHKERNEL_RATIONAL_HPP
