#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace cyclevol {

using Integer = mpz_class;
using Rational = mpq_class;

/// Canonical p/q; q must be non-zero.
Rational ratio(const Integer& p, const Integer& q);

/// Parses "p", "p/q" or a plain decimal such as "-1.25" into a canonical rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational pow(const Rational& base, long exponent);
Integer pow(const Integer& base, unsigned long exponent);

Integer binomial(unsigned long n, unsigned long k);

/// (sum parts)! / prod(parts[i]!)
Integer multinomial(std::span<const int> parts);

Integer factorial(unsigned long n);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Nearest double; precision loss is expected and callers must not use it for decisions.
inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact rational equal to the given finite double.
Rational from_double(double x);

/// Rational with denominator at most 2^bits closest to x from below (toward -inf).
Rational dyadic_floor(double x, int bits);

}  // namespace cyclevol
