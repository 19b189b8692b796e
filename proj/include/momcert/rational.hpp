#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace momcert {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a decimal such as "-1.25e-3". Decimals are
/// converted exactly (power-of-ten denominator). Throws Error(Validation).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; the denominator is always written, "1/1" included.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Natural log of |value| without overflow for huge numerators or
/// denominators. value must be nonzero.
double log_abs(const Rational& value);

/// |value|^(1/k), correctly rounded; fine for values far outside the double
/// range.
double nth_root(const Rational& value, unsigned long k);

/// Rounds x to the nearest multiple of 2^-bits and returns it exactly.
Rational dyadic(double x, int bits = 40);

Rational pow(const Rational& base, unsigned long exponent);

Rational abs(const Rational& value);

}  // namespace momcert
