#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "surfdyn/errors.hpp"

namespace surfdyn {

// Arbitrary-precision integers and reduced rationals.  mpq_class keeps the
// canonical form we require: gcd(|num|, den) = 1, den > 0, zero as 0/1.
using Int = mpz_class;
using Rational = mpq_class;

// Canonicalizing constructor; rejects a zero denominator.
Rational make_rational(const Int& num, const Int& den);

// Accepts "3", "-4/7", "0"; whitespace is not allowed.
Rational rational_from_string(const std::string& text);

// Additionally accepts decimal and scientific forms: "0.25", "1e-12",
// "-2.5E3"; every input converts exactly.
Rational rational_from_decimal_string(const std::string& text);

std::string to_string(const Int& z);
std::string to_string(const Rational& q);  // "n" or "n/d"

int sign(const Rational& q);

Int pow_int(const Int& base, std::uint64_t e);
Rational pow_rational(const Rational& base, std::uint64_t e);

// Decimal renderings with a fixed number of significant digits, backed by
// 256-bit binary floating point so the printed digits are exact for every
// value this library produces.  Round selects the rounding of the final
// decimal (and of the intermediate binary value, in the same direction).
enum class Round { Nearest, Down, Up };

std::string decimal_string(const Rational& q, Round mode = Round::Nearest,
                           int digits = 15);
// Natural logarithm of a positive rational.
std::string log_decimal_string(const Rational& q, Round mode = Round::Nearest,
                               int digits = 15);
// q^(1/n) for positive q.
std::string nth_root_decimal_string(const Rational& q, unsigned long n,
                                    Round mode = Round::Nearest,
                                    int digits = 15);

}  // namespace surfdyn
