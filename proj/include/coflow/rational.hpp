#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace coflow {

/// Exact arbitrary-precision fraction. Every LP value, deadline, weight and
/// cost in the library is carried in this type.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or a plain decimal such as "0.68" into a canonical
/// rational. Throws std::invalid_argument on malformed input or a zero
/// denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when the denominator is one).
std::string to_string(const Rational& value);

/// Human-readable decimal with `digits` fractional digits (rounded toward
/// zero). Only for summaries; machine outputs use to_string.
std::string to_decimal(const Rational& value, int digits = 6);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);

bool is_integral(const Rational& value);

/// Narrowing conversion; throws std::overflow_error outside int64 range.
std::int64_t to_int64(const Integer& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

inline Rational from_int(std::int64_t value) {
  return Rational(Integer(static_cast<long>(value)));
}

/// floor(sqrt(value)) as a rational with `bits` fractional binary digits.
/// `value` must lie in [0, 1].
Rational sqrt_truncated(const Rational& value, unsigned bits = 64);

}  // namespace coflow
