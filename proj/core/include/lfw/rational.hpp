#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace lfw {

using Rational = mpq_class;

/// q^e for any integer e, exactly.
Rational rational_power(unsigned q, int e);

/// Canonical "a/b" text; integers print as "a/1" so every exact value in a
/// report has the same shape.
std::string to_fraction_string(const Rational& r);

Rational parse_fraction(const std::string& text);

/// floor(r) as a signed integer; throws std::overflow_error when out of range.
std::int64_t floor_to_int(const Rational& r);

}  // namespace lfw
