#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace featrange {

using Rational = mpq_class;

// Exact conversion of a decimal literal such as "38095.23", "-1.5e-6" or "3/4".
// Returns nullopt when the text is not a number.
std::optional<Rational> parse_rational(std::string_view text);

// "p/q" (or "p" when the denominator is 1).
std::string to_exact(const Rational& r);

// Exact source literal: a terminating decimal when one exists, else "p/q".
std::string to_literal(const Rational& r);

// Decimal rendering with 12 significant digits.
std::string to_decimal(const Rational& r);

double to_double(const Rational& r);

// Nearest rational to a double, exact binary expansion.
Rational from_double(double d);

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace featrange
