#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace nosig {

// Exact arbitrary-precision rational. Canonical form (positive denominator,
// reduced) is maintained by every arithmetic operation.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Canonical text form: "p" when the denominator is 1, otherwise "p/q" with
// q > 0 (so "-3/4", never "3/-4").
std::string to_string(const Rational& value);

// Strict parse of the canonical text form. Accepts an optional leading '-',
// digits, and an optional "/digits" part; the denominator must be nonzero.
// Unreduced inputs such as "2/4" are normalized. Anything else (signs after
// '/', decimals, whitespace, empty input) yields nullopt.
std::optional<Rational> parse_rational(std::string_view text);

// Same as parse_rational, raising std::invalid_argument on bad input.
Rational parse_rational_or_throw(std::string_view text);

}  // namespace nosig
