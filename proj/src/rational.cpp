#include "nosig/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace nosig {

std::string to_string(const Rational& value) { return value.str(); }

std::optional<Rational> parse_rational(std::string_view text) {
  const auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };

  std::string_view num = text;
  std::string_view den;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (!digits(den)) return std::nullopt;
  }
  bool negative = false;
  if (!num.empty() && num.front() == '-') {
    negative = true;
    num.remove_prefix(1);
  }
  if (!digits(num)) return std::nullopt;

  BigInt n{std::string(num)};
  if (negative) n = -n;
  if (den.empty()) return Rational(n);
  BigInt d{std::string(den)};
  if (d == 0) return std::nullopt;
  // Construct via division; this canonicalizes (the string ctor would not).
  return Rational(n) / Rational(d);
}

Rational parse_rational_or_throw(std::string_view text) {
  auto parsed = parse_rational(text);
  if (!parsed) {
    throw std::invalid_argument("not a rational: \"" + std::string(text) +
                                "\" (expected \"p\" or \"p/q\" with q > 0)");
  }
  return *parsed;
}

}  // namespace nosig
