#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace dqe {

// Exact base-10 number: unscaled / 10^scale, kept normalized so that equal
// values have equal representations (no trailing fraction zeros, zero is
// {0, 0}). All comparisons are exact; there is no floating-point rounding
// anywhere in the counting paths.
struct Decimal {
  std::int64_t unscaled = 0;
  std::int32_t scale = 0;

  static Decimal from_int(std::int64_t v) { return Decimal{v, 0}; }

  // Accepts [-]digits[.digits]; rejects everything else.
  static std::optional<Decimal> parse(const std::string& text);

  // Canonical form: what parse(to_string(d)) round-trips.
  std::string to_string() const;

  double to_double() const;

  std::strong_ordering operator<=>(const Decimal& other) const;
  bool operator==(const Decimal& other) const { return (*this <=> other) == 0; }

  Decimal& normalize();
};

// Exact fraction with positive denominator, fully reduced. Used for metric
// actual values so that percent/ratio comparisons against interval bounds
// never depend on binary rounding.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational from_int(std::int64_t v) { return Rational{v, 1}; }
  static Rational from_counts(std::int64_t numerator, std::int64_t denominator);
  static Rational from_decimal(const Decimal& d);

  // Recovers the decimal a human wrote: formats the double with the
  // shortest round-trip representation and parses that exactly. "0.1"
  // comes back as 1/10, not as the nearest binary fraction.
  static std::optional<Rational> from_double_text(double v);

  double to_double() const;
  std::string to_string() const;  // decimal if terminating, else "n/d"

  std::strong_ordering operator<=>(const Rational& other) const;
  bool operator==(const Rational& other) const { return (*this <=> other) == 0; }

  Rational& reduce();
};

}  // namespace dqe
