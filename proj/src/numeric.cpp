#include "dqe/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace dqe {

namespace {

using i128 = __int128;

std::strong_ordering order_i128(i128 a, i128 b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

i128 pow10_i128(int n) {
  i128 r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Decimal& Decimal::normalize() {
  if (unscaled == 0) {
    scale = 0;
    return *this;
  }
  while (scale > 0 && unscaled % 10 == 0) {
    unscaled /= 10;
    --scale;
  }
  return *this;
}

std::optional<Decimal> Decimal::parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-') {
    negative = true;
    ++pos;
  }
  std::int64_t unscaled = 0;
  std::int32_t scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point || !any_digit) return std::nullopt;  // ".5" is malformed
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any_digit = true;
    if (unscaled > (INT64_MAX - 9) / 10) return std::nullopt;  // overflow
    unscaled = unscaled * 10 + (c - '0');
    if (seen_point) ++scale;
  }
  if (!any_digit) return std::nullopt;
  if (seen_point && scale == 0) return std::nullopt;  // "1." is malformed
  Decimal d{negative ? -unscaled : unscaled, scale};
  d.normalize();
  return d;
}

std::string Decimal::to_string() const {
  std::string digits = std::to_string(unscaled < 0 ? -unscaled : unscaled);
  std::string out = unscaled < 0 ? "-" : "";
  if (scale == 0) return out + digits;
  if (static_cast<std::int32_t>(digits.size()) <= scale) {
    out += "0.";
    out.append(scale - digits.size(), '0');
    out += digits;
  } else {
    out += digits.substr(0, digits.size() - scale);
    out += '.';
    out += digits.substr(digits.size() - scale);
  }
  return out;
}

double Decimal::to_double() const {
  return static_cast<double>(unscaled) / std::pow(10.0, scale);
}

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  // a/10^s vs b/10^t  <=>  a*10^t vs b*10^s
  i128 lhs = static_cast<i128>(unscaled) * pow10_i128(other.scale);
  i128 rhs = static_cast<i128>(other.unscaled) * pow10_i128(scale);
  return order_i128(lhs, rhs);
}

Rational& Rational::reduce() {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return *this;
}

Rational Rational::from_counts(std::int64_t numerator, std::int64_t denominator) {
  Rational r{numerator, denominator};
  r.reduce();
  return r;
}

Rational Rational::from_decimal(const Decimal& d) {
  std::int64_t den = 1;
  for (std::int32_t i = 0; i < d.scale; ++i) den *= 10;
  return from_counts(d.unscaled, den);
}

std::optional<Rational> Rational::from_double_text(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) return std::nullopt;
  std::string text(buf, res.ptr);
  // to_chars may emit scientific notation for large/small magnitudes;
  // those never come from measurement counts, so reject them.
  if (text.find('e') != std::string::npos || text.find('E') != std::string::npos) {
    return std::nullopt;
  }
  auto dec = Decimal::parse(text);
  if (!dec) return std::nullopt;
  return from_decimal(*dec);
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::to_string() const {
  // Terminating decimal expansion if den = 2^a * 5^b, else keep "n/d".
  std::int64_t d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::to_string(num) + "/" + std::to_string(den);
  int scale = twos > fives ? twos : fives;
  i128 unscaled = static_cast<i128>(num);
  for (int i = 0; i < scale - twos; ++i) unscaled *= 2;
  for (int i = 0; i < scale - fives; ++i) unscaled *= 5;
  if (unscaled > INT64_MAX || unscaled < -static_cast<i128>(INT64_MAX)) {
    return std::to_string(num) + "/" + std::to_string(den);
  }
  return Decimal{static_cast<std::int64_t>(unscaled), scale}.to_string();
}

std::strong_ordering Rational::operator<=>(const Rational& other) const {
  i128 lhs = static_cast<i128>(num) * other.den;
  i128 rhs = static_cast<i128>(other.num) * den;
  return order_i128(lhs, rhs);
}

}  // namespace dqe
