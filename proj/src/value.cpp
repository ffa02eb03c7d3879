#include "dqe/value.hpp"

#include <array>
#include <cstdio>

#include "dqe/error.hpp"

namespace dqe {

namespace {

constexpr std::array<std::pair<Kind, const char*>, 5> kKindNames = {{
    {Kind::Text, "text"},
    {Kind::Integer, "integer"},
    {Kind::Decimal, "decimal"},
    {Kind::Timestamp, "timestamp"},
    {Kind::Flag, "flag"},
}};

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30,
                                         31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

bool parse_fixed_digits(const std::string& s, std::size_t pos, int count,
                        std::int64_t& out) {
  out = 0;
  for (int i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    out = out * 10 + (c - '0');
  }
  return true;
}

}  // namespace

const char* kind_name(Kind kind) {
  for (const auto& [k, n] : kKindNames) {
    if (k == kind) return n;
  }
  return "?";
}

std::optional<Kind> kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::optional<Timestamp> Timestamp::parse(const std::string& text) {
  // Strict YYYY-MM-DDTHH:MM:SSZ, UTC only.
  if (text.size() != 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  std::int64_t year, month, day, hour, minute, second;
  if (!parse_fixed_digits(text, 0, 4, year) ||
      !parse_fixed_digits(text, 5, 2, month) ||
      !parse_fixed_digits(text, 8, 2, day) ||
      !parse_fixed_digits(text, 11, 2, hour) ||
      !parse_fixed_digits(text, 14, 2, minute) ||
      !parse_fixed_digits(text, 17, 2, second)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) {
    return std::nullopt;
  }
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
  std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return Timestamp{days * 86400 + hour * 3600 + minute * 60 + second};
}

std::string Timestamp::to_string() const {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

std::optional<Kind> Cell::kind() const {
  switch (v_.index()) {
    case 1: return Kind::Text;
    case 2: return Kind::Integer;
    case 3: return Kind::Decimal;
    case 4: return Kind::Timestamp;
    case 5: return Kind::Flag;
    default: return std::nullopt;
  }
}

Cell parse_cell(const std::string& text, Kind kind) {
  if (text.empty()) return Cell::null();
  switch (kind) {
    case Kind::Text:
      return Cell{text};
    case Kind::Integer: {
      // Reject decimal points in integer columns; Decimal::parse is the
      // digit validator.
      auto d = Decimal::parse(text);
      if (!d || d->scale != 0 || text.find('.') != std::string::npos) {
        throw ParseError("not an integer: '" + text + "'");
      }
      return Cell{d->unscaled};
    }
    case Kind::Decimal: {
      auto d = Decimal::parse(text);
      if (!d) throw ParseError("not a decimal: '" + text + "'");
      return Cell{*d};
    }
    case Kind::Timestamp: {
      auto ts = Timestamp::parse(text);
      if (!ts) {
        throw ParseError("not a timestamp (expected YYYY-MM-DDTHH:MM:SSZ): '" +
                         text + "'");
      }
      return Cell{*ts};
    }
    case Kind::Flag: {
      if (text == "true") return Cell{true};
      if (text == "false") return Cell{false};
      throw ParseError("not a flag (expected true/false): '" + text + "'");
    }
  }
  throw ParseError("unknown cell kind");
}

std::string format_cell(const Cell& cell) {
  if (cell.is_null()) return "";
  switch (*cell.kind()) {
    case Kind::Text: return cell.as_text();
    case Kind::Integer: return std::to_string(cell.as_integer());
    case Kind::Decimal: return cell.as_decimal().to_string();
    case Kind::Timestamp: return cell.as_timestamp().to_string();
    case Kind::Flag: return cell.as_flag() ? "true" : "false";
  }
  return "";
}

std::optional<std::strong_ordering> compare_cells(const Cell& a, const Cell& b) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  Kind ka = *a.kind();
  Kind kb = *b.kind();
  auto as_dec = [](const Cell& c) {
    return c.kind() == Kind::Integer ? Decimal::from_int(c.as_integer())
                                     : c.as_decimal();
  };
  if ((ka == Kind::Integer || ka == Kind::Decimal) &&
      (kb == Kind::Integer || kb == Kind::Decimal)) {
    if (ka == Kind::Integer && kb == Kind::Integer) {
      return a.as_integer() <=> b.as_integer();
    }
    return as_dec(a) <=> as_dec(b);
  }
  if (ka != kb) return std::nullopt;
  switch (ka) {
    case Kind::Text: return a.as_text() <=> b.as_text();
    case Kind::Timestamp: return a.as_timestamp() <=> b.as_timestamp();
    case Kind::Flag: return static_cast<int>(a.as_flag()) <=> static_cast<int>(b.as_flag());
    default: return std::nullopt;
  }
}

bool cell_conforms(const Cell& cell, Kind column_kind) {
  if (cell.is_null()) return true;
  Kind k = *cell.kind();
  if (k == column_kind) return true;
  return column_kind == Kind::Decimal && k == Kind::Integer;
}

bool kinds_comparable(Kind a, Kind b) {
  if (a == b) return true;
  auto numeric = [](Kind k) { return k == Kind::Integer || k == Kind::Decimal; };
  return numeric(a) && numeric(b);
}

Cell coerce_to_kind(const Cell& cell, Kind column_kind) {
  if (cell.is_null()) return cell;
  if (!cell_conforms(cell, column_kind)) {
    throw InputError(std::string("value '") + format_cell(cell) +
                     "' does not conform to kind " + kind_name(column_kind));
  }
  if (column_kind == Kind::Decimal && cell.kind() == Kind::Integer) {
    return Cell{Decimal::from_int(cell.as_integer())};
  }
  return cell;
}

}  // namespace dqe
