#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "dqe/numeric.hpp"

namespace dqe {

// The five cell kinds a column can declare.
enum class Kind { Text, Integer, Decimal, Timestamp, Flag };

const char* kind_name(Kind kind);
std::optional<Kind> kind_from_name(const std::string& name);

// UTC instant with second precision. Wire form is YYYY-MM-DDTHH:MM:SSZ.
struct Timestamp {
  std::int64_t seconds = 0;  // since the Unix epoch

  static std::optional<Timestamp> parse(const std::string& text);
  std::string to_string() const;

  auto operator<=>(const Timestamp&) const = default;
};

// One table cell: a typed value or NULL. NULL is its own state, not a
// value of any kind.
class Cell {
 public:
  Cell() = default;  // NULL
  explicit Cell(std::string text) : v_(std::move(text)) {}
  explicit Cell(std::int64_t integer) : v_(integer) {}
  explicit Cell(Decimal decimal) : v_(decimal) {}
  explicit Cell(Timestamp ts) : v_(ts) {}
  explicit Cell(bool flag) : v_(flag) {}

  static Cell null() { return Cell{}; }

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  std::optional<Kind> kind() const;

  const std::string& as_text() const { return std::get<std::string>(v_); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(v_); }
  const Decimal& as_decimal() const { return std::get<Decimal>(v_); }
  Timestamp as_timestamp() const { return std::get<Timestamp>(v_); }
  bool as_flag() const { return std::get<bool>(v_); }

  bool operator==(const Cell& other) const = default;

 private:
  std::variant<std::monostate, std::string, std::int64_t, Decimal, Timestamp,
               bool>
      v_;
};

// Parses the canonical text form of a cell. Empty text is NULL for every
// kind. Throws ParseError on malformed input.
Cell parse_cell(const std::string& text, Kind kind);

// Canonical text form; NULL renders as the empty string.
std::string format_cell(const Cell& cell);

// Exact three-way comparison. Integer and decimal compare numerically
// across kinds; otherwise both cells must share a kind. Returns nullopt
// when either side is NULL or the kinds are incomparable.
std::optional<std::strong_ordering> compare_cells(const Cell& a, const Cell& b);

// Whether a column of `column_kind` can hold this (non-NULL) value.
// Integer values are acceptable in decimal columns.
bool cell_conforms(const Cell& cell, Kind column_kind);

// True when the two kinds can appear on the two sides of a comparison.
bool kinds_comparable(Kind a, Kind b);

// Normalizes a conforming value for storage in a column of `column_kind`:
// integer payloads destined for decimal columns become Decimal so that
// cell equality stays representation-independent. Throws InputError when
// the value does not conform.
Cell coerce_to_kind(const Cell& cell, Kind column_kind);

}  // namespace dqe
