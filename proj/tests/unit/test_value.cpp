#include "doctest.h"

#include "dqe/error.hpp"
#include "dqe/value.hpp"

using namespace dqe;

TEST_CASE("timestamp wire format round-trips") {
  auto ts = Timestamp::parse("2026-02-01T12:34:56Z");
  REQUIRE(ts);
  CHECK(ts->to_string() == "2026-02-01T12:34:56Z");
  CHECK(Timestamp::parse("1970-01-01T00:00:00Z")->seconds == 0);
  CHECK(Timestamp::parse("1969-12-31T23:59:59Z")->seconds == -1);
  CHECK(!Timestamp::parse("2026-02-01 12:34:56"));
  CHECK(!Timestamp::parse("2026-02-01T12:34:56"));
  CHECK(!Timestamp::parse("2026-13-01T00:00:00Z"));
  CHECK(!Timestamp::parse("2026-02-30T00:00:00Z"));
  CHECK(Timestamp::parse("2024-02-29T00:00:00Z"));  // leap day
  CHECK(!Timestamp::parse("2023-02-29T00:00:00Z"));
}

TEST_CASE("parse_cell and format_cell are inverse on canonical text") {
  CHECK(parse_cell("", Kind::Integer).is_null());
  CHECK(parse_cell("", Kind::Text).is_null());
  CHECK(parse_cell("42", Kind::Integer) == Cell{std::int64_t{42}});
  CHECK(parse_cell("-1.50", Kind::Decimal) == Cell{*Decimal::parse("-1.5")});
  CHECK(parse_cell("true", Kind::Flag) == Cell{true});
  CHECK(parse_cell("false", Kind::Flag) == Cell{false});
  CHECK(format_cell(Cell::null()) == "");
  CHECK(format_cell(Cell{std::string("hi")}) == "hi");
  CHECK(format_cell(parse_cell("2026-01-01T00:00:00Z", Kind::Timestamp)) ==
        "2026-01-01T00:00:00Z");
  CHECK_THROWS_AS(parse_cell("abc", Kind::Integer), ParseError);
  CHECK_THROWS_AS(parse_cell("1.5", Kind::Integer), ParseError);
  CHECK_THROWS_AS(parse_cell("yes", Kind::Flag), ParseError);
  CHECK_THROWS_AS(parse_cell("not-a-time", Kind::Timestamp), ParseError);
}

TEST_CASE("compare_cells crosses integer and decimal, nothing else") {
  Cell i3{std::int64_t{3}};
  Cell d3{*Decimal::parse("3.0")};
  Cell d35{*Decimal::parse("3.5")};
  CHECK(compare_cells(i3, d3) == std::strong_ordering::equal);
  CHECK(compare_cells(i3, d35) == std::strong_ordering::less);
  CHECK(compare_cells(Cell{std::string("a")}, Cell{std::string("b")}) ==
        std::strong_ordering::less);
  CHECK(!compare_cells(i3, Cell{std::string("3")}).has_value());
  CHECK(!compare_cells(Cell::null(), i3).has_value());
  CHECK(!compare_cells(Cell::null(), Cell::null()).has_value());
}

TEST_CASE("cell equality is representation-sensitive without coercion") {
  Cell i3{std::int64_t{3}};
  Cell d3{*Decimal::parse("3")};
  CHECK(i3 != d3);  // different variants
  CHECK(coerce_to_kind(i3, Kind::Decimal) == d3);
  CHECK(coerce_to_kind(d3, Kind::Decimal) == d3);
  CHECK_THROWS_AS(coerce_to_kind(Cell{std::string("x")}, Kind::Integer), InputError);
}

TEST_CASE("cell_conforms allows integers in decimal columns only") {
  CHECK(cell_conforms(Cell{std::int64_t{1}}, Kind::Decimal));
  CHECK(!cell_conforms(Cell{*Decimal::parse("1.5")}, Kind::Integer));
  CHECK(cell_conforms(Cell{std::string("x")}, Kind::Text));
  CHECK(!cell_conforms(Cell{true}, Kind::Text));
  CHECK(kinds_comparable(Kind::Integer, Kind::Decimal));
  CHECK(!kinds_comparable(Kind::Integer, Kind::Text));
}
