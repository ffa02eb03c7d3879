#include "doctest.h"

#include "dqe/derive_expr.hpp"
#include "dqe/error.hpp"
#include "fixtures.hpp"

using namespace dqe;
using namespace dqe::testfix;

namespace {

// One table exercising every kind: numeric sources, text parts, a flag,
// a timestamp and target columns of each category.
TableSchema derive_schema() {
  TableSchema s;
  s.name = "t";
  s.columns = {col("a", Kind::Integer),       // 0
               col("b", Kind::Integer),       // 1
               col("price", Kind::Decimal),   // 2
               col("qty", Kind::Integer),     // 3
               col("first", Kind::Text),      // 4
               col("last", Kind::Text),       // 5
               col("total", Kind::Decimal),   // 6  target
               col("n", Kind::Integer),       // 7  target
               col("label", Kind::Text),      // 8  target
               col("ok", Kind::Flag),         // 9
               col("ok_copy", Kind::Flag),    // 10 target
               col("at", Kind::Timestamp),    // 11
               col("at_copy", Kind::Timestamp)}; // 12 target
  s.primary_key = {"a"};
  return s;
}

Row sample_row() {
  return {I(3),
          I(4),
          D("19.99"),
          I(3),
          T("Ada"),
          T("Lovelace"),
          N(),
          N(),
          N(),
          Cell{true},
          N(),
          TS("2026-01-05T10:00:00Z"),
          N()};
}

void expect_parse_error(const char* text, const char* target, const char* fragment) {
  try {
    DeriveExpr::parse(text, derive_schema(), target);
    FAIL("expected ParseError for: ", text);
  } catch (const ParseError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
  }
}

std::optional<Cell> eval(const char* text, const char* target, const Row& row) {
  return DeriveExpr::parse(text, derive_schema(), target).evaluate(row);
}

}  // namespace

TEST_CASE("derive expressions parse against the schema") {
  expect_parse_error("ghost + 1", "total", "unknown column 'ghost'");
  expect_parse_error("total * 2", "total", "references the target column 'total'");
  expect_parse_error("first + last", "total", "produces text, column 'total' holds numeric");
  expect_parse_error("price + first", "total", "'+' cannot mix numeric and text");
  expect_parse_error("first - price", "total", "'-' cannot mix text and numeric");
  expect_parse_error("at + 1", "total", "'+' cannot mix timestamp and numeric");
  expect_parse_error("-first", "total", "unary '-' needs a numeric operand");
  expect_parse_error("'oops", "label", "unterminated string literal");
  expect_parse_error("(a + b", "total", "missing ')'");
  expect_parse_error("a b", "total", "trailing input after 'b'");
  expect_parse_error("a + ", "total", "unexpected end of input");
  expect_parse_error("a % b", "total", "unexpected character '%'");

  try {
    DeriveExpr::parse("1", derive_schema(), "ghost");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("no column 'ghost' in table 't'") != std::string::npos);
  }
}

TEST_CASE("numeric derivation is exact decimal arithmetic") {
  Row row = sample_row();

  auto out = eval("price * qty", "total", row);
  REQUIRE(out.has_value());
  CHECK(*out == D("59.97"));

  out = eval("price + 0.01", "total", row);
  REQUIRE(out.has_value());
  CHECK(*out == D("20"));  // trailing zeros normalize away

  out = eval("(a + b) / 2", "total", row);
  REQUIRE(out.has_value());
  CHECK(*out == D("3.5"));

  out = eval("-price", "total", row);
  REQUIRE(out.has_value());
  CHECK(*out == D("-19.99"));

  // Precedence: * binds tighter than +.
  CHECK(*eval("a + b * 2", "n", row) == I(11));
  CHECK(*eval("(a + b) * 2", "n", row) == I(14));
  CHECK(*eval("a + b", "n", row) == I(7));
}

TEST_CASE("division succeeds only when it terminates within twelve places") {
  Row row = sample_row();
  auto out = eval("1 / 8", "total", row);
  REQUIRE(out.has_value());
  CHECK(*out == D("0.125"));

  // 2^-12 needs exactly twelve decimal places; 2^-13 needs thirteen.
  out = eval("1 / 4096", "total", row);
  REQUIRE(out.has_value());
  CHECK(*out == D("0.000244140625"));
  CHECK_FALSE(eval("1 / 8192", "total", row).has_value());

  CHECK_FALSE(eval("1 / 3", "total", row).has_value());   // non-terminating
  CHECK_FALSE(eval("a / 0", "total", row).has_value());   // division by zero
  CHECK_FALSE(eval("price / (a - 3)", "total", row).has_value());
}

TEST_CASE("integer targets refuse fractional results") {
  Row row = sample_row();
  CHECK(*eval("(a + 5) / 2", "n", row) == I(4));       // 8/2 lands exactly
  CHECK_FALSE(eval("(a + b) / 2", "n", row).has_value());  // 3.5 does not
  CHECK_FALSE(eval("price", "n", row).has_value());        // 19.99 does not

  // A decimal expression that normalizes to a whole number is fine.
  CHECK(*eval("price + 0.01", "n", row) == I(20));
}

TEST_CASE("NULL operands make the derivation uncorrectable") {
  Row row = sample_row();
  row[0] = N();  // a
  CHECK_FALSE(eval("a + b", "n", row).has_value());
  CHECK_FALSE(eval("a * 2", "total", row).has_value());

  Row text_row = sample_row();
  text_row[4] = N();  // first
  CHECK_FALSE(eval("first + last", "label", text_row).has_value());
}

TEST_CASE("text derivation concatenates, with quote escapes") {
  Row row = sample_row();
  auto out = eval("first + ' ' + last", "label", row);
  REQUIRE(out.has_value());
  CHECK(*out == T("Ada Lovelace"));

  out = eval("'it''s ' + first", "label", row);
  REQUIRE(out.has_value());
  CHECK(*out == T("it's Ada"));
}

TEST_CASE("timestamp and flag targets copy a column verbatim") {
  Row row = sample_row();
  auto out = eval("at", "at_copy", row);
  REQUIRE(out.has_value());
  CHECK(*out == TS("2026-01-05T10:00:00Z"));

  out = eval("ok", "ok_copy", row);
  REQUIRE(out.has_value());
  CHECK(*out == Cell{true});

  row[11] = N();
  CHECK_FALSE(eval("at", "at_copy", row).has_value());
}
