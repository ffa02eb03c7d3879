#include "doctest.h"

#include "dqe/numeric.hpp"

using dqe::Decimal;
using dqe::Rational;

TEST_CASE("decimal parse accepts plain decimal text only") {
  CHECK(Decimal::parse("0")->unscaled == 0);
  CHECK(Decimal::parse("0")->scale == 0);
  CHECK(Decimal::parse("-3.50") == Decimal{-35, 1});
  CHECK(Decimal::parse("00012.3400") == Decimal{1234, 2});
  CHECK(!Decimal::parse(""));
  CHECK(!Decimal::parse("1e3"));
  CHECK(!Decimal::parse("1."));
  CHECK(!Decimal::parse(".5"));
  CHECK(!Decimal::parse("--1"));
  CHECK(!Decimal::parse("1.2.3"));
  CHECK(!Decimal::parse(" 1"));
}

TEST_CASE("decimal comparison is value-based across scales") {
  CHECK(*Decimal::parse("1.50") == *Decimal::parse("1.5"));
  CHECK(*Decimal::parse("2") > *Decimal::parse("1.999"));
  CHECK(*Decimal::parse("-0.001") < *Decimal::parse("0"));
  CHECK(*Decimal::parse("-0.00") == Decimal::from_int(0));
}

TEST_CASE("decimal to_string is canonical and round-trips") {
  for (const char* text : {"0", "1", "-1", "1.5", "-0.07", "123456.789"}) {
    auto d = Decimal::parse(text);
    REQUIRE(d);
    CHECK(d->to_string() == text);
    CHECK(*Decimal::parse(d->to_string()) == *d);
  }
  CHECK(Decimal::parse("1.500")->to_string() == "1.5");
  CHECK(Decimal::parse("-0.0")->to_string() == "0");
}

TEST_CASE("rational reduction and exact comparison") {
  CHECK(Rational::from_counts(2, 4) == Rational::from_counts(1, 2));
  CHECK(Rational::from_counts(-2, 4).num == -1);
  CHECK(Rational::from_counts(-2, 4).den == 2);
  CHECK(Rational::from_counts(1, 3) < Rational::from_counts(34, 100));
  CHECK(Rational::from_counts(1, 3) > Rational::from_counts(33, 100));
  // Would overflow a 64-bit cross product without the wide compare.
  Rational big_a = Rational::from_counts(4000000007LL, 4000000009LL);
  Rational big_b = Rational::from_counts(4000000009LL, 4000000011LL);
  CHECK(big_a < big_b);
}

TEST_CASE("rational to_string prefers terminating decimals") {
  CHECK(Rational::from_counts(1, 2).to_string() == "0.5");
  CHECK(Rational::from_counts(-3, 8).to_string() == "-0.375");
  CHECK(Rational::from_counts(1, 3).to_string() == "1/3");
  CHECK(Rational::from_counts(100, 3).to_string() == "100/3");
  CHECK(Rational::from_int(7).to_string() == "7");
}

TEST_CASE("from_double_text recovers what a human wrote") {
  auto r = Rational::from_double_text(0.1);
  REQUIRE(r);
  CHECK(*r == Rational::from_counts(1, 10));
  r = Rational::from_double_text(40.0);
  REQUIRE(r);
  CHECK(*r == Rational::from_int(40));
  // Shortest repr of 1e30 is scientific notation, which is not plain
  // decimal text; the conversion refuses rather than approximate.
  CHECK(!Rational::from_double_text(1e30));
}

TEST_CASE("from_decimal matches the fraction") {
  CHECK(Rational::from_decimal(*Decimal::parse("0.25")) == Rational::from_counts(1, 4));
  CHECK(Rational::from_decimal(*Decimal::parse("-2")) == Rational::from_int(-2));
}
