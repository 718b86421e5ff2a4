#include <catch2/catch_amalgamated.hpp>

#include "cfplan/rational.hpp"

using cfplan::Rational;

TEST_CASE("decimal strings parse exactly") {
  CHECK(Rational::parse("428.0") == Rational(428));
  CHECK(Rational::parse("1345.0") == Rational(1345));
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse("-3.25") == Rational(-13, 4));
  CHECK(Rational::parse("1000000000") == Rational(1000000000));
}

TEST_CASE("comparisons are exact") {
  CHECK(Rational::parse("6849.0") < Rational::parse("6849.1"));
  CHECK(Rational::parse("6849.0") <= Rational::parse("6849"));
  CHECK(Rational::parse("6849") == Rational::parse("6849.0"));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
}

TEST_CASE("rendering is minimal decimal") {
  CHECK(Rational::parse("6849.0").str() == "6849");
  CHECK(Rational::parse("0.50").str() == "0.5");
  CHECK(Rational::parse("-12.75").str() == "-12.75");
  CHECK(Rational(0).str() == "0");
}

TEST_CASE("malformed numbers are rejected") {
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("."), std::invalid_argument);
}
