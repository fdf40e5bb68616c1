#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "outfn/rational.hpp"

using outfn::Rational;

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(6, -4).den() == 2);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3) == Rational(1));
  CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(pow(Rational(3), 5) == Rational(243));
  CHECK(pow(Rational(1, 2), 0) == Rational(1));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(0).inverse(), std::domain_error);
}

TEST_CASE("rational text round trip") {
  CHECK(Rational::parse("4/6") == Rational(2, 3));
  CHECK(Rational::parse("-5") == Rational(-5));
  CHECK(Rational(2, 3).str() == "2/3");
  CHECK(Rational(4).str() == "4");
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
}

TEST_CASE("rational overflow is reported") {
  Rational big(std::numeric_limits<std::int64_t>::max() / 2);
  CHECK_THROWS_AS(big * Rational(4), std::overflow_error);
}
