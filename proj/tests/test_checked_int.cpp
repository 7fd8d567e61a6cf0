#include <doctest.h>

#include "fgcensus/checked_int.hpp"

using fgc::CheckedInt128;
using fgc::OverflowError;

TEST_CASE("decimal round trip") {
  CHECK(CheckedInt128(0).str() == "0");
  CHECK(CheckedInt128(-42).str() == "-42");
  CHECK(CheckedInt128::parse("123456789012345678901234567890").str() ==
        "123456789012345678901234567890");
  CHECK(CheckedInt128::parse("-1") == CheckedInt128(-1));
  CHECK_THROWS_AS(CheckedInt128::parse("12x"), std::invalid_argument);
  CHECK_THROWS_AS(CheckedInt128::parse(""), std::invalid_argument);
}

TEST_CASE("powers and arithmetic") {
  CHECK(CheckedInt128::pow(3, 0) == CheckedInt128(1));
  CHECK(CheckedInt128::pow(3, 30).str() == "205891132094649");
  CHECK(CheckedInt128::pow(5, 12) == CheckedInt128(244140625));
  CheckedInt128 a = CheckedInt128::pow(3, 60);
  CHECK(a.str() == "42391158275216203514294433201");
  CHECK((a - a).is_zero());
}

TEST_CASE("overflow is detected, never wrapped") {
  CheckedInt128 big = CheckedInt128::pow(2, 126);
  CHECK_THROWS_AS(big * 4, OverflowError);
  CHECK_THROWS_AS(big + big, OverflowError);
  CHECK_THROWS_AS(CheckedInt128::pow(3, 90), OverflowError);
  CHECK_THROWS_AS(CheckedInt128::pow(10, 40), OverflowError);
}

TEST_CASE("int64 narrowing") {
  CHECK(CheckedInt128(123).to_int64() == 123);
  CHECK_THROWS_AS(CheckedInt128::pow(2, 70).to_int64(), OverflowError);
}
