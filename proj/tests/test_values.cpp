#include <catch2/catch_amalgamated.hpp>

#include "rvmon/value.hpp"

using namespace rvmon;

TEST_CASE("exact parsing of integers, fractions and decimals") {
  CHECK(parse_exact("3") == Rat(3));
  CHECK(parse_exact("-7") == Rat(-7));
  CHECK(parse_exact("+4") == Rat(4));
  CHECK(parse_exact("7/2") == Rat(7, 2));
  CHECK(parse_exact("-7/2") == Rat(-7, 2));
  CHECK(parse_exact("4/6") == Rat(2, 3));  // canonicalized
  CHECK(parse_exact("12.75") == Rat(51, 4));
  CHECK(parse_exact("1.2") == Rat(6, 5));
  CHECK(parse_exact("-0.5") == Rat(-1, 2));
  CHECK(parse_exact("0.0") == Rat(0));
  CHECK(parse_exact("10.") == Rat(10));
  CHECK(parse_exact(".5") == Rat(1, 2));
}

TEST_CASE("malformed numerals are rejected") {
  CHECK_THROWS_AS(parse_exact(""), ValueError);
  CHECK_THROWS_AS(parse_exact("1.2.3"), ValueError);
  CHECK_THROWS_AS(parse_exact("1/0"), ValueError);
  CHECK_THROWS_AS(parse_exact("1/2/3"), ValueError);
  CHECK_THROWS_AS(parse_exact("a"), ValueError);
  CHECK_THROWS_AS(parse_exact("+-3"), ValueError);
  CHECK_THROWS_AS(parse_exact("1.2/3"), ValueError);
  CHECK_THROWS_AS(parse_exact("."), ValueError);
  CHECK_THROWS_AS(parse_exact("1e3"), ValueError);
}

TEST_CASE("display is n or p/q") {
  CHECK(show_exact(Rat(5)) == "5");
  CHECK(show_exact(Rat(-5)) == "-5");
  CHECK(show_exact(Rat(6, 5)) == "6/5");
  CHECK(show_exact(Rat(-1, 2)) == "-1/2");
  CHECK(show_exact(parse_exact("12.75")) == "51/4");
}

TEST_CASE("integrality and integer division") {
  CHECK(is_integral(Rat(4)));
  CHECK_FALSE(is_integral(Rat(1, 2)));
  CHECK(floor_div(Rat(7, 2)) == 3);
  CHECK(floor_div(Rat(-7, 2)) == -4);
  CHECK(floor_div(Rat(6)) == 6);
  CHECK(euclid_mod(Int(-7), Int(3)) == 2);
  CHECK(euclid_mod(Int(7), Int(3)) == 1);
  CHECK(euclid_mod(Int(6), Int(3)) == 0);
}
