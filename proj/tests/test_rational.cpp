#include "doctest.h"
#include "lgs/rational.hpp"

using namespace lgs;

TEST_CASE("decimals parse to exact rationals") {
  CHECK(*parse_rational("1.4") == rat(7, 5));
  CHECK(*parse_rational("0.1") == rat(1, 10));
  CHECK(*parse_rational("7") == Rat(7));
  CHECK(*parse_rational("-3.25") == rat(-13, 4));
  CHECK(*parse_rational("3/4") == rat(3, 4));
  CHECK_FALSE(parse_rational("1.").has_value());
  CHECK_FALSE(parse_rational("x").has_value());
  CHECK_FALSE(parse_rational("1/0").has_value());
}

TEST_CASE("twenty nines survive exactly") {
  auto r = parse_rational("1.99999999999999999999");
  REQUIRE(r.has_value());
  Rat one_minus = Rat(2) - *r;
  CHECK(one_minus == Rat(Int(1), Int("100000000000000000000")));
  CHECK(rat_to_string(*r) == "199999999999999999999/100000000000000000000");
}

TEST_CASE("floor ceil and euclidean mod") {
  CHECK(rat_floor(rat(7, 2)) == 3);
  CHECK(rat_ceil(rat(7, 2)) == 4);
  CHECK(rat_floor(rat(-7, 2)) == -4);
  CHECK(rat_ceil(rat(-7, 2)) == -3);
  CHECK(int_mod(Int(-7), Int(3)) == 2);
  CHECK(int_lcm(Int(4), Int(6)) == 12);
}
