#include <doctest.h>

#include <cmath>

#include "dilute/model.hpp"

using namespace dilute;

TEST_CASE("energy parametrization") {
  const auto e = energy_from_k(kPi / 3);
  CHECK(e.E == doctest::Approx(-1.0).epsilon(1e-15));
  const auto back = energy_from_E(e.E);
  CHECK(back.k == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK(energy_from_E(0.0).k == doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(energy_from_k(0.0), DomainError);
  CHECK_THROWS_AS(energy_from_k(kPi), DomainError);
  CHECK_THROWS_AS(energy_from_k(1e-7), DomainError);
  CHECK_THROWS_AS(energy_from_E(2.0), DomainError);
  CHECK_THROWS_AS(energy_from_E(-2.5), DomainError);
  CHECK_THROWS_AS(energy_from_k(std::nan("")), DomainError);
}

TEST_CASE("rational quasi-momentum literals") {
  CHECK(parse_rational("1/2") == Rational{1, 2});
  CHECK(parse_rational("2/4") == Rational{1, 2});
  CHECK(parse_rational("6/9") == Rational{2, 3});
  CHECK(energy_from_rational({1, 2}).E == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(parse_rational("3/2"), ValidationError);
  CHECK_THROWS_AS(parse_rational("2/2"), ValidationError);
  CHECK_THROWS_AS(parse_rational("0/3"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("-1/3"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1.5/3"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/3/4"), ValidationError);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
  CHECK_THROWS_AS(energy_from_rational({2, 4}), DomainError);
}

TEST_CASE("disorder specifications") {
  const auto d = parse_disorder("2:1", 0.1);
  REQUIRE(d.atoms.size() == 1);
  CHECK(d.atoms[0].value == 2.0);
  CHECK(d.atoms[0].weight == 1.0);
  CHECK_FALSE(d.is_trivial());

  SUBCASE("merging and normalization") {
    const auto m = parse_disorder("1:1,-1:2,1:1", 0.5);
    REQUIRE(m.atoms.size() == 2);
    CHECK(m.atoms[0].value == -1.0);
    CHECK(m.atoms[0].weight == doctest::Approx(0.5));
    CHECK(m.atoms[1].weight == doctest::Approx(0.5));
  }
  SUBCASE("round trip") {
    for (const char* text : {"2:1", "-1.5:0.25,0.3:0.75", "0.1:0.3333333333333333,0.2:0.6666666666666667"}) {
      const auto a = parse_disorder(text, 0.05);
      CHECK(parse_disorder(to_string(a), 0.05) == a);
    }
  }
  SUBCASE("trivial laws") {
    CHECK(parse_disorder("2:1", 0.0).is_trivial());
    CHECK(parse_disorder("0:1", 0.3).is_trivial());
    CHECK(parse_disorder("0:1", 0.3).impurities_vanish());
    CHECK_FALSE(parse_disorder("0:1,1:1", 0.3).impurities_vanish());
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(parse_disorder("2:1", 1.5), ValidationError);
    CHECK_THROWS_AS(parse_disorder("2:1", -0.1), ValidationError);
    CHECK_THROWS_AS(parse_disorder("", 0.1), ValidationError);
    CHECK_THROWS_AS(parse_disorder("2", 0.1), ValidationError);
    CHECK_THROWS_AS(parse_disorder("2:-1", 0.1), ValidationError);
    CHECK_THROWS_AS(parse_disorder("2:0", 0.1), ValidationError);
    CHECK_THROWS_AS(parse_disorder("x:1", 0.1), ValidationError);
    CHECK_THROWS_AS(parse_disorder("inf:1", 0.1), ValidationError);
  }
  CHECK(parse_disorder("-3:1,2:1", 0.1).max_abs_value() == 3.0);
}

TEST_CASE("seeds and number formatting") {
  CHECK(parse_seed("42") == 42u);
  CHECK(parse_seed("0xff") == 255u);
  CHECK(parse_seed("18446744073709551615") == 18446744073709551615ull);
  CHECK_THROWS_AS(parse_seed("-1"), ValidationError);
  CHECK_THROWS_AS(parse_seed("0xzz"), ValidationError);
  CHECK_THROWS_AS(parse_seed("18446744073709551616"), ValidationError);

  for (double x : {0.1, 1.0 / 3.0, kPi, -2.5e-17, 1e300}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
}
