#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/rational.hpp"
#include "shadowlab/rng.hpp"

using namespace shadowlab;

TEST_CASE("rational parsing accepts fractions, integers and decimals") {
    CHECK(parse_rat("3/10") == Rat(3, 10));
    CHECK(parse_rat("13/21") == Rat(13, 21));
    CHECK(parse_rat("-2/4") == Rat(-1, 2));
    CHECK(parse_rat("7") == Rat(7));
    CHECK(parse_rat("0.25") == Rat(1, 4));
    CHECK(parse_rat("-1.5") == Rat(-3, 2));
    CHECK(parse_rat("0.001") == Rat(1, 1000));
    CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1/"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1.2.3"), std::invalid_argument);
}

TEST_CASE("rational strings are canonical p/q") {
    CHECK(rat_str(Rat(1, 5)) == "1/5");
    CHECK(rat_str(Rat(2)) == "2/1");
    CHECK(rat_str(Rat(0)) == "0/1");
    CHECK(rat_str(parse_rat("4/8")) == "1/2");
    CHECK(rat_str(Rat(-3, 7)) == "-3/7");
}

TEST_CASE("string round trip is the identity") {
    Rng rng(7);
    for (int i = 0; i < 300; ++i) {
        Rat r = rng.between(Rat(-3), Rat(3));
        CHECK(parse_rat(rat_str(r)) == r);
    }
}

TEST_CASE("rat_frac canonicalizes") {
    CHECK(rat_frac(2, 4) == Rat(1, 2));
    CHECK(rat_frac(-6, 9) == Rat(-2, 3));
    CHECK(rat_str(rat_frac(10, 5)) == "2/1");
    CHECK_THROWS_AS(rat_frac(1, 0), std::invalid_argument);
}

TEST_CASE("mod1 lands in [0,1)") {
    CHECK(mod1(Rat(13, 10)) == Rat(3, 10));
    CHECK(mod1(Rat(-1, 4)) == Rat(3, 4));
    CHECK(mod1(Rat(5)) == Rat(0));
    CHECK(mod1(Rat(17, 21)) == Rat(17, 21));
}

TEST_CASE("interval arithmetic is outer and ordered") {
    RatInterval a(Rat(1, 4), Rat(1, 2));
    RatInterval b(Rat(1, 8), Rat(1, 8));
    CHECK((a + b).lo == Rat(3, 8));
    CHECK((a + b).hi == Rat(5, 8));
    CHECK((a - b).lo == Rat(1, 8));
    CHECK((-a).lo == Rat(-1, 2));
    CHECK(a.scale(Rat(-2)).lo == Rat(-1));
    CHECK(a.scale(Rat(-2)).hi == Rat(-1, 2));
    CHECK(rat_interval_abs(RatInterval(Rat(-1, 4), Rat(1, 8))).lo == 0);
    CHECK(rat_interval_abs(RatInterval(Rat(-1, 4), Rat(1, 8))).hi == Rat(1, 4));
    CHECK_THROWS_AS(RatInterval(Rat(1), Rat(0)), std::invalid_argument);
    RatInterval c(Rat(9, 4), Rat(5, 2));
    CHECK(c.reduced_mod1().lo == Rat(1, 4));
    CHECK(c.reduced_mod1().hi == Rat(1, 2));
}

TEST_CASE("seeded generator is deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42);
    Rat first = c.unit();
    CHECK(first >= 0);
    CHECK(first < 1);
    Rng d(42);
    CHECK(d.unit() == first);
}
