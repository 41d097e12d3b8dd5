#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/rng.hpp"
#include "shadowlab/space.hpp"

using namespace shadowlab;

namespace {
Point cpt(const char* s) { return Point::exact(parse_rat(s), SpaceKind::circle); }
Point ipt(const char* s) { return Point::exact(parse_rat(s), SpaceKind::interval); }
}  // namespace

TEST_CASE("geodesic distance on the circle wraps") {
    CHECK(dist_exact(cpt("1/10"), cpt("9/10")) == Rat(1, 5));
    CHECK(dist_exact(cpt("0"), cpt("1/2")) == Rat(1, 2));
    CHECK(dist_exact(cpt("17/20"), cpt("17/20")) == Rat(0));
}

TEST_CASE("interval distance is the absolute difference") {
    CHECK(dist_exact(ipt("1/5"), ipt("7/10")) == Rat(1, 2));
    CHECK(dist_exact(ipt("1"), ipt("0")) == Rat(1));
    CHECK_THROWS_AS(dist(cpt("0"), ipt("0")), std::invalid_argument);
}

TEST_CASE("metric axioms hold exactly on random triples") {
    Rng rng(11);
    for (int kind = 0; kind < 2; ++kind) {
        SpaceKind k = kind == 0 ? SpaceKind::circle : SpaceKind::interval;
        for (int i = 0; i < 10'000; ++i) {
            Point a = Point::exact(rng.unit(), k);
            Point b = Point::exact(rng.unit(), k);
            Point c = Point::exact(rng.unit(), k);
            Rat ab = dist_exact(a, b);
            Rat ba = dist_exact(b, a);
            Rat ac = dist_exact(a, c);
            Rat cb = dist_exact(c, b);
            REQUIRE(ab == ba);
            REQUIRE(ab >= 0);
            REQUIRE(ab <= ac + cb);
            REQUIRE(dist_exact(a, a) == 0);
        }
    }
}

TEST_CASE("distance encloses every representative pair") {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        Rat albo = rng.unit();
        Rat blo = rng.unit();
        Rat wa = rng.unit() / 64;
        Rat wb = rng.unit() / 64;
        Point a = Point::enclose(RatInterval(albo, albo + wa), SpaceKind::circle);
        Point b = Point::enclose(RatInterval(blo, blo + wb), SpaceKind::circle);
        RatInterval d = dist(a, b);
        for (int j = 0; j < 4; ++j) {
            Rat ra = albo + wa * rng.unit();
            Rat rb = blo + wb * rng.unit();
            Rat exact = dist_exact(Point::exact(ra, SpaceKind::circle),
                                   Point::exact(rb, SpaceKind::circle));
            REQUIRE(d.lo <= exact);
            REQUIRE(exact <= d.hi);
        }
    }
}

TEST_CASE("point normalization and enclosure bounds") {
    CHECK(cpt("5/4").value() == Rat(1, 4));
    CHECK_THROWS_AS(Point::exact(Rat(3, 2), SpaceKind::interval), std::invalid_argument);
    CHECK_THROWS_AS(Point::enclose(RatInterval(Rat(0), Rat(1, 2)), SpaceKind::circle),
                    std::invalid_argument);  // wider than the enclosure cap
}

TEST_CASE("eps nets cover at the advertised pitch") {
    SpaceDescriptor circle{SpaceKind::circle};
    SpaceDescriptor interval{SpaceKind::interval};

    auto net = eps_net(circle, Rat(1, 4));
    REQUIRE(net.size() == 4);
    CHECK(net[0].value() == Rat(0));
    CHECK(net[1].value() == Rat(1, 4));
    CHECK(net[2].value() == Rat(1, 2));
    CHECK(net[3].value() == Rat(3, 4));

    auto inet = eps_net(interval, Rat(1, 2));
    REQUIRE(inet.size() == 3);
    CHECK(inet[1].value() == Rat(1, 2));

    // ceil(1/(2*0.3)) * 2 = 4 points; covering checked by direct scan
    auto net3 = eps_net(circle, Rat(3, 10));
    REQUIRE(net3.size() == 4);
    for (int i = 0; i < 200; ++i) {
        Point p = Point::exact(rat_frac(i, 200), SpaceKind::circle);
        Rat best(1);
        for (const auto& q : net3) best = rat_min(best, dist_exact(p, q));
        REQUIRE(best <= Rat(3, 10));
    }
    CHECK_THROWS_AS(eps_net(circle, Rat(0)), std::invalid_argument);
}
