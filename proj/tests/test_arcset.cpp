#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/arcset.hpp"
#include "shadowlab/rng.hpp"

using namespace shadowlab;

namespace {

const SpaceDescriptor kCircle{SpaceKind::circle};
const SpaceDescriptor kInterval{SpaceKind::interval};

ArcSet carc(const char* lo, const char* hi) {
    return ArcSet::arc(SpaceKind::circle, parse_rat(lo), parse_rat(hi));
}

ArcSet random_arcset(Rng& rng, SpaceKind kind) {
    std::vector<Arc> arcs;
    int n = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n; ++i) {
        Rat lo = rng.unit();
        Rat len = rng.unit() / 3;
        if (kind == SpaceKind::interval) {
            Rat hi = rat_min(Rat(1), lo + len);
            arcs.push_back({lo, hi});
        } else {
            arcs.push_back({lo, lo + len});
        }
    }
    return ArcSet::from_arcs(kind, std::move(arcs));
}

}  // namespace

TEST_CASE("balls on the circle: full, wrapping, plain") {
    ArcSet full = ball(kCircle, Point::exact(Rat(0), SpaceKind::circle), Rat(3, 5));
    CHECK(full.is_full());
    CHECK(full.measure() == 1);

    ArcSet wrap = ball(kCircle, Point::exact(Rat(9, 10), SpaceKind::circle), Rat(1, 5));
    REQUIRE(wrap.arcs().size() == 1);
    CHECK(wrap.arcs()[0].lo == Rat(7, 10));
    CHECK(wrap.arcs()[0].hi == Rat(11, 10));
    CHECK(wrap.arcs()[0].wraps());
    CHECK(wrap.contains(Rat(1, 20)));
    CHECK(wrap.contains(Rat(3, 4)));
    CHECK_FALSE(wrap.contains(Rat(1, 2)));

    ArcSet plain = ball(kInterval, Point::exact(Rat(0), SpaceKind::interval), Rat(1, 10));
    REQUIRE(plain.arcs().size() == 1);
    CHECK(plain.arcs()[0].lo == Rat(0));
    CHECK(plain.arcs()[0].hi == Rat(1, 10));
    CHECK_THROWS_AS(ball(kCircle, Point::exact(Rat(0), SpaceKind::circle), Rat(-1)),
                    std::invalid_argument);
}

TEST_CASE("ball membership matches the metric on a fine net") {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        SpaceKind k = rep % 2 ? SpaceKind::circle : SpaceKind::interval;
        SpaceDescriptor space{k};
        Point c = Point::exact(rng.unit(), k);
        Rat eps = (rng.unit() + Rat(1, 10)) / 3;
        ArcSet b = ball(space, c, eps);
        for (const auto& p : eps_net(space, eps / 10)) {
            bool inside = dist_exact(p, c) <= eps;
            REQUIRE(b.contains(p.value()) == inside);
        }
    }
}

TEST_CASE("intersection, translation and emptiness behave exactly") {
    ArcSet a = ArcSet::arc(SpaceKind::interval, Rat(0), Rat(3, 10));
    ArcSet b = ArcSet::arc(SpaceKind::interval, Rat(1, 5), Rat(1, 2));
    ArcSet i = a.intersect(b);
    REQUIRE(i.arcs().size() == 1);
    CHECK(i.arcs()[0].lo == Rat(1, 5));
    CHECK(i.arcs()[0].hi == Rat(3, 10));

    ArcSet t = carc("4/5", "9/10").translate(Rat(3, 10));
    REQUIRE(t.arcs().size() == 1);
    CHECK(t.arcs()[0].lo == Rat(1, 10));
    CHECK(t.arcs()[0].hi == Rat(1, 5));

    CHECK(ArcSet::arc(SpaceKind::interval, Rat(0), Rat(1, 10))
              .intersect(ArcSet::arc(SpaceKind::interval, Rat(1, 2), Rat(3, 5)))
              .is_empty());
}

TEST_CASE("canonical form: touching arcs merge, wraps fuse, full collapses") {
    ArcSet touching = ArcSet::from_arcs(
        SpaceKind::interval, {{Rat(1, 10), Rat(1, 5)}, {Rat(1, 5), Rat(3, 10)}});
    REQUIRE(touching.arcs().size() == 1);

    ArcSet fused = carc("9/10", "1").unite(carc("0", "1/10"));
    REQUIRE(fused.arcs().size() == 1);
    CHECK(fused.arcs()[0].wraps());
    CHECK(fused.measure() == Rat(1, 5));

    ArcSet everything = carc("0", "3/5").unite(carc("1/2", "11/10"));
    CHECK(everything.is_full());
}

TEST_CASE("set algebra properties on random arc sets") {
    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        SpaceKind k = rep % 2 ? SpaceKind::circle : SpaceKind::interval;
        ArcSet a = random_arcset(rng, k);
        ArcSet b = random_arcset(rng, k);
        REQUIRE(a.unite(a) == a);  // canonical form is idempotent
        ArcSet i = a.intersect(b);
        REQUIRE(i.measure() <= rat_min(a.measure(), b.measure()));
        REQUIRE(a.contains_set(i));
        REQUIRE(b.contains_set(i));
        REQUIRE(a.unite(b).contains_set(a));
        if (k == SpaceKind::circle) {
            Rat t = rng.unit();
            REQUIRE(a.translate(t).measure() == a.measure());
        }
        ArcSet back = ArcSet::from_json(k, a.to_json());
        REQUIRE(back == a);
    }
}

TEST_CASE("affine images") {
    ArcSet a = carc("1/10", "3/10");
    ArcSet doubled = a.affine_image(Rat(2), Rat(0));
    REQUIRE(doubled.arcs().size() == 1);
    CHECK(doubled.arcs()[0].lo == Rat(1, 5));
    CHECK(doubled.arcs()[0].hi == Rat(3, 5));
    CHECK(a.affine_image(Rat(6), Rat(0)).is_full());

    ArcSet neg = ArcSet::arc(SpaceKind::interval, Rat(1, 4), Rat(1, 2))
                     .affine_image(Rat(-1, 2), Rat(1, 2));
    REQUIRE(neg.arcs().size() == 1);
    CHECK(neg.arcs()[0].lo == Rat(1, 4));
    CHECK(neg.arcs()[0].hi == Rat(3, 8));

    CHECK_THROWS_AS(a.affine_image(Rat(0), Rat(1, 2)), std::invalid_argument);

    // outer image under an enclosed offset widens by the enclosure width
    RatInterval off(Rat(1, 10), Rat(1, 10) + Rat(1, 1000));
    ArcSet widened = a.affine_image(Rat(1), off);
    CHECK(widened.measure() == a.measure() + Rat(1, 1000));
}

TEST_CASE("sampling and diameter") {
    ArcSet s = carc("3/5", "7/10").unite(carc("1/10", "1/5"));
    CHECK(s.sample_value() == Rat(1, 10));  // leftmost endpoint, deterministic

    CHECK(carc("0", "1/5").diameter() == Rat(1, 5));
    // antipodal pair inside: diameter pinned at 1/2
    CHECK(carc("0", "3/10").unite(carc("2/5", "7/10")).diameter() == Rat(1, 2));
    CHECK(ArcSet::from_arcs(SpaceKind::interval, {{Rat(0), Rat(1, 10)}, {Rat(4, 5), Rat(1)}})
              .diameter() == Rat(1));
    CHECK_THROWS_AS(ArcSet::empty(SpaceKind::circle).sample_value(), std::logic_error);
}

TEST_CASE("wrapping arcs are flagged in JSON and parse back") {
    ArcSet wrap = ball(kCircle, Point::exact(Rat(19, 20), SpaceKind::circle), Rat(1, 10));
    auto j = wrap.to_json();
    REQUIRE(j.size() == 1);
    CHECK(j[0].at("wraps").get<bool>());
    CHECK(j[0].at("left").get<std::string>() == "17/20");
    CHECK(j[0].at("right").get<std::string>() == "1/20");
    CHECK(ArcSet::from_json(SpaceKind::circle, j) == wrap);
}
