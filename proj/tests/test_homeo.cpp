#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/homeo.hpp"
#include "shadowlab/rng.hpp"

using namespace shadowlab;

namespace {
const SpaceDescriptor kCircle{SpaceKind::circle};
const SpaceDescriptor kInterval{SpaceKind::interval};

Point cpt(const char* s) { return Point::exact(parse_rat(s), SpaceKind::circle); }
}  // namespace

TEST_CASE("stock homeomorphisms evaluate exactly") {
    Homeomorphism id = Homeomorphism::identity(SpaceKind::circle);
    CHECK(id.eval(Rat(3, 7)) == Rat(3, 7));

    Homeomorphism rot = Homeomorphism::rotation(Rat(1, 4));
    CHECK(rot.eval(Rat(9, 10)) == Rat(3, 20));
    CHECK(rot.inverse().eval(Rat(3, 20)) == Rat(9, 10));

    Homeomorphism refl = Homeomorphism::reflection();
    CHECK(refl.eval(Rat(1, 3)) == Rat(2, 3));
    CHECK(refl.eval(Rat(0)) == Rat(0));
    CHECK(refl.after(refl) == Homeomorphism::identity(SpaceKind::circle));
}

TEST_CASE("composition and inversion are exact") {
    Homeomorphism a = Homeomorphism::rotation(Rat(1, 3));
    Homeomorphism b = Homeomorphism::rotation(Rat(1, 4));
    CHECK(a.after(b) == Homeomorphism::rotation(Rat(7, 12)));

    Homeomorphism h = Homeomorphism::from_breakpoints(
        SpaceKind::interval, {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 4)}, {Rat(1), Rat(1)}});
    Homeomorphism round = h.inverse().after(h);
    CHECK(round == Homeomorphism::identity(SpaceKind::interval));
    CHECK(h.max_slope() == Rat(3, 2));
    CHECK(h.min_slope() == Rat(1, 2));
    CHECK(h.inverse().max_slope() == Rat(2));
}

TEST_CASE("d0 of rotations is the offset gap") {
    Homeomorphism f = Homeomorphism::rotation(Rat(2, 5));
    Homeomorphism g = Homeomorphism::rotation(Rat(1, 2));
    CHECK(d0(f, g) == Rat(1, 10));
    CHECK(d0(f, f) == 0);
    CHECK(d0_to_identity(Homeomorphism::rotation(Rat(2, 5))) == Rat(2, 5));
    // circle distance caps at 1/2
    CHECK(d0_to_identity(Homeomorphism::rotation(Rat(7, 10))) == Rat(3, 10));
}

TEST_CASE("connecting identity pairs gives the identity") {
    std::vector<std::pair<Point, Point>> pairs = {{cpt("1/5"), cpt("1/5")},
                                                  {cpt("3/5"), cpt("3/5")}};
    Homeomorphism h = connecting_homeomorphism(kCircle, pairs, Rat(1, 10));
    CHECK(h == Homeomorphism::identity(SpaceKind::circle));
    CHECK(d0_to_identity(h) == 0);
}

TEST_CASE("single displaced pair: exact interpolation, identity far away") {
    std::vector<std::pair<Point, Point>> pairs = {{cpt("1/5"), cpt("1/4")}};
    Homeomorphism h = connecting_homeomorphism(kCircle, pairs, Rat(1, 20));
    CHECK(h.eval(Rat(1, 5)) == Rat(1, 4));
    CHECK(d0_to_identity(h) == Rat(1, 20));  // attained exactly at the moved point
    CHECK(h.eval(Rat(7, 10)) == Rat(7, 10));
    CHECK(h.inverse().eval(Rat(1, 4)) == Rat(1, 5));

    CHECK_THROWS_AS(connecting_homeomorphism(kCircle, pairs, Rat(1, 30)),
                    std::invalid_argument);  // displacement above the modulus
}

TEST_CASE("cyclic order violations are rejected") {
    std::vector<std::pair<Point, Point>> crossing = {{cpt("1/10"), cpt("1/5")},
                                                     {cpt("3/20"), cpt("3/25")}};
    CHECK_THROWS_AS(connecting_homeomorphism(kCircle, crossing, Rat(1, 4)),
                    std::invalid_argument);

    std::vector<std::pair<Point, Point>> dup = {{cpt("1/10"), cpt("1/5")},
                                                {cpt("1/10"), cpt("1/10")}};
    CHECK_THROWS_AS(connecting_homeomorphism(kCircle, dup, Rat(1, 4)), std::invalid_argument);

    // interval endpoints must stay fixed
    std::vector<std::pair<Point, Point>> moves_zero = {
        {Point::exact(Rat(0), SpaceKind::interval), Point::exact(Rat(1, 20), SpaceKind::interval)}};
    CHECK_THROWS_AS(connecting_homeomorphism(kInterval, moves_zero, Rat(1, 4)),
                    std::invalid_argument);
}

TEST_CASE("connecting construction: exactness, modulus and inverse round trip") {
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        SpaceKind kind = rep % 2 ? SpaceKind::circle : SpaceKind::interval;
        SpaceDescriptor space{kind};
        Rat eps(1, 40);
        std::vector<std::pair<Point, Point>> pairs;
        int n = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < n; ++i) {
            Rat base = rat_frac(2 * i + 1, 2 * n + 2);  // separated sources
            Rat dst = base + rng.jitter(eps);
            pairs.emplace_back(Point::exact(base, kind), Point::exact(dst, kind));
        }
        Homeomorphism h = connecting_homeomorphism(space, pairs, eps);
        for (const auto& [a, b] : pairs) REQUIRE(h.eval(a.value()) == b.value());
        REQUIRE(d0_to_identity(h) <= eps);
        Homeomorphism inv = h.inverse();
        for (const auto& x : h.lift().xs()) {
            Rat v = kind == SpaceKind::circle ? mod1(x) : x;
            REQUIRE(inv.eval(h.eval(v)) == v);
        }
    }
}

TEST_CASE("random small homeomorphisms respect the bound") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        SpaceKind kind = rep % 2 ? SpaceKind::circle : SpaceKind::interval;
        Homeomorphism h = random_small_homeo(rng, SpaceDescriptor{kind}, Rat(1, 1000));
        REQUIRE(d0_to_identity(h) <= Rat(1, 1000));
    }
    Homeomorphism id = random_small_homeo(rng, kCircle, Rat(0));
    CHECK(id == Homeomorphism::identity(SpaceKind::circle));
}

TEST_CASE("breakpoint JSON round trip and monotonicity validation") {
    Homeomorphism h = Homeomorphism::from_breakpoints(
        SpaceKind::circle, {{Rat(0), Rat(1, 8)}, {Rat(1, 2), Rat(3, 4)}, {Rat(1), Rat(9, 8)}});
    CHECK(Homeomorphism::from_json(h.to_json()) == h);

    nlohmann::json bad = {{"space", "circle"},
                          {"breakpoints", {{"0/1", "1/2"}, {"1/2", "1/4"}, {"1/1", "3/2"}}}};
    CHECK_THROWS_AS(Homeomorphism::from_json(bad), std::invalid_argument);
}

TEST_CASE("images of arcs through a homeomorphism are exact") {
    Homeomorphism rot = Homeomorphism::rotation(Rat(1, 4));
    ArcSet a = ArcSet::arc(SpaceKind::circle, Rat(9, 10), Rat(11, 10));
    ArcSet img = rot.image(a);
    REQUIRE(img.arcs().size() == 1);
    CHECK(img.arcs()[0].lo == Rat(3, 20));
    CHECK(img.arcs()[0].hi == Rat(7, 20));
    CHECK(rot.image(ArcSet::full(SpaceKind::circle)).is_full());
}
