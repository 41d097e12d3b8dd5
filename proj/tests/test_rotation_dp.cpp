#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/rotation_dp.hpp"
#include "shadowlab/rng.hpp"
#include "shadowlab/system.hpp"
#include "support/generators.hpp"

using namespace shadowlab;

namespace {
Point cpt(const Rat& r) { return Point::exact(r, SpaceKind::circle); }
}  // namespace

TEST_CASE("preconditions: rotations with rational differences only") {
    IFSystem cantor = thirds_contraction_pair();
    Rng rng(73);
    PseudoOrbit p = gen::random_pseudo_orbit(rng, cantor, Rat(1, 50), 5);
    CHECK_THROWS_AS(rotation_dp_shadowing(cantor, p, Rat(1, 10)), std::invalid_argument);

    // two enclosures that are not rigid shifts of each other
    RatInterval a = golden_ratio_conjugate_enclosure(Rat(1, 1000));
    RatInterval b = golden_ratio_conjugate_enclosure(Rat(1, 100000));
    IFSystem mixed(SpaceDescriptor(SpaceKind::circle), {"1", "2"},
                   {MapSpec::affine_circle(Int(1), a), MapSpec::affine_circle(Int(1), b)});
    PseudoOrbit q;
    q.points = {cpt(Rat(0)), cpt(Rat(13, 21))};
    q.delta = Rat(1, 10);
    q.witness = SymbolWord::finite({0});
    CHECK_THROWS_AS(rotation_dp_shadowing(mixed, q, Rat(1, 5)), std::invalid_argument);
}

TEST_CASE("single rotation degenerates to plain propagation") {
    IFSystem rot = single_map_system(SpaceDescriptor(SpaceKind::circle),
                                     MapSpec::affine_circle(1L, Rat(5, 48)));
    Rng rng(79);
    for (int rep = 0; rep < 10; ++rep) {
        PseudoOrbit p = gen::random_pseudo_orbit(rng, rot, Rat(1, 60), 10);
        VerificationOutcome dp = rotation_dp_shadowing(rot, p, Rat(1, 25));
        VerificationOutcome branch = check_shadowing(rot, p, Rat(1, 25));
        REQUIRE(dp.verdict == branch.verdict);
        if (dp.verdict == Verdict::refuted) REQUIRE(dp.horizon == branch.horizon);
    }
}

TEST_CASE("dp agrees with branching search on commuting rotation pairs") {
    Rng rng(83);
    int refuted = 0;
    for (int rep = 0; rep < 40; ++rep) {
        IFSystem sys = gen::random_rotation_pair(rng);
        Rat eps = rat_frac(static_cast<long>(rng.below(3) + 2), 50);
        bool drift = rep % 2 == 0;
        PseudoOrbit p;
        if (drift) {
            p.delta = eps;
            p.points.push_back(gen::random_point(rng, SpaceKind::circle));
            std::vector<int> word;
            for (int i = 0; i < 12; ++i) {
                int s = static_cast<int>(rng.below(2));
                word.push_back(s);
                Point img = sys.map(s).apply(p.points.back());
                p.points.push_back(cpt(mod1(img.value() + eps * Rat(4, 5))));
            }
            p.witness = SymbolWord::finite(word);
        } else {
            p = gen::random_pseudo_orbit(rng, sys, eps / 10, 12);
        }
        VerificationOutcome dp = rotation_dp_shadowing(sys, p, eps);
        VerificationOutcome branch = check_shadowing(sys, p, eps);
        REQUIRE(dp.verdict == branch.verdict);
        if (dp.verdict == Verdict::refuted) {
            ++refuted;
            REQUIRE(dp.horizon == branch.horizon);
        } else {
            REQUIRE(dp.verdict == Verdict::certified);
            REQUIRE(revalidate_shadowing(sys, p, eps, *dp.certificate).has_value());
        }
    }
    CHECK(refuted > 0);
}

TEST_CASE("half-shift pair: two residue classes, certificates reconstruct") {
    IFSystem sys = half_shifted_rotation_pair(RatInterval::point(Rat(5, 12)));
    Rng rng(89);
    PseudoOrbit p = gen::random_pseudo_orbit(rng, sys, Rat(1, 80), 12);
    VerificationOutcome dp = rotation_dp_shadowing(sys, p, Rat(1, 16));
    REQUIRE(dp.verdict == Verdict::certified);
    REQUIRE(dp.certificate.has_value());
    CHECK(dp.method == Method::rotation_dp);
    CHECK(revalidate_shadowing(sys, p, Rat(1, 16), *dp.certificate).has_value());
}

TEST_CASE("golden-mean counterexample instance refutes at a recorded horizon") {
    RatInterval beta = golden_ratio_conjugate_enclosure(rat_frac(1, 1000000000000L));
    IFSystem sys = half_shifted_rotation_pair(beta);
    MapSpec g = MapSpec::affine_circle(1L, Rat(13, 21));
    PseudoOrbit p = make_pseudo_orbit_from_generator(sys, g, cpt(Rat(0)), 500,
                                                     rat_frac(11, 10000));
    VerificationOutcome out = rotation_dp_shadowing(sys, p, Rat(1, 5));
    REQUIRE(out.verdict == Verdict::refuted);
    // drift |13/21 - beta| eats the 2/5 slack in about 395 steps
    CHECK(out.horizon >= 300);
    CHECK(out.horizon <= 500);
}

TEST_CASE("dp spends far fewer nodes than branching on refutation instances") {
    RatInterval beta = golden_ratio_conjugate_enclosure(rat_frac(1, 1000000000000L));
    IFSystem sys = half_shifted_rotation_pair(beta);
    MapSpec g = MapSpec::affine_circle(1L, Rat(13, 21));
    // at eps = 3/100 the refutation horizon drops to roughly 60 steps
    PseudoOrbit p = make_pseudo_orbit_from_generator(sys, g, cpt(Rat(0)), 80,
                                                     rat_frac(11, 10000));
    VerificationOutcome dp = rotation_dp_shadowing(sys, p, Rat(3, 100));
    VerificationOutcome branch = check_shadowing(sys, p, Rat(3, 100), 100'000);
    REQUIRE(dp.verdict == Verdict::refuted);
    if (branch.verdict == Verdict::refuted) {
        CHECK(branch.horizon == dp.horizon);
        CHECK(branch.nodes >= 100 * dp.nodes);
    } else {
        // branching blew its budget where the dp finished
        REQUIRE(branch.verdict == Verdict::inconclusive);
        CHECK(branch.nodes >= 100 * dp.nodes);
    }
}
