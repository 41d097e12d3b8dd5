// Exact dynamic program for shadowing questions over commuting circle
// rotations whose pairwise offset differences are rational.
//
// After n steps the orbit position is y0 + n*b0 + r/q where b0 is the first
// symbol's offset and r/q accumulates the rational differences, so in the
// pulled-back y0 coordinate a state is just (n, r mod q) and the 2^n word
// tree collapses to q arc sets per level.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arcset.hpp"
#include "orbit.hpp"
#include "rational.hpp"
#include "system.hpp"
#include "verify.hpp"

namespace shadowlab {

namespace detail {

struct RotationClasses {
    RatInterval base;          // offset of symbol 0
    std::vector<long> steps;   // per symbol: numerator of (offset - base) mod 1 over q
    long q = 1;
};

// Differences must be exactly rational; for enclosed offsets this requires
// the enclosures to be rigid shifts of the base enclosure.
inline RotationClasses rotation_classes(const IFSystem& sys) {
    RotationClasses rc;
    std::vector<Rat> diffs;
    for (int s = 0; s < sys.arity(); ++s) {
        auto off = sys.map(s).rotation_offset();
        if (!off)
            throw std::invalid_argument("rotation-dp requires every map to be a rotation");
        if (s == 0) {
            rc.base = *off;
            diffs.push_back(Rat(0));
            continue;
        }
        if (off->width() != rc.base.width() || (off->lo - rc.base.lo) != (off->hi - rc.base.hi))
            throw std::invalid_argument(
                "rotation-dp requires exactly rational offset differences");
        diffs.push_back(mod1(off->lo - rc.base.lo));
    }
    Int q(1);
    for (const auto& d : diffs) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), d.get_den().get_mpz_t());
    rc.q = static_cast<long>(q.get_si());
    for (const auto& d : diffs) {
        Rat scaled = d * Rat(q);
        rc.steps.push_back(static_cast<long>(scaled.get_num().get_si()));
    }
    return rc;
}

}  // namespace detail

inline VerificationOutcome rotation_dp_shadowing(const IFSystem& sys,
                                                 const PseudoOrbit& pseudo, const Rat& eps,
                                                 std::uint64_t budget = default_node_budget,
                                                 long horizon = -1) {
    if (eps <= 0) throw std::invalid_argument("rotation-dp: eps must be positive");
    detail::require_valid(sys, pseudo);
    detail::RotationClasses rc = detail::rotation_classes(sys);
    const long q = rc.q;
    long n = pseudo.steps();
    long h = horizon < 0 ? n : std::min(horizon, n);

    VerificationOutcome out;
    out.method = Method::rotation_dp;
    out.epsilon = eps;

    // constraint in the y0 coordinate: ball(x_n) - n*b0 - r/q
    auto pulled_ball = [&](long step, long r) {
        ArcSet b = ball(sys.space(), pseudo.points[static_cast<std::size_t>(step)], eps);
        RatInterval shift = (-rc.base.scale(Rat(step))).shift(rat_frac(-r, q));
        return b.affine_image(Rat(1), shift);
    };

    std::vector<std::vector<ArcSet>> levels;
    levels.reserve(static_cast<std::size_t>(h) + 1);
    {
        std::vector<ArcSet> first(static_cast<std::size_t>(q), ArcSet::empty(sys.space().kind));
        first[0] = pulled_ball(0, 0);
        levels.push_back(std::move(first));
    }
    if (levels[0][0].is_empty()) {
        out.verdict = Verdict::refuted;
        out.horizon = 0;
        return out;
    }

    for (long step = 0; step < h; ++step) {
        std::vector<ArcSet> next(static_cast<std::size_t>(q), ArcSet::empty(sys.space().kind));
        bool any = false;
        for (long r = 0; r < q; ++r) {
            const ArcSet& cur = levels.back()[static_cast<std::size_t>(r)];
            if (cur.is_empty()) continue;
            for (int s = 0; s < sys.arity(); ++s) {
                long r2 = (r + rc.steps[static_cast<std::size_t>(s)]) % q;
                next[static_cast<std::size_t>(r2)] =
                    next[static_cast<std::size_t>(r2)].unite(cur);
                if (++out.nodes >= budget) {
                    out.verdict = Verdict::inconclusive;
                    out.horizon = h;
                    out.note = "node budget exhausted";
                    return out;
                }
            }
        }
        for (long r = 0; r < q; ++r) {
            if (next[static_cast<std::size_t>(r)].is_empty()) continue;
            next[static_cast<std::size_t>(r)] =
                next[static_cast<std::size_t>(r)].intersect(pulled_ball(step + 1, r));
            any = any || !next[static_cast<std::size_t>(r)].is_empty();
        }
        if (!any) {
            out.verdict = Verdict::refuted;
            out.horizon = step + 1;
            return out;
        }
        levels.push_back(std::move(next));
    }

    // survivor: fix a y0 and rebuild a lexicographically early word backwards
    long final_r = -1;
    for (long r = 0; r < q && final_r < 0; ++r)
        if (!levels.back()[static_cast<std::size_t>(r)].is_empty()) final_r = r;
    Rat y0 = levels.back()[static_cast<std::size_t>(final_r)].sample_value();
    std::vector<int> word(static_cast<std::size_t>(h), 0);
    long r = final_r;
    for (long step = h; step > 0; --step) {
        bool found = false;
        for (int s = 0; s < sys.arity() && !found; ++s) {
            long rp = ((r - rc.steps[static_cast<std::size_t>(s)]) % q + q) % q;
            if (levels[static_cast<std::size_t>(step - 1)][static_cast<std::size_t>(rp)]
                    .contains(y0)) {
                word[static_cast<std::size_t>(step - 1)] = s;
                r = rp;
                found = true;
            }
        }
        if (!found) {
            out.verdict = Verdict::inconclusive;
            out.horizon = h;
            out.note = "witness word reconstruction failed";
            return out;
        }
    }

    OrbitSegment cert = orbit(sys, SymbolWord::finite(word), Point::exact(y0, sys.space().kind), h);
    auto margin = revalidate_shadowing(sys, pseudo, eps, cert);
    if (!margin) {
        out.verdict = Verdict::inconclusive;
        out.horizon = h;
        out.note = "survivor found but enclosure widths left its certificate undecided";
        return out;
    }
    out.verdict = Verdict::certified;
    out.horizon = h;
    out.certificate = std::move(cert);
    out.margin = std::move(*margin);
    return out;
}

}  // namespace shadowlab
