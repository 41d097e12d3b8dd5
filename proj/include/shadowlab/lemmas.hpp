// Constructive pieces used by the genericity machinery: perturbing a
// pseudo-orbit to pairwise-distinct points while at most doubling its
// tolerance, and the least truncation of a sequence whose eps-neighborhood
// already covers the whole sequence.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "arcset.hpp"
#include "orbit.hpp"
#include "rational.hpp"
#include "space.hpp"
#include "system.hpp"

namespace shadowlab {

// Pairwise-distinct 2*delta-pseudo-orbit within min(eps, delta/2) of the
// input, pointwise. The perturbation radius also divides by the largest map
// slope so the image error stays below delta/2. With distinct_images set,
// the witnessed image points f_{w_i}(y_i) come out pairwise distinct too
// (needed when the y_i feed a connecting homeomorphism).
inline PseudoOrbit distinct_perturbation(const IFSystem& sys, const PseudoOrbit& pseudo,
                                         const Rat& eps, bool distinct_images = false) {
    if (pseudo.delta <= 0)
        throw std::invalid_argument("distinct_perturbation needs delta > 0");
    if (eps <= 0) throw std::invalid_argument("distinct_perturbation needs eps > 0");
    detail::require_valid(sys, pseudo);

    Rat lip(0);
    for (const auto& m : sys.maps()) lip = rat_max(lip, m.lipschitz_upper());
    Rat radius = rat_min(eps, pseudo.delta / 2);
    if (lip > 1) radius = rat_min(radius, pseudo.delta / (2 * lip));

    const long count = static_cast<long>(pseudo.points.size());
    const SpaceKind kind = sys.space().kind;
    Rat unit = radius / Rat(2 * (count + 2));

    std::vector<Point> out;
    std::vector<Point> images;  // f_{w_i}(y_i) for the already placed prefix
    out.reserve(pseudo.points.size());

    auto provably_distinct = [](const Point& a, const Point& b) {
        return dist(a, b).lo > 0;
    };

    for (long i = 0; i < count; ++i) {
        const Point& x = pseudo.points[static_cast<std::size_t>(i)];
        bool placed = false;
        for (long step = 0; step <= 4 * (count + 2) && !placed; ++step) {
            long k = (step + 1) / 2;
            bool negative = (step % 2) == 0;
            Rat off = unit * Rat(k);
            if (negative) off = -off;
            if (step == 0) off = 0;
            RatInterval shifted = x.pos.shift(off);
            if (kind == SpaceKind::interval && (shifted.lo < 0 || shifted.hi > 1)) continue;
            Point cand = Point::enclose(shifted, kind);
            bool ok = true;
            for (const auto& prev : out)
                if (!provably_distinct(cand, prev)) {
                    ok = false;
                    break;
                }
            std::optional<Point> img;
            if (ok && distinct_images && i < count - 1) {
                img = sys.map(pseudo.witness.at(i)).apply(cand);
                for (const auto& prev : images)
                    if (!provably_distinct(*img, prev)) {
                        ok = false;
                        break;
                    }
            }
            if (!ok) continue;
            out.push_back(std::move(cand));
            if (img) images.push_back(std::move(*img));
            placed = true;
        }
        if (!placed)
            throw std::runtime_error(
                "distinct_perturbation: ran out of candidate offsets (enclosures too wide?)");
    }

    PseudoOrbit result;
    result.points = std::move(out);
    result.delta = 2 * pseudo.delta;
    result.witness = pseudo.witness;
    result.index_offset = pseudo.index_offset;
    if (witness_margin(sys, result.points, result.witness) >= result.delta)
        throw std::logic_error("distinct_perturbation: 2*delta bound failed");
    return result;
}

// Finitely represented eventually periodic point sequence: head then cycle
// repeating forever. Its point set is finite, so covering questions are
// decided exactly.
struct EventuallyPeriodicSeq {
    std::vector<Point> head;
    std::vector<Point> cycle;  // nonempty

    long prefix_length() const {
        return static_cast<long>(head.size() + cycle.size());
    }
    Point at(long n) const {
        if (n < static_cast<long>(head.size())) return head[static_cast<std::size_t>(n)];
        long k = (n - static_cast<long>(head.size())) % static_cast<long>(cycle.size());
        return cycle[static_cast<std::size_t>(k)];
    }
    std::vector<Point> value_set() const {
        std::vector<Point> all = head;
        all.insert(all.end(), cycle.begin(), cycle.end());
        return all;
    }
};

// Orbit of a rational rotation, folded into its cycle.
inline EventuallyPeriodicSeq rational_rotation_sequence(const Rat& offset, const Point& x0) {
    if (x0.kind != SpaceKind::circle)
        throw std::invalid_argument("rational_rotation_sequence is circle-only");
    EventuallyPeriodicSeq seq;
    long period = static_cast<long>(mod1(offset).get_den().get_si());
    Point cur = x0;
    for (long i = 0; i < period; ++i) {
        seq.cycle.push_back(cur);
        cur = Point::enclose(cur.pos.shift(mod1(offset)), SpaceKind::circle);
    }
    return seq;
}

// Least k such that every point of the full sequence lies strictly within
// eps of one of the first k+1 points. Decided by scanning one full period.
inline long truncation_cover(const EventuallyPeriodicSeq& seq, const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("truncation_cover needs eps > 0");
    if (seq.cycle.empty())
        throw std::invalid_argument("sequence must be finitely represented (nonempty cycle)");
    std::vector<Point> values = seq.value_set();
    long limit = seq.prefix_length();
    for (long k = 0; k < limit; ++k) {
        bool covered = true;
        for (const auto& v : values) {
            bool near = false;
            for (long j = 0; j <= k && !near; ++j) near = dist(v, seq.at(j)).hi < eps;
            if (!near) {
                covered = false;
                break;
            }
        }
        if (covered) return k;
    }
    throw std::logic_error("truncation_cover: no prefix covers its own value set");
}

// Irrational-rotation variant: the orbit closure is the whole circle, so the
// least k is reached once the inner eps-balls around the visited points
// cover it. Soundness under enclosures comes from using inner balls.
inline long truncation_cover_rotation(const RatInterval& offset, const Point& x0,
                                      const Rat& eps, long max_steps = 1'000'000) {
    if (eps <= 0) throw std::invalid_argument("truncation_cover needs eps > 0");
    SpaceDescriptor circle{SpaceKind::circle};
    ArcSet covered = ArcSet::empty(SpaceKind::circle);
    Point cur = x0;
    for (long k = 0; k < max_steps; ++k) {
        // inner ball: certainly within eps of the enclosed point
        if (cur.pos.hi - eps < cur.pos.lo + eps) {
            covered = covered.unite(
                ArcSet::arc(SpaceKind::circle, cur.pos.hi - eps, cur.pos.lo + eps));
        }
        if (covered.is_full()) return k;
        cur = Point::enclose(cur.pos + offset, SpaceKind::circle);
    }
    throw std::runtime_error("truncation_cover_rotation: step limit reached");
}

}  // namespace shadowlab
