// Compact base spaces: the unit circle (coordinates mod 1, geodesic metric)
// and the unit interval. Points are exact rationals or directed enclosures.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace shadowlab {

enum class SpaceKind { circle, interval };

inline std::string space_name(SpaceKind k) {
    return k == SpaceKind::circle ? "circle" : "interval";
}

inline SpaceKind parse_space(const std::string& s) {
    if (s == "circle") return SpaceKind::circle;
    if (s == "interval") return SpaceKind::interval;
    throw std::invalid_argument("unknown space kind: '" + s + "'");
}

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::circle;
    Rat resolution = Rat(1, 1024);  // default net pitch

    SpaceDescriptor() = default;
    explicit SpaceDescriptor(SpaceKind k, Rat res = Rat(1, 1024))
        : kind(k), resolution(std::move(res)) {
        if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
    }
};

// Enclosures wider than this would break the mod-1 distance case analysis;
// anything near it indicates runaway widening upstream.
inline const Rat& max_enclosure_width() {
    static const Rat w(1, 8);
    return w;
}

struct Point {
    RatInterval pos;  // circle: lo in [0,1); interval: within [0,1]
    SpaceKind kind = SpaceKind::circle;

    Point() = default;

    static Point exact(Rat v, SpaceKind k) {
        return enclose(RatInterval::point(std::move(v)), k);
    }
    static Point enclose(RatInterval v, SpaceKind k) {
        if (v.width() > max_enclosure_width())
            throw std::invalid_argument("point enclosure too wide");
        if (k == SpaceKind::circle) {
            v = v.reduced_mod1();
        } else if (v.lo < 0 || v.hi > 1) {
            throw std::invalid_argument("interval point outside [0,1]");
        }
        Point p;
        p.pos = std::move(v);
        p.kind = k;
        return p;
    }

    bool is_exact() const { return pos.is_point(); }
    const Rat& value() const {
        if (!is_exact()) throw std::logic_error("point is an enclosure, not exact");
        return pos.lo;
    }
    Rat mid() const { return pos.mid(); }
};

namespace detail {
// Distance from x to the nearest integer, for x in [0, 2).
inline Rat to_nearest_integer(const Rat& x) {
    Rat f = x - Rat(rat_floor(x));
    return rat_min(f, 1 - f);
}
}  // namespace detail

// Geodesic distance enclosure. Exact inputs give a degenerate interval.
inline RatInterval dist(const Point& a, const Point& b) {
    if (a.kind != b.kind) throw std::invalid_argument("dist: mismatched space kinds");
    RatInterval d = b.pos - a.pos;
    if (a.kind == SpaceKind::interval) return rat_interval_abs(d);
    if (d.width() >= 1) return RatInterval(Rat(0), Rat(1, 2));
    d = d.reduced_mod1();  // d.lo in [0,1), d.hi < 2
    Rat glo = detail::to_nearest_integer(d.lo);
    Rat ghi = detail::to_nearest_integer(d.hi);
    Rat out_lo = rat_min(glo, ghi);
    Rat out_hi = rat_max(glo, ghi);
    // Crossing an integer pins the minimum at 0; crossing a half-integer
    // pins the maximum at 1/2.
    if (d.lo == 0 || d.hi >= 1) out_lo = 0;
    if ((d.lo <= Rat(1, 2) && Rat(1, 2) <= d.hi) || (d.lo <= Rat(3, 2) && Rat(3, 2) <= d.hi))
        out_hi = Rat(1, 2);
    return RatInterval(out_lo, out_hi);
}

inline Rat dist_exact(const Point& a, const Point& b) {
    RatInterval d = dist(a, b);
    if (!d.is_point()) throw std::logic_error("dist_exact on enclosure points");
    return d.lo;
}

// Deterministic eps-net: every point of the space is within eps of a net
// point. Circle uses 2*ceil(1/(2 eps)) equispaced points, interval uses
// ceil(1/eps)+1 grid points.
inline std::vector<Point> eps_net(const SpaceDescriptor& space, const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("eps_net: eps must be positive");
    std::vector<Point> net;
    if (space.kind == SpaceKind::circle) {
        Int m = 2 * rat_ceil(Rat(1) / (2 * eps));
        if (m < 1) m = 1;
        long n = static_cast<long>(m.get_si());
        net.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) net.push_back(Point::exact(rat_frac(Int(i), m), space.kind));
    } else {
        Int m = rat_ceil(Rat(1) / eps);
        if (m < 1) m = 1;
        long n = static_cast<long>(m.get_si());
        net.reserve(static_cast<std::size_t>(n + 1));
        for (long i = 0; i <= n; ++i) net.push_back(Point::exact(rat_frac(Int(i), m), space.kind));
    }
    return net;
}

}  // namespace shadowlab
