// Piecewise-linear homeomorphisms of the circle (degree +1/-1 lifts) and the
// interval (endpoint-fixing), with exact evaluation, inverses, composition,
// the C0 distance d0, and the connecting construction that realizes
// homogeneity on these spaces.

#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arcset.hpp"
#include "pl.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "space.hpp"

namespace shadowlab {

class Homeomorphism {
  public:
    Homeomorphism() : kind_(SpaceKind::circle), lift_(PiecewiseLinear::identity()), degree_(1) {}

    static Homeomorphism identity(SpaceKind kind) {
        return Homeomorphism(kind, PiecewiseLinear::identity(), 1);
    }

    static Homeomorphism rotation(const Rat& t) {
        return Homeomorphism(SpaceKind::circle, PiecewiseLinear::affine(Rat(1), mod1(t)), 1);
    }

    // x -> 1 - x on the circle (decreasing lift through 0).
    static Homeomorphism reflection() {
        return Homeomorphism(SpaceKind::circle, PiecewiseLinear::affine(Rat(-1), Rat(0)), -1);
    }

    static Homeomorphism from_breakpoints(SpaceKind kind, std::vector<std::pair<Rat, Rat>> pts) {
        PiecewiseLinear lift{std::move(pts)};
        int degree = 1;
        if (kind == SpaceKind::circle) {
            Rat span = lift.ys().back() - lift.ys().front();
            if (span == 1)
                degree = 1;
            else if (span == -1)
                degree = -1;
            else
                throw std::invalid_argument("circle homeomorphism lift must have degree +1/-1");
            if (!(degree == 1 ? lift.strictly_increasing() : lift.strictly_decreasing()))
                throw std::invalid_argument("homeomorphism lift must be strictly monotone");
        } else {
            if (lift.ys().front() != 0 || lift.ys().back() != 1)
                throw std::invalid_argument("interval homeomorphism must fix both endpoints");
            if (!lift.strictly_increasing())
                throw std::invalid_argument("interval homeomorphism must be increasing");
        }
        return Homeomorphism(kind, std::move(lift), degree);
    }

    SpaceKind space() const { return kind_; }
    const PiecewiseLinear& lift() const { return lift_; }
    int degree() const { return degree_; }
    bool orientation_preserving() const { return degree_ == 1; }

    Rat eval(const Rat& x) const {
        if (kind_ == SpaceKind::circle) return mod1(lift_.eval_lifted(mod1(x), degree_));
        if (x < 0 || x > 1) throw std::invalid_argument("homeomorphism: input outside [0,1]");
        return lift_.eval(x);
    }

    Point eval_point(const Point& p) const {
        if (p.kind != kind_) throw std::invalid_argument("homeomorphism: mismatched space");
        RatInterval r = kind_ == SpaceKind::circle
                            ? lift_.range_lifted(p.pos.lo, p.pos.hi, degree_)
                            : lift_.range_on(p.pos.lo, p.pos.hi);
        return Point::enclose(r, kind_);
    }

    // Exact image of an arc set (monotone maps send arcs to arcs).
    ArcSet image(const ArcSet& s) const {
        if (s.space() != kind_) throw std::invalid_argument("homeomorphism: mismatched space");
        std::vector<Arc> out;
        for (const auto& a : s.arcs()) {
            RatInterval r = kind_ == SpaceKind::circle ? lift_.range_lifted(a.lo, a.hi, degree_)
                                                       : lift_.range_on(a.lo, a.hi);
            out.push_back({r.lo, r.hi});
        }
        return ArcSet::from_arcs(kind_, std::move(out));
    }

    Homeomorphism inverse() const {
        if (kind_ == SpaceKind::interval) {
            auto pairs = lift_.inverse_pairs();
            return Homeomorphism(kind_, PiecewiseLinear(std::move(pairs)), 1);
        }
        auto pairs = lift_.inverse_pairs();  // spans one period in the value coordinate
        return Homeomorphism(kind_, rebase_periodic(pairs, degree_), degree_);
    }

    // this(other(x)): other acts first.
    Homeomorphism after(const Homeomorphism& other) const {
        if (kind_ != other.kind_)
            throw std::invalid_argument("homeomorphism composition: mismatched spaces");
        PiecewiseLinear composed = other.lift_.then(lift_, degree_);
        return Homeomorphism(kind_, std::move(composed), degree_ * other.degree_);
    }

    Rat max_slope() const { return lift_.max_abs_slope(); }
    Rat min_slope() const { return lift_.min_abs_slope(); }

    bool operator==(const Homeomorphism& o) const {
        return kind_ == o.kind_ && degree_ == o.degree_ && lift_ == o.lift_;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["space"] = space_name(kind_);
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < lift_.xs().size(); ++i)
            pts.push_back(nlohmann::ordered_json::array(
                {rat_str(lift_.xs()[i]), rat_str(lift_.ys()[i])}));
        j["breakpoints"] = std::move(pts);
        return j;
    }

    static Homeomorphism from_json(const nlohmann::json& j) {
        SpaceKind kind = parse_space(j.at("space").get<std::string>());
        std::vector<std::pair<Rat, Rat>> pts;
        for (const auto& p : j.at("breakpoints"))
            pts.emplace_back(parse_rat(p.at(0).get<std::string>()),
                             parse_rat(p.at(1).get<std::string>()));
        return from_breakpoints(kind, std::move(pts));
    }

  private:
    Homeomorphism(SpaceKind kind, PiecewiseLinear lift, int degree)
        : kind_(kind), lift_(std::move(lift)), degree_(degree) {
        if (kind_ == SpaceKind::circle) anchor();
    }

    // Canonical circle anchoring: lift(0) in [0,1).
    void anchor() {
        Rat y0 = lift_.ys().front();
        Int f = rat_floor(y0);
        if (f != 0) lift_ = lift_.shifted(Rat(-f));
    }

    // Rebuild a lift on domain [0,1] from monotone pairs spanning one period
    // [a, a+1] of a function with G(t+1) = G(t) + degree.
    static PiecewiseLinear rebase_periodic(const std::vector<std::pair<Rat, Rat>>& pairs,
                                           int degree) {
        const Rat a = pairs.front().first;
        auto interp = [&](const Rat& t) -> Rat {
            for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
                if (t >= pairs[i].first && t <= pairs[i + 1].first) {
                    Rat run = pairs[i + 1].first - pairs[i].first;
                    return pairs[i].second +
                           (t - pairs[i].first) * (pairs[i + 1].second - pairs[i].second) / run;
                }
            }
            throw std::logic_error("rebase: abscissa outside period");
        };
        auto eval_anywhere = [&](const Rat& t) -> Rat {
            Rat shift = a - t;
            Int m = rat_ceil(shift);  // t + m lies in [a, a+1]
            return interp(t + Rat(m)) - Rat(m) * degree;
        };
        std::vector<Rat> cuts{Rat(0), Rat(1)};
        for (const auto& p : pairs)
            for (int s = -1; s <= 1; ++s) {
                Rat t = p.first + s;
                if (t > 0 && t < 1) cuts.push_back(t);
            }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<std::pair<Rat, Rat>> pts;
        pts.reserve(cuts.size());
        for (const Rat& t : cuts) pts.emplace_back(t, eval_anywhere(t));
        return PiecewiseLinear(std::move(pts));
    }

    SpaceKind kind_;
    PiecewiseLinear lift_;
    int degree_;
};

namespace detail {

// Max over [0,1] of the circle distance between two lifts, exact: the lift
// difference is PL, and per piece the nearest-integer distance peaks either
// at the ends or at 1/2 when a half-integer is crossed.
inline Rat max_pointwise_dist(const Homeomorphism& f, const Homeomorphism& g) {
    const auto& lf = f.lift();
    const auto& lg = g.lift();
    std::vector<Rat> cuts = lf.xs();
    cuts.insert(cuts.end(), lg.xs().begin(), lg.xs().end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Rat best(0);
    auto diff_at = [&](const Rat& t) {
        return lf.eval_lifted(t, f.degree()) - lg.eval_lifted(t, g.degree());
    };
    if (f.space() == SpaceKind::interval) {
        for (const Rat& t : cuts) best = rat_max(best, rat_abs(diff_at(t)));
        return best;
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rat da = diff_at(cuts[i]);
        Rat db = diff_at(cuts[i + 1]);
        best = rat_max(best, detail::to_nearest_integer(mod1(da)));
        best = rat_max(best, detail::to_nearest_integer(mod1(db)));
        Rat lo = rat_min(da, db), hi = rat_max(da, db);
        // half-integer crossing pins the max at 1/2
        Rat half = Rat(rat_floor(lo)) + Rat(1, 2);
        if (half < lo) half += 1;
        if (half <= hi) best = rat_max(best, Rat(1, 2));
    }
    return best;
}

}  // namespace detail

// d0(f,g) = max over x of d(f(x),g(x)) and d(f^-1(x),g^-1(x)).
inline Rat d0(const Homeomorphism& f, const Homeomorphism& g) {
    if (f.space() != g.space()) throw std::invalid_argument("d0: mismatched spaces");
    Rat fwd = detail::max_pointwise_dist(f, g);
    Rat bwd = detail::max_pointwise_dist(f.inverse(), g.inverse());
    return rat_max(fwd, bwd);
}

inline Rat d0_to_identity(const Homeomorphism& h) {
    return d0(h, Homeomorphism::identity(h.space()));
}

// PL homeomorphism h with h(a_i) = b_i exactly and d0(h, id) <= eps,
// identity on the untouched parts of each gap. Throws when the pairs cannot
// be connected by an orientation-preserving homeomorphism (cyclic-order
// violation) or when some displacement exceeds eps (modulus violation).
inline Homeomorphism connecting_homeomorphism(const SpaceDescriptor& space,
                                              const std::vector<std::pair<Point, Point>>& pairs,
                                              const Rat& eps) {
    if (eps < 0 || eps >= Rat(1, 2))
        throw std::invalid_argument("connecting_homeomorphism: eps must lie in [0, 1/2)");
    if (pairs.empty()) return Homeomorphism::identity(space.kind);

    struct Node {
        Rat src, dst;  // dst lifted next to src
    };
    std::vector<Node> nodes;
    nodes.reserve(pairs.size());
    for (const auto& pr : pairs) {
        if (pr.first.kind != space.kind || pr.second.kind != space.kind)
            throw std::invalid_argument("connecting_homeomorphism: mismatched space");
        Rat a = pr.first.value();
        Rat b = pr.second.value();
        Rat disp;
        if (space.kind == SpaceKind::circle) {
            disp = mod1(b - a);
            if (disp > Rat(1, 2)) disp -= 1;
        } else {
            disp = b - a;
        }
        if (rat_abs(disp) > eps)
            throw std::invalid_argument(
                "connecting_homeomorphism: displacement exceeds modulus eps");
        nodes.push_back({a, a + disp});
    }
    std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) {
        return x.src < y.src;
    });
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i].src == nodes[i + 1].src)
            throw std::invalid_argument("connecting_homeomorphism: duplicate source point");
    auto order_violation = []() {
        return std::invalid_argument(
            "connecting_homeomorphism: targets break the cyclic order of sources");
    };

    std::vector<std::pair<Rat, Rat>> bps;  // lift breakpoints, possibly beyond [0,1)
    if (space.kind == SpaceKind::circle) {
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            if (nodes[i].dst >= nodes[i + 1].dst) throw order_violation();
        if (nodes.size() > 1 && nodes.back().dst >= nodes.front().dst + 1)
            throw order_violation();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& cur = nodes[i];
            Node nxt = nodes[(i + 1) % nodes.size()];
            if (i + 1 == nodes.size()) {
                nxt.src += 1;
                nxt.dst += 1;
            }
            bps.emplace_back(cur.src, cur.dst);
            // identity anchors where the gap allows them
            Rat lo = rat_max(cur.src, cur.dst);
            Rat hi = rat_min(nxt.src, nxt.dst);
            if (lo < hi) {
                Rat q = (hi - lo) / 4;
                bps.emplace_back(lo + q, lo + q);
                bps.emplace_back(hi - q, hi - q);
            }
        }
        // reduce to the fundamental domain (degree-1: H(x-1) = H(x)-1),
        // then assemble a [0,1] lift, interpolating across the wrap for H(0)
        std::vector<std::pair<Rat, Rat>> red;
        red.reserve(bps.size());
        for (const auto& p : bps) {
            Rat f(rat_floor(p.first));
            red.emplace_back(p.first - f, p.second - f);
        }
        std::sort(red.begin(), red.end());
        std::vector<std::pair<Rat, Rat>> lift_pts;
        Rat h0;
        if (red.front().first == 0) {
            h0 = red.front().second;
        } else {
            auto last = red.back();
            last.first -= 1;
            last.second -= 1;
            const auto& first = red.front();
            Rat run = first.first - last.first;
            h0 = last.second + (Rat(0) - last.first) * (first.second - last.second) / run;
        }
        lift_pts.emplace_back(Rat(0), h0);
        for (const auto& p : red)
            if (p.first > 0 && p.first < 1) lift_pts.push_back(p);
        lift_pts.emplace_back(Rat(1), h0 + 1);
        return Homeomorphism::from_breakpoints(space.kind, std::move(lift_pts));
    }

    // interval: endpoints are fixed points of h
    for (const auto& n : nodes) {
        if ((n.src == 0 && n.dst != 0) || (n.src == 1 && n.dst != 1)) throw order_violation();
        if (n.dst < 0 || n.dst > 1) throw order_violation();
    }
    if (nodes.front().src != 0) nodes.insert(nodes.begin(), {Rat(0), Rat(0)});
    if (nodes.back().src != 1) nodes.push_back({Rat(1), Rat(1)});
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i].dst >= nodes[i + 1].dst) throw order_violation();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        bps.emplace_back(nodes[i].src, nodes[i].dst);
        if (i + 1 < nodes.size()) {
            Rat lo = rat_max(nodes[i].src, nodes[i].dst);
            Rat hi = rat_min(nodes[i + 1].src, nodes[i + 1].dst);
            if (lo < hi) {
                Rat q = (hi - lo) / 4;
                bps.emplace_back(lo + q, lo + q);
                bps.emplace_back(hi - q, hi - q);
            }
        }
    }
    return Homeomorphism::from_breakpoints(space.kind, std::move(bps));
}

// Random near-identity homeomorphism with d0(h, id) <= bound, built by
// displacing a fixed grid of anchor points.
inline Homeomorphism random_small_homeo(Rng& rng, const SpaceDescriptor& space,
                                        const Rat& bound) {
    if (bound == 0) return Homeomorphism::identity(space.kind);
    Rat cap = rat_min(bound, Rat(1, 32));
    std::vector<std::pair<Point, Point>> pairs;
    const int grid = 8;
    for (int i = 0; i < grid; ++i) {
        Rat x(i, grid);
        if (space.kind == SpaceKind::interval && i == 0) continue;  // 0 stays fixed
        Rat y = x + rng.jitter(cap);
        pairs.emplace_back(Point::exact(x, space.kind), Point::exact(y, space.kind));
    }
    return connecting_homeomorphism(space, pairs, cap);
}

}  // namespace shadowlab
