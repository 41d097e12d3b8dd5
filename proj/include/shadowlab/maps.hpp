// One step of the dynamics: affine circle maps (integer slope, rational or
// enclosed offset), affine interval self-maps, piecewise-linear maps, and
// homeomorphism-after-affine composites (the only exactly representable form
// once an enclosed rotation has been perturbed).
//
// Lipschitz data is taken from lift slopes (local difference quotients), so
// it is exact for every representable map.

#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "arcset.hpp"
#include "homeo.hpp"
#include "pl.hpp"
#include "rational.hpp"
#include "space.hpp"

namespace shadowlab {

class MapSpec {
  public:
    struct AffineCircle {
        Int slope;  // nonzero integer: continuity on the circle
        RatInterval offset;
    };
    struct AffineInterval {
        Rat slope;  // zero allowed (constant map)
        RatInterval offset;
    };
    struct Pl {
        PiecewiseLinear fn;
        int degree;  // circle lift degree; 0 for interval maps
    };
    struct Composed {
        Homeomorphism outer;
        Int slope;
        RatInterval offset;
    };

    static MapSpec affine_circle(Int slope, RatInterval offset) {
        if (slope == 0)
            throw std::invalid_argument("circle affine map needs a nonzero integer slope");
        MapSpec m;
        m.kind_ = SpaceKind::circle;
        m.body_ = AffineCircle{std::move(slope), std::move(offset)};
        return m;
    }
    static MapSpec affine_circle(long slope, Rat offset) {
        return affine_circle(Int(slope), RatInterval::point(std::move(offset)));
    }

    static MapSpec affine_interval(Rat slope, RatInterval offset) {
        // self-map check over the whole offset enclosure
        Rat lo = rat_min(Rat(0), slope) + offset.lo;
        Rat hi = rat_max(Rat(0), slope) + offset.hi;
        if (lo < 0 || hi > 1)
            throw std::invalid_argument("affine interval map leaves [0,1]");
        MapSpec m;
        m.kind_ = SpaceKind::interval;
        m.body_ = AffineInterval{std::move(slope), std::move(offset)};
        return m;
    }
    static MapSpec affine_interval(Rat slope, Rat offset) {
        return affine_interval(std::move(slope), RatInterval::point(std::move(offset)));
    }

    static MapSpec piecewise_linear(SpaceKind kind, PiecewiseLinear fn) {
        int degree = 0;
        if (kind == SpaceKind::circle) {
            Rat span = fn.ys().back() - fn.ys().front();
            if (span.get_den() != 1)
                throw std::invalid_argument("circle pl map must have integer degree");
            degree = static_cast<int>(span.get_num().get_si());
        } else {
            RatInterval r = fn.range_on(Rat(0), Rat(1));
            if (r.lo < 0 || r.hi > 1)
                throw std::invalid_argument("interval pl map leaves [0,1]");
        }
        // single linear piece folds back to the affine form
        if (fn.pieces() == 1) {
            Rat slope = fn.slope_of_piece(0);
            if (kind == SpaceKind::circle)
                return affine_circle(Int(slope.get_num()), RatInterval::point(fn.ys().front()));
            return affine_interval(slope, RatInterval::point(fn.ys().front()));
        }
        MapSpec m;
        m.kind_ = kind;
        m.body_ = Pl{std::move(fn), degree};
        return m;
    }

    static MapSpec composed(Homeomorphism outer, Int slope, RatInterval offset) {
        if (outer.space() != SpaceKind::circle)
            throw std::invalid_argument("composed map is circle-only");
        MapSpec m;
        m.kind_ = SpaceKind::circle;
        m.body_ = Composed{std::move(outer), std::move(slope), std::move(offset)};
        return m;
    }

    static MapSpec from_homeomorphism(const Homeomorphism& h) {
        if (h.space() == SpaceKind::circle) {
            PiecewiseLinear lift = h.lift();
            return piecewise_linear(SpaceKind::circle, lift);
        }
        return piecewise_linear(SpaceKind::interval, h.lift());
    }

    SpaceKind space() const { return kind_; }

    Point apply(const Point& x) const {
        if (x.kind != kind_) throw std::invalid_argument("apply: mismatched space");
        return std::visit(
            [&](const auto& m) -> Point {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    return Point::enclose(x.pos.scale(Rat(m.slope)) + m.offset, kind_);
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    return Point::enclose(x.pos.scale(m.slope) + m.offset, kind_);
                } else if constexpr (std::is_same_v<T, Pl>) {
                    RatInterval r = kind_ == SpaceKind::circle
                                        ? m.fn.range_lifted(x.pos.lo, x.pos.hi, m.degree)
                                        : m.fn.range_on(x.pos.lo, x.pos.hi);
                    return Point::enclose(r, kind_);
                } else {
                    Point mid = Point::enclose(x.pos.scale(Rat(m.slope)) + m.offset, kind_);
                    return m.outer.eval_point(mid);
                }
            },
            body_);
    }

    // Outer image; exact for rational parameters.
    ArcSet image(const ArcSet& s) const {
        if (s.space() != kind_) throw std::invalid_argument("image: mismatched space");
        return std::visit(
            [&](const auto& m) -> ArcSet {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    return s.affine_image(Rat(m.slope), m.offset);
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    if (m.slope == 0) {
                        if (s.is_empty()) return ArcSet::empty(kind_);
                        return ArcSet::arc(kind_, m.offset.lo, m.offset.hi);
                    }
                    return s.affine_image(m.slope, m.offset);
                } else if constexpr (std::is_same_v<T, Pl>) {
                    std::vector<Arc> out;
                    for (const auto& a : s.arcs()) {
                        RatInterval r = kind_ == SpaceKind::circle
                                            ? m.fn.range_lifted(a.lo, a.hi, m.degree)
                                            : m.fn.range_on(a.lo, a.hi);
                        out.push_back({r.lo, r.hi});
                    }
                    return ArcSet::from_arcs(kind_, std::move(out));
                } else {
                    return m.outer.image(s.affine_image(Rat(m.slope), m.offset));
                }
            },
            body_);
    }

    // Some x in hint with f(x) = y (up to enclosure widths); used to pull
    // certificates back through a survived branch. Deterministic choice.
    std::optional<Point> preimage_in(const Point& y, const ArcSet& hint) const {
        if (const auto* a = std::get_if<AffineInterval>(&body_); a && a->slope == 0) {
            // constant map: any point of the hint works
            if (hint.is_empty()) return std::nullopt;
            return hint.sample_point();
        }
        std::vector<Point> cands = preimage_candidates(y);
        for (const auto& c : cands)
            if (hint.contains_enclosure(c.pos)) return c;
        for (const auto& c : cands)
            if (hint.contains(c.mid())) return c;
        return std::nullopt;
    }

    Rat lipschitz_upper() const {
        return std::visit(
            [&](const auto& m) -> Rat {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>)
                    return rat_abs(Rat(m.slope));
                else if constexpr (std::is_same_v<T, AffineInterval>)
                    return rat_abs(m.slope);
                else if constexpr (std::is_same_v<T, Pl>)
                    return m.fn.max_abs_slope();
                else
                    return m.outer.max_slope() * rat_abs(Rat(m.slope));
            },
            body_);
    }

    Rat lipschitz_lower() const {
        return std::visit(
            [&](const auto& m) -> Rat {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>)
                    return rat_abs(Rat(m.slope));
                else if constexpr (std::is_same_v<T, AffineInterval>)
                    return rat_abs(m.slope);
                else if constexpr (std::is_same_v<T, Pl>)
                    return m.fn.min_abs_slope();
                else
                    return m.outer.min_slope() * rat_abs(Rat(m.slope));
            },
            body_);
    }

    // Bijective self-map of the space (a homeomorphism of X onto X).
    bool invertible() const {
        return std::visit(
            [&](const auto& m) -> bool {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>)
                    return m.slope == 1 || m.slope == -1;
                else if constexpr (std::is_same_v<T, AffineInterval>)
                    return m.slope != 0 && surjective();
                else if constexpr (std::is_same_v<T, Pl>) {
                    if (kind_ == SpaceKind::circle)
                        return (m.degree == 1 && m.fn.strictly_increasing()) ||
                               (m.degree == -1 && m.fn.strictly_decreasing());
                    return (m.fn.strictly_increasing() || m.fn.strictly_decreasing()) &&
                           surjective();
                } else {
                    return m.slope == 1 || m.slope == -1;
                }
            },
            body_);
    }

    bool surjective() const {
        return std::visit(
            [&](const auto& m) -> bool {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>)
                    return true;
                else if constexpr (std::is_same_v<T, AffineInterval>)
                    return exact_value(m.offset) &&
                           ((m.slope > 0 && m.offset.lo == 0 && m.slope + m.offset.lo == 1) ||
                            (m.slope < 0 && m.slope + m.offset.lo == 0 && m.offset.lo == 1));
                else if constexpr (std::is_same_v<T, Pl>) {
                    if (kind_ == SpaceKind::circle)
                        return m.degree != 0 ||
                               m.fn.range_on(Rat(0), Rat(1)).width() >= 1;
                    RatInterval r = m.fn.range_on(Rat(0), Rat(1));
                    return r.lo == 0 && r.hi == 1;
                } else {
                    return true;
                }
            },
            body_);
    }

    // Invertible exact-rational maps as homeomorphisms (used by the metric
    // and perturbation machinery).
    Homeomorphism to_homeomorphism() const {
        if (!invertible())
            throw std::invalid_argument("map is not a homeomorphism");
        return std::visit(
            [&](const auto& m) -> Homeomorphism {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    auto off = exact_value(m.offset);
                    if (!off)
                        throw std::invalid_argument(
                            "enclosed-offset map has no exact homeomorphism form");
                    if (m.slope == 1) return Homeomorphism::rotation(*off);
                    return Homeomorphism::from_breakpoints(
                        SpaceKind::circle, {{Rat(0), *off}, {Rat(1), *off - 1}});
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    auto off = exact_value(m.offset);
                    if (!off)
                        throw std::invalid_argument(
                            "enclosed-offset map has no exact homeomorphism form");
                    return Homeomorphism::from_breakpoints(
                        SpaceKind::interval, {{Rat(0), *off}, {Rat(1), m.slope + *off}});
                } else if constexpr (std::is_same_v<T, Pl>) {
                    return Homeomorphism::from_breakpoints(
                        kind_, [&] {
                            std::vector<std::pair<Rat, Rat>> pts;
                            for (std::size_t i = 0; i < m.fn.xs().size(); ++i)
                                pts.emplace_back(m.fn.xs()[i], m.fn.ys()[i]);
                            return pts;
                        }());
                } else {
                    throw std::invalid_argument(
                        "enclosed-offset map has no exact homeomorphism form");
                }
            },
            body_);
    }

    // h o f, staying exactly representable.
    MapSpec perturbed_by(const Homeomorphism& h) const {
        if (h.space() != kind_)
            throw std::invalid_argument("perturbed_by: mismatched space");
        return std::visit(
            [&](const auto& m) -> MapSpec {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    if (exact_value(m.offset)) {
                        PiecewiseLinear base = PiecewiseLinear::affine(Rat(m.slope), m.offset.lo);
                        return piecewise_linear(kind_, base.then(h.lift(), h.degree()));
                    }
                    return composed(h, m.slope, m.offset);
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    auto off = exact_value(m.offset);
                    if (!off)
                        throw std::invalid_argument("cannot perturb an enclosed interval map");
                    PiecewiseLinear base = PiecewiseLinear::affine(m.slope, *off);
                    return piecewise_linear(kind_, base.then(h.lift(), h.degree()));
                } else if constexpr (std::is_same_v<T, Pl>) {
                    return piecewise_linear(kind_, m.fn.then(h.lift(), h.degree()));
                } else {
                    return composed(h.after(m.outer), m.slope, m.offset);
                }
            },
            body_);
    }

    // Exact PL form (lift and its degree) for maps without enclosed
    // parameters; the representation composition and conjugation work in.
    std::pair<PiecewiseLinear, int> pl_form() const {
        return std::visit(
            [&](const auto& m) -> std::pair<PiecewiseLinear, int> {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    auto off = exact_value(m.offset);
                    if (!off)
                        throw std::invalid_argument("enclosed-offset map has no exact PL form");
                    return {PiecewiseLinear::affine(Rat(m.slope), *off),
                            static_cast<int>(m.slope.get_si())};
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    auto off = exact_value(m.offset);
                    if (!off)
                        throw std::invalid_argument("enclosed-offset map has no exact PL form");
                    return {PiecewiseLinear::affine(m.slope, *off), 0};
                } else if constexpr (std::is_same_v<T, Pl>) {
                    return {m.fn, m.degree};
                } else {
                    throw std::invalid_argument("enclosed-offset map has no exact PL form");
                }
            },
            body_);
    }

    std::optional<RatInterval> rotation_offset() const {
        if (const auto* a = std::get_if<AffineCircle>(&body_))
            if (a->slope == 1) return a->offset;
        return std::nullopt;
    }

    bool operator==(const MapSpec& o) const {
        if (kind_ != o.kind_ || body_.index() != o.body_.index()) return false;
        if (const auto* a = std::get_if<AffineCircle>(&body_)) {
            const auto& b = std::get<AffineCircle>(o.body_);
            return a->slope == b.slope && a->offset.lo == b.offset.lo &&
                   a->offset.hi == b.offset.hi;
        }
        if (const auto* a = std::get_if<AffineInterval>(&body_)) {
            const auto& b = std::get<AffineInterval>(o.body_);
            return a->slope == b.slope && a->offset.lo == b.offset.lo &&
                   a->offset.hi == b.offset.hi;
        }
        if (const auto* a = std::get_if<Pl>(&body_)) {
            const auto& b = std::get<Pl>(o.body_);
            return a->degree == b.degree && a->fn == b.fn;
        }
        const auto& a = std::get<Composed>(body_);
        const auto& b = std::get<Composed>(o.body_);
        return a.slope == b.slope && a.offset.lo == b.offset.lo && a.offset.hi == b.offset.hi &&
               a.outer == b.outer;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        auto offset_json = [](const RatInterval& off) -> nlohmann::ordered_json {
            if (auto v = exact_value(off)) return rat_str(*v);
            nlohmann::ordered_json e;
            e["enclosure"] = nlohmann::ordered_json::array({rat_str(off.lo), rat_str(off.hi)});
            return e;
        };
        std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    j["kind"] = "affine";
                    j["slope"] = m.slope.get_str() + "/1";
                    j["offset"] = offset_json(m.offset);
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    j["kind"] = "affine";
                    j["slope"] = rat_str(m.slope);
                    j["offset"] = offset_json(m.offset);
                } else if constexpr (std::is_same_v<T, Pl>) {
                    j["kind"] = "pl";
                    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
                    for (std::size_t i = 0; i < m.fn.xs().size(); ++i)
                        pts.push_back(nlohmann::ordered_json::array(
                            {rat_str(m.fn.xs()[i]), rat_str(m.fn.ys()[i])}));
                    j["breakpoints"] = std::move(pts);
                } else {
                    j["kind"] = "composed";
                    j["outer"] = m.outer.to_json();
                    j["slope"] = m.slope.get_str() + "/1";
                    j["offset"] = offset_json(m.offset);
                }
            },
            body_);
        return j;
    }

    static MapSpec from_json(SpaceKind kind, const nlohmann::json& j) {
        auto parse_offset = [](const nlohmann::json& o) -> RatInterval {
            if (o.is_string()) return RatInterval::point(parse_rat(o.get<std::string>()));
            const auto& e = o.at("enclosure");
            return RatInterval(parse_rat(e.at(0).get<std::string>()),
                               parse_rat(e.at(1).get<std::string>()));
        };
        std::string k = j.at("kind").get<std::string>();
        if (k == "affine") {
            Rat slope = parse_rat(j.at("slope").get<std::string>());
            RatInterval offset = parse_offset(j.at("offset"));
            if (kind == SpaceKind::circle) {
                if (slope.get_den() != 1)
                    throw std::invalid_argument("circle affine slope must be an integer");
                return affine_circle(Int(slope.get_num()), std::move(offset));
            }
            return affine_interval(std::move(slope), std::move(offset));
        }
        if (k == "pl") {
            std::vector<std::pair<Rat, Rat>> pts;
            for (const auto& p : j.at("breakpoints"))
                pts.emplace_back(parse_rat(p.at(0).get<std::string>()),
                                 parse_rat(p.at(1).get<std::string>()));
            return piecewise_linear(kind, PiecewiseLinear(std::move(pts)));
        }
        if (k == "composed") {
            Homeomorphism outer = Homeomorphism::from_json(j.at("outer"));
            Rat slope = parse_rat(j.at("slope").get<std::string>());
            return composed(std::move(outer), Int(slope.get_num()),
                            parse_offset(j.at("offset")));
        }
        throw std::invalid_argument("unknown map kind: '" + k + "'");
    }

  private:
    std::vector<Point> preimage_candidates(const Point& y) const {
        std::vector<Point> out;
        std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, AffineCircle>) {
                    // slope*x + offset = y + k (mod 1), |slope| solutions
                    long n = std::abs(static_cast<long>(m.slope.get_si()));
                    for (long k = 0; k < n; ++k) {
                        RatInterval cand =
                            (y.pos - m.offset).shift(Rat(k)).scale(Rat(1) / Rat(m.slope));
                        out.push_back(Point::enclose(cand, kind_));
                    }
                } else if constexpr (std::is_same_v<T, AffineInterval>) {
                    if (m.slope == 0) return;  // caller samples the hint set instead
                    RatInterval cand = (y.pos - m.offset).scale(Rat(1) / m.slope);
                    if (cand.hi >= 0 && cand.lo <= 1)
                        out.push_back(Point::enclose(
                            RatInterval(rat_max(cand.lo, Rat(0)), rat_min(cand.hi, Rat(1))),
                            kind_));
                } else if constexpr (std::is_same_v<T, Pl>) {
                    Rat target = y.mid();
                    if (kind_ == SpaceKind::circle) {
                        RatInterval r = m.fn.range_lifted(Rat(0), Rat(1), m.degree);
                        for (Int k = rat_floor(r.lo - mod1(target)); Rat(k) + mod1(target) <= r.hi;
                             ++k)
                            for (const Rat& t : m.fn.preimages(mod1(target) + Rat(k)))
                                out.push_back(Point::exact(t, kind_));
                    } else {
                        for (const Rat& t : m.fn.preimages(target))
                            out.push_back(Point::exact(t, kind_));
                    }
                } else {
                    Point pulled = m.outer.inverse().eval_point(y);
                    long n = std::abs(static_cast<long>(m.slope.get_si()));
                    for (long k = 0; k < n; ++k) {
                        RatInterval cand =
                            (pulled.pos - m.offset).shift(Rat(k)).scale(Rat(1) / Rat(m.slope));
                        out.push_back(Point::enclose(cand, kind_));
                    }
                }
            },
            body_);
        return out;
    }

    SpaceKind kind_ = SpaceKind::circle;
    std::variant<AffineCircle, AffineInterval, Pl, Composed> body_;
};

}  // namespace shadowlab
