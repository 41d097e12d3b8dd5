// Orbits, pseudo-orbits and their witnesses. A pseudo-orbit is valid when
// every step lands strictly within delta of the witnessed map's image;
// validation is conservative for enclosure points (a step is accepted only
// when the distance enclosure decides it).

#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "space.hpp"
#include "system.hpp"
#include "word.hpp"

namespace shadowlab {

struct OrbitSegment {
    std::vector<Point> points;
    SymbolWord word;

    long steps() const { return static_cast<long>(points.size()) - 1; }
};

struct PseudoOrbit {
    std::vector<Point> points;
    Rat delta;
    SymbolWord witness;
    long index_offset = 0;  // first index of a two-sided window

    long steps() const { return static_cast<long>(points.size()) - 1; }
};

inline OrbitSegment orbit(const IFSystem& sys, const SymbolWord& word, const Point& x0,
                          long n) {
    if (n < 0) throw std::invalid_argument("orbit: negative length");
    if (x0.kind != sys.space().kind) throw std::invalid_argument("orbit: mismatched space");
    OrbitSegment seg;
    seg.points.reserve(static_cast<std::size_t>(n) + 1);
    seg.points.push_back(x0);
    for (long i = 0; i < n; ++i)
        seg.points.push_back(sys.map(word.at(i)).apply(seg.points.back()));
    seg.word = SymbolWord::finite(word.prefix(n));
    return seg;
}

// The word map F as an evaluated closure: applying it to x equals the last
// point of orbit(sys, word, x, n).
class ComposedWord {
  public:
    ComposedWord(const IFSystem& sys, SymbolWord word, long n)
        : sys_(&sys), word_(std::move(word)), n_(n) {
        if (n < 0) throw std::invalid_argument("compose_word: negative length");
        if (!word_.has(n - 1) && n > 0)
            throw std::out_of_range("word exhausted: finite head, no cycle");
    }

    Point operator()(Point x) const {
        for (long i = 0; i < n_; ++i) x = sys_->map(word_.at(i)).apply(x);
        return x;
    }

    long steps() const { return n_; }

  private:
    const IFSystem* sys_;
    SymbolWord word_;
    long n_;
};

inline ComposedWord compose_word(const IFSystem& sys, SymbolWord word, long n) {
    return ComposedWord(sys, std::move(word), n);
}

// Largest step distance of a witnessed sequence (outer bound).
inline Rat witness_margin(const IFSystem& sys, const std::vector<Point>& points,
                          const SymbolWord& witness) {
    Rat worst(0);
    for (long n = 0; n + 1 < static_cast<long>(points.size()); ++n) {
        Point img = sys.map(witness.at(n)).apply(points[static_cast<std::size_t>(n)]);
        worst = rat_max(worst, dist(points[static_cast<std::size_t>(n) + 1], img).hi);
    }
    return worst;
}

// Lexicographically least witness, chosen stepwise over the ordered
// alphabet. delta == 0 asks for an exact orbit.
inline std::optional<SymbolWord> validate_pseudo_orbit(const IFSystem& sys,
                                                       const std::vector<Point>& points,
                                                       const Rat& delta) {
    if (points.size() < 2)
        throw std::invalid_argument("pseudo-orbit needs at least two points");
    if (delta < 0) throw std::invalid_argument("pseudo-orbit delta must be nonnegative");
    std::vector<int> head;
    head.reserve(points.size() - 1);
    for (std::size_t n = 0; n + 1 < points.size(); ++n) {
        int chosen = -1;
        for (int s = 0; s < sys.arity() && chosen < 0; ++s) {
            RatInterval d = dist(points[n + 1], sys.map(s).apply(points[n]));
            bool ok = delta == 0 ? d.hi == 0 : d.hi < delta;
            if (ok) chosen = s;
        }
        if (chosen < 0) return std::nullopt;
        head.push_back(chosen);
    }
    return SymbolWord::finite(std::move(head));
}

inline bool pseudo_orbit_valid(const IFSystem& sys, const PseudoOrbit& p) {
    if (p.points.size() < 2) return false;
    if (!p.witness.has(p.steps() - 1)) return false;
    Rat m = witness_margin(sys, p.points, p.witness);
    return p.delta == 0 ? m == 0 : m < p.delta;
}

namespace detail {
inline void require_valid(const IFSystem& sys, const PseudoOrbit& p) {
    if (!pseudo_orbit_valid(sys, p))
        throw std::invalid_argument("invalid pseudo-orbit: witness fails the delta condition");
}
}  // namespace detail

// Iterates a single generator map and validates the result against the
// system at the requested tolerance.
inline PseudoOrbit make_pseudo_orbit_from_generator(const IFSystem& sys,
                                                    const MapSpec& generator, const Point& x0,
                                                    long n, const Rat& delta) {
    if (generator.space() != sys.space().kind)
        throw std::invalid_argument("generator space does not match system");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    pts.push_back(x0);
    for (long i = 0; i < n; ++i) pts.push_back(generator.apply(pts.back()));
    auto witness = validate_pseudo_orbit(sys, pts, delta);
    if (!witness) {
        // measure the best achievable tolerance for the diagnostic
        Rat best(-1);
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            Rat step_best(-1);
            for (int s = 0; s < sys.arity(); ++s) {
                Rat d = dist(pts[k + 1], sys.map(s).apply(pts[k])).hi;
                if (step_best < 0 || d < step_best) step_best = d;
            }
            best = rat_max(best, step_best);
        }
        throw std::invalid_argument("generator orbit is not a " + rat_str(delta) +
                                    "-pseudo-orbit of the system (needs delta > " +
                                    rat_str(best) + ")");
    }
    PseudoOrbit p;
    p.points = std::move(pts);
    p.delta = delta;
    p.witness = std::move(*witness);
    return p;
}

// ---------------------------------------------------------------------------
// serialization

inline nlohmann::ordered_json point_to_json(const Point& p) {
    if (auto v = exact_value(p.pos)) return rat_str(*v);
    nlohmann::ordered_json e;
    e["enclosure"] = nlohmann::ordered_json::array({rat_str(p.pos.lo), rat_str(p.pos.hi)});
    return e;
}

inline Point point_from_json(SpaceKind kind, const nlohmann::json& j) {
    if (j.is_string()) return Point::exact(parse_rat(j.get<std::string>()), kind);
    const auto& e = j.at("enclosure");
    return Point::enclose(RatInterval(parse_rat(e.at(0).get<std::string>()),
                                      parse_rat(e.at(1).get<std::string>())),
                          kind);
}

inline nlohmann::ordered_json word_to_json(const IFSystem& sys, const SymbolWord& w,
                                           long length) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (long i = 0; i < length; ++i) arr.push_back(sys.symbol_id(w.at(i)));
    return arr;
}

inline nlohmann::ordered_json pseudo_to_json(const IFSystem& sys, const PseudoOrbit& p) {
    nlohmann::ordered_json j;
    j["space"] = space_name(sys.space().kind);
    j["delta"] = rat_str(p.delta);
    j["index_offset"] = p.index_offset;
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& pt : p.points) pts.push_back(point_to_json(pt));
    j["points"] = std::move(pts);
    if (p.witness.has(p.steps() - 1)) j["witness"] = word_to_json(sys, p.witness, p.steps());
    return j;
}

// Witness-less files are validated on load at the declared delta.
inline PseudoOrbit pseudo_from_json(const IFSystem& sys, const nlohmann::json& j) {
    PseudoOrbit p;
    p.delta = parse_rat(j.at("delta").get<std::string>());
    p.index_offset = j.value("index_offset", 0L);
    for (const auto& pt : j.at("points"))
        p.points.push_back(point_from_json(sys.space().kind, pt));
    if (j.contains("witness")) {
        std::vector<int> head;
        for (const auto& s : j.at("witness"))
            head.push_back(sys.symbol_index(s.get<std::string>()));
        p.witness = SymbolWord::finite(std::move(head));
    } else {
        auto w = validate_pseudo_orbit(sys, p.points, p.delta);
        if (!w)
            throw std::invalid_argument(
                "points are not a " + rat_str(p.delta) + "-pseudo-orbit of the system");
        p.witness = std::move(*w);
    }
    return p;
}

}  // namespace shadowlab
