// Finite unions of closed arcs with exact rational endpoints. Circle arcs
// that cross 0 are stored as a single wrapping arc (lo in [0,1), hi up to
// lo+1); binary operations work on a split (non-wrapping) view and
// re-normalize, so equal sets always have equal representations.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "space.hpp"

namespace shadowlab {

struct Arc {
    Rat lo, hi;
    bool wraps() const { return hi > 1; }
    Rat length() const { return hi - lo; }
    bool operator==(const Arc& o) const { return lo == o.lo && hi == o.hi; }
};

class ArcSet {
  public:
    ArcSet() = default;
    explicit ArcSet(SpaceKind kind) : kind_(kind) {}

    static ArcSet empty(SpaceKind kind) { return ArcSet(kind); }

    static ArcSet full(SpaceKind kind) {
        ArcSet s(kind);
        s.arcs_.push_back({Rat(0), Rat(1)});
        return s;
    }

    // Circle input is reduced mod 1 (hi may exceed 1 by up to a full turn);
    // spans of a full turn or more give the whole circle.
    static ArcSet arc(SpaceKind kind, const Rat& lo, const Rat& hi) {
        if (lo > hi) throw std::invalid_argument("arc endpoints out of order");
        ArcSet s(kind);
        if (kind == SpaceKind::circle) {
            if (hi - lo >= 1) return full(kind);
            Rat f(rat_floor(lo));
            s.arcs_.push_back({lo - f, hi - f});
        } else {
            if (lo < 0 || hi > 1) throw std::invalid_argument("interval arc outside [0,1]");
            s.arcs_.push_back({lo, hi});
        }
        return s;
    }

    static ArcSet from_arcs(SpaceKind kind, std::vector<Arc> raw) {
        std::vector<std::pair<Rat, Rat>> segs;
        for (auto& a : raw) {
            if (a.lo > a.hi) throw std::invalid_argument("arc endpoints out of order");
            if (kind == SpaceKind::circle && a.length() >= 1) return full(kind);
            append_split(kind, a.lo, a.hi, segs);
        }
        return assemble(kind, std::move(segs));
    }

    SpaceKind space() const { return kind_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    bool is_empty() const { return arcs_.empty(); }

    bool is_full() const {
        return arcs_.size() == 1 && arcs_[0].lo == 0 && arcs_[0].hi == 1;
    }

    Rat measure() const {
        Rat m(0);
        for (const auto& a : arcs_) m += a.length();
        return m;
    }

    bool contains(const Rat& x) const {
        Rat v = kind_ == SpaceKind::circle ? mod1(x) : x;
        for (const auto& a : arcs_) {
            if (a.lo <= v && v <= a.hi) return true;
            if (kind_ == SpaceKind::circle && a.lo <= v + 1 && v + 1 <= a.hi) return true;
        }
        return false;
    }

    // Whole enclosure inside one arc (conservative membership for enclosure
    // points).
    bool contains_enclosure(const RatInterval& iv) const {
        RatInterval v = kind_ == SpaceKind::circle ? iv.reduced_mod1() : iv;
        if (kind_ == SpaceKind::interval && (v.lo < 0 || v.hi > 1)) return false;
        for (const auto& a : arcs_) {
            if (a.lo <= v.lo && v.hi <= a.hi) return true;
            if (kind_ == SpaceKind::circle && a.lo <= v.lo + 1 && v.hi + 1 <= a.hi) return true;
        }
        return false;
    }

    bool contains_point(const Point& p) const {
        check_space(p.kind);
        return contains_enclosure(p.pos);
    }

    bool contains_set(const ArcSet& other) const {
        check_space(other.kind_);
        auto mine = split(), theirs = other.split();
        std::size_t i = 0;
        for (const auto& t : theirs) {
            while (i < mine.size() && mine[i].second < t.first) ++i;
            if (i == mine.size() || mine[i].first > t.first || mine[i].second < t.second)
                return false;
        }
        return true;
    }

    ArcSet intersect(const ArcSet& other) const {
        check_space(other.kind_);
        auto a = split(), b = other.split();
        std::vector<std::pair<Rat, Rat>> out;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            Rat lo = rat_max(a[i].first, b[j].first);
            Rat hi = rat_min(a[i].second, b[j].second);
            if (lo <= hi) out.emplace_back(lo, hi);
            if (a[i].second < b[j].second)
                ++i;
            else
                ++j;
        }
        return assemble(kind_, std::move(out));
    }

    ArcSet unite(const ArcSet& other) const {
        check_space(other.kind_);
        auto a = split(), b = other.split();
        a.insert(a.end(), b.begin(), b.end());
        return assemble(kind_, std::move(a));
    }

    // Closure of the complement (closed-set algebra throughout).
    ArcSet complement() const {
        auto segs = split();
        std::vector<std::pair<Rat, Rat>> out;
        Rat cursor(0);
        for (const auto& s : segs) {
            if (s.first > cursor) out.emplace_back(cursor, s.first);
            cursor = s.second;
        }
        if (cursor < 1) out.emplace_back(cursor, Rat(1));
        return assemble(kind_, std::move(out));
    }

    ArcSet translate(const Rat& t) const {
        if (kind_ != SpaceKind::circle)
            throw std::invalid_argument("translate is a circle operation");
        std::vector<Arc> moved;
        moved.reserve(arcs_.size());
        for (const auto& a : arcs_) moved.push_back({a.lo + t, a.hi + t});
        return from_arcs(kind_, std::move(moved));
    }

    // Outer image under x -> slope*x + offset; the offset enclosure widens
    // every arc by its width. Degenerate slope stays with the caller.
    ArcSet affine_image(const Rat& slope, const RatInterval& offset) const {
        if (slope == 0)
            throw std::invalid_argument("affine_image: zero slope (image is a point)");
        std::vector<Arc> out;
        out.reserve(arcs_.size());
        for (const auto& a : arcs_) {
            Rat lo, hi;
            if (slope > 0) {
                lo = slope * a.lo + offset.lo;
                hi = slope * a.hi + offset.hi;
            } else {
                lo = slope * a.hi + offset.lo;
                hi = slope * a.lo + offset.hi;
            }
            if (kind_ == SpaceKind::interval && (lo < 0 || hi > 1))
                throw std::invalid_argument("affine_image leaves [0,1]");
            out.push_back({lo, hi});
        }
        return from_arcs(kind_, std::move(out));
    }

    ArcSet affine_image(const Rat& slope, const Rat& offset) const {
        return affine_image(slope, RatInterval::point(offset));
    }

    // Leftmost point of the canonical form.
    Rat sample_value() const {
        if (arcs_.empty()) throw std::logic_error("sample_point of empty set");
        return arcs_[0].lo;
    }
    Point sample_point() const { return Point::exact(sample_value(), kind_); }

    Rat diameter() const {
        if (arcs_.empty()) return Rat(0);
        if (kind_ == SpaceKind::interval) return arcs_.back().hi - arcs_[0].lo;
        if (is_full()) return Rat(1, 2);
        // Antipodal pair inside the set pins the diameter at 1/2; otherwise
        // it is attained at arc endpoints.
        if (!intersect(translate(Rat(1, 2))).is_empty()) return Rat(1, 2);
        Rat best(0);
        std::vector<Point> ends;
        for (const auto& a : arcs_) {
            ends.push_back(Point::exact(a.lo, kind_));
            ends.push_back(Point::exact(a.hi, kind_));
        }
        for (std::size_t i = 0; i < ends.size(); ++i)
            for (std::size_t j = i + 1; j < ends.size(); ++j)
                best = rat_max(best, dist_exact(ends[i], ends[j]));
        return best;
    }

    bool operator==(const ArcSet& o) const { return kind_ == o.kind_ && arcs_ == o.arcs_; }
    bool operator!=(const ArcSet& o) const { return !(*this == o); }

    // Non-wrapping closed segments within [0,1], sorted and disjoint.
    std::vector<std::pair<Rat, Rat>> split() const {
        std::vector<std::pair<Rat, Rat>> segs;
        for (const auto& a : arcs_) append_split(kind_, a.lo, a.hi, segs);
        std::sort(segs.begin(), segs.end());
        return segs;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& a : arcs_) {
            if (a.wraps()) {
                nlohmann::ordered_json w;
                w["left"] = rat_str(a.lo);
                w["right"] = rat_str(a.hi - 1);
                w["wraps"] = true;
                arr.push_back(std::move(w));
            } else {
                arr.push_back(nlohmann::ordered_json::array({rat_str(a.lo), rat_str(a.hi)}));
            }
        }
        return arr;
    }

    static ArcSet from_json(SpaceKind kind, const nlohmann::json& arr) {
        std::vector<Arc> raw;
        for (const auto& item : arr) {
            if (item.is_array()) {
                Rat lo = parse_rat(item.at(0).get<std::string>());
                Rat hi = parse_rat(item.at(1).get<std::string>());
                raw.push_back({std::move(lo), std::move(hi)});
            } else {
                Rat lo = parse_rat(item.at("left").get<std::string>());
                Rat hi = parse_rat(item.at("right").get<std::string>());
                if (item.value("wraps", false)) hi += 1;
                raw.push_back({std::move(lo), std::move(hi)});
            }
        }
        return from_arcs(kind, std::move(raw));
    }

  private:
    void check_space(SpaceKind other) const {
        if (kind_ != other) throw std::invalid_argument("arcset: mismatched space kinds");
    }

    static void append_split(SpaceKind kind, const Rat& lo, const Rat& hi,
                             std::vector<std::pair<Rat, Rat>>& segs) {
        if (kind == SpaceKind::interval || hi <= 1) {
            segs.emplace_back(lo, hi);
        } else {
            segs.emplace_back(lo, Rat(1));
            segs.emplace_back(Rat(0), hi - 1);
        }
    }

    // Merge sorted segments (closed: touching segments fuse), then rebuild
    // canonical wrap-merged arcs.
    static ArcSet assemble(SpaceKind kind, std::vector<std::pair<Rat, Rat>> segs) {
        ArcSet out(kind);
        if (segs.empty()) return out;
        std::sort(segs.begin(), segs.end());
        std::vector<std::pair<Rat, Rat>> merged;
        for (auto& s : segs) {
            if (!merged.empty() && s.first <= merged.back().second)
                merged.back().second = rat_max(merged.back().second, s.second);
            else
                merged.push_back(std::move(s));
        }
        if (kind == SpaceKind::circle) {
            if (merged.size() == 1 && merged[0].first == 0 && merged[0].second == 1)
                return full(kind);
            // Fuse across 0 when both ends touch it.
            if (merged.size() >= 2 && merged.front().first == 0 && merged.back().second == 1) {
                Rat lo = merged.back().first;
                Rat hi = merged.front().second + 1;
                merged.pop_back();
                merged.erase(merged.begin());
                Rat total = hi - lo;
                for (const auto& s : merged) total += s.second - s.first;
                if (total >= 1) return full(kind);
                merged.push_back({lo, hi});
            }
        }
        for (auto& s : merged) out.arcs_.push_back({std::move(s.first), std::move(s.second)});
        std::sort(out.arcs_.begin(), out.arcs_.end(),
                  [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
        return out;
    }

    SpaceKind kind_ = SpaceKind::circle;
    std::vector<Arc> arcs_;
};

// Closed ball {y : d(y, center) <= eps}, outer for enclosure centers. The
// strict/open bookkeeping lives in verdict margins, not in the set.
inline ArcSet ball(const SpaceDescriptor& space, const Point& center, const Rat& eps) {
    if (eps < 0) throw std::invalid_argument("ball: negative radius");
    if (center.kind != space.kind) throw std::invalid_argument("ball: mismatched space kinds");
    if (space.kind == SpaceKind::circle) {
        if (center.pos.lo - eps <= center.pos.hi + eps - 1) return ArcSet::full(space.kind);
        return ArcSet::arc(space.kind, center.pos.lo - eps, center.pos.hi + eps);
    }
    return ArcSet::arc(space.kind, rat_max(Rat(0), center.pos.lo - eps),
                       rat_min(Rat(1), center.pos.hi + eps));
}

}  // namespace shadowlab
