// A parameterized IFS: an ordered finite alphabet with one map per symbol,
// plus the uniform contraction/expansion data derived from the maps.

#pragma once

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "maps.hpp"
#include "rational.hpp"
#include "space.hpp"

namespace shadowlab {

class IFSystem {
  public:
    IFSystem(SpaceDescriptor space, std::vector<std::string> alphabet,
             std::vector<MapSpec> maps)
        : space_(std::move(space)), alphabet_(std::move(alphabet)), maps_(std::move(maps)) {
        if (alphabet_.empty()) throw std::invalid_argument("alphabet must be nonempty");
        if (alphabet_.size() != maps_.size())
            throw std::invalid_argument("one map per symbol required");
        std::set<std::string> seen;
        for (const auto& id : alphabet_)
            if (!seen.insert(id).second)
                throw std::invalid_argument("duplicate symbol id: '" + id + "'");
        for (const auto& m : maps_)
            if (m.space() != space_.kind)
                throw std::invalid_argument("map space does not match system space");
        all_invertible_ = true;
        for (const auto& m : maps_) all_invertible_ = all_invertible_ && m.invertible();
    }

    const SpaceDescriptor& space() const { return space_; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    int arity() const { return static_cast<int>(alphabet_.size()); }
    const MapSpec& map(int symbol) const {
        if (symbol < 0 || symbol >= arity())
            throw std::invalid_argument("unknown symbol index");
        return maps_[static_cast<std::size_t>(symbol)];
    }
    const std::vector<MapSpec>& maps() const { return maps_; }
    bool all_invertible() const { return all_invertible_; }

    int symbol_index(const std::string& id) const {
        for (int i = 0; i < arity(); ++i)
            if (alphabet_[static_cast<std::size_t>(i)] == id) return i;
        throw std::invalid_argument("unknown symbol: '" + id + "'");
    }
    const std::string& symbol_id(int i) const { return alphabet_[static_cast<std::size_t>(i)]; }

    bool operator==(const IFSystem& o) const {
        return space_.kind == o.space_.kind && alphabet_ == o.alphabet_ && maps_ == o.maps_;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["space"] = space_name(space_.kind);
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (int i = 0; i < arity(); ++i) {
            nlohmann::ordered_json m = maps_[static_cast<std::size_t>(i)].to_json();
            nlohmann::ordered_json entry;
            entry["id"] = alphabet_[static_cast<std::size_t>(i)];
            for (auto& [k, v] : m.items()) entry[k] = v;
            arr.push_back(std::move(entry));
        }
        j["maps"] = std::move(arr);
        return j;
    }

    static IFSystem from_json(const nlohmann::json& j) {
        SpaceKind kind = parse_space(j.at("space").get<std::string>());
        std::vector<std::string> ids;
        std::vector<MapSpec> maps;
        for (const auto& entry : j.at("maps")) {
            ids.push_back(entry.at("id").get<std::string>());
            maps.push_back(MapSpec::from_json(kind, entry));
        }
        return IFSystem(SpaceDescriptor(kind), std::move(ids), std::move(maps));
    }

    std::uint64_t hash() const {
        std::string s = to_json().dump();
        std::uint64_t h = 0xCBF29CE484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ull;
        }
        return h;
    }

  private:
    SpaceDescriptor space_;
    std::vector<std::string> alphabet_;
    std::vector<MapSpec> maps_;
    bool all_invertible_ = false;
};

struct SystemRatios {
    Rat beta;   // sup of the per-map upper slopes
    Rat alpha;  // inf of the per-map lower slopes
    bool uniformly_contracting;
    bool uniformly_expanding;
};

inline SystemRatios system_ratios(const IFSystem& sys) {
    SystemRatios r{Rat(0), Rat(0), false, false};
    bool all_surjective = true;
    for (int i = 0; i < sys.arity(); ++i) {
        const MapSpec& m = sys.map(i);
        Rat up = m.lipschitz_upper();
        Rat low = m.lipschitz_lower();
        if (i == 0) {
            r.beta = up;
            r.alpha = low;
        } else {
            r.beta = rat_max(r.beta, up);
            r.alpha = rat_min(r.alpha, low);
        }
        all_surjective = all_surjective && m.surjective();
    }
    r.uniformly_contracting = r.beta < 1;
    r.uniformly_expanding = r.alpha > 1 && all_surjective;
    return r;
}

inline Rat contraction_ratio(const IFSystem& sys) { return system_ratios(sys).beta; }
inline Rat expansion_ratio(const IFSystem& sys) { return system_ratios(sys).alpha; }

// ---------------------------------------------------------------------------
// stock systems used across the test and experiment commands

// Enclosure of (sqrt(5)-1)/2 from consecutive Fibonacci convergents,
// tightened until the width drops below max_width.
inline RatInterval golden_ratio_conjugate_enclosure(const Rat& max_width) {
    if (max_width <= 0) throw std::invalid_argument("enclosure width must be positive");
    Int a = 1, b = 1;  // consecutive Fibonacci numbers
    for (;;) {
        Int c = a + b;
        Rat lo(b, c), hi(a, b);  // F(n)/F(n+1) brackets alternate around the limit
        if (lo > hi) std::swap(lo, hi);
        if (hi - lo <= max_width) return RatInterval(lo, hi);
        a = b;
        b = c;
    }
}

// Two commuting circle rotations whose offsets differ by exactly 1/2.
inline IFSystem half_shifted_rotation_pair(const RatInterval& beta) {
    RatInterval beta2 = beta.shift(Rat(1, 2));
    return IFSystem(SpaceDescriptor(SpaceKind::circle), {"1", "2"},
                    {MapSpec::affine_circle(Int(1), beta),
                     MapSpec::affine_circle(Int(1), beta2)});
}

// Contracting pair x/3, (x+2)/3 on the interval.
inline IFSystem thirds_contraction_pair() {
    return IFSystem(SpaceDescriptor(SpaceKind::interval), {"1", "2"},
                    {MapSpec::affine_interval(Rat(1, 3), Rat(0)),
                     MapSpec::affine_interval(Rat(1, 3), Rat(2, 3))});
}

// Expanding pair 2x, 2x + 1/2 on the circle.
inline IFSystem doubling_pair() {
    return IFSystem(SpaceDescriptor(SpaceKind::circle), {"1", "2"},
                    {MapSpec::affine_circle(Int(2), RatInterval::point(Rat(0))),
                     MapSpec::affine_circle(Int(2), RatInterval::point(Rat(1, 2)))});
}

inline IFSystem single_map_system(SpaceDescriptor space, MapSpec m,
                                  std::string id = "1") {
    return IFSystem(std::move(space), {std::move(id)}, {std::move(m)});
}

}  // namespace shadowlab
