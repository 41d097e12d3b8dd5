// Continuous piecewise-linear functions on [0,1] with exact rational
// breakpoints. Circle maps are handled through their lifts: a degree-d lift
// satisfies f(x+1) = f(x) + d and is evaluated anywhere by periodicity.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace shadowlab {

class PiecewiseLinear {
  public:
    PiecewiseLinear() = default;

    // pts: (x, y) pairs; x must start at 0, end at 1, strictly increase.
    explicit PiecewiseLinear(std::vector<std::pair<Rat, Rat>> pts) {
        if (pts.size() < 2) throw std::invalid_argument("pl: need at least two breakpoints");
        std::sort(pts.begin(), pts.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (pts.front().first != 0 || pts.back().first != 1)
            throw std::invalid_argument("pl: domain must span [0,1]");
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i].first == pts[i + 1].first)
                throw std::invalid_argument("pl: duplicate breakpoint abscissa");
        for (auto& p : pts) {
            xs_.push_back(std::move(p.first));
            ys_.push_back(std::move(p.second));
        }
        drop_collinear();
    }

    static PiecewiseLinear affine(const Rat& slope, const Rat& offset) {
        return PiecewiseLinear({{Rat(0), offset}, {Rat(1), slope + offset}});
    }

    static PiecewiseLinear identity() { return affine(Rat(1), Rat(0)); }

    const std::vector<Rat>& xs() const { return xs_; }
    const std::vector<Rat>& ys() const { return ys_; }
    std::size_t pieces() const { return xs_.size() - 1; }

    Rat slope_of_piece(std::size_t i) const {
        return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    }

    Rat eval(const Rat& t) const {
        if (t < 0 || t > 1) throw std::invalid_argument("pl: eval outside [0,1]");
        std::size_t i = piece_index(t);
        return ys_[i] + (t - xs_[i]) * slope_of_piece(i);
    }

    // Periodic lift extension: f(t + n) = f(t) + n * degree. Inputs already
    // inside [0,1] evaluate directly (interval maps have no periodicity).
    Rat eval_lifted(const Rat& t, int degree) const {
        if (t >= 0 && t <= 1) return eval(t);
        Int n = rat_floor(t);
        return eval(t - Rat(n)) + Rat(n) * degree;
    }

    // Outer range over [a, b] within [0,1].
    RatInterval range_on(const Rat& a, const Rat& b) const {
        if (a > b) throw std::invalid_argument("pl: bad range");
        Rat lo = eval(a), hi = eval(a);
        auto fold = [&](const Rat& v) {
            lo = rat_min(lo, v);
            hi = rat_max(hi, v);
        };
        fold(eval(b));
        for (std::size_t i = 0; i < xs_.size(); ++i)
            if (a < xs_[i] && xs_[i] < b) fold(ys_[i]);
        return RatInterval(lo, hi);
    }

    // Outer range for lifted evaluation over any [a, b] with b - a <= 1.
    RatInterval range_lifted(const Rat& a, const Rat& b, int degree) const {
        Int n = rat_floor(a);
        Rat a0 = a - Rat(n), b0 = b - Rat(n);
        RatInterval r = b0 <= 1 ? range_on(a0, b0)
                                : [&] {
                                      RatInterval left = range_on(a0, Rat(1));
                                      RatInterval right = range_on(Rat(0), b0 - 1);
                                      right = right.shift(Rat(degree));
                                      return RatInterval(rat_min(left.lo, right.lo),
                                                         rat_max(left.hi, right.hi));
                                  }();
        return r.shift(Rat(n) * degree);
    }

    bool strictly_increasing() const {
        for (std::size_t i = 0; i + 1 < ys_.size(); ++i)
            if (ys_[i] >= ys_[i + 1]) return false;
        return true;
    }
    bool strictly_decreasing() const {
        for (std::size_t i = 0; i + 1 < ys_.size(); ++i)
            if (ys_[i] <= ys_[i + 1]) return false;
        return true;
    }

    Rat max_abs_slope() const {
        Rat m(0);
        for (std::size_t i = 0; i < pieces(); ++i) m = rat_max(m, rat_abs(slope_of_piece(i)));
        return m;
    }
    Rat min_abs_slope() const {
        Rat m = rat_abs(slope_of_piece(0));
        for (std::size_t i = 1; i < pieces(); ++i) m = rat_min(m, rat_abs(slope_of_piece(i)));
        return m;
    }

    // Inverse of a strictly monotone function, as a function of its value
    // range (the caller rebases circle lifts).
    std::vector<std::pair<Rat, Rat>> inverse_pairs() const {
        std::vector<std::pair<Rat, Rat>> out;
        out.reserve(xs_.size());
        for (std::size_t i = 0; i < xs_.size(); ++i) out.emplace_back(ys_[i], xs_[i]);
        if (strictly_decreasing()) std::reverse(out.begin(), out.end());
        else if (!strictly_increasing())
            throw std::invalid_argument("pl: inverse of non-monotone function");
        return out;
    }

    // All t in [0,1] with eval(t) = v (non-degenerate crossings plus flat
    // piece endpoints; deterministic, sorted).
    std::vector<Rat> preimages(const Rat& v) const {
        std::vector<Rat> out;
        for (std::size_t i = 0; i < pieces(); ++i) {
            const Rat& ya = ys_[i];
            const Rat& yb = ys_[i + 1];
            if (ya == yb) {
                if (v == ya) {
                    out.push_back(xs_[i]);
                    out.push_back(xs_[i + 1]);
                }
                continue;
            }
            Rat lo = rat_min(ya, yb), hi = rat_max(ya, yb);
            if (v < lo || v > hi) continue;
            Rat t = xs_[i] + (v - ya) / slope_of_piece(i);
            out.push_back(t);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // g(this) with this acting first; `degree` is g's lift degree (0 for
    // interval maps whose inputs never leave [0,1]).
    PiecewiseLinear then(const PiecewiseLinear& g, int g_degree) const {
        std::vector<Rat> cuts = xs_;
        for (std::size_t i = 0; i < pieces(); ++i) {
            Rat ya = ys_[i], yb = ys_[i + 1];
            Rat lo = rat_min(ya, yb), hi = rat_max(ya, yb);
            // every extended breakpoint of g crossed by this piece
            for (Int n = rat_floor(lo) - 1; Rat(n) <= hi; ++n)
                for (const Rat& gx : g.xs()) {
                    Rat c = gx + Rat(n);
                    if (c <= lo || c >= hi) continue;
                    cuts.push_back(xs_[i] + (c - ya) / slope_of_piece(i));
                }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<std::pair<Rat, Rat>> pts;
        pts.reserve(cuts.size());
        for (const Rat& t : cuts) pts.emplace_back(t, g.eval_lifted(eval(t), g_degree));
        return PiecewiseLinear(std::move(pts));
    }

    // Shift all values by a constant.
    PiecewiseLinear shifted(const Rat& c) const {
        PiecewiseLinear out = *this;
        for (auto& y : out.ys_) y += c;
        return out;
    }

    bool operator==(const PiecewiseLinear& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }

  private:
    std::size_t piece_index(const Rat& t) const {
        std::size_t lo = 0, hi = xs_.size() - 1;
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (xs_[mid] <= t)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    void drop_collinear() {
        std::vector<Rat> nx{xs_[0]}, ny{ys_[0]};
        for (std::size_t i = 1; i + 1 < xs_.size(); ++i) {
            Rat left = (ys_[i] - ny.back()) * (xs_[i + 1] - xs_[i]);
            Rat right = (ys_[i + 1] - ys_[i]) * (xs_[i] - nx.back());
            if (left != right) {
                nx.push_back(xs_[i]);
                ny.push_back(ys_[i]);
            }
        }
        nx.push_back(xs_.back());
        ny.push_back(ys_.back());
        xs_ = std::move(nx);
        ys_ = std::move(ny);
    }

    std::vector<Rat> xs_, ys_;
};

}  // namespace shadowlab
