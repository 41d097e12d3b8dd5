// Exact rational scalars and directed rational intervals.
//
// All set endpoints, tolerances and map parameters in this library are
// mpq_class rationals; irrational constants enter only as directed
// intervals [lo, hi] with rational endpoints.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace shadowlab {

using Rat = mpq_class;
using Int = mpz_class;

inline Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline Int rat_ceil(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

// Representative of r mod 1 in [0, 1).
inline Rat mod1(const Rat& r) {
    Rat m = r - Rat(rat_floor(r));
    return m;
}

// mpq arithmetic requires canonical operands; route every non-literal
// numerator/denominator pair through here.
inline Rat rat_frac(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}
inline Rat rat_frac(long num, long den) { return rat_frac(Int(num), Int(den)); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

// Canonical reduced string, always "p/q".
inline std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Accepts "p", "p/q" and plain decimals ("0.25", "-1.5").
inline Rat parse_rat(const std::string& text) {
    auto fail = [&]() -> Rat {
        throw std::invalid_argument("not a rational: '" + text + "'");
    };
    if (text.empty()) fail();
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::size_t& p) {
        std::string d;
        while (p < text.size() && text[p] >= '0' && text[p] <= '9') d += text[p++];
        return d;
    };
    std::string whole = digits(pos);
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::string frac = digits(pos);
        if (pos != text.size() || (whole.empty() && frac.empty())) fail();
        Rat num(whole.empty() ? "0" : whole);
        if (!frac.empty()) {
            Int den(1);
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            num += Rat(Int(frac), den);
        }
        num.canonicalize();
        return neg ? Rat(-num) : num;
    }
    if (whole.empty()) fail();
    if (pos == text.size()) {
        Rat r(whole);
        return neg ? Rat(-r) : r;
    }
    if (text[pos] != '/') fail();
    ++pos;
    std::string den = digits(pos);
    if (den.empty() || pos != text.size()) fail();
    Int num{whole}, denom{den};
    if (denom == 0) fail();
    Rat r = rat_frac(num, denom);
    return neg ? Rat(-r) : r;
}

// Directed interval with rational endpoints; degenerate intervals are exact
// values. Arithmetic is outer (never discards a possible value).
struct RatInterval {
    Rat lo, hi;

    RatInterval() : lo(0), hi(0) {}
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("interval endpoints out of order");
    }
    static RatInterval point(Rat v) { return RatInterval(v, v); }

    bool is_point() const { return lo == hi; }
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator-() const { return {-hi, -lo}; }
    RatInterval shift(const Rat& t) const { return {lo + t, hi + t}; }
    RatInterval scale(const Rat& s) const {
        return s >= 0 ? RatInterval(lo * s, hi * s) : RatInterval(hi * s, lo * s);
    }
    // Representative translated by an integer so lo lands in [0, 1).
    RatInterval reduced_mod1() const {
        Rat f(rat_floor(lo));
        return {lo - f, hi - f};
    }
};

inline RatInterval rat_interval_abs(const RatInterval& v) {
    if (v.lo >= 0) return v;
    if (v.hi <= 0) return -v;
    return RatInterval(Rat(0), rat_max(-v.lo, v.hi));
}

// Interval parameters serialize as {"enclosure": [lo, hi]}; exact values as
// a bare rational string.
inline std::optional<Rat> exact_value(const RatInterval& v) {
    if (v.is_point()) return v.lo;
    return std::nullopt;
}

}  // namespace shadowlab
