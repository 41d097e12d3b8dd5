// Deterministic seeded generator (splitmix64). The standard <random>
// distributions are not bit-stable across library implementations, so all
// randomized commands draw through this instead.

#pragma once

#include <cstdint>
#include <vector>

#include "rational.hpp"

namespace shadowlab {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) via rejection (n > 0).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~0ull - (~0ull % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    bool coin() { return next_u64() & 1u; }

    // Uniform rational k/2^32 with k in [0, 2^32).
    Rat unit() {
        Rat r(Int(static_cast<unsigned long>(next_u64() >> 32)), Int(1) << 32);
        r.canonicalize();
        return r;
    }

    // Uniform rational in [lo, hi] on the 2^32 grid.
    Rat between(const Rat& lo, const Rat& hi) { return lo + (hi - lo) * unit(); }

    // Uniform rational in (-bound, bound), symmetric, never hitting the ends.
    Rat jitter(const Rat& bound) {
        Rat u(Int(static_cast<unsigned long>(next_u64() >> 33)), Int(1) << 31);
        u.canonicalize();  // u in [0, 1)
        Rat signed_u = coin() ? u : Rat(-u);
        return bound * signed_u * Rat(Int((Int(1) << 31) - 1), Int(1) << 31);
    }

    // Derive an independent stream (for per-trial determinism).
    Rng fork(std::uint64_t salt) const {
        Rng child(state_ ^ (0xA0761D6478BD642Full * (salt + 1)));
        child.next_u64();
        return child;
    }

  private:
    std::uint64_t state_;
};

}  // namespace shadowlab
