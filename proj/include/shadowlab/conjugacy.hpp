// Topological conjugacy for IFS: G = {h o f o h^-1}, with the exact slope
// moduli of h used to transport tolerances, pseudo-orbits and verdicts
// between conjugate systems.

#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "homeo.hpp"
#include "orbit.hpp"
#include "rational.hpp"
#include "system.hpp"
#include "verify.hpp"

namespace shadowlab {

struct ConjugacyMap {
    Homeomorphism h;
    Rat max_slope;      // optimal forward modulus for PL maps
    Rat max_inv_slope;  // = 1 / min forward slope

    static ConjugacyMap make(Homeomorphism homeo) {
        ConjugacyMap c{std::move(homeo), Rat(0), Rat(0)};
        c.max_slope = c.h.max_slope();
        c.max_inv_slope = Rat(1) / c.h.min_slope();
        return c;
    }

    bool isometry() const { return max_slope == 1 && max_inv_slope == 1; }
};

namespace detail {

inline std::optional<Rat> as_rotation(const Homeomorphism& h) {
    if (h.space() != SpaceKind::circle || h.degree() != 1 || h.lift().pieces() != 1)
        return std::nullopt;
    return h.lift().ys().front();
}

inline bool is_reflection(const Homeomorphism& h) {
    return h.space() == SpaceKind::circle && h.degree() == -1 && h.lift().pieces() == 1 &&
           h.lift().ys().front() == 0;
}

}  // namespace detail

// g = h o f o h^-1 per symbol, exact. Only h must be a homeomorphism; maps
// with enclosed offsets stay representable only under rotation/reflection
// conjugacies.
inline IFSystem conjugate(const IFSystem& F, const ConjugacyMap& c) {
    if (c.h.space() != F.space().kind)
        throw std::invalid_argument("conjugate: space mismatch");
    Homeomorphism hinv = c.h.inverse();
    std::vector<MapSpec> out;
    for (const auto& f : F.maps()) {
        if (auto rot = f.rotation_offset(); rot && !rot->is_point()) {
            if (detail::as_rotation(c.h)) {
                out.push_back(f);  // rotations commute
                continue;
            }
            if (detail::is_reflection(c.h)) {
                RatInterval negated = -*rot;
                out.push_back(MapSpec::affine_circle(Int(1), negated.reduced_mod1()));
                continue;
            }
            throw std::invalid_argument(
                "conjugate: enclosed rotation admits only rotation/reflection conjugacies");
        }
        auto [fpl, fdeg] = f.pl_form();
        PiecewiseLinear composed =
            hinv.lift().then(fpl, fdeg).then(c.h.lift(), c.h.degree());
        out.push_back(MapSpec::piecewise_linear(F.space().kind, std::move(composed)));
    }
    return IFSystem(F.space(), F.alphabet(), std::move(out));
}

struct TransportModuli {
    Rat eps1;       // d(a,b) < eps1 forces d(h(a), h(b)) < eps
    Rat inv_slope;  // d(x,y) < delta1 / inv_slope forces d(h^-1 x, h^-1 y) < delta1

    Rat delta_for(const Rat& delta1) const { return delta1 / inv_slope; }
};

inline TransportModuli transport_moduli(const ConjugacyMap& c, const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("transport_moduli: eps must be positive");
    return TransportModuli{eps / c.max_slope, c.max_inv_slope};
}

struct TransportedOutcome {
    VerificationOutcome for_g;     // verdict stated for G
    VerificationOutcome f_level;   // the underlying run on F
    Rat eps1;                      // tolerance used on F
    Rat delta1;                    // pulled-back pseudo-orbit tolerance
    Rat refutation_eps;            // tolerance at which a refutation binds G
};

// Pulls the pseudo-orbit of G back through h^-1, decides weak shadowing for
// F at the transported tolerance, and pushes any certificate forward with
// an independent re-check against G. Refutations bind G at
// eps1 * min_slope(h) (equal to eps for isometries).
inline TransportedOutcome transport_verdict(const IFSystem& F, const IFSystem& G,
                                            const ConjugacyMap& c, const PseudoOrbit& pseudo,
                                            const Rat& eps,
                                            std::uint64_t budget = default_node_budget,
                                            long horizon = -1) {
    if (!(G == conjugate(F, c)))
        throw std::invalid_argument("transport_verdict: G is not conjugate(F, c)");
    detail::require_valid(G, pseudo);

    TransportModuli mod = transport_moduli(c, eps);
    Homeomorphism hinv = c.h.inverse();

    PseudoOrbit pulled;
    pulled.delta = pseudo.delta * c.max_inv_slope;
    pulled.witness = pseudo.witness;
    pulled.index_offset = pseudo.index_offset;
    pulled.points.reserve(pseudo.points.size());
    for (const auto& x : pseudo.points) pulled.points.push_back(hinv.eval_point(x));

    TransportedOutcome out{VerificationOutcome{}, VerificationOutcome{}, mod.eps1,
                           pulled.delta, mod.eps1 * c.h.min_slope()};
    out.f_level = check_weak_shadowing(F, pulled, mod.eps1, budget, horizon);
    out.for_g = out.f_level;
    out.for_g.epsilon = eps;
    out.for_g.certificate.reset();
    out.for_g.margin.reset();

    if (out.f_level.verdict == Verdict::certified) {
        const OrbitSegment& yf = *out.f_level.certificate;
        OrbitSegment pushed =
            orbit(G, yf.word, c.h.eval_point(yf.points.front()), yf.steps());
        auto margin = revalidate_weak(G, pseudo.points, eps, pushed);
        if (!margin) {
            out.for_g.verdict = Verdict::inconclusive;
            out.for_g.note = "pushed certificate failed the direct re-check";
            return out;
        }
        out.for_g.certificate = std::move(pushed);
        out.for_g.margin = std::move(*margin);
        return out;
    }
    if (out.f_level.verdict == Verdict::refuted) {
        out.for_g.epsilon = out.refutation_eps;
        return out;
    }
    return out;
}

}  // namespace shadowlab
