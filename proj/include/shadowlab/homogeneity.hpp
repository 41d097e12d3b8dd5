// The system-space metric rho, open covers by arcs, cover-trace families of
// orbits, near-identity perturbations G = {h o f}, and the constructive
// path that turns a pseudo-orbit into an exact orbit of a nearby system and
// checks the resulting containment bounds.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arcset.hpp"
#include "homeo.hpp"
#include "lemmas.hpp"
#include "orbit.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "space.hpp"
#include "system.hpp"
#include "verify.hpp"

namespace shadowlab {

// Strictly-below factor for turning closed bounds into the open ones the
// moduli chains need.
inline const Rat& strict_shrink() {
    static const Rat s = 1 - rat_frac(1, 1L << 30);
    return s;
}

// rho(F, G) = max over symbols of d0(f_s, g_s). The symbolwise (diagonal)
// reading is the one under which rho(F, F) = 0.
inline Rat rho(const IFSystem& F, const IFSystem& G) {
    if (F.space().kind != G.space().kind || F.alphabet() != G.alphabet())
        throw std::invalid_argument("rho: systems must share space and alphabet");
    if (!F.all_invertible() || !G.all_invertible())
        throw std::invalid_argument("rho: systems must consist of homeomorphisms");
    Rat worst(0);
    for (int s = 0; s < F.arity(); ++s)
        worst = rat_max(worst,
                        d0(F.map(s).to_homeomorphism(), G.map(s).to_homeomorphism()));
    return worst;
}

inline Rat min_lower_slope(const IFSystem& F) {
    Rat m = F.map(0).lipschitz_lower();
    for (int s = 1; s < F.arity(); ++s) m = rat_min(m, F.map(s).lipschitz_lower());
    return m;
}

// Rigorous bound on rho(F, {h o f}) that also covers enclosed-parameter
// systems where the exact value is not computable.
inline Rat rho_perturbation_bound(const IFSystem& F, const Homeomorphism& h) {
    Rat base = d0_to_identity(h);
    Rat lower = min_lower_slope(F);
    if (lower <= 0) throw std::invalid_argument("perturbation bound needs invertible maps");
    Rat inv_factor = rat_max(Rat(1), Rat(1) / lower);
    return base * inv_factor;
}

// Largest tau with: d(a,b) < tau implies d(f^-1(a), f^-1(b)) < gamma for
// every symbol (and tau < gamma).
inline Rat tau_for_gamma(const IFSystem& F, const Rat& gamma) {
    if (gamma <= 0) throw std::invalid_argument("tau_for_gamma: gamma must be positive");
    if (!F.all_invertible())
        throw std::invalid_argument("tau_for_gamma: system must consist of homeomorphisms");
    Rat tau = gamma * rat_min(Rat(1), min_lower_slope(F));
    return tau * strict_shrink();
}

inline IFSystem perturb_system(const IFSystem& F, const Homeomorphism& h) {
    if (!F.all_invertible())
        throw std::invalid_argument("perturb_system: system must consist of homeomorphisms");
    std::vector<MapSpec> maps;
    maps.reserve(F.maps().size());
    for (const auto& m : F.maps()) maps.push_back(m.perturbed_by(h));
    return IFSystem(F.space(), F.alphabet(), std::move(maps));
}

// ---------------------------------------------------------------------------
// covers and trace families

struct OpenCover {
    std::vector<ArcSet> sets;  // closed-arc hulls of the open cover elements
    Rat epsilon;

    OpenCover(std::vector<ArcSet> s, Rat eps) : sets(std::move(s)), epsilon(std::move(eps)) {
        if (sets.empty()) throw std::invalid_argument("cover needs at least one set");
        ArcSet u = sets.front();
        for (const auto& v : sets) {
            if (v.is_empty()) throw std::invalid_argument("cover elements must be nonempty");
            if (v.diameter() >= epsilon)
                throw std::invalid_argument("cover element diameter must stay below epsilon");
            u = u.unite(v);
        }
        if (!u.is_full() && !(u.space() == SpaceKind::interval && u.measure() == 1))
            throw std::invalid_argument("cover must exhaust the space");
        if (sets.size() > 20)
            throw std::invalid_argument("trace masks support at most 20 cover elements");
    }

    std::size_t size() const { return sets.size(); }
};

// k overlapping arcs of equal diameter (1/k + eps)/2 < eps centered at j/k.
inline OpenCover uniform_cover(const SpaceDescriptor& space, long k, const Rat& eps) {
    if (k < 1) throw std::invalid_argument("cover size must be positive");
    if (eps <= rat_frac(1, k))
        throw std::invalid_argument("eps too small: k arcs of diameter < eps cannot cover");
    Rat diameter = (rat_frac(1, k) + eps) / 2;
    Rat radius = diameter / 2;
    std::vector<ArcSet> sets;
    if (space.kind == SpaceKind::circle) {
        for (long j = 0; j < k; ++j) {
            Rat c = rat_frac(j, k);
            sets.push_back(ArcSet::arc(space.kind, c - radius, c + radius));
        }
    } else {
        for (long j = 0; j <= k; ++j) {
            Rat c = rat_frac(j, k);
            sets.push_back(ArcSet::arc(space.kind, rat_max(Rat(0), c - radius),
                                       rat_min(Rat(1), c + radius)));
        }
    }
    return OpenCover(std::move(sets), eps);
}

using TraceMask = std::uint32_t;

struct TraceFamily {
    std::set<TraceMask> families;  // downward closed
    long horizon = 0;
    std::uint64_t system_hash = 0;
    bool budget_exhausted = false;  // families is always a lower bound of the
                                    // true J; this flags an early stop
    std::map<TraceMask, OrbitSegment> witnesses;

    bool contains(TraceMask m) const { return families.count(m) != 0; }
    bool subset_of(const TraceFamily& o) const {
        for (TraceMask m : families)
            if (!o.contains(m)) return false;
        return true;
    }
    bool equals(const TraceFamily& o) const { return families == o.families; }
};

inline TraceMask cover_mask(const OpenCover& cover, const Point& p) {
    TraceMask m = 0;
    for (std::size_t j = 0; j < cover.size(); ++j) {
        bool in = p.is_exact() ? cover.sets[j].contains(p.value())
                               : cover.sets[j].contains_enclosure(p.pos);
        if (in) m |= TraceMask(1) << j;
    }
    return m;
}

// Enumerates orbit segments over an eps/4 net of initial points and all
// words up to the horizon (budget = map applications), recording which
// cover elements each visits. Deterministic; the result is the downward
// closure of the observed index sets.
inline TraceFamily trace_family(const IFSystem& sys, const OpenCover& cover, long horizon,
                                std::uint64_t budget = 4'000'000) {
    TraceFamily out;
    out.horizon = horizon;
    out.system_hash = sys.hash();
    std::set<TraceMask> observed;
    std::uint64_t spent = 0;

    std::vector<Point> net = eps_net(sys.space(), cover.epsilon / 4);
    std::vector<int> word;
    std::vector<Point> pts;

    auto record = [&](TraceMask m) {
        if (observed.insert(m).second) {
            OrbitSegment w;
            w.points = pts;
            w.word = SymbolWord::finite(word);
            out.witnesses.emplace(m, std::move(w));
        }
    };

    // depth-first over the word tree, sharing orbit prefixes
    auto dfs = [&](auto&& self, TraceMask mask) -> bool {
        if (static_cast<long>(word.size()) == horizon) {
            record(mask);
            return true;
        }
        for (int s = 0; s < sys.arity(); ++s) {
            if (spent >= budget) {
                record(mask);
                return false;
            }
            ++spent;
            word.push_back(s);
            pts.push_back(sys.map(s).apply(pts.back()));
            bool ok = self(self, mask | cover_mask(cover, pts.back()));
            pts.pop_back();
            word.pop_back();
            if (!ok) return false;
        }
        return true;
    };

    for (const auto& p0 : net) {
        pts.assign(1, p0);
        word.clear();
        if (!dfs(dfs, cover_mask(cover, p0))) {
            out.budget_exhausted = true;
            break;
        }
    }

    for (TraceMask m : observed) {
        TraceMask s = m;
        for (;;) {
            out.families.insert(s);
            if (s == 0) break;
            s = (s - 1) & m;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// genericity probe

struct ProbeViolation {
    int trial = 0;
    std::string direction;  // which inclusion failed
    TraceMask missing = 0;
};

struct ProbeReport {
    Rat gamma;
    int trials = 0;
    int equal_count = 0;
    int f_subset_g_count = 0;
    std::vector<ProbeViolation> violations;
    std::vector<Rat> rho_bounds;  // per trial
};

// Samples near-identity perturbations G with rho(F, G) < gamma and compares
// trace families at the given horizon. Honest empirics: equality claims mean
// "no violation found at this net, horizon and budget".
inline ProbeReport genericity_probe(const IFSystem& F, const OpenCover& cover,
                                    const Rat& gamma, int trials, long horizon,
                                    std::uint64_t budget = 4'000'000,
                                    std::uint64_t seed = 1) {
    if (gamma < 0) throw std::invalid_argument("probe: gamma must be nonnegative");
    ProbeReport rep;
    rep.gamma = gamma;
    rep.trials = trials;
    TraceFamily jf = trace_family(F, cover, horizon, budget);

    Rat bound = gamma == 0 ? Rat(0)
                           : gamma * rat_min(Rat(1), min_lower_slope(F)) * strict_shrink() / 2;

    struct TrialResult {
        bool equal = false;
        bool f_subset_g = false;
        Rat rho_bound;
        std::vector<ProbeViolation> violations;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));

    Rng base(seed);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng = base.fork(static_cast<std::uint64_t>(t));
        Homeomorphism h = random_small_homeo(rng, F.space(), bound);
        IFSystem G = perturb_system(F, h);
        TrialResult& r = results[t];
        r.rho_bound = rho_perturbation_bound(F, h);
        TraceFamily jg = trace_family(G, cover, horizon, budget);
        r.f_subset_g = jf.subset_of(jg);
        r.equal = r.f_subset_g && jg.subset_of(jf);
        if (!r.f_subset_g)
            for (TraceMask m : jf.families)
                if (!jg.contains(m))
                    r.violations.push_back({static_cast<int>(t), "J_F not in J_G", m});
        if (!jg.subset_of(jf))
            for (TraceMask m : jg.families)
                if (!jf.contains(m))
                    r.violations.push_back({static_cast<int>(t), "J_G not in J_F", m});
    });

    for (auto& r : results) {
        rep.equal_count += r.equal ? 1 : 0;
        rep.f_subset_g_count += r.f_subset_g ? 1 : 0;
        rep.rho_bounds.push_back(r.rho_bound);
        for (auto& v : r.violations) rep.violations.push_back(v);
    }
    return rep;
}

inline nlohmann::ordered_json probe_report_to_json(const ProbeReport& rep) {
    nlohmann::ordered_json j;
    j["gamma"] = rat_str(rep.gamma);
    j["trials"] = rep.trials;
    j["equal"] = rep.equal_count;
    j["F_subset_G"] = rep.f_subset_g_count;
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for (const auto& viol : rep.violations) {
        nlohmann::ordered_json e;
        e["trial"] = viol.trial;
        e["direction"] = viol.direction;
        e["mask"] = viol.missing;
        v.push_back(std::move(e));
    }
    j["violations"] = std::move(v);
    return j;
}

// ---------------------------------------------------------------------------
// constructive weak-shadowing reconstruction

struct WeakShadowReconstruction {
    long truncation_k = 0;
    PseudoOrbit perturbed;       // pairwise-distinct 2*delta pseudo-orbit y
    Homeomorphism connector;     // h with h(f_{w_i}(y_i)) = y_{i+1}
    IFSystem perturbed_system;   // G = {h o f}
    OrbitSegment exact_orbit;    // y as an orbit z of G
    Rat step_error;              // sup step defect of z in G (0 when exact)
    Rat rho_bound;               // rigorous bound on rho(F, G)
    std::optional<OrbitSegment> trace_partner;  // orbit z' of F over the cover
    std::string trace_relation;  // equal | superset | subset | none
    std::optional<Rat> containment;  // sup over z' points of distance to the input
};

// Executes the constructive chain: truncate the pseudo-orbit to a covering
// prefix, perturb it to distinct points, connect image to successor by a
// small homeomorphism, and read the perturbed sequence off as an exact
// orbit of G = {h o f}. Then hunts for an orbit of F itself with the same
// cover trace and measures how far it strays from the input points.
inline WeakShadowReconstruction reconstruct_weak_witness(const IFSystem& F,
                                                         const OpenCover& cover,
                                                         const PseudoOrbit& pseudo,
                                                         const Rat& gamma, long horizon,
                                                         std::uint64_t budget = 4'000'000) {
    if (!F.all_invertible())
        throw std::invalid_argument("reconstruction needs a system of homeomorphisms");
    detail::require_valid(F, pseudo);
    WeakShadowReconstruction rec{.perturbed = {},
                                 .connector = Homeomorphism::identity(F.space().kind),
                                 .perturbed_system = F,
                                 .exact_orbit = {},
                                 .step_error = Rat(0),
                                 .rho_bound = Rat(0)};

    // truncation prefix whose eps-neighborhood already covers every point
    const Rat& eps = cover.epsilon;
    long n = pseudo.steps();
    long k = -1;
    for (long cand = 0; cand <= n && k < 0; ++cand) {
        bool covered = true;
        for (const auto& p : pseudo.points) {
            bool near = false;
            for (long j = 0; j <= cand && !near; ++j)
                near = dist(p, pseudo.points[static_cast<std::size_t>(j)]).hi < eps;
            if (!near) {
                covered = false;
                break;
            }
        }
        if (covered) k = cand;
    }
    rec.truncation_k = k;

    PseudoOrbit truncated;
    truncated.points.assign(pseudo.points.begin(),
                            pseudo.points.begin() + static_cast<long>(k) + 1);
    truncated.delta = pseudo.delta;
    truncated.witness = pseudo.witness;
    if (k == 0) {
        // single point: nothing to connect, the trivial orbit works
        truncated.points.push_back(
            F.map(pseudo.witness.at(0)).apply(truncated.points[0]));
        k = 1;
        rec.truncation_k = 0;
    }

    Rat tau = tau_for_gamma(F, gamma);
    if (2 * pseudo.delta > tau)
        throw std::invalid_argument(
            "pseudo-orbit delta exceeds the connection modulus tau(gamma)");

    rec.perturbed = distinct_perturbation(F, truncated, eps, /*distinct_images=*/true);
    const auto& y = rec.perturbed.points;

    std::vector<std::pair<Point, Point>> pairs;
    Rat width_slack(0);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        Point img = F.map(rec.perturbed.witness.at(static_cast<long>(i))).apply(y[i]);
        width_slack = rat_max(width_slack, img.pos.width());
        pairs.emplace_back(Point::exact(img.mid(), F.space().kind), y[i + 1]);
    }
    rec.connector = connecting_homeomorphism(F.space(), pairs, tau);
    rec.perturbed_system = perturb_system(F, rec.connector);
    rec.rho_bound = rho_perturbation_bound(F, rec.connector);

    rec.exact_orbit.points = y;
    rec.exact_orbit.word =
        SymbolWord::finite(rec.perturbed.witness.prefix(static_cast<long>(y.size()) - 1));
    rec.step_error = witness_margin(rec.perturbed_system, y, rec.exact_orbit.word);
    if (width_slack == 0 && rec.step_error != 0)
        throw std::logic_error("reconstruction: perturbed sequence is not an exact orbit");

    // orbit of F with the same cover trace as z
    TraceMask zmask = 0;
    for (const auto& p : y) zmask |= cover_mask(cover, p);
    TraceFamily jf = trace_family(F, cover, horizon, budget);
    const OrbitSegment* partner = nullptr;
    std::string relation = "none";
    if (auto it = jf.witnesses.find(zmask); it != jf.witnesses.end()) {
        partner = &it->second;
        relation = "equal";
    }
    if (!partner) {
        for (const auto& [m, w] : jf.witnesses)
            if ((m & zmask) == zmask) {
                partner = &w;
                relation = "superset";
                break;
            }
    }
    if (!partner) {
        int best_bits = -1;
        for (const auto& [m, w] : jf.witnesses) {
            if ((m | zmask) != zmask) continue;
            int bits = __builtin_popcount(m);
            if (bits > best_bits) {
                best_bits = bits;
                partner = &w;
                relation = "subset";
            }
        }
    }
    rec.trace_relation = relation;
    if (partner) {
        rec.trace_partner = *partner;
        Rat worst(0);
        for (const auto& zp : partner->points) {
            Rat best(-1);
            for (const auto& xp : pseudo.points) {
                Rat d = dist(zp, xp).hi;
                if (best < 0 || d < best) best = d;
            }
            worst = rat_max(worst, best);
        }
        rec.containment = worst;
    }
    return rec;
}

}  // namespace shadowlab
