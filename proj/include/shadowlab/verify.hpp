// Finite-horizon decision procedures for shadowing and weak shadowing.
//
// The search branches over symbol choices depth-first in lexicographic
// order, propagating exact feasible arc sets; a branch dies when its set
// empties. Dominated states (contained in an already expanded set at the
// same index) are pruned. Refutations are sound because propagation is
// outer; certificates are sound because every extracted orbit is recomputed
// forward and re-checked against the defining inequalities before being
// reported.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arcset.hpp"
#include "orbit.hpp"
#include "rational.hpp"
#include "space.hpp"
#include "system.hpp"
#include "word.hpp"

namespace shadowlab {

enum class Verdict { certified, refuted, inconclusive };
enum class Method { exact_arcset, rotation_dp, grid_lipschitz };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::refuted: return "refuted";
        default: return "inconclusive";
    }
}

inline std::string method_name(Method m) {
    switch (m) {
        case Method::exact_arcset: return "exact-arcset";
        case Method::rotation_dp: return "rotation-dp";
        default: return "grid-lipschitz";
    }
}

struct VerificationOutcome {
    Verdict verdict = Verdict::inconclusive;
    Method method = Method::exact_arcset;
    long horizon = 0;  // certified: checked horizon; refuted: least infeasible level
    Rat epsilon;
    std::optional<OrbitSegment> certificate;
    std::optional<Rat> margin;  // certified: epsilon minus the worst distance
    std::optional<Rat> resolution;
    std::uint64_t nodes = 0;
    std::string note;
};

struct FeasibleState {
    ArcSet set;
    long index = 0;
    std::vector<int> word;
};

constexpr std::uint64_t default_node_budget = 1'000'000;

namespace detail {

struct SearchProblem {
    const IFSystem* sys;
    // constraint set at index n, n in [0, horizon]
    std::function<const ArcSet&(long)> constraint;
    long horizon;
    std::uint64_t budget;
    // recompute + recheck an extracted candidate; margin on success
    std::function<std::optional<Rat>(const OrbitSegment&)> revalidate;
};

// Pull an orbit back through the surviving branch: sample the last set and
// chase preimages through the stored path sets.
inline std::optional<OrbitSegment> extract_orbit(const SearchProblem& prob,
                                                 const std::vector<ArcSet>& path,
                                                 const std::vector<int>& word) {
    const IFSystem& sys = *prob.sys;
    long h = static_cast<long>(word.size());
    std::vector<Point> rev;
    rev.push_back(path.back().sample_point());
    for (long d = h - 1; d >= 0; --d) {
        auto prev = sys.map(word[static_cast<std::size_t>(d)])
                        .preimage_in(rev.back(), path[static_cast<std::size_t>(d)]);
        if (!prev) return std::nullopt;
        rev.push_back(*prev);
    }
    OrbitSegment seg = orbit(sys, SymbolWord::finite(word), rev.back(), h);
    return seg;
}

inline VerificationOutcome branch_search(const SearchProblem& prob) {
    VerificationOutcome out;
    out.epsilon = Rat(0);  // caller fills
    out.method = Method::exact_arcset;

    struct Frame {
        ArcSet set;
        int next_symbol = 0;
    };

    const IFSystem& sys = *prob.sys;
    std::vector<Frame> stack;
    std::vector<int> word;
    std::vector<std::vector<ArcSet>> expanded(static_cast<std::size_t>(prob.horizon) + 1);
    long deepest = -1;
    bool unvalidated_survivor = false;

    ArcSet root = prob.constraint(0);
    if (root.is_empty()) {
        out.verdict = Verdict::refuted;
        out.horizon = 0;
        return out;
    }
    stack.push_back({std::move(root), 0});

    while (!stack.empty()) {
        Frame& top = stack.back();
        long depth = static_cast<long>(stack.size()) - 1;
        if (depth > deepest) deepest = depth;

        if (depth == prob.horizon) {
            std::vector<ArcSet> path;
            path.reserve(stack.size());
            for (const auto& f : stack) path.push_back(f.set);
            auto cand = extract_orbit(prob, path, word);
            if (cand) {
                auto margin = prob.revalidate(*cand);
                if (margin) {
                    out.verdict = Verdict::certified;
                    out.horizon = prob.horizon;
                    out.certificate = std::move(*cand);
                    out.margin = std::move(*margin);
                    return out;
                }
            }
            unvalidated_survivor = true;
            stack.pop_back();
            if (!word.empty()) word.pop_back();
            continue;
        }

        if (top.next_symbol == 0) {
            // dominated-state pruning against already expanded sets here
            bool dominated = false;
            for (const auto& prev : expanded[static_cast<std::size_t>(depth)])
                if (prev.contains_set(top.set)) {
                    dominated = true;
                    break;
                }
            if (dominated) {
                stack.pop_back();
                if (!word.empty()) word.pop_back();
                continue;
            }
            // bounded memory for the pruning lists; skipping entries only
            // weakens pruning, never the verdict
            if (expanded[static_cast<std::size_t>(depth)].size() < 512)
                expanded[static_cast<std::size_t>(depth)].push_back(top.set);
            if (++out.nodes >= prob.budget) {
                out.verdict = Verdict::inconclusive;
                out.horizon = prob.horizon;
                out.note = "node budget exhausted";
                return out;
            }
        }

        if (top.next_symbol >= sys.arity()) {
            stack.pop_back();
            if (!word.empty()) word.pop_back();
            continue;
        }

        int sym = top.next_symbol++;
        ArcSet child = sys.map(sym).image(top.set).intersect(prob.constraint(depth + 1));
        if (child.is_empty()) continue;
        word.push_back(sym);
        stack.push_back({std::move(child), 0});
    }

    if (unvalidated_survivor) {
        out.verdict = Verdict::inconclusive;
        out.horizon = prob.horizon;
        out.note = "survivor found but enclosure widths left its certificate undecided";
        return out;
    }
    out.verdict = Verdict::refuted;
    out.horizon = deepest + 1;
    return out;
}

}  // namespace detail

// Distance profile checks used both internally and as the independent
// re-validation entry points.

// max_n d(x_n, y_n) <= eps, indexwise; margin = eps - worst.
inline std::optional<Rat> revalidate_shadowing(const IFSystem& sys, const PseudoOrbit& pseudo,
                                               const Rat& eps, const OrbitSegment& cert) {
    if (cert.points.size() < pseudo.points.size()) return std::nullopt;
    auto recomputed = orbit(sys, cert.word, cert.points.front(), cert.steps());
    Rat worst(0);
    for (std::size_t n = 0; n < pseudo.points.size(); ++n)
        worst = rat_max(worst, dist(recomputed.points[n], pseudo.points[n]).hi);
    if (worst > eps) return std::nullopt;
    return eps - worst;
}

// every certificate point within eps of the pseudo-orbit's point set.
inline std::optional<Rat> revalidate_weak(const IFSystem& sys,
                                          const std::vector<Point>& pseudo_points,
                                          const Rat& eps, const OrbitSegment& cert) {
    auto recomputed = orbit(sys, cert.word, cert.points.front(), cert.steps());
    Rat worst(0);
    for (const auto& y : recomputed.points) {
        Rat best(-1);
        for (const auto& x : pseudo_points) {
            Rat d = dist(y, x).hi;
            if (best < 0 || d < best) best = d;
        }
        worst = rat_max(worst, best);
    }
    if (worst > eps) return std::nullopt;
    return eps - worst;
}

// Does an orbit stay indexwise within eps of the pseudo-orbit up to the
// horizon? horizon defaults to the pseudo-orbit length and cannot exceed it.
inline VerificationOutcome check_shadowing(const IFSystem& sys, const PseudoOrbit& pseudo,
                                           const Rat& eps,
                                           std::uint64_t budget = default_node_budget,
                                           long horizon = -1) {
    if (eps <= 0) throw std::invalid_argument("check_shadowing: eps must be positive");
    detail::require_valid(sys, pseudo);
    long n = pseudo.steps();
    long h = horizon < 0 ? n : std::min(horizon, n);

    std::vector<ArcSet> balls;
    balls.reserve(static_cast<std::size_t>(h) + 1);
    for (long i = 0; i <= h; ++i)
        balls.push_back(ball(sys.space(), pseudo.points[static_cast<std::size_t>(i)], eps));

    detail::SearchProblem prob{
        &sys,
        [&](long i) -> const ArcSet& { return balls[static_cast<std::size_t>(i)]; },
        h,
        budget,
        [&](const OrbitSegment& cand) { return revalidate_shadowing(sys, pseudo, eps, cand); }};
    VerificationOutcome out = detail::branch_search(prob);
    out.epsilon = eps;
    return out;
}

// Does an orbit of the queried length stay inside the union of eps-balls
// around the pseudo-orbit's points? horizon may exceed the pseudo-orbit
// length (the constraint set does not change with the index).
inline VerificationOutcome check_weak_shadowing(const IFSystem& sys, const PseudoOrbit& pseudo,
                                                const Rat& eps,
                                                std::uint64_t budget = default_node_budget,
                                                long horizon = -1) {
    if (eps <= 0) throw std::invalid_argument("check_weak_shadowing: eps must be positive");
    detail::require_valid(sys, pseudo);
    long h = horizon < 0 ? pseudo.steps() : horizon;

    ArcSet hull = ArcSet::empty(sys.space().kind);
    for (const auto& x : pseudo.points) hull = hull.unite(ball(sys.space(), x, eps));

    detail::SearchProblem prob{
        &sys,
        [&](long) -> const ArcSet& { return hull; },
        h,
        budget,
        [&](const OrbitSegment& cand) {
            return revalidate_weak(sys, pseudo.points, eps, cand);
        }};
    VerificationOutcome out = detail::branch_search(prob);
    out.epsilon = eps;
    return out;
}

inline nlohmann::ordered_json outcome_to_json(const IFSystem& sys,
                                              const VerificationOutcome& out) {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(out.verdict);
    j["method"] = method_name(out.method);
    j["horizon"] = out.horizon;
    j["epsilon"] = rat_str(out.epsilon);
    if (out.certificate) {
        nlohmann::ordered_json c;
        c["word"] = word_to_json(sys, out.certificate->word, out.certificate->steps());
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (const auto& p : out.certificate->points) pts.push_back(point_to_json(p));
        c["points"] = std::move(pts);
        j["certificate"] = std::move(c);
    } else {
        j["certificate"] = nullptr;
    }
    if (out.margin) j["margin"] = rat_str(*out.margin);
    if (out.resolution) j["resolution"] = rat_str(*out.resolution);
    j["nodes"] = out.nodes;
    if (!out.note.empty()) j["note"] = out.note;
    return j;
}

}  // namespace shadowlab
