// Command pipelines behind the CLI: each run reads exact-rational inputs,
// executes one named pipeline and emits a byte-stable report. Exit codes:
// 0 certified/success, 1 refuted, 2 inconclusive, 64 usage, 65 bad input.

#pragma once

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "conjugacy.hpp"
#include "homogeneity.hpp"
#include "lemmas.hpp"
#include "orbit.hpp"
#include "rational.hpp"
#include "rotation_dp.hpp"
#include "system.hpp"
#include "verify.hpp"

namespace shadowlab {

namespace exit_code {
constexpr int ok = 0;
constexpr int refuted = 1;
constexpr int inconclusive = 2;
constexpr int usage = 64;
constexpr int bad_input = 65;
}  // namespace exit_code

struct RunConfig {
    std::string command;
    std::string system_path;
    std::string pseudo_path;
    std::string conjugacy_path;
    std::string out_path;  // empty: stdout
    std::string format = "json";
    std::string method = "auto";  // check-shadowing: auto | branch | rotation-dp
    std::optional<Rat> eps;
    std::optional<Rat> delta;
    std::optional<Rat> gamma;
    std::optional<Rat> alpha;          // counterexample generator offset
    std::optional<Rat> enclosure_width;
    std::optional<Rat> cover_eps;
    std::optional<Rat> x0;
    long horizon = -1;
    long weak_horizon = 100;
    long cover_size = 4;
    int trials = 20;
    std::uint64_t budget = default_node_budget;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> word;   // symbol ids for simulate
    std::vector<std::string> cycle;  // optional repeating tail
};

namespace detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

inline IFSystem load_system(const RunConfig& cfg) {
    if (cfg.system_path.empty()) throw UsageError("--system is required");
    try {
        return IFSystem::from_json(load_json(cfg.system_path));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad system descriptor " + cfg.system_path + ": " +
                                    e.what());
    }
}

inline PseudoOrbit load_pseudo(const RunConfig& cfg, const IFSystem& sys) {
    if (cfg.pseudo_path.empty()) throw UsageError("--pseudo is required");
    try {
        return pseudo_from_json(sys, load_json(cfg.pseudo_path));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad pseudo-orbit file " + cfg.pseudo_path + ": " +
                                    e.what());
    }
}

inline void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write file: " + cfg.out_path);
    out << text;
}

inline void emit_json(const RunConfig& cfg, const nlohmann::ordered_json& j) {
    emit(cfg, j.dump(2) + "\n");
}

inline int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::certified: return exit_code::ok;
        case Verdict::refuted: return exit_code::refuted;
        default: return exit_code::inconclusive;
    }
}

inline Rat require(const std::optional<Rat>& v, const char* flag) {
    if (!v) throw UsageError(std::string(flag) + " is required");
    return *v;
}

inline int cmd_simulate(const RunConfig& cfg) {
    IFSystem sys = load_system(cfg);
    if (!cfg.x0) throw UsageError("--x0 is required");
    if (cfg.horizon < 0) throw UsageError("--horizon is required");
    if (cfg.word.empty() && cfg.cycle.empty()) throw UsageError("--word or --cycle is required");
    std::vector<int> head, cyc;
    for (const auto& id : cfg.word) head.push_back(sys.symbol_index(id));
    for (const auto& id : cfg.cycle) cyc.push_back(sys.symbol_index(id));
    SymbolWord w = cyc.empty() ? SymbolWord::finite(head) : SymbolWord::repeating(head, cyc);
    if (!w.has(cfg.horizon - 1))
        throw std::invalid_argument("word exhausted before the requested horizon");
    OrbitSegment seg = orbit(sys, w, Point::exact(*cfg.x0, sys.space().kind), cfg.horizon);
    nlohmann::ordered_json j;
    j["word"] = word_to_json(sys, seg.word, seg.steps());
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : seg.points) pts.push_back(point_to_json(p));
    j["points"] = std::move(pts);
    emit_json(cfg, j);
    return exit_code::ok;
}

inline int cmd_validate(const RunConfig& cfg) {
    IFSystem sys = load_system(cfg);
    if (cfg.pseudo_path.empty()) throw UsageError("--pseudo is required");
    nlohmann::json raw = load_json(cfg.pseudo_path);
    Rat delta = parse_rat(raw.at("delta").get<std::string>());
    std::vector<Point> pts;
    for (const auto& p : raw.at("points"))
        pts.push_back(point_from_json(sys.space().kind, p));
    auto witness = validate_pseudo_orbit(sys, pts, delta);
    nlohmann::ordered_json j;
    j["delta"] = rat_str(delta);
    if (witness) {
        j["witness"] = word_to_json(sys, *witness, static_cast<long>(pts.size()) - 1);
        j["margin"] = rat_str(witness_margin(sys, pts, *witness));
    } else {
        j["witness"] = nullptr;
    }
    emit_json(cfg, j);
    return witness ? exit_code::ok : exit_code::refuted;
}

inline int cmd_check(const RunConfig& cfg, bool weak) {
    IFSystem sys = load_system(cfg);
    PseudoOrbit pseudo = load_pseudo(cfg, sys);
    Rat eps = require(cfg.eps, "--eps");
    VerificationOutcome out;
    if (weak) {
        out = check_weak_shadowing(sys, pseudo, eps, cfg.budget, cfg.horizon);
    } else if (cfg.method == "rotation-dp") {
        out = rotation_dp_shadowing(sys, pseudo, eps, cfg.budget, cfg.horizon);
    } else if (cfg.method == "branch") {
        out = check_shadowing(sys, pseudo, eps, cfg.budget, cfg.horizon);
    } else if (cfg.method == "auto") {
        bool dp_ok = true;
        try {
            detail::rotation_classes(sys);
        } catch (const std::invalid_argument&) {
            dp_ok = false;
        }
        out = dp_ok ? rotation_dp_shadowing(sys, pseudo, eps, cfg.budget, cfg.horizon)
                    : check_shadowing(sys, pseudo, eps, cfg.budget, cfg.horizon);
    } else {
        throw UsageError("unknown --method (use auto, branch or rotation-dp)");
    }
    emit_json(cfg, outcome_to_json(sys, out));
    return verdict_exit(out.verdict);
}

// Packaged construction: commuting rotations at an irrational enclosure with
// the half-turn twin, fed the periodic orbit of a nearby rational rotation.
// Shadowing dies at a finite horizon while weak shadowing certifies.
inline int cmd_counterexample(const RunConfig& cfg) {
    Rat eps = cfg.eps.value_or(Rat(1, 5));
    Rat delta = cfg.delta.value_or(rat_frac(11, 10000));
    Rat alpha = cfg.alpha.value_or(Rat(13, 21));
    Rat width = cfg.enclosure_width.value_or(rat_frac(1, 1000000000000L));
    long horizon = cfg.horizon < 0 ? 1000 : cfg.horizon;

    RatInterval beta = golden_ratio_conjugate_enclosure(width);
    IFSystem sys = half_shifted_rotation_pair(beta);
    MapSpec generator = MapSpec::affine_circle(Int(1), RatInterval::point(mod1(alpha)));
    PseudoOrbit pseudo = make_pseudo_orbit_from_generator(
        sys, generator, Point::exact(Rat(0), SpaceKind::circle), horizon, delta);

    VerificationOutcome shadow = rotation_dp_shadowing(sys, pseudo, eps, cfg.budget);
    VerificationOutcome weak =
        check_weak_shadowing(sys, pseudo, eps, cfg.budget, cfg.weak_horizon);

    nlohmann::ordered_json j;
    j["system"] = sys.to_json();
    j["alpha"] = rat_str(alpha);
    j["delta"] = rat_str(delta);
    j["beta_enclosure"] =
        nlohmann::ordered_json::array({rat_str(beta.lo), rat_str(beta.hi)});
    j["pseudo_orbit_length"] = static_cast<long>(pseudo.points.size());
    j["shadowing"] = outcome_to_json(sys, shadow);
    j["weak_shadowing"] = outcome_to_json(sys, weak);
    emit_json(cfg, j);

    if (shadow.verdict == Verdict::inconclusive || weak.verdict == Verdict::inconclusive)
        return exit_code::inconclusive;
    bool reproduced = shadow.verdict == Verdict::refuted && weak.verdict == Verdict::certified;
    return reproduced ? exit_code::ok : exit_code::refuted;
}

inline int cmd_ratios(const RunConfig& cfg) {
    IFSystem sys = load_system(cfg);
    SystemRatios r = system_ratios(sys);
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "system,beta,alpha,contracting,expanding\n";
        os << cfg.system_path << "," << rat_str(r.beta) << "," << rat_str(r.alpha) << ","
           << (r.uniformly_contracting ? "true" : "false") << ","
           << (r.uniformly_expanding ? "true" : "false") << "\n";
        emit(cfg, os.str());
        return exit_code::ok;
    }
    if (cfg.format != "json") throw UsageError("--format must be json or csv");
    nlohmann::ordered_json j;
    j["system"] = cfg.system_path;
    j["beta"] = rat_str(r.beta);
    j["alpha"] = rat_str(r.alpha);
    j["contracting"] = r.uniformly_contracting;
    j["expanding"] = r.uniformly_expanding;
    emit_json(cfg, j);
    return exit_code::ok;
}

inline int cmd_probe(const RunConfig& cfg) {
    IFSystem sys = load_system(cfg);
    if (!cfg.seed) throw UsageError("--seed is required for randomized commands");
    Rat gamma = require(cfg.gamma, "--gamma");
    Rat cover_eps = cfg.cover_eps.value_or(Rat(3, 10));
    long horizon = cfg.horizon < 0 ? 8 : cfg.horizon;
    OpenCover cover = uniform_cover(sys.space(), cfg.cover_size, cover_eps);
    ProbeReport rep =
        genericity_probe(sys, cover, gamma, cfg.trials, horizon, cfg.budget, *cfg.seed);
    nlohmann::ordered_json j = probe_report_to_json(rep);
    if (!cfg.pseudo_path.empty()) {
        PseudoOrbit pseudo = load_pseudo(cfg, sys);
        WeakShadowReconstruction rec =
            reconstruct_weak_witness(sys, cover, pseudo, gamma, horizon, cfg.budget);
        nlohmann::ordered_json r;
        r["truncation_k"] = rec.truncation_k;
        r["step_error"] = rat_str(rec.step_error);
        r["rho_bound"] = rat_str(rec.rho_bound);
        r["trace_relation"] = rec.trace_relation;
        r["containment"] = rec.containment ? rat_str(*rec.containment) : "";
        r["containment_limit"] = rat_str(3 * cover.epsilon);
        j["reconstruction"] = std::move(r);
    }
    emit_json(cfg, j);
    return exit_code::ok;
}

inline int cmd_transport(const RunConfig& cfg) {
    IFSystem f = load_system(cfg);
    if (cfg.conjugacy_path.empty()) throw UsageError("--conjugacy is required");
    Homeomorphism h = Homeomorphism::from_json(load_json(cfg.conjugacy_path));
    ConjugacyMap c = ConjugacyMap::make(h);
    IFSystem g = conjugate(f, c);
    PseudoOrbit pseudo = load_pseudo(cfg, g);
    Rat eps = require(cfg.eps, "--eps");
    TransportedOutcome out =
        transport_verdict(f, g, c, pseudo, eps, cfg.budget, cfg.horizon);
    nlohmann::ordered_json j;
    j["eps1"] = rat_str(out.eps1);
    j["delta1"] = rat_str(out.delta1);
    j["refutation_eps"] = rat_str(out.refutation_eps);
    j["for_g"] = outcome_to_json(g, out.for_g);
    j["f_level"] = outcome_to_json(f, out.f_level);
    emit_json(cfg, j);
    return verdict_exit(out.for_g.verdict);
}

}  // namespace detail

inline int run(const RunConfig& cfg) {
    try {
        if (cfg.command == "simulate") return detail::cmd_simulate(cfg);
        if (cfg.command == "validate") return detail::cmd_validate(cfg);
        if (cfg.command == "check-shadowing") return detail::cmd_check(cfg, false);
        if (cfg.command == "check-weak-shadowing") return detail::cmd_check(cfg, true);
        if (cfg.command == "counterexample") return detail::cmd_counterexample(cfg);
        if (cfg.command == "ratios") return detail::cmd_ratios(cfg);
        if (cfg.command == "probe-genericity") return detail::cmd_probe(cfg);
        if (cfg.command == "transport") return detail::cmd_transport(cfg);
        std::cerr << "unknown command: " << cfg.command << "\n";
        return exit_code::usage;
    } catch (const detail::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_code::bad_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::bad_input;
    }
}

}  // namespace shadowlab
