#include <CLI11.hpp>

#include <optional>
#include <string>

#include "shadowlab/cli.hpp"

namespace {

// CLI11 stores strings; exact rationals are parsed after flag handling so a
// bad value reports as an input error (65), not a usage error.
struct RawOpts {
    std::string eps, delta, gamma, alpha, width, cover_eps, x0;
};

void parse_rationals(const RawOpts& raw, shadowlab::RunConfig& cfg) {
    auto set = [](const std::string& s, std::optional<shadowlab::Rat>& out) {
        if (!s.empty()) out = shadowlab::parse_rat(s);
    };
    set(raw.eps, cfg.eps);
    set(raw.delta, cfg.delta);
    set(raw.gamma, cfg.gamma);
    set(raw.alpha, cfg.alpha);
    set(raw.width, cfg.enclosure_width);
    set(raw.cover_eps, cfg.cover_eps);
    set(raw.x0, cfg.x0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-horizon shadowing verification for iterated function systems"};
    app.require_subcommand(1);

    shadowlab::RunConfig cfg;
    RawOpts raw;
    long seed = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--system", cfg.system_path, "system descriptor JSON");
        sub->add_option("--pseudo", cfg.pseudo_path, "pseudo-orbit JSON");
        sub->add_option("--eps", raw.eps, "tolerance epsilon (rational)");
        sub->add_option("--delta", raw.delta, "pseudo-orbit tolerance delta (rational)");
        sub->add_option("--horizon", cfg.horizon, "finite horizon (steps)");
        sub->add_option("--budget", cfg.budget, "search node budget");
        sub->add_option("--seed", seed, "seed for randomized commands");
        sub->add_option("--format", cfg.format, "json or csv");
        sub->add_option("--out", cfg.out_path, "report path (default: stdout)");
    };

    auto* sim = app.add_subcommand("simulate", "iterate a word from an initial point");
    add_common(sim);
    sim->add_option("--x0", raw.x0, "initial point (rational)");
    sim->add_option("--word", cfg.word, "symbol ids, head of the word")->delimiter(',');
    sim->add_option("--cycle", cfg.cycle, "symbol ids repeated forever")->delimiter(',');

    auto* val = app.add_subcommand("validate", "find a pseudo-orbit witness word");
    add_common(val);

    auto* chk = app.add_subcommand("check-shadowing", "decide finite-horizon shadowing");
    add_common(chk);
    chk->add_option("--method", cfg.method, "auto, branch or rotation-dp");

    auto* wk = app.add_subcommand("check-weak-shadowing",
                                  "decide finite-horizon weak shadowing");
    add_common(wk);

    auto* cx = app.add_subcommand(
        "counterexample",
        "packaged run: shadowing refuted, weak shadowing certified");
    add_common(cx);
    cx->add_option("--alpha", raw.alpha, "rational generator offset");
    cx->add_option("--enclosure-width", raw.width, "irrational offset enclosure width");
    cx->add_option("--weak-horizon", cfg.weak_horizon, "weak-shadowing horizon");

    auto* rt = app.add_subcommand("ratios", "contraction and expansion ratios");
    add_common(rt);

    auto* pg = app.add_subcommand("probe-genericity",
                                  "perturbation trials comparing cover traces");
    add_common(pg);
    pg->add_option("--gamma", raw.gamma, "perturbation radius (rational)");
    pg->add_option("--trials", cfg.trials, "number of perturbation trials");
    pg->add_option("--cover-size", cfg.cover_size, "number of cover arcs");
    pg->add_option("--cover-eps", raw.cover_eps, "cover diameter bound (rational)");

    auto* tr = app.add_subcommand("transport", "verdict via a conjugate system");
    add_common(tr);
    tr->add_option("--conjugacy", cfg.conjugacy_path, "homeomorphism breakpoint JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return shadowlab::exit_code::usage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    try {
        parse_rationals(raw, cfg);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return shadowlab::exit_code::bad_input;
    }
    return shadowlab::run(cfg);
}
