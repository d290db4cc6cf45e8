// Command-line front end: simulate / resolvent / operator / pde / verify.
// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid configuration,
// 3 numeric failure, 4 inconclusive Monte Carlo.

#include <cstdio>
#include <iostream>
#include <list>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlbm/harness.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string seed;
    std::string out;
    std::string threads;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--config", common.config, "key = value configuration file");
    cmd->add_option("--seed", common.seed, "RNG seed (required for random runs)");
    cmd->add_option("--out", common.out, "write the JSON report here (atomic)");
    cmd->add_option("--threads", common.threads, "worker threads (0 = hardware)");
}

// CLI flags override file values; the harness owns parsing and validation,
// so flags are collected verbatim as key/value pairs.
struct Override {
    std::string key;
    std::string value;
    bool set = false;
};

struct Sub {
    CLI::App* cmd = nullptr;
    CommonOpts common;
    std::list<Override> overrides;  // stable addresses for option callbacks
    std::string kind;
};

void add_override(Sub& sub, const char* flag, const char* key, const char* help) {
    sub.overrides.emplace_back();
    Override& o = sub.overrides.back();
    o.key = key;
    sub.cmd
        ->add_option_function<std::string>(
            flag,
            [&o](const std::string& v) {
                o.value = v;
                o.set = true;
            },
            help)
        ->expected(1);
}

int run_experiment(const std::string& kind, const CommonOpts& common,
                   const std::list<Override>& overrides) {
    nlbm::ExperimentConfig cfg;
    if (!common.config.empty()) cfg = nlbm::parse_config_file(common.config);
    cfg.experiment = kind;
    for (const auto& o : overrides)
        if (o.set) nlbm::config_set(cfg, o.key, o.value);
    if (!common.seed.empty()) nlbm::config_set(cfg, "seed", common.seed);
    if (!common.out.empty()) nlbm::config_set(cfg, "out", common.out);
    if (!common.threads.empty()) nlbm::config_set(cfg, "threads", common.threads);

    nlbm::RunReport rep = nlbm::run(cfg);
    std::cout << rep.to_json().dump(2) << std::endl;
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-local skew and sticky Brownian motion toolkit"};
    app.require_subcommand(1);

    std::vector<Sub> subs(5);

    {
        Sub& s = subs[0];
        s.kind = "simulate";
        s.cmd = app.add_subcommand("simulate", "sample process paths to CSV");
        add_common(s.cmd, s.common);
        add_override(s, "--process", "process",
                     "bullet|skew-bullet|sticky|skew-sticky|bm|reflected|skew");
        add_override(s, "--symbol", "symbol",
                     "subordinator key, e.g. stable:alpha=0.5");
        add_override(s, "--nu", "nu", "skew coin bias in (0,1)");
        add_override(s, "--eta", "eta", "stickiness scale > 0");
        add_override(s, "--dt", "dt", "grid step");
        add_override(s, "--horizon", "horizon", "time horizon");
        add_override(s, "--paths", "paths", "number of paths");
        add_override(s, "--x", "x", "starting point");
        add_override(s, "--eps", "eps", "jump truncation level");
        add_override(s, "--bridge", "bridge", "bridge-exact minima (true|false)");
        add_override(s, "--out-csv", "paths_out", "CSV of path values");
        add_override(s, "--excursions", "excursions_out", "CSV excursion log");
    }
    {
        Sub& s = subs[1];
        s.kind = "resolvent";
        s.cmd = app.add_subcommand("resolvent",
                                   "Monte Carlo resolvent against the closed form");
        add_common(s.cmd, s.common);
        add_override(s, "--process", "process", "process kind");
        add_override(s, "--symbol", "symbol", "subordinator key");
        add_override(s, "--nu", "nu", "skew coin bias");
        add_override(s, "--eta", "eta", "stickiness scale");
        add_override(s, "--f", "f", "test function key");
        add_override(s, "--x", "x", "starting point");
        add_override(s, "--lambda", "lambda", "lambda values (comma list)");
        add_override(s, "--paths", "paths", "number of paths");
        add_override(s, "--dt", "dt", "grid step");
        add_override(s, "--horizon", "horizon", "0 = truncation rule");
        add_override(s, "--eps", "eps", "jump truncation level");
        add_override(s, "--bridge", "bridge", "bridge-exact minima");
        add_override(s, "--tol", "tol", "requested tolerance (0 = self-calibrated)");
    }
    {
        Sub& s = subs[2];
        s.kind = "operator";
        s.cmd = app.add_subcommand("operator", "evaluate a non-local operator");
        add_common(s.cmd, s.common);
        add_override(s, "--symbol", "symbol", "subordinator key");
        add_override(s, "--op", "op", "marchaud|caputo");
        add_override(s, "--fn", "fn",
                     "function key (spatial catalog for marchaud, temporal for caputo)");
        add_override(s, "--point", "point", "evaluation point x");
        add_override(s, "--t", "t", "evaluation time (caputo)");
        add_override(s, "--side", "side", "left|right (marchaud)");
    }
    {
        Sub& s = subs[3];
        s.kind = "pde";
        s.cmd = app.add_subcommand("pde",
                                   "evaluate u(t,x) by the representation formula");
        add_common(s.cmd, s.common);
        add_override(s, "--process", "process", "process kind");
        add_override(s, "--symbol", "symbol", "subordinator key");
        add_override(s, "--nu", "nu", "skew coin bias");
        add_override(s, "--eta", "eta", "stickiness scale");
        add_override(s, "--f", "f", "initial datum key");
        add_override(s, "--t", "t", "time");
        add_override(s, "--x", "x", "space point");
    }
    {
        Sub& s = subs[4];
        s.kind = "verify";
        s.cmd = app.add_subcommand("verify", "run a verification suite");
        add_common(s.cmd, s.common);
        add_override(s, "suite", "suite",
                     "conservativity|appendix|interface|classical|all");
        add_override(s, "--grid", "grid",
                     "interface grid CSV (kind,nu,alpha,eta,lambda,f)");
        add_override(s, "--symbol", "symbol", "subordinator key");
        add_override(s, "--nu", "nu", "skew coin bias");
        add_override(s, "--eta", "eta", "stickiness scale");
        add_override(s, "--f", "f", "test function key");
        add_override(s, "--lambda", "lambda", "lambda values (comma list)");
        add_override(s, "--alpha", "alpha", "alpha values (comma list)");
        add_override(s, "--paths", "paths", "number of paths");
        add_override(s, "--dt", "dt", "grid step");
        add_override(s, "--out-csv", "paths_out", "residual grid CSV (interface suite)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& s : subs)
            if (s.cmd->parsed()) return run_experiment(s.kind, s.common, s.overrides);
        std::fprintf(stderr, "no subcommand selected\n");
        return 2;
    } catch (const nlbm::inconclusive_error& e) {
        std::fprintf(stderr, "inconclusive: %s\n", e.what());
        return 4;
    } catch (const nlbm::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const nlbm::range_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
