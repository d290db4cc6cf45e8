#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbm/heat_interface.hpp"
#include "nlbm/nonlocal_operators.hpp"
#include "nlbm/resolvent.hpp"

// Experiment orchestration: a single validated configuration drives the
// numeric modules, produces machine-readable reports and CSV outputs, and
// stays byte-reproducible for a fixed (config, seed). Seeds are mandatory
// wherever randomness is involved; there are no wall-clock defaults.

namespace nlbm {

using ordered_json = nlohmann::ordered_json;

struct inconclusive_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;  // simulate | resolvent | operator | pde | verify
    std::string process = "bullet";
    std::string symbol = "stable:alpha=0.5";
    double nu = 0.5;
    double eta = 1.0;
    std::string f = "one";
    std::string fn = "gaussian";   // spatial catalog key (operator experiment)
    std::string op = "marchaud";   // marchaud | caputo
    std::string side = "right";
    std::string suite = "conservativity";  // verify suite
    std::string grid_file;
    std::vector<double> lambdas{1.0};
    std::vector<double> alphas{0.9, 0.99, 0.999};
    double x = 0.0;
    double t = 1.0;
    double point = 0.0;
    std::int64_t n_paths = 10000;
    double dt = 1e-4;
    double horizon = 0.0;  // 0: truncation rule
    double eps_trunc = 1e-6;
    double tol = 0.0;  // requested MC tolerance; 0: self-calibrated
    bool bridge = true;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string out;
    std::string paths_out;
    std::string excursions_out;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty numeric list");
    return out;
}

inline bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

}  // namespace detail

inline void config_set(ExperimentConfig& c, const std::string& key,
                       const std::string& value) {
    if (key == "experiment") c.experiment = value;
    else if (key == "process") c.process = value;
    else if (key == "symbol") c.symbol = value;
    else if (key == "nu") c.nu = std::stod(value);
    else if (key == "eta") c.eta = std::stod(value);
    else if (key == "f") c.f = value;
    else if (key == "fn") c.fn = value;
    else if (key == "op") c.op = value;
    else if (key == "side") c.side = value;
    else if (key == "suite") c.suite = value;
    else if (key == "grid") c.grid_file = value;
    else if (key == "lambda") c.lambdas = detail::parse_list(value);
    else if (key == "alpha") c.alphas = detail::parse_list(value);
    else if (key == "x") c.x = std::stod(value);
    else if (key == "t") c.t = std::stod(value);
    else if (key == "point") c.point = std::stod(value);
    else if (key == "paths") c.n_paths = std::stoll(value);
    else if (key == "dt") c.dt = std::stod(value);
    else if (key == "horizon") c.horizon = std::stod(value);
    else if (key == "eps") c.eps_trunc = std::stod(value);
    else if (key == "tol") c.tol = std::stod(value);
    else if (key == "bridge") c.bridge = detail::parse_bool(value);
    else if (key == "seed") { c.seed = std::stoull(value); c.seed_set = true; }
    else if (key == "threads") c.threads = std::stoi(value);
    else if (key == "out") c.out = value;
    else if (key == "paths_out") c.paths_out = value;
    else if (key == "excursions_out") c.excursions_out = value;
    else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

// Human-editable "key = value" file; '#' starts a comment.
inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto ltrim = line.find_first_not_of(" \t\r\n");
        if (ltrim == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            const auto b = s.find_last_not_of(" \t\r\n");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        config_set(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

inline void validate_config(const ExperimentConfig& c) {
    static const std::vector<std::string> kinds = {"simulate", "resolvent",
                                                   "operator", "pde", "verify"};
    bool ok = false;
    for (const auto& k : kinds) ok = ok || k == c.experiment;
    if (!ok)
        throw std::invalid_argument("unknown experiment kind '" + c.experiment + "'");
    const bool needs_rng = c.experiment == "simulate" || c.experiment == "resolvent" ||
                           (c.experiment == "verify" &&
                            (c.suite == "conservativity" || c.suite == "appendix" ||
                             c.suite == "all"));
    if (needs_rng && !c.seed_set)
        throw std::invalid_argument("a seed is required for '" + c.experiment +
                                    "' runs (no wall-clock defaults)");
    for (double lam : c.lambdas)
        if (lam <= 0.0) throw std::invalid_argument("lambda values must be > 0");
    if (c.n_paths <= 0) throw std::invalid_argument("paths must be > 0");
    if (c.dt <= 0.0) throw std::invalid_argument("dt must be > 0");
    if (c.eps_trunc <= 0.0) throw std::invalid_argument("eps must be > 0");
}

// --- reporting -----------------------------------------------------------------

struct CheckRecord {
    std::string name;
    double analytic = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline CheckRecord make_check(std::string name, double analytic, double estimate,
                              double se, double tolerance) {
    CheckRecord r;
    r.name = std::move(name);
    r.analytic = analytic;
    r.estimate = estimate;
    r.se = se;
    r.tolerance = tolerance;
    r.pass = std::fabs(analytic - estimate) <= tolerance;
    return r;
}

struct RunReport {
    std::string experiment;
    std::string version = "0.1.0";
    std::uint64_t seed = 0;
    ordered_json parameters;
    std::vector<CheckRecord> checks;
    ordered_json values;  // experiment-specific scalar outputs

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    ordered_json to_json() const {
        ordered_json j;
        j["experiment"] = experiment;
        j["version"] = version;
        j["seed"] = seed;
        j["parameters"] = parameters;
        if (!values.is_null()) j["values"] = values;
        j["checks"] = ordered_json::array();
        for (const auto& c : checks) {
            ordered_json jc;
            jc["name"] = c.name;
            jc["analytic"] = c.analytic;
            jc["estimate"] = c.estimate;
            jc["se"] = c.se;
            jc["tolerance"] = c.tolerance;
            jc["pass"] = c.pass;
            j["checks"].push_back(jc);
        }
        j["all_pass"] = all_pass();
        return j;
    }
};

// write-then-rename so interrupted runs never leave partial files
inline void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
}

// --- experiment drivers -----------------------------------------------------------

namespace detail {

inline ProcessParams params_from(const ExperimentConfig& c) {
    ProcessParams p;
    p.sym = parse_symbol(c.symbol);
    p.nu = c.nu;
    p.eta = c.eta;
    p.eps_trunc = c.eps_trunc;
    return p;
}

inline McOptions mc_from(const ExperimentConfig& c) {
    McOptions o;
    o.n_paths = c.n_paths;
    o.dt = c.dt;
    o.horizon = c.horizon;
    o.seed = c.seed;
    o.threads = c.threads;
    o.bridge = c.bridge;
    return o;
}

inline ordered_json base_parameters(const ExperimentConfig& c) {
    ordered_json p;
    p["process"] = c.process;
    p["symbol"] = c.symbol;
    p["nu"] = c.nu;
    p["eta"] = c.eta;
    p["f"] = c.f;
    p["paths"] = c.n_paths;
    p["dt"] = c.dt;
    p["eps"] = c.eps_trunc;
    p["bridge"] = c.bridge;
    return p;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void run_simulate(const ExperimentConfig& c, RunReport& rep) {
    const ProcessKind kind = parse_process(c.process);
    const ProcessParams prm = params_from(c);
    SimOptions opt;
    opt.dt = c.dt;
    opt.horizon = c.horizon > 0.0 ? c.horizon : 1.0;
    opt.bridge = c.bridge;
    std::ostringstream paths_csv, exc_csv;
    paths_csv << "path_id,t,value\n";
    exc_csv << "path_id,interval_start,interval_end,kind,sign\n";
    for (std::int64_t pid = 0; pid < c.n_paths; ++pid) {
        PathSample ps = simulate_process(kind, prm, c.x, opt, c.seed,
                                         static_cast<std::uint64_t>(pid));
        for (std::size_t i = 0; i < ps.x.values.size(); ++i)
            paths_csv << pid << ',' << fmt(ps.x.t(i)) << ',' << fmt(ps.x.values[i])
                      << '\n';
        for (const auto& iv : ps.excursions.intervals)
            exc_csv << pid << ',' << fmt(ps.x.t(iv.begin)) << ','
                    << fmt(ps.x.t(iv.end - 1)) << ','
                    << (iv.plateau ? "plateau" : "excursion") << ',' << iv.sign
                    << '\n';
    }
    if (!c.paths_out.empty()) write_text_atomic(c.paths_out, paths_csv.str());
    if (!c.excursions_out.empty()) write_text_atomic(c.excursions_out, exc_csv.str());
    rep.values["paths_written"] = c.n_paths;
    rep.values["horizon"] = opt.horizon;
}

inline void run_resolvent(const ExperimentConfig& c, RunReport& rep) {
    const ProcessKind kind = parse_process(c.process);
    const ProcessParams prm = params_from(c);
    const TestFunction f = parse_test_function(c.f);
    for (double lam : c.lambdas) {
        const double analytic = full_resolvent(kind, prm, f, c.x, lam);
        ResolventEstimate est = mc_resolvent(kind, prm, f, c.x, lam, mc_from(c));
        if (c.tol > 0.0 && est.tolerance() > c.tol)
            throw inconclusive_error(
                "resolvent: MC spread " + fmt(est.tolerance()) +
                " exceeds the requested tolerance " + fmt(c.tol) +
                "; increase paths");
        CheckRecord r = make_check("resolvent lam=" + fmt(lam), analytic, est.value,
                                   est.std_error, est.tolerance());
        rep.checks.push_back(r);
        ordered_json v;
        v["lambda"] = lam;
        v["analytic"] = analytic;
        v["mc_value"] = est.value;
        v["mc_se"] = est.std_error;
        v["truncation_bound"] = est.truncation_bound;
        v["pass"] = r.pass;
        rep.values["resolvent"].push_back(v);
    }
}

inline void run_operator(const ExperimentConfig& c, RunReport& rep) {
    const LevySymbol sym = parse_symbol(c.symbol);
    double value = 0.0, rough = 0.0;
    if (c.op == "marchaud") {
        const SpatialFunction u = parse_spatial_function(c.fn);
        const Side side = c.side == "left" ? Side::left : Side::right;
        QuadControl loose;
        loose.abs_tol = 1e-6;
        loose.rel_tol = 1e-5;
        value = marchaud(sym, u, c.point, side);
        rough = marchaud(sym, u, c.point, side, loose);
    } else if (c.op == "caputo") {
        const TemporalFunction phi = parse_temporal_function(c.fn);
        QuadControl loose;
        loose.abs_tol = 1e-6;
        loose.rel_tol = 1e-5;
        value = caputo_dzherbashian(sym, phi, c.t);
        rough = caputo_dzherbashian(sym, phi, c.t, loose);
    } else {
        throw std::invalid_argument("unknown operator '" + c.op + "'");
    }
    rep.values["value"] = value;
    rep.values["error_estimate"] = std::fabs(value - rough);
}

inline void run_pde(const ExperimentConfig& c, RunReport& rep) {
    const ProcessKind kind = parse_process(c.process);
    const ProcessParams prm = params_from(c);
    const TestFunction f = parse_test_function(c.f);
    HeatSolution sol = make_heat_solution(kind, prm, f, c.t * 1.05 + 1e-6);
    const RepresentationParts parts = representation_parts(sol, c.t, c.x);
    rep.values["u"] = parts.total();
    rep.values["components"]["dirichlet_part"] = parts.dirichlet_part;
    rep.values["components"]["hitting_part"] = parts.hitting_part;
    rep.values["components"]["trace_at_t"] = sol.trace.at(c.t);
}

inline void verify_conservativity(const ExperimentConfig& c, RunReport& rep) {
    const ProcessParams prm = params_from(c);
    const TestFunction one = tst_one();
    McOptions opt = mc_from(c);
    for (ProcessKind kind : {ProcessKind::bullet, ProcessKind::skew_bullet,
                             ProcessKind::sticky, ProcessKind::skew_sticky}) {
        for (double lam : c.lambdas) {
            ResolventEstimate est = mc_resolvent(kind, prm, one, 0.0, lam, opt);
            rep.checks.push_back(make_check(
                "conservativity " + process_name(kind) + " lam=" + fmt(lam),
                1.0 / lam, est.value, est.std_error, est.tolerance()));
        }
    }
}

inline void verify_appendix(const ExperimentConfig& c, RunReport& rep) {
    struct Combo {
        const char* f;
        double lam;
        double alpha;
    };
    const Combo combos[] = {{"exp_decay:c=1", 1.0, 0.5},
                            {"gaussian", 4.0, 0.5},
                            {"exp_decay:c=1", 1.0, 0.3}};
    McOptions opt = mc_from(c);
    for (const auto& combo : combos) {
        ProcessParams prm = params_from(c);
        prm.sym = stable_symbol(combo.alpha);
        const TestFunction f = parse_test_function(combo.f);
        const double analytic = bullet_zero_resolvent(prm.sym, f, combo.lam);
        ResolventEstimate est =
            mc_resolvent(ProcessKind::bullet, prm, f, 0.0, combo.lam, opt);
        std::ostringstream name;
        name << "appendix alpha=" << combo.alpha << " lam=" << combo.lam << " f="
             << combo.f;
        rep.checks.push_back(make_check(name.str(), analytic, est.value,
                                        est.std_error, est.tolerance()));
    }
}

struct InterfaceGridRow {
    std::string kind;  // "skew" | "sticky"
    double nu, alpha, eta, lam;
    std::string f;
};

inline std::vector<InterfaceGridRow> default_interface_grid() {
    std::vector<InterfaceGridRow> rows;
    for (double nu : {0.3, 0.7})
        for (double alpha : {0.3, 0.5, 0.7})
            for (double lam : {1.0, 4.0})
                for (const char* f : {"gaussian", "exp_decay:c=1"}) {
                    rows.push_back({"skew", nu, alpha, 0.0, lam, f});
                    for (double eta : {0.5, 1.0})
                        rows.push_back({"sticky", nu, alpha, eta, lam, f});
                }
    return rows;
}

inline std::vector<InterfaceGridRow> parse_interface_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open grid file '" + path + "'");
    std::vector<InterfaceGridRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.rfind("kind,", 0) == 0) continue;  // header
        std::stringstream ss(line);
        InterfaceGridRow r;
        std::string item;
        try {
            std::getline(ss, r.kind, ',');
            std::getline(ss, item, ',');
            r.nu = std::stod(item);
            std::getline(ss, item, ',');
            r.alpha = std::stod(item);
            std::getline(ss, item, ',');
            r.eta = std::stod(item);
            std::getline(ss, item, ',');
            r.lam = std::stod(item);
            std::getline(ss, r.f, ',');
        } catch (const std::exception&) {
            throw std::invalid_argument("grid file line " + std::to_string(lineno) +
                                        ": expected kind,nu,alpha,eta,lambda,f");
        }
        rows.push_back(r);
    }
    return rows;
}

inline void verify_interface(const ExperimentConfig& c, RunReport& rep,
                             std::string* csv_out) {
    const auto rows = c.grid_file.empty() ? default_interface_grid()
                                          : parse_interface_grid(c.grid_file);
    std::ostringstream csv;
    csv << "kind,nu,alpha,eta,lambda,f,residual,scale,pass\n";
    for (const auto& r : rows) {
        const LevySymbol sym = stable_symbol(r.alpha);
        const TestFunction f = parse_test_function(r.f);
        InterfaceResidual res;
        if (r.kind == "skew")
            res = skew_interface_residual(sym, r.nu, f, r.lam);
        else if (r.kind == "sticky")
            res = sticky_interface_residual(sym, r.nu, r.eta, f, r.lam);
        else
            throw std::invalid_argument("grid row kind must be skew or sticky");
        const bool pass = res.residual <= 1e-3 * res.scale;
        std::ostringstream name;
        name << r.kind << " nu=" << r.nu << " alpha=" << r.alpha;
        if (r.kind == "sticky") name << " eta=" << r.eta;
        name << " lam=" << r.lam << " f=" << r.f;
        CheckRecord rec = make_check(name.str(), 0.0, res.residual, 0.0,
                                     1e-3 * res.scale);
        rep.checks.push_back(rec);
        csv << r.kind << ',' << r.nu << ',' << r.alpha << ',' << r.eta << ','
            << r.lam << ',' << r.f << ',' << fmt(res.residual) << ','
            << fmt(res.scale) << ',' << (pass ? "pass" : "fail") << '\n';
    }
    if (csv_out) *csv_out = csv.str();
}

inline void verify_classical(const ExperimentConfig& c, RunReport& rep) {
    ClassicalLimitProbe probe;
    probe.nu = c.nu;
    probe.eta = c.eta;
    probe.lam = 2.0;
    probe.f = parse_test_function(c.f == "one" ? "gaussian" : c.f);
    ClassicalLimitReport r = classical_limit_report(c.alphas, probe);
    for (std::size_t i = 0; i < r.alphas.size(); ++i) {
        ordered_json row;
        row["alpha"] = r.alphas[i];
        row["flux_gap"] = r.flux_gap[i];
        row["dynamic_gap"] = r.dynamic_gap[i];
        rep.values["classical"].push_back(row);
    }
    rep.checks.push_back(make_check("classical flux gap monotone", 1.0,
                                    r.flux_monotone ? 1.0 : 0.0, 0.0, 0.0));
    rep.checks.push_back(make_check("classical dynamic gap monotone", 1.0,
                                    r.dynamic_monotone ? 1.0 : 0.0, 0.0, 0.0));
    rep.checks.push_back(make_check("classical dynamic gap small at alpha->1",
                                    0.0, r.dynamic_gap.back(), 0.0,
                                    5e-2 * std::max(r.dynamic_scale, 1e-30)));
}

}  // namespace detail

inline RunReport run(const ExperimentConfig& c) {
    validate_config(c);
    RunReport rep;
    rep.experiment = c.experiment;
    rep.seed = c.seed;
    rep.parameters = detail::base_parameters(c);
    std::string interface_csv;
    if (c.experiment == "simulate") {
        detail::run_simulate(c, rep);
    } else if (c.experiment == "resolvent") {
        detail::run_resolvent(c, rep);
    } else if (c.experiment == "operator") {
        detail::run_operator(c, rep);
    } else if (c.experiment == "pde") {
        detail::run_pde(c, rep);
    } else if (c.experiment == "verify") {
        if (c.suite == "conservativity") {
            detail::verify_conservativity(c, rep);
        } else if (c.suite == "appendix") {
            detail::verify_appendix(c, rep);
        } else if (c.suite == "interface") {
            detail::verify_interface(c, rep, &interface_csv);
        } else if (c.suite == "classical") {
            detail::verify_classical(c, rep);
        } else if (c.suite == "all") {
            detail::verify_conservativity(c, rep);
            detail::verify_appendix(c, rep);
            detail::verify_interface(c, rep, &interface_csv);
            detail::verify_classical(c, rep);
        } else {
            throw std::invalid_argument("unknown verify suite '" + c.suite + "'");
        }
    }
    if (!interface_csv.empty() && !c.paths_out.empty())
        write_text_atomic(c.paths_out, interface_csv);
    if (!c.out.empty()) write_text_atomic(c.out, rep.to_json().dump(2) + "\n");
    return rep;
}

}  // namespace nlbm
