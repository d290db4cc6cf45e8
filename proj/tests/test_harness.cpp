#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "nlbm/harness.hpp"

using namespace nlbm;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("config files parse, trim, and reject unknown keys") {
    TempFile tf("harness_cfg_test.cfg");
    {
        std::ofstream out(tf.path);
        out << "# comment line\n"
            << "experiment = resolvent\n"
            << "process = skew-bullet   # trailing comment\n"
            << "symbol = stable:alpha=0.5\n"
            << "nu = 0.7\n"
            << "lambda = 1,4\n"
            << "paths = 500\n"
            << "seed = 11\n";
    }
    ExperimentConfig c = parse_config_file(tf.path);
    CHECK(c.experiment == "resolvent");
    CHECK(c.process == "skew-bullet");
    CHECK(c.nu == 0.7);
    CHECK(c.lambdas.size() == 2);
    CHECK(c.seed == 11);
    CHECK(c.seed_set);
    CHECK_NOTHROW(validate_config(c));

    ExperimentConfig bad;
    CHECK_THROWS_AS(config_set(bad, "wavelength", "3"), std::invalid_argument);
    CHECK_THROWS_AS(config_set(bad, "lambda", ""), std::invalid_argument);
}

TEST_CASE("validation: unknown kinds, missing seeds, bad numbers") {
    ExperimentConfig c;
    c.experiment = "transmogrify";
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c.experiment = "simulate";
    c.seed_set = false;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c.seed_set = true;
    c.dt = -1.0;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c.dt = 1e-3;
    c.lambdas = {0.0};
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c.lambdas = {1.0};
    CHECK_NOTHROW(validate_config(c));
    // analytic experiments do not need a seed
    ExperimentConfig op;
    op.experiment = "operator";
    CHECK_NOTHROW(validate_config(op));
}

TEST_CASE("atomic write leaves no partial files") {
    TempFile tf("harness_atomic_test.txt");
    write_text_atomic(tf.path, "alpha\nbeta\n");
    CHECK(slurp(tf.path) == "alpha\nbeta\n");
    write_text_atomic(tf.path, "gamma\n");
    CHECK(slurp(tf.path) == "gamma\n");
    std::ifstream tmp(tf.path + ".tmp");
    CHECK(!tmp.good());
}

TEST_CASE("check records enforce the pass criterion") {
    CheckRecord ok = make_check("x", 1.0, 1.005, 0.002, 0.006);
    CHECK(ok.pass);
    CheckRecord bad = make_check("x", 1.0, 1.02, 0.002, 0.006);
    CHECK(!bad.pass);
}

TEST_CASE("identical config and seed give byte-identical reports") {
    ExperimentConfig c;
    c.experiment = "resolvent";
    c.process = "skew-sticky";
    c.symbol = "stable:alpha=0.5";
    c.nu = 0.7;
    c.eta = 1.0;
    c.f = "exp_decay:c=1";
    c.lambdas = {1.0};
    c.n_paths = 300;
    c.dt = 1e-3;
    c.seed = 5;
    c.seed_set = true;
    c.threads = 2;
    const std::string a = run(c).to_json().dump(2);
    const std::string b = run(c).to_json().dump(2);
    CHECK(a == b);
    c.threads = 1;  // thread count must not change the numbers
    const std::string d = run(c).to_json().dump(2);
    CHECK(a == d);
}

TEST_CASE("conservativity suite passes with the trivial datum") {
    ExperimentConfig c;
    c.experiment = "verify";
    c.suite = "conservativity";
    c.symbol = "stable:alpha=0.5";
    c.nu = 0.7;
    c.eta = 1.0;
    c.lambdas = {1.0, 4.0};
    c.n_paths = 200;
    c.dt = 1e-3;
    c.seed = 6;
    c.seed_set = true;
    c.threads = 2;
    RunReport rep = run(c);
    CHECK(rep.checks.size() == 8);
    CHECK(rep.all_pass());
}

TEST_CASE("interface suite consumes a custom grid and emits a CSV") {
    TempFile grid("harness_grid_test.csv");
    {
        std::ofstream out(grid.path);
        out << "kind,nu,alpha,eta,lambda,f\n"
            << "skew,0.7,0.5,0,1,gaussian\n"
            << "sticky,0.3,0.5,1.0,4,exp_decay:c=1\n";
    }
    TempFile csv("harness_grid_out.csv");
    ExperimentConfig c;
    c.experiment = "verify";
    c.suite = "interface";
    c.grid_file = grid.path;
    c.paths_out = csv.path;
    RunReport rep = run(c);
    CHECK(rep.checks.size() == 2);
    CHECK(rep.all_pass());
    const std::string body = slurp(csv.path);
    CHECK(body.find("kind,nu,alpha,eta,lambda,f,residual,scale,pass") == 0);
    CHECK(body.find("pass") != std::string::npos);
}

TEST_CASE("operator experiment reports value and spread") {
    ExperimentConfig c;
    c.experiment = "operator";
    c.symbol = "stable:alpha=0.5";
    c.op = "caputo";
    c.fn = "linear";
    c.t = 1.0;
    RunReport rep = run(c);
    const double v = rep.values["value"].get<double>();
    CHECK(v == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-8));
}

TEST_CASE("reports serialize with stable field order") {
    ExperimentConfig c;
    c.experiment = "operator";
    c.symbol = "stable:alpha=0.5";
    c.op = "marchaud";
    c.fn = "gaussian";
    c.point = 0.3;
    c.side = "right";
    RunReport rep = run(c);
    const std::string s = rep.to_json().dump();
    CHECK(s.find("\"experiment\"") < s.find("\"version\""));
    CHECK(s.find("\"version\"") < s.find("\"seed\""));
    CHECK(s.find("\"values\"") < s.find("\"checks\""));
}
