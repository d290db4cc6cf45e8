#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlbm/math/parallel.hpp"
#include "nlbm/path_engine.hpp"

using namespace nlbm;

namespace {
ProcessParams stable_params(double alpha, double nu = 0.5, double eta = 1.0) {
    ProcessParams p;
    p.sym = stable_symbol(alpha);
    p.nu = nu;
    p.eta = eta;
    return p;
}
}  // namespace

TEST_CASE("brownian increments carry variance 2 dt") {
    const int n = 100000;
    BatchSums bs = parallel_mc(n, 2, [](std::int64_t i) {
        Rng rng = Rng::stream(11, static_cast<std::uint64_t>(i), 0);
        SamplePath p = simulate_bm(1.0, 0.01, rng);
        CHECK(p.values[0] == 0.0);
        return p.back();
    });
    const double mean = bs.sum / n;
    const double var = bs.sum_sq / n - mean * mean;
    const double se_var = var * std::sqrt(2.0 / n);
    CHECK(std::fabs(mean) <= 3.0 * std::sqrt(var / n));
    CHECK(std::fabs(var - 2.0) <= 3.0 * se_var);
}

TEST_CASE("Skorokhod reflection: monotone paths have zero local time") {
    SamplePath bm;
    bm.dt = 0.1;
    bm.kind = PathKind::bm;
    bm.values = {0.0, 0.5, 0.7, 1.4, 2.0};
    auto [refl, loc] = reflect_with_local_time(bm);
    for (std::size_t i = 0; i < bm.values.size(); ++i) {
        CHECK(refl.values[i] == bm.values[i]);
        CHECK(loc.values[i] == 0.0);
    }
    SamplePath bad = bm;
    bad.values[0] = 0.3;
    CHECK_THROWS_AS(reflect_with_local_time(bad), std::domain_error);
}

TEST_CASE("local time at t=1 has mean E|B_1| = 2/sqrt(pi)") {
    // plain construction: tolerance = 3 SE + documented sqrt(dt) defect
    const int n = 20000;
    const double dt = 1e-4;
    BatchSums bs = parallel_mc(n, 2, [dt](std::int64_t i) {
        Rng rng = Rng::stream(12, static_cast<std::uint64_t>(i), 0);
        SamplePath bm = simulate_bm(1.0, dt, rng);
        auto rl = reflect_with_local_time(bm);
        return rl.second.back();
    });
    const double mean = bs.sum / n;
    const double var = bs.sum_sq / n - mean * mean;
    const double target = 2.0 / std::sqrt(3.141592653589793);
    const double grid_defect = 0.5826 * std::sqrt(2.0 * dt);
    CHECK(std::fabs(mean - target) <= 3.0 * std::sqrt(var / n) + grid_defect);
    CHECK(mean < target);  // the grid minimum can only undershoot the true one
}

TEST_CASE("gamma grows only where the reflected path sits at zero") {
    Rng rng = Rng::stream(13, 0, 0);
    SamplePath bm = simulate_bm(2.0, 1e-3, rng);
    auto [refl, loc] = reflect_with_local_time(bm);
    double on = 0.0, total = 0.0;
    for (std::size_t i = 1; i < refl.values.size(); ++i) {
        const double dg = loc.values[i] - loc.values[i - 1];
        total += dg;
        if (refl.values[i] > 1e-12) on += dg;
    }
    CHECK(total > 0.0);
    CHECK(on / total < 1e-6);
}

TEST_CASE("joint reflected/local-time Laplace functional matches 1/(sqrt(lam)+1)^2") {
    // E int_0^inf e^{-t} e^{-(B+_t + gamma_t)} dt = 1/4 at lam = 1
    const int n = 20000;
    const double dt = 2e-4, horizon = 8.0, lam = 1.0;
    BatchSums bs = parallel_mc(n, 2, [&](std::int64_t i) {
        Rng rng = Rng::stream(14, static_cast<std::uint64_t>(i), 0);
        SamplePath bm = simulate_bm(horizon, dt, rng);
        auto [refl, loc] = reflect_with_local_time(bm);
        double acc = 0.0, w_prev = std::exp(-(refl.values[0] + loc.values[0]));
        const double decay = std::exp(-lam * dt);
        double expw = decay;
        for (std::size_t k = 1; k < refl.values.size(); ++k) {
            const double w = expw * std::exp(-(refl.values[k] + loc.values[k]));
            acc += 0.5 * (w_prev + w);
            w_prev = w;
            expw *= decay;
        }
        return acc * dt;
    });
    const double mean = bs.sum / n;
    const double var = bs.sum_sq / n - mean * mean;
    const double grid_defect = 2.0 * 0.5826 * std::sqrt(2.0 * dt) * 0.25;
    const double trunc = std::exp(-horizon);
    CHECK(std::fabs(mean - 0.25) <=
          3.0 * std::sqrt(var / n) + grid_defect + trunc);
}

TEST_CASE("subordinator: laplace transform, start, monotonicity") {
    const LevySymbol sym = stable_symbol(0.5);
    const int n = 100000;
    const double eps = 1e-6;
    BatchSums bs = parallel_mc(n, 2, [&](std::int64_t i) {
        Rng rng = Rng::stream(15, static_cast<std::uint64_t>(i), 0);
        SubordinatorSim sub(sym, eps, rng);
        return std::exp(-sub.value(1.0));
    });
    const double mean = bs.sum / n;
    const double var = bs.sum_sq / n - mean * mean;
    const double target = std::exp(-1.0);  // e^{-Phi(1)}
    CHECK(std::fabs(mean - target) <= 3.0 * std::sqrt(var / n) + 2e-3);

    Rng rng = Rng::stream(15, 7, 1);
    SamplePath h = simulate_subordinator(sym, 2.0, 1e-3, 1e-4, rng);
    CHECK(h.values[0] == 0.0);
    for (std::size_t i = 1; i < h.values.size(); ++i)
        CHECK(h.values[i] >= h.values[i - 1]);
    // too many expected jumps per step is rejected with advice
    Rng rng2 = Rng::stream(15, 8, 1);
    CHECK_THROWS_AS(simulate_subordinator(sym, 1.0, 0.1, 1e-6, rng2),
                    std::invalid_argument);
}

TEST_CASE("right-continuous inverse: identity, staircase, plateaus") {
    SamplePath ident;
    ident.dt = 0.01;
    ident.kind = PathKind::subordinator;
    for (int i = 0; i <= 300; ++i) ident.values.push_back(0.01 * i);
    SamplePath inv = invert_nondecreasing(ident, {0.5, 1.0, 2.5});
    CHECK(inv.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inv.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inv.values[2] == doctest::Approx(2.5).epsilon(1e-12));

    // H_s = s + 1{s >= 1}: plateau of length 1 in the inverse at level 1
    SamplePath stair;
    stair.dt = 0.01;
    stair.kind = PathKind::subordinator;
    for (int i = 0; i <= 300; ++i) {
        const double s = 0.01 * i;
        stair.values.push_back(s + (s >= 1.0 ? 1.0 : 0.0));
    }
    SamplePath linv = invert_nondecreasing(stair, {0.5, 1.2, 1.5, 1.99, 2.5});
    CHECK(linv.values[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(linv.values[1] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(linv.values[2] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(linv.values[3] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(linv.values[4] == doctest::Approx(1.5).epsilon(1e-9));

    CHECK_THROWS_AS(invert_nondecreasing(stair, {10.0}), range_error);
    SamplePath dec = ident;
    dec.values[5] = -1.0;
    CHECK_THROWS_AS(invert_nondecreasing(dec, {0.5}), std::domain_error);
}

TEST_CASE("inverse relation: P(H_1 < 2) equals P(L_2 > 1) across ensembles") {
    const LevySymbol sym = stable_symbol(0.5);
    const double eps = 1e-4;
    const int n = 20000;
    BatchSums a = parallel_mc(n, 2, [&](std::int64_t i) {
        Rng rng = Rng::stream(21, static_cast<std::uint64_t>(i), 0);
        SubordinatorSim sub(sym, eps, rng);
        SamplePath h = subordinator_sample_path(sub, 1.0, 0.01);
        return h.back() < 2.0 ? 1.0 : 0.0;
    });
    BatchSums b = parallel_mc(n, 2, [&](std::int64_t i) {
        Rng rng = Rng::stream(22, static_cast<std::uint64_t>(i), 0);
        SubordinatorSim sub(sym, eps, rng);
        SamplePath h = subordinator_sample_path(sub, 60.0, 0.01);
        SamplePath linv = invert_nondecreasing(h, {2.0});
        return linv.values[0] > 1.0 ? 1.0 : 0.0;
    });
    const double pa = a.sum / n, pb = b.sum / n;
    const double se = std::sqrt(pa * (1 - pa) / n + pb * (1 - pb) / n);
    CHECK(std::fabs(pa - pb) <= 3.0 * se + 1e-3);
}

TEST_CASE("subordinator right-inverse inequalities") {
    const LevySymbol sym = stable_symbol(0.5);
    Rng rng = Rng::stream(23, 0, 0);
    SubordinatorSim sub(sym, 1e-5, rng);
    for (int i = 1; i <= 200; ++i) {
        const double x = 0.01 * i;
        CHECK(sub.overshoot_end(x) >= x);  // H(L(x)) >= x
        const double s = 0.005 * i;
        CHECK(sub.value(s) >= 0.0);
        CHECK(sub.overshoot_end(sub.value(s)) >= sub.value(s));
    }
}

TEST_CASE("composition with the identity subordinator returns the reflected path") {
    Rng rng = Rng::stream(24, 0, 0);
    SamplePath bm = simulate_bm(1.0, 1e-3, rng);
    auto [refl, loc] = reflect_with_local_time(bm);
    SubordinatorSim ident(/*drift=*/1.0, {}, {});
    SamplePath bullet = compose_bullet(refl, loc, ident);
    for (std::size_t i = 0; i < refl.values.size(); ++i)
        CHECK(bullet.values[i] == doctest::Approx(refl.values[i]).epsilon(1e-12));
}

TEST_CASE("composed jump process stays nonnegative") {
    const ProcessParams p = stable_params(0.5);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 1.0;
    for (int i = 0; i < 2000; ++i) {
        PathSample ps = simulate_process(ProcessKind::bullet, p, 0.0, opt, 31,
                                         static_cast<std::uint64_t>(i));
        double mn = 0.0;
        for (double v : ps.x.values) mn = std::min(mn, v);
        CHECK(mn >= -1e-9);
    }
}

TEST_CASE("skew signs: degenerate biases, frequency, domain errors") {
    ExcursionDecomposition d;
    for (std::size_t k = 0; k < 100000; ++k)
        d.intervals.push_back({k, k + 1, false, +1, k});
    Rng rng = Rng::stream(32, 0, 2);
    ExcursionDecomposition all_plus = skew_signs(d, 1.0, rng);
    for (const auto& iv : all_plus.intervals) CHECK(iv.sign == +1);
    ExcursionDecomposition coin = skew_signs(d, 0.7, rng);
    double frac = 0.0;
    for (const auto& iv : coin.intervals) frac += iv.sign == +1 ? 1.0 : 0.0;
    frac /= static_cast<double>(coin.intervals.size());
    const double se = std::sqrt(0.7 * 0.3 / static_cast<double>(coin.intervals.size()));
    CHECK(std::fabs(frac - 0.7) <= 3.0 * se);
    CHECK_THROWS_AS(skew_signs(d, -0.1, rng), std::domain_error);
    CHECK_THROWS_AS(skew_signs(d, 1.5, rng), std::domain_error);
}

TEST_CASE("skew occupation: P(X_1 > 0) = nu for signed reflected paths") {
    for (double nu : {0.3, 0.7}) {
        ProcessParams p = stable_params(0.5, nu);
        SimOptions opt;
        opt.dt = 1e-3;
        opt.horizon = 1.0;
        const int n = 100000;
        BatchSums bs = parallel_mc(n, 2, [&](std::int64_t i) {
            PathSample ps = simulate_process(ProcessKind::skew_reflected, p, 0.0,
                                             opt, 33, static_cast<std::uint64_t>(i));
            return ps.x.back() > 0.0 ? 1.0 : 0.0;
        });
        const double frac = bs.sum / n;
        const double se = std::sqrt(nu * (1 - nu) / n);
        CHECK(std::fabs(frac - nu) <= 3.0 * se);
    }
}

TEST_CASE("skew-composed paths equal signed unsigned paths excursion-wise") {
    ProcessParams p = stable_params(0.5, 0.3);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 1.0;
    for (std::uint64_t pid = 0; pid < 5; ++pid) {
        PathSample skew =
            simulate_process(ProcessKind::skew_bullet, p, 0.0, opt, 35, pid);
        PathSample plain =
            simulate_process(ProcessKind::bullet, p, 0.0, opt, 35, pid);
        for (const auto& iv : skew.excursions.intervals) {
            for (std::size_t i = iv.begin; i < iv.end; ++i) {
                CHECK(skew.x.values[i] ==
                      doctest::Approx(iv.sign * plain.x.values[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("sticky path: eta -> 0 recovers the reflected path on matched draws") {
    ProcessParams tiny = stable_params(0.5, 0.5, 1e-8);
    ProcessParams none = stable_params(0.5);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 1.0;
    for (std::uint64_t pid = 0; pid < 3; ++pid) {
        PathSample st = simulate_process(ProcessKind::sticky, tiny, 0.0, opt, 36, pid);
        PathSample re =
            simulate_process(ProcessKind::reflected, none, 0.0, opt, 36, pid);
        double sup = 0.0;
        for (std::size_t i = 0; i < st.x.values.size(); ++i)
            sup = std::max(sup, std::fabs(st.x.values[i] - re.x.values[i]));
        CHECK(sup < 1e-3);
    }
}

TEST_CASE("sticky path: the zero set has positive time measure") {
    ProcessParams p = stable_params(0.5, 0.5, 1.0);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 1.0;
    int with_zeros = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        PathSample ps = simulate_process(ProcessKind::sticky, p, 0.0, opt, 37,
                                         static_cast<std::uint64_t>(i));
        int zeros = 0;
        for (double v : ps.x.values) zeros += (v == 0.0) ? 1 : 0;
        if (zeros > 0) ++with_zeros;
    }
    CHECK(with_zeros >= static_cast<int>(0.99 * n));
}

TEST_CASE("two-sided sticky: zero exactly on plateaus, plateau unit signs") {
    ProcessParams p = stable_params(0.5, 0.7, 1.0);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 1.0;
    int plateaus_seen = 0;
    for (std::uint64_t pid = 0; pid < 20; ++pid) {
        PathSample ps =
            simulate_process(ProcessKind::skew_sticky, p, 0.0, opt, 38, pid);
        const auto& iv = ps.excursions.intervals;
        for (std::size_t k = 0; k < iv.size(); ++k) {
            if (iv[k].plateau) {
                ++plateaus_seen;
                for (std::size_t i = iv[k].begin; i < iv[k].end; ++i)
                    CHECK(ps.x.values[i] == 0.0);
                // the following excursion belongs to the same sign unit
                if (k + 1 < iv.size() && !iv[k + 1].plateau)
                    CHECK(iv[k + 1].unit == iv[k].unit);
            }
        }
    }
    CHECK(plateaus_seen > 0);
}

TEST_CASE("discounted path functional: constants integrate in closed form") {
    SamplePath path;
    path.dt = 1e-3;
    path.kind = PathKind::composed;
    path.values.assign(5001, 2.5);
    const double lam = 1.3, horizon = 5.0;
    const double expect = (1.0 - std::exp(-lam * horizon)) / lam;
    CHECK(path_laplace_functional(path, [](double) { return 1.0; }, lam) ==
          doctest::Approx(expect).epsilon(1e-6));
    CHECK(path_laplace_functional(path, [](double x) { return x; }, lam) ==
          doctest::Approx(2.5 * expect).epsilon(1e-6));
    CHECK_THROWS_AS(
        path_laplace_functional(path, [](double) { return 1.0; }, -1.0),
        std::domain_error);
}

TEST_CASE("paths are bit-identical for identical seeds") {
    ProcessParams p = stable_params(0.5, 0.7, 1.0);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 0.5;
    for (ProcessKind k : {ProcessKind::bullet, ProcessKind::skew_sticky}) {
        PathSample a = simulate_process(k, p, 0.25, opt, 77, 3);
        PathSample b = simulate_process(k, p, 0.25, opt, 77, 3);
        REQUIRE(a.x.values.size() == b.x.values.size());
        for (std::size_t i = 0; i < a.x.values.size(); ++i)
            CHECK(a.x.values[i] == b.x.values[i]);
    }
}

TEST_CASE("paths started away from zero run as brownian motion until the hit") {
    ProcessParams p = stable_params(0.5, 0.7, 1.0);
    SimOptions opt;
    opt.dt = 1e-3;
    opt.horizon = 0.5;
    opt.bridge = false;  // plain detection: the path visibly crosses
    PathSample ps = simulate_process(ProcessKind::skew_bullet, p, 1.5, opt, 78, 5);
    CHECK(ps.x.values[0] == 1.5);
    std::size_t k = 1;
    while (k < ps.x.values.size() && ps.x.values[k] > 0.0) ++k;
    if (k < ps.x.values.size()) {
        REQUIRE(!ps.excursions.intervals.empty());
        CHECK(ps.excursions.intervals.front().begin >= k);
    }
}
