#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "nlbm/functions.hpp"
#include "nlbm/levy_symbol.hpp"
#include "nlbm/math/parallel.hpp"
#include "nlbm/path_engine.hpp"
#include "nlbm/sample_path.hpp"

// Closed-form Laplace-domain resolvents and the Monte Carlo estimators that
// must match them. Zero-resolvents for initial data supported on both
// half-lines combine the positive and negative branches additively; the
// f == 1 conservativity identity R_lam 1 = 1/lam pins that reading down.

namespace nlbm {

struct ResolventEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    double truncation_bound = 0.0;  // horizon truncation + documented bias terms

    double tolerance() const { return 3.0 * std_error + truncation_bound; }
};

namespace detail {

// R^D_lam g(x) for the killed Brownian motion on (0,inf), x > 0, g bounded
// on (0,inf). Kernel (e^{-sqrt(lam)|x-y|} - e^{-sqrt(lam)(x+y)})/(2 sqrt(lam)),
// integrated in the shifted variable u = y - x so |x-y| never cancels.
inline double dirichlet_pos(const std::function<double(double)>& g, double x,
                            double lam, const QuadControl& qc = {}) {
    const double rl = std::sqrt(lam);
    auto kernel = [&](double u) {
        const double refl = (2.0 * x + u) * rl < 700.0
                                ? std::exp(-rl * (2.0 * x + u))
                                : 0.0;
        return (std::exp(-rl * std::fabs(u)) - refl) / (2.0 * rl) * g(x + u);
    };
    const double reach = 45.0 / rl;
    double acc = 0.0;
    acc += integrate(kernel, -std::min(x, reach), 0.0, qc);
    acc += integrate(kernel, 0.0, reach, qc);
    return acc;
}

// int_0^inf e^{-sqrt(lam) y} g(y) dy
inline double laplace_halfline(const std::function<double(double)>& g, double lam,
                               const QuadControl& qc = {}) {
    const double rl = std::sqrt(lam);
    return integrate([&](double y) { return std::exp(-rl * y) * g(y); }, 0.0,
                     45.0 / rl, qc);
}

}  // namespace detail

// Killed-BM resolvent; x > 0 integrates f over (0,inf), x < 0 the mirror
// over (-inf,0), x == 0 gives 0 (absorption).
inline double dirichlet_resolvent(const TestFunction& f, double x, double lam,
                                  const QuadControl& qc = {}) {
    if (lam <= 0.0) throw std::domain_error("dirichlet_resolvent: lam must be > 0");
    if (x == 0.0) return 0.0;
    if (x > 0.0) return detail::dirichlet_pos(f.f, x, lam, qc);
    return detail::dirichlet_pos([&](double y) { return f(-y); }, -x, lam, qc);
}

// int_0^inf R^D_lam g(y) Pi(dy) / Phi(sqrt(lam)) for g on the positive axis.
inline double bullet_zero_resolvent_pos(const LevySymbol& sym,
                                        const std::function<double(double)>& g,
                                        double g_sup, double lam,
                                        const QuadControl& qc = {}) {
    const double h_sup = g_sup / lam;
    // d/dy R^D g (0+) = int_0^inf e^{-sqrt(lam) s} g(s) ds
    const double slope0 = detail::laplace_halfline(g, lam, qc);
    const double numer = levy_integral(
        sym, [&](double y) { return detail::dirichlet_pos(g, y, lam, qc); }, h_sup,
        slope0, qc);
    return numer / sym.phi(std::sqrt(lam));
}

inline double bullet_zero_resolvent(const LevySymbol& sym, const TestFunction& f,
                                    double lam, const QuadControl& qc = {}) {
    if (lam <= 0.0) throw std::domain_error("bullet_zero_resolvent: lam must be > 0");
    return bullet_zero_resolvent_pos(sym, f.f, f.sup_norm, lam, qc);
}

// One-sided sticky zero-resolvent:
// (1/(eta Phi(lam) + sqrt(lam))) int_0^inf e^{-y sqrt(lam)} g(y) dy
//   + (eta Phi(lam)/lam) g(0) / (eta Phi(lam) + sqrt(lam)).
inline double sticky_zero_resolvent_pos(const LevySymbol& sym, double eta,
                                        const std::function<double(double)>& g,
                                        double g0, double lam,
                                        const QuadControl& qc = {}) {
    const double rl = std::sqrt(lam);
    const double ep = eta > 0.0 ? eta * sym.phi(lam) : 0.0;
    const double integral = detail::laplace_halfline(g, lam, qc);
    return integral / (ep + rl) + (ep / lam) * g0 / (ep + rl);
}

inline double sticky_resolvent_zero(const LevySymbol& sym, double eta,
                                    const TestFunction& f, double lam,
                                    const QuadControl& qc = {}) {
    if (lam <= 0.0 || eta < 0.0)
        throw std::domain_error("sticky_resolvent_zero: need lam > 0, eta >= 0");
    return sticky_zero_resolvent_pos(sym, eta, f.f, f(0.0), lam, qc);
}

// nu-weighted combination of the positive branch and its mirror.
inline double skew_zero_resolvent(const LevySymbol& sym, double nu,
                                  const TestFunction& f, double lam,
                                  const QuadControl& qc = {}) {
    if (!(nu > 0.0 && nu < 1.0))
        throw std::domain_error("skew_zero_resolvent: nu must be in (0,1)");
    const double pos = bullet_zero_resolvent_pos(sym, f.f, f.sup_norm, lam, qc);
    const double neg = bullet_zero_resolvent_pos(
        sym, [&](double y) { return f(-y); }, f.sup_norm, lam, qc);
    return nu * pos + (1.0 - nu) * neg;
}

inline double sticky_skew_zero_resolvent(const LevySymbol& sym, double nu,
                                         double eta, const TestFunction& f,
                                         double lam, const QuadControl& qc = {}) {
    if (!(nu > 0.0 && nu < 1.0))
        throw std::domain_error("sticky_skew_zero_resolvent: nu must be in (0,1)");
    const double pos = sticky_zero_resolvent_pos(sym, eta, f.f, f(0.0), lam, qc);
    const double neg = sticky_zero_resolvent_pos(
        sym, eta, [&](double y) { return f(-y); }, f(0.0), lam, qc);
    return nu * pos + (1.0 - nu) * neg;
}

// Zero-resolvent dispatch for every process kind.
inline double analytic_zero_resolvent(ProcessKind kind, const ProcessParams& p,
                                      const TestFunction& f, double lam,
                                      const QuadControl& qc = {}) {
    const double rl = std::sqrt(lam);
    switch (kind) {
        case ProcessKind::bm:
            return integrate([&](double y) { return std::exp(-rl * std::fabs(y)) *
                                                    f(y) / (2.0 * rl); },
                             -45.0 / rl, 45.0 / rl, qc);
        case ProcessKind::reflected:
            return detail::laplace_halfline(f.f, lam, qc) / rl;
        case ProcessKind::skew_reflected: {
            const double pos = detail::laplace_halfline(f.f, lam, qc) / rl;
            const double neg =
                detail::laplace_halfline([&](double y) { return f(-y); }, lam, qc) / rl;
            return p.nu * pos + (1.0 - p.nu) * neg;
        }
        case ProcessKind::bullet:
            return bullet_zero_resolvent(p.sym, f, lam, qc);
        case ProcessKind::skew_bullet:
            return skew_zero_resolvent(p.sym, p.nu, f, lam, qc);
        case ProcessKind::sticky:
            return sticky_resolvent_zero(p.sym, p.eta, f, lam, qc);
        case ProcessKind::skew_sticky:
            return sticky_skew_zero_resolvent(p.sym, p.nu, p.eta, f, lam, qc);
    }
    throw std::logic_error("analytic_zero_resolvent: unknown kind");
}

// R_lam f(x) = killed branch on the side of x + e^{-sqrt(lam)|x|} R_lam f(0).
inline double full_resolvent(ProcessKind kind, const ProcessParams& p,
                             const TestFunction& f, double x, double lam,
                             const QuadControl& qc = {}) {
    if (kind == ProcessKind::bm) {
        const double rl = std::sqrt(lam);
        return integrate(
            [&](double y) {
                return std::exp(-rl * std::fabs(x - y)) * f(y) / (2.0 * rl);
            },
            x - 45.0 / rl, x + 45.0 / rl, qc);
    }
    const double zero = analytic_zero_resolvent(kind, p, f, lam, qc);
    if (x == 0.0) return zero;
    const double killed = dirichlet_resolvent(f, x, lam, qc);
    return killed + std::exp(-std::sqrt(lam) * std::fabs(x)) * zero;
}

// --- Monte Carlo -------------------------------------------------------------------

struct McOptions {
    std::int64_t n_paths = 100000;
    double dt = 1e-3;
    double horizon = 0.0;  // 0: choose from the truncation rule
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware
    bool bridge = true;
};

namespace detail {

inline double mc_horizon(double lam, double f_sup, std::int64_t n, double dt) {
    // e^{-lam T} ||f||/lam below a tenth of the anticipated 3*SE.
    const double se_guess = 0.3 * std::max(f_sup, 1e-6) / lam /
                            std::sqrt(static_cast<double>(n));
    const double target = std::max(0.1 * 3.0 * se_guess, 1e-12);
    double horizon = std::log(std::max(f_sup, 1e-6) / lam / target) / lam;
    horizon = std::max(horizon, 20.0 * dt);
    return std::ceil(horizon / dt) * dt;
}

inline double mc_bias_bound(const ProcessParams& p, ProcessKind kind,
                            const TestFunction& f, double lam,
                            const McOptions& opt) {
    double bias = 0.0;
    const double lip = std::min(f.lipschitz, 1e6);
    if (!opt.bridge)  // running-minimum defect of the plain Skorokhod map
        bias += 0.5826 * std::sqrt(kBmVariancePerTime * opt.dt) * lip / lam;
    if (needs_symbol(kind))  // compensated small-jump truncation
        bias += p.sym.small_jump_mean(p.eps_trunc) * lip / lam;
    return std::min(bias, 2.0 * f.sup_norm / lam);
}

}  // namespace detail

// Ensemble mean of int_0^T e^{-lam t} f(X_t) dt over paths started at x.
inline ResolventEstimate mc_resolvent(ProcessKind kind, const ProcessParams& p,
                                      const TestFunction& f, double x, double lam,
                                      const McOptions& opt) {
    if (lam <= 0.0) throw std::domain_error("mc_resolvent: lam must be > 0");
    SimOptions sim;
    sim.dt = opt.dt;
    sim.horizon = opt.horizon > 0.0
                      ? opt.horizon
                      : detail::mc_horizon(lam, f.sup_norm, opt.n_paths, opt.dt);
    sim.bridge = opt.bridge;
    auto body = [&](std::int64_t i) {
        PathSample ps = simulate_process(kind, p, x, sim, opt.seed,
                                         static_cast<std::uint64_t>(i));
        return path_laplace_functional(ps.x, f.f, lam);
    };
    const BatchSums sums = parallel_mc(opt.n_paths, opt.threads, body);
    ResolventEstimate est;
    est.n_paths = sums.count;
    est.value = sums.sum / static_cast<double>(sums.count);
    const double var = std::max(0.0, sums.sum_sq / static_cast<double>(sums.count) -
                                         est.value * est.value);
    est.std_error = std::sqrt(var / static_cast<double>(sums.count));
    est.truncation_bound = std::exp(-lam * sim.horizon) * f.sup_norm / lam +
                           detail::mc_bias_bound(p, kind, f, lam, opt);
    return est;
}

// Ensemble mean of f(X_t) at a fixed time over paths started at x.
inline ResolventEstimate mc_mean_at_time(ProcessKind kind, const ProcessParams& p,
                                         const TestFunction& f, double x, double t,
                                         const McOptions& opt) {
    if (t <= 0.0) throw std::domain_error("mc_mean_at_time: t must be > 0");
    SimOptions sim;
    sim.dt = opt.dt;
    sim.horizon = t;
    sim.bridge = opt.bridge;
    const std::size_t idx = static_cast<std::size_t>(std::llround(t / opt.dt));
    auto body = [&](std::int64_t i) {
        PathSample ps = simulate_process(kind, p, x, sim, opt.seed,
                                         static_cast<std::uint64_t>(i));
        return f(ps.x.values[idx]);
    };
    const BatchSums sums = parallel_mc(opt.n_paths, opt.threads, body);
    ResolventEstimate est;
    est.n_paths = sums.count;
    est.value = sums.sum / static_cast<double>(sums.count);
    const double var = std::max(0.0, sums.sum_sq / static_cast<double>(sums.count) -
                                         est.value * est.value);
    est.std_error = std::sqrt(var / static_cast<double>(sums.count));
    est.truncation_bound = 0.0;
    return est;
}

}  // namespace nlbm
