#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "nlbm/functions.hpp"
#include "nlbm/levy_symbol.hpp"
#include "nlbm/math/quadrature.hpp"

// Space operators D_{x-} u(x) = int (u(x) - u(x-y)) Pi(dy) and
// D_{x+} u(x) = int (u(x) - u(x+y)) Pi(dy), and the time operator
// D_t phi(t) = int_0^t phi'(s) tail(t-s) ds, for a general Levy symbol.
// Fourier and Laplace residual checks compare two independent quadrature
// routes of the symbol identities FT[D u] = Phi(+-i xi) FT[u] and
// LT[D phi] = Phi(lam) LT[phi] - Phi(lam) phi(0) / lam.

namespace nlbm {

enum class Side { left, right };

namespace detail {

// The operators only look at one half-line from x; probe it for blow-up.
inline void probe_bounded(const SpatialFunction& u, double x, double dir) {
    const double probes[] = {0.0, 0.5, 1.0, 5.0, 20.0, 100.0, 1000.0};
    for (double y : probes) {
        const double v = u(x + dir * y);
        if (!std::isfinite(v) || std::fabs(v) > 1e8)
            throw std::domain_error("marchaud: test function unbounded on probed "
                                    "half-line (x" + std::string(dir > 0 ? "+" : "-") +
                                    std::to_string(y) + ")");
    }
}

}  // namespace detail

namespace detail {
// Slope seen by the operator: one-sided when estimated numerically, since
// each operator only looks at one half-line from x (the evaluation point may
// sit next to an interface kink).
inline double slope_at(const SpatialFunction& u, double x, double dir) {
    if (u.deriv) return u.deriv(x);
    const double e = 1e-6 * (1.0 + std::fabs(x));
    return dir * (u(x + dir * e) - u(x)) / e;
}
}  // namespace detail

inline double marchaud_left(const LevySymbol& sym, const SpatialFunction& u,
                            double x, const QuadControl& qc = {}) {
    detail::probe_bounded(u, x, -1.0);
    const double ux = u(x);
    const double h_sup = 2.0 * std::max(u.sup_norm, std::fabs(ux)) + 1e-30;
    return levy_integral(
        sym, [&](double y) { return ux - u(x - y); }, h_sup,
        detail::slope_at(u, x, -1.0), qc);
}

inline double marchaud_right(const LevySymbol& sym, const SpatialFunction& u,
                             double x, const QuadControl& qc = {}) {
    detail::probe_bounded(u, x, +1.0);
    const double ux = u(x);
    const double h_sup = 2.0 * std::max(u.sup_norm, std::fabs(ux)) + 1e-30;
    return levy_integral(
        sym, [&](double y) { return ux - u(x + y); }, h_sup,
        -detail::slope_at(u, x, +1.0), qc);
}

inline double marchaud(const LevySymbol& sym, const SpatialFunction& u, double x,
                       Side side, const QuadControl& qc = {}) {
    return side == Side::left ? marchaud_left(sym, u, x, qc)
                              : marchaud_right(sym, u, x, qc);
}

// int_0^t phi'(s) tail(t-s) ds. The tail may blow up at 0+, handled by the
// same substitution family as the Levy integrals.
inline double caputo_dzherbashian(const LevySymbol& sym, const TemporalFunction& phi,
                                  double t, const QuadControl& qc = {}) {
    if (t <= 0.0) throw std::domain_error("caputo_dzherbashian: t must be > 0");
    if (!phi.deriv)
        throw std::domain_error("caputo_dzherbashian: derivative procedure required");
    const double r0 = std::min(1.0, t);
    const double sig = sym.sing_exponent;
    double head;
    if (sig > 0.0) {
        const double p = 1.0 / (1.0 - sig);
        const double q_hi = std::pow(r0, 1.0 / p);
        head = integrate(
            [&](double q) {
                const double r = std::pow(q, p);
                return phi.deriv(t - r) * sym.tail(r) * p * std::pow(q, p - 1.0);
            },
            0.0, q_hi, qc);
    } else {
        // log-type blow-up at most: map r = e^{-v}.
        const double v0 = -std::log(r0);
        head = integrate(
            [&](double v) {
                const double r = std::exp(-v);
                return phi.deriv(t - r) * sym.tail(r) * r;
            },
            v0, 45.0, qc);
    }
    double rest = 0.0;
    if (t > r0)
        rest = integrate([&](double r) { return phi.deriv(t - r) * sym.tail(r); },
                         r0, t, qc);
    const double value = head + rest;
    if (!std::isfinite(value))
        throw numeric_error("caputo_dzherbashian: non-integrable product");
    return value;
}

// | int_0^T e^{-lam t} D_t phi dt - (Phi(lam) LT[phi](lam) - Phi(lam)/lam phi(0)) |
inline double laplace_identity_residual(const LevySymbol& sym,
                                        const TemporalFunction& phi, double lam,
                                        const QuadControl& qc = {}) {
    if (lam <= phi.order_w)
        throw std::domain_error("laplace_identity_residual: need lam > exponential "
                                "order of the test function");
    const double gap = lam - phi.order_w;
    const double horizon =
        std::min(300.0, std::log(1e9 * std::max(1.0, phi.bound_m) *
                                 std::max(1.0, sym.phi(lam))) / gap + 5.0);
    const double lhs = integrate(
        [&](double t) {
            return t <= 0.0 ? 0.0
                            : std::exp(-lam * t) * caputo_dzherbashian(sym, phi, t, qc);
        },
        0.0, horizon, qc);
    const double phi_tilde = integrate(
        [&](double t) { return std::exp(-lam * t) * phi(t); }, 0.0, horizon, qc);
    const double rhs = sym.phi(lam) * phi_tilde - sym.phi(lam) / lam * phi(0.0);
    return std::fabs(lhs - rhs);
}

// --- Fourier symbol check -------------------------------------------------------

struct FourierOptions {
    double x_max = 60.0;        // window for the operator-side transform
    double supp_halfwidth = 10.0;  // effective support of the test function
    double tol = 1e-3;          // truncation error budget
    QuadControl qc{1e-10, 1e-9, 8000, true};
};

// | FT[D u](xi) - Phi(+-i xi) FT[u](xi) |, both sides by independent
// quadrature. The operator-side window truncation is repaired with the
// asymptotic tail D u(x) ~ -(u * density)(x) on the slow-decay side:
// exact via the measure tail at xi = 0, an integration-by-parts series
// otherwise. Throws when the estimated truncated mass exceeds tol.
inline double fourier_symbol_residual(const LevySymbol& sym, const SpatialFunction& u,
                                      double xi, Side side,
                                      const FourierOptions& opt = {}) {
    if (!sym.density)
        throw numeric_error("fourier_symbol_residual: density required");
    const double X = opt.x_max;
    const double W = opt.supp_halfwidth;
    if (std::fabs(u(W)) > 1e-12 || std::fabs(u(-W)) > 1e-12)
        throw numeric_error("fourier_symbol_residual: test function not negligible "
                            "at the declared support edge");
    auto op = [&](double x) {
        return side == Side::left ? marchaud_left(sym, u, x, opt.qc)
                                  : marchaud_right(sym, u, x, opt.qc);
    };
    const cplx i_unit(0.0, 1.0);
    auto kernel = [&](double x) -> cplx { return std::exp(-i_unit * xi * x) * op(x); };

    cplx ft_op{};
    QuadControl qg = opt.qc;
    qg.abs_tol = 1e-8;
    qg.rel_tol = 1e-8;
    ft_op += integrate(kernel, -X, -W, qg);
    ft_op += integrate(kernel, -W, W, qg);
    ft_op += integrate(kernel, W, X, qg);

    // Tail repair on the heavy side: +x for the left operator, -x mirrored
    // for the right one.
    const double sgn = (side == Side::left) ? 1.0 : -1.0;
    const double edge = sgn * X;
    if (xi == 0.0) {
        // exact: int_{heavy tail} D u dx = -int u(s) tail(|edge - s|) ds
        const double tail_mass = integrate(
            [&](double s) { return u(s) * sym.tail(std::fabs(edge - s)); }, -W, W,
            opt.qc);
        ft_op += -tail_mass;
    } else {
        // int_a^inf e^{-i xi x} h dx ~  e^{-i xi a} [h/(ix) + h'/(ix)^2 + h''/(ix)^3]
        // int_-inf^a e^{-i xi x} h dx ~ -e^{-i xi a} [same series], a = edge.
        const double d = 0.25;
        const double h0 = op(edge);
        const double hm = op(edge - d), hp = op(edge + d);
        const double h1 = (hp - hm) / (2.0 * d);
        const double h2 = (hp - 2.0 * h0 + hm) / (d * d);
        const cplx ix = i_unit * xi;
        const cplx series = h0 / ix + h1 / (ix * ix) + h2 / (ix * ix * ix);
        ft_op += sgn * std::exp(-i_unit * xi * edge) * series;
        // Estimated size of the first dropped term; refuse if too coarse.
        const double dropped = std::fabs(h2 / (xi * xi * xi)) * 0.5;
        if (dropped > opt.tol)
            throw numeric_error("fourier_symbol_residual: window truncation leaves "
                                "mass above tolerance; enlarge x_max");
    }

    const cplx ft_u = integrate(
        [&](double x) -> cplx { return std::exp(-i_unit * xi * x) * u(x); }, -W, W,
        opt.qc);
    const cplx symbol = (side == Side::left) ? sym.phi_complex(cplx(0.0, xi))
                                             : sym.phi_complex(cplx(0.0, -xi));
    return std::abs(ft_op - symbol * ft_u);
}

}  // namespace nlbm
