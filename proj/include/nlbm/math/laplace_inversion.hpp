#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlbm/math/quadrature.hpp"

// Gaver-Stehfest inversion of Laplace transforms from real-axis samples.
// With double precision the usable orders are roughly 8..16; the order-
// doubling spread is the practical error estimate.

namespace nlbm {

inline std::vector<double> stehfest_weights(int order) {
    if (order < 2 || order % 2 != 0 || order > 18)
        throw std::domain_error("stehfest_weights: order must be even, in [2,18]");
    const int nh = order / 2;
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    std::vector<double> w(order + 1, 0.0);
    for (int k = 1; k <= order; ++k) {
        double sum = 0.0;
        const int j0 = (k + 1) / 2;
        const int j1 = std::min(k, nh);
        for (int j = j0; j <= j1; ++j) {
            double term = std::pow(static_cast<double>(j), nh) * fact(2 * j);
            term /= fact(nh - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k);
            sum += term;
        }
        w[k] = ((nh + k) % 2 == 0 ? 1.0 : -1.0) * sum;
    }
    return w;
}

// Invert F(lambda) at time t > 0.
template <class F>
double gaver_stehfest(F&& transform, double t, int order = 12) {
    if (t <= 0.0) throw std::domain_error("gaver_stehfest: t must be > 0");
    static thread_local std::vector<double> cached;
    static thread_local int cached_order = -1;
    if (cached_order != order) {
        cached = stehfest_weights(order);
        cached_order = order;
    }
    const double ln2_t = 0.6931471805599453 / t;
    double sum = 0.0;
    for (int k = 1; k <= order; ++k) sum += cached[k] * transform(k * ln2_t);
    return ln2_t * sum;
}

// Inversion with an order-spread instability check; throws if the values
// diverge across orders (a sign of a transform the real-axis method cannot
// handle). Returns the requested-order value: with transforms that are
// themselves quadratures, higher orders amplify their noise rather than
// improve the asymptotics.
template <class F>
double gaver_stehfest_checked(F&& transform, double t, double rel_tol = 1e-2,
                              int order = 12) {
    const double lo = gaver_stehfest(transform, t, order - 2);
    const double mid = gaver_stehfest(transform, t, order);
    const double hi = gaver_stehfest(transform, t, order + 2);
    const double scale = std::max({std::fabs(lo), std::fabs(mid), std::fabs(hi), 1e-12});
    if (std::fabs(hi - mid) > rel_tol * scale && std::fabs(mid - lo) > rel_tol * scale &&
        std::fabs(hi - mid) > std::fabs(mid - lo))
        throw numeric_error("gaver_stehfest_checked: inversion unstable across orders; "
                            "consider a contour (Talbot-style) method for this transform");
    return mid;
}

}  // namespace nlbm
