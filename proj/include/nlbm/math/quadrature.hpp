#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace nlbm {

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct range_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_intervals = 8000;
    bool throw_on_failure = true;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (positive half).
inline constexpr double gk15_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
double vnorm(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>)
        return std::abs(v);
    else
        return std::fabs(v);
}

template <class F>
auto gk15(F&& f, double a, double b, double& err)
    -> std::decay_t<decltype(f(a))> {
    using T = std::decay_t<decltype(f(a))>;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T resk = fc * gk15_wk[7];
    T resg = fc * gk15_wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk15_x[j];
        T fsum = f(c - dx) + f(c + dx);
        resk += fsum * gk15_wk[j];
        if (j % 2 == 1) resg += fsum * gk15_wg[j / 2];
    }
    err = vnorm<T>((resk - resg) * h);
    return resk * h;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod quadrature on a finite interval, with an
// optional initial uniform segmentation (narrow features far from the panel
// nodes are invisible to a single opening panel; a bounded initial panel
// width makes the refinement signal reliable). Works for real and complex
// integrands.
template <class F>
auto integrate_segmented(F&& f, double a, double b, double max_panel,
                         const QuadControl& qc = {})
    -> std::decay_t<decltype(f(a))> {
    using T = std::decay_t<decltype(f(a))>;
    if (a == b) return T{};
    struct Seg {
        double a, b, err;
        T val;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::priority_queue<Seg> heap;
    T total{};
    double toterr = 0.0;
    int n = 0;
    const int n0 = (max_panel > 0.0 && max_panel < b - a)
                       ? static_cast<int>(std::ceil((b - a) / max_panel))
                       : 1;
    for (int k = 0; k < n0; ++k) {
        const double x0 = a + (b - a) * k / n0;
        const double x1 = a + (b - a) * (k + 1) / n0;
        double e;
        T v = detail::gk15(f, x0, x1, e);
        heap.push({x0, x1, e, v});
        total += v;
        toterr += e;
        n += 1;
    }
    while (toterr > std::max(qc.abs_tol, qc.rel_tol * detail::vnorm<T>(total)) &&
           n < qc.max_intervals) {
        Seg s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        double e1, e2;
        T v1 = detail::gk15(f, s.a, m, e1);
        T v2 = detail::gk15(f, m, s.b, e2);
        total += v1 + v2 - s.val;
        toterr += e1 + e2 - s.err;
        heap.push({s.a, m, e1, v1});
        heap.push({m, s.b, e2, v2});
        n += 1;
        if (s.b - s.a < 1e-15 * (std::fabs(s.a) + std::fabs(s.b) + 1.0)) break;
    }
    const double target =
        std::max(qc.abs_tol, qc.rel_tol * detail::vnorm<T>(total));
    const double floor = 1e-11 * (1.0 + detail::vnorm<T>(total));
    if (toterr > std::max(10.0 * target, floor) && qc.throw_on_failure) {
        throw numeric_error("quadrature did not converge on [" +
                            std::to_string(a) + ", " + std::to_string(b) +
                            "], error estimate " + std::to_string(toterr));
    }
    return total;
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadControl& qc = {})
    -> std::decay_t<decltype(f(a))> {
    return integrate_segmented(f, a, b, 0.0, qc);
}

}  // namespace nlbm
