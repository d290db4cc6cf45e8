#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "nlbm/math/laplace_inversion.hpp"
#include "nlbm/math/quadrature.hpp"
#include "nlbm/math/rng.hpp"
#include "nlbm/math/special_functions.hpp"

using namespace nlbm;

TEST_CASE("adaptive quadrature reproduces closed forms") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // endpoint singularity 1/sqrt(x)
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                    {1e-10, 1e-10, 20000, false}) ==
          doctest::Approx(2.0).epsilon(1e-6));
    // oscillatory complex integrand
    const std::complex<double> i(0.0, 1.0);
    auto v = integrate([&](double x) { return std::exp(-i * x); }, 0.0, 3.141592653589793);
    CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(v.imag() == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("incomplete gamma and exponential integral") {
    // Gamma(0.5, x) = sqrt(pi) erfc(sqrt(x))
    for (double x : {0.1, 0.5, 1.0, 3.0}) {
        CHECK(upper_gamma(0.5, x) ==
              doctest::Approx(std::sqrt(3.141592653589793) * std::erfc(std::sqrt(x)))
                  .epsilon(1e-12));
    }
    // E1 against quadrature
    for (double x : {0.25, 1.0, 2.5}) {
        const double direct = integrate(
            [&](double v) { return std::exp(-x * std::exp(v)) ; }, 0.0, 8.0);
        // int_x^inf e^{-t}/t dt = int_0^inf e^{-x e^v} dv
        CHECK(expint_e1(x) == doctest::Approx(direct).epsilon(1e-9));
    }
    // Gamma(-0.5, x) by recurrence vs quadrature
    const double x0 = 0.7;
    const double direct = integrate(
        [&](double t) { return std::pow(t, -1.5) * std::exp(-t); }, x0, 60.0);
    CHECK(upper_gamma_neg(-0.5, x0) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("Gaver-Stehfest inverts elementary transforms") {
    // 1/lam -> 1
    CHECK(gaver_stehfest([](double l) { return 1.0 / l; }, 1.7) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // 1/(lam+1) -> e^{-t}; order 12 carries ~3-5 digits on decaying transforms
    for (double t : {0.3, 1.0, 2.5}) {
        CHECK(gaver_stehfest([](double l) { return 1.0 / (l + 1.0); }, t) ==
              doctest::Approx(std::exp(-t)).epsilon(2e-3));
        CHECK(gaver_stehfest([](double l) { return 1.0 / (l + 1.0); }, t, 16) ==
              doctest::Approx(std::exp(-t)).epsilon(5e-5));
    }
    // 1/lam^2 -> t
    CHECK(gaver_stehfest([](double l) { return 1.0 / (l * l); }, 2.0) ==
          doctest::Approx(2.0).epsilon(1e-5));
    // e^{-sqrt(lam)} / lam -> erfc(1/(2 sqrt(t)))  (a transform with a branch cut)
    const double t = 1.0;
    CHECK(gaver_stehfest([](double l) { return std::exp(-std::sqrt(l)) / l; }, t, 14) ==
          doctest::Approx(std::erfc(0.5 / std::sqrt(t))).epsilon(1e-5));
}

TEST_CASE("rng streams are deterministic and independent") {
    Rng a = Rng::stream(42, 7, 0);
    Rng b = Rng::stream(42, 7, 0);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c = Rng::stream(42, 8, 0);
    bool differ = false;
    Rng a2 = Rng::stream(42, 7, 0);
    for (int i = 0; i < 10; ++i) differ |= (a2.next_u64() != c.next_u64());
    CHECK(differ);
}

TEST_CASE("rng normal moments") {
    Rng r = Rng::stream(1, 0, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(s / n == doctest::Approx(0.0).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.1));
}
