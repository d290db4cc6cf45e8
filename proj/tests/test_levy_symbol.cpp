#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "nlbm/levy_symbol.hpp"

using namespace nlbm;

TEST_CASE("stable symbol closed forms") {
    const LevySymbol s = stable_symbol(0.5);
    CHECK(s.phi(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.phi(1e-8) < 1e-3);  // Phi(0+) = 0
    CHECK(s.tail(1.0) ==
          doctest::Approx(1.0 / std::tgamma(0.5)).epsilon(1e-14));
    CHECK(s.tail(1e6) < 1e-2 * s.tail(1.0));
    CHECK_THROWS_AS(s.phi(-1.0), std::domain_error);
    CHECK_THROWS_AS(s.tail(0.0), std::domain_error);
}

TEST_CASE("quadrature route matches closed forms across the catalog") {
    for (const char* key :
         {"stable:alpha=0.3", "stable:alpha=0.5", "stable:alpha=0.7",
          "tempered:alpha=0.5,theta=1.0", "gamma:a=1.0,b=1.0"}) {
        const LevySymbol s = parse_symbol(key);
        for (double lam : {0.25, 1.0, 4.0, 16.0}) {
            const double q = s.phi_quadrature(lam);
            const double c = s.phi(lam);
            CHECK_MESSAGE(std::fabs(q - c) <= 1e-6 * c,
                          key, " lam=", lam, " quad=", q, " closed=", c);
        }
    }
}

TEST_CASE("custom-numeric route reproduces the stable symbol") {
    const LevySymbol s = as_custom_numeric(stable_symbol(0.5));
    CHECK(!s.phi_closed);
    CHECK(s.phi(1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tail quadrature and the tail Laplace identity") {
    const LevySymbol s = stable_symbol(0.5);
    // integrate the density from 1 upward: matches tail(1)
    const double via_density = integrate(
        [&](double v) {
            const double y = std::exp(v);
            return s.density(y) * y;
        },
        0.0, std::log(1e18));
    CHECK(via_density == doctest::Approx(s.tail(1.0)).epsilon(1e-7));
    // int e^{-lam z} tail(z) dz = Phi(lam)/lam
    for (double lam : {1.0, 4.0}) {
        CHECK(tail_laplace(s, lam) ==
              doctest::Approx(s.phi(lam) / lam).epsilon(1e-6));
    }
    const LevySymbol g = gamma_symbol(1.0, 1.0);
    CHECK(tail_laplace(g, 1.0) == doctest::Approx(g.phi(1.0)).epsilon(1e-6));
}

TEST_CASE("complex symbol: principal branch, restriction, conjugation") {
    const LevySymbol s = stable_symbol(0.5);
    const cplx at_i = s.phi_complex(cplx(0.0, 1.0));
    CHECK(at_i.real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(at_i.imag() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // quadrature cross-check on the imaginary axis
    const cplx quad = s.phi_complex_quadrature(cplx(0.0, 1.0));
    CHECK(std::abs(quad - at_i) < 1e-6);
    // restriction to the real axis
    CHECK(std::abs(s.phi_complex(cplx(2.0, 0.0)) - s.phi(2.0)) < 1e-12);
    // Hermitian symmetry at z = 1 + 2i via quadrature (real measure)
    const cplx z(1.0, 2.0);
    const cplx a = s.phi_complex_quadrature(z);
    const cplx b = s.phi_complex_quadrature(std::conj(z));
    CHECK(std::abs(a - std::conj(b)) < 1e-9);
    CHECK_THROWS_AS(s.phi_complex(cplx(-0.1, 1.0)), std::domain_error);
}

TEST_CASE("small jump mean vanishes monotonically") {
    for (const char* key :
         {"stable:alpha=0.5", "tempered:alpha=0.5,theta=1.0", "gamma:a=1.0,b=1.0"}) {
        const LevySymbol s = parse_symbol(key);
        double prev = s.small_jump_mean(1e-1);
        for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const double cur = s.small_jump_mean(eps);
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
        CHECK(prev < 1e-3);
        // closed forms agree with direct quadrature
        const LevySymbol n = as_custom_numeric(s);
        CHECK(n.small_jump_mean(1e-3) ==
              doctest::Approx(s.small_jump_mean(1e-3)).epsilon(1e-8));
    }
}

TEST_CASE("Bernstein shape proxy: increasing and concave on a log grid") {
    for (const char* key :
         {"stable:alpha=0.3", "stable:alpha=0.7", "tempered:alpha=0.5,theta=2.0",
          "gamma:a=2.0,b=0.5"}) {
        const LevySymbol s = parse_symbol(key);
        std::vector<double> lam, phi;
        for (int k = -6; k <= 6; ++k) {
            lam.push_back(std::pow(2.0, k));
            phi.push_back(s.phi(lam.back()));
        }
        std::vector<double> dd1;
        for (std::size_t i = 1; i < lam.size(); ++i) {
            dd1.push_back((phi[i] - phi[i - 1]) / (lam[i] - lam[i - 1]));
            CHECK(dd1.back() >= 0.0);
        }
        for (std::size_t i = 1; i < dd1.size(); ++i) {
            const double dd2 = (dd1[i] - dd1[i - 1]) / (lam[i + 1] - lam[i - 1]);
            CHECK(dd2 <= 1e-12);
        }
    }
}

TEST_CASE("jump sampler matches the conditional tail law") {
    for (const char* key :
         {"stable:alpha=0.5", "tempered:alpha=0.6,theta=1.5", "gamma:a=1.0,b=2.0"}) {
        const LevySymbol s = parse_symbol(key);
        Rng rng = Rng::stream(5, 1, 0);
        const double eps = 1e-3;
        const double total = s.tail(eps);
        const int n = 40000;
        // empirical exceedance at two quantile anchors
        double q1 = 0.0, q2 = 0.0;
        double anchor1 = 2.0 * eps, anchor2 = 20.0 * eps;
        int c1 = 0, c2 = 0;
        for (int i = 0; i < n; ++i) {
            const double j = s.sample_jump(eps, rng);
            CHECK(j > eps * (1.0 - 1e-12));
            if (j > anchor1) ++c1;
            if (j > anchor2) ++c2;
        }
        q1 = s.tail(anchor1) / total;
        q2 = s.tail(anchor2) / total;
        const double se1 = std::sqrt(q1 * (1 - q1) / n);
        const double se2 = std::sqrt(q2 * (1 - q2) / n);
        CHECK(std::fabs(static_cast<double>(c1) / n - q1) < 4.0 * se1 + 1e-4);
        CHECK(std::fabs(static_cast<double>(c2) / n - q2) < 4.0 * se2 + 1e-4);
    }
}

TEST_CASE("validation battery accepts the catalog and rejects finite activity") {
    for (const char* key :
         {"stable:alpha=0.5", "tempered:alpha=0.5,theta=1.0", "gamma:a=1.0,b=1.0"}) {
        CHECK_NOTHROW(validate_symbol(parse_symbol(key)));
    }
    // finite-activity impostor: exponential jumps only
    LevySymbol fin = custom_symbol(
        "finite", [](double y) { return std::exp(-y); },
        [](double z) { return std::exp(-z); }, 0.0);
    CHECK_THROWS_AS(validate_symbol(fin), numeric_error);
}

TEST_CASE("symbol key parsing errors") {
    CHECK_THROWS_AS(parse_symbol("weird:alpha=0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_symbol("stable:beta=0.5"), std::invalid_argument);
    CHECK_THROWS_AS(stable_symbol(1.2), std::domain_error);
    CHECK_THROWS_AS(tempered_stable_symbol(0.5, -1.0), std::domain_error);
}
