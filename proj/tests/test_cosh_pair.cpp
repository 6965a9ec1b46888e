#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ggf/cosh_pair.hpp"

using namespace ggf::cosh_pair;

TEST_CASE("psi and psi_star vanish at the origin") {
    CHECK(psi(0.0) == 0.0);
    CHECK(psi_star(0.0) == 0.0);
}

TEST_CASE("psi_star closed-form value at 1") {
    CHECK(psi_star(1.0) == doctest::Approx(4.0 * (std::cosh(0.5) - 1.0)).epsilon(1e-14));
    CHECK(psi_star(1.0) == doctest::Approx(0.51050386).epsilon(1e-7));
}

TEST_CASE("psi agrees with its logarithmic closed form") {
    // psi(s) = 2 s log((s + sqrt(s^2+4))/2) - 2 sqrt(s^2+4) + 4
    for (double s : {-7.0, -1.5, -0.25, 0.5, 2.0, 11.0}) {
        const double r = std::sqrt(s * s + 4.0);
        const double ref = 2.0 * s * std::log((s + r) / 2.0) - 2.0 * r + 4.0;
        CHECK(psi(s) == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("both functions are even") {
    for (double v : {0.3, 1.7, 4.0, 9.5}) {
        CHECK(psi(v) == doctest::Approx(psi(-v)).epsilon(1e-14));
        CHECK(psi_star(v) == doctest::Approx(psi_star(-v)).epsilon(1e-14));
    }
}

TEST_CASE("inverse round-trip") {
    CHECK(psi_inverse(psi(2.0)) == doctest::Approx(2.0).epsilon(1e-10));
    for (double s : {1e-4, 0.1, 0.9, 5.0, 40.0, 300.0})
        CHECK(psi_inverse(psi(s)) == doctest::Approx(s).epsilon(1e-10));
    CHECK(psi_inverse(0.0) == 0.0);
    CHECK_THROWS_AS(psi_inverse(-1.0), std::domain_error);
}

TEST_CASE("Fenchel-Young gap on a 101x101 grid") {
    for (int i = 0; i <= 100; ++i) {
        const double s = -5.0 + 0.1 * i;
        for (int j = 0; j <= 100; ++j) {
            const double xi = -5.0 + 0.1 * j;
            CHECK(psi(s) + psi_star(xi) - s * xi >= -1e-12);
        }
        // equality at xi = psi'(s)
        const double xi_star = psi_prime(s);
        CHECK(std::abs(psi(s) + psi_star(xi_star) - s * xi_star) <= 1e-9);
    }
}

TEST_CASE("derivatives match finite differences") {
    const double eps = 1e-6;
    for (double v : {-3.0, -0.4, 0.7, 2.5}) {
        CHECK(psi_prime(v) ==
              doctest::Approx((psi(v + eps) - psi(v - eps)) / (2 * eps)).epsilon(1e-7));
        CHECK(psi_star_prime(v) ==
              doctest::Approx((psi_star(v + eps) - psi_star(v - eps)) / (2 * eps))
                  .epsilon(1e-7));
    }
}

TEST_CASE("inverse upper bound r/xi + psi_star(xi)/xi") {
    for (double xi : {0.5, 1.0, 2.0})
        for (int i = 0; i <= 100; ++i) {
            const double r = i;
            CHECK(psi_inverse(r) <= r / xi + psi_star(xi) / xi + 1e-10);
        }
}

TEST_CASE("psi_star bounded by xi^2 cosh(xi/2)") {
    for (int i = -40; i <= 40; ++i) {
        const double xi = 0.5 * i;
        CHECK(psi_star(xi) <= xi * xi * std::cosh(0.5 * xi) + 1e-12);
    }
}

TEST_CASE("s -> s psi(p/s) is non-increasing") {
    for (double p : {0.5, 1.0, 2.0, 5.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double s = 0.1; s <= 10.0; s += 0.1) {
            const double val = s * psi(p / s);
            CHECK(val <= prev + 1e-12);
            prev = val;
        }
    }
}

TEST_CASE("convexity on sample triples") {
    for (double a : {-4.0, -1.0, 0.5, 3.0}) {
        const double b = a + 0.7, m = 0.5 * (a + b);
        CHECK(psi(m) <= 0.5 * (psi(a) + psi(b)) + 1e-14);
        CHECK(psi_star(m) <= 0.5 * (psi_star(a) + psi_star(b)) + 1e-14);
    }
}

TEST_CASE("psi_star overflow guard") {
    CHECK_THROWS_AS(psi_star(1401.0), std::overflow_error);
    CHECK_THROWS_AS(psi_star(-1401.0), std::overflow_error);
    CHECK(psi_star(1399.0) > 0.0);
}
