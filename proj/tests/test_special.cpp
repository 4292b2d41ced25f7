#include <cmath>
#include <cstddef>

#include "bessel/quadrature.hpp"
#include "bessel/special.hpp"
#include "doctest.h"
#include "reference_values.hpp"


using bessel::log_gamma;
using bessel::reg_gamma_p;
using bessel::reg_gamma_q;

TEST_CASE("log_gamma against the frozen grid") {
    constexpr std::size_t n = sizeof(ref::log_gamma_args) / sizeof(double);
    for (std::size_t i = 0; i < n; ++i) {
        CAPTURE(ref::log_gamma_args[i]);
        CHECK(log_gamma(ref::log_gamma_args[i]) ==
              doctest::Approx(ref::log_gamma_vals[i]).epsilon(1e-13));
    }
}

TEST_CASE("log_gamma functional equation") {
    for (double x : {0.13, 0.5, 1.9, 7.3, 41.0}) {
        CHECK(log_gamma(x + 1.0) ==
              doctest::Approx(log_gamma(x) + std::log(x)).epsilon(1e-13));
    }
}

TEST_CASE("log_gamma integer factorials") {
    double f = 1.0;
    for (int k = 1; k <= 15; ++k) {
        CHECK(log_gamma(k) == doctest::Approx(std::log(f)).epsilon(1e-13));
        f *= k;
    }
}

TEST_CASE("regularized incomplete gamma against the frozen grid") {
    constexpr std::size_t n = sizeof(ref::reg_gamma_s) / sizeof(double);
    for (std::size_t i = 0; i < n; ++i) {
        CAPTURE(ref::reg_gamma_s[i]);
        CAPTURE(ref::reg_gamma_x[i]);
        const double p = reg_gamma_p(ref::reg_gamma_s[i], ref::reg_gamma_x[i]);
        CHECK(p == doctest::Approx(ref::reg_gamma_vals[i]).epsilon(1e-13));
        CHECK(p + reg_gamma_q(ref::reg_gamma_s[i], ref::reg_gamma_x[i]) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("reg_gamma_p edge values and monotonicity") {
    CHECK(reg_gamma_p(0.7, 0.0) == 0.0);
    CHECK(reg_gamma_p(0.7, 1e308) == doctest::Approx(1.0));
    double prev = -1.0;
    for (double x = 0.05; x < 20.0; x += 0.35) {
        const double p = reg_gamma_p(1.3, x);
        CHECK(p > prev);
        prev = p;
    }
    CHECK_THROWS_AS(reg_gamma_p(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(reg_gamma_p(1.0, -1.0), std::domain_error);
}

TEST_CASE("reg_gamma_p matches direct quadrature of the density") {
    for (double s : {0.4, 1.0, 2.3}) {
        for (double x : {0.2, 1.0, 4.0}) {
            const double direct =
                bessel::integrate(
                    [s](double u) { return std::exp((s - 1.0) * std::log(u) - u); }, 0.0, x,
                    1e-13)
                    .value /
                std::exp(log_gamma(s));
            CHECK(reg_gamma_p(s, x) == doctest::Approx(direct).epsilon(1e-11));
        }
    }
}

TEST_CASE("erf against the frozen grid") {
    constexpr std::size_t n = sizeof(ref::erf_args) / sizeof(double);
    for (std::size_t i = 0; i < n; ++i) {
        CAPTURE(ref::erf_args[i]);
        CHECK(bessel::erf(ref::erf_args[i]) == doctest::Approx(ref::erf_vals[i]).epsilon(1e-13));
    }
}

TEST_CASE("erf symmetry and limits") {
    CHECK(bessel::erf(0.0) == 0.0);
    for (double x : {0.2, 1.1, 2.7}) CHECK(bessel::erf(-x) == doctest::Approx(-bessel::erf(x)).epsilon(1e-15));
    CHECK(bessel::erf(10.0) == doctest::Approx(1.0));
    // half-index survival identity: erf equals the regularized gamma at s=1/2
    for (double x : {0.3, 0.9, 1.7})
        CHECK(bessel::erf(x) == doctest::Approx(reg_gamma_p(0.5, x * x)).epsilon(1e-14));
}
