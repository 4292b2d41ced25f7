#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "bessel/analysis.hpp"
#include "bessel/laws.hpp"
#include "bessel/samplers.hpp"
#include "bessel/special.hpp"
#include "bessel/survival_pde.hpp"
#include "reference_values.hpp"

using namespace bessel;

TEST_CASE("log grids hit both endpoints with geometric spacing") {
    const std::vector<double> g = log_grid(0.1, 1000.0, 9);
    CHECK(g.size() == 9);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 1000.0);
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        CHECK(g[i + 1] / g[i] == doctest::Approx(std::pow(1e4, 1.0 / 8.0)));
    CHECK_THROWS_AS(log_grid(1.0, 0.5, 5), std::domain_error);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), std::domain_error);
    CHECK_THROWS_AS(log_grid(1.0, 2.0, 1), std::domain_error);
}

TEST_CASE("rate fits recover a pure power law exactly") {
    const auto ts = log_grid(10.0, 1e4, 12);
    const TailCurve c = curve_from_function(
        [](double t) { return 3.0 * std::pow(t, -1.7); }, ts, TailSource::closed_form);
    const RateFit fit = fit_rate(c);
    CHECK(fit.slope == doctest::Approx(-1.7).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(fit.residual_rms < 1e-9);
    CHECK(fit.sign == 1);
    CHECK(fit.window_lo == 10.0);
    CHECK(fit.window_hi == 1e4);

    const TailCurve neg = curve_from_function(
        [](double t) { return -2.0 * std::pow(t, -0.5); }, ts, TailSource::closed_form);
    const RateFit nfit = fit_rate(neg);
    CHECK(nfit.slope == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(nfit.sign == -1);
}

TEST_CASE("a logarithmic correction drags the fitted slope below the clean power") {
    const auto ts = log_grid(1e3, 1e5, 15);
    const TailCurve c = curve_from_function(
        [](double t) { return std::log(t) / (t * t); }, ts, TailSource::closed_form);
    const RateFit fit = fit_rate(c);
    CHECK(fit.slope > -2.0);
    CHECK(fit.slope < -1.8);
}

TEST_CASE("rate fits reject short or sign-changing curves") {
    const auto ts = log_grid(1.0, 10.0, 4);
    const TailCurve shorty = curve_from_function(
        [](double t) { return std::pow(t, -1.0); }, ts, TailSource::closed_form);
    CHECK_THROWS_AS(fit_rate(shorty), std::domain_error);

    const auto ts2 = log_grid(1.0, 10.0, 8);
    const TailCurve wobble = curve_from_function(
        [](double t) { return t < 3.0 ? 1.0 : -1.0; }, ts2, TailSource::closed_form);
    CHECK_THROWS_AS(fit_rate(wobble), std::runtime_error);
}

TEST_CASE("subtracting the leading term isolates the next order of the zero-barrier tail") {
    // reg_gamma_p(nu, a^2/(2t)) = C t^{-nu} (1 - nu/(nu+1) a^2/(2t) + ...)
    const double nu = 0.4, a = 2.0;
    const SignedIndex idx{nu, Sign::minus};
    const auto ts = log_grid(1e3, 1e5, 21);
    const TailCurve tail = curve_from_function(
        [&](double t) { return tau0_tail(nu, a, t); }, ts, TailSource::closed_form);
    const TailCurve rem = remainder(tail, idx, a, 0.0);
    const RateFit fit = fit_rate(rem);
    CHECK(fit.sign == -1);
    CHECK(fit.slope == doctest::Approx(-(nu + 1.0)).epsilon(0.01));
    const double coef = c_const(nu, a, 0.0) * nu / (nu + 1.0) * a * a / 2.0;
    CHECK(std::exp(fit.intercept) == doctest::Approx(coef).epsilon(0.02));
}

TEST_CASE("synthetic second-order curves pass through remainder and fit unchanged") {
    const double nu = 0.4, a = 2.0, b = 1.0;
    const SignedIndex idx{nu, Sign::minus};
    const double lead = leading_coefficient(idx, a, b);
    const auto ts = log_grid(1e2, 1e4, 10);
    const TailCurve c = curve_from_function(
        [&](double t) { return lead * std::pow(t, -nu) + 7.0 * std::pow(t, -2.0 * nu); }, ts,
        TailSource::closed_form);
    const RateFit fit = fit_rate(remainder(c, idx, a, b));
    CHECK(fit.slope == doctest::Approx(-2.0 * nu).epsilon(1e-7));
    CHECK(std::exp(fit.intercept) == doctest::Approx(7.0).epsilon(1e-6));
}

TEST_CASE("the fit window tracks where scheme error is small against the remainder") {
    const SurvivalGrid grid = default_grid(2.0, 1.0, 100.0);
    const SurvivalSolution fine = solve_survival(0.5, grid);
    const SurvivalSolution coarse = solve_survival(0.5, coarsened(grid));
    const SignedIndex idx{0.5, Sign::minus};
    const FitWindow w = select_fit_window(fine, coarse, idx, 2.0, 1.0);
    CHECK(w.hi == doctest::Approx(10.0 * w.lo));
    CHECK(w.hi <= 100.0 * (1.0 + 1e-12));
    CHECK(w.lo >= grid.t_min);

    // at nu = 1/2 the t^{-2 nu} coefficient cancels, so the remainder decays
    // at the next order t^{-3/2}
    const TailCurve curve = curve_from_solution(fine, 2.0, w.lo, w.hi);
    const RateFit fit = fit_rate(remainder(curve, idx, 2.0, 1.0));
    CHECK(fit.sign == -1);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(0.15));
}

TEST_CASE("curves read off a solution use its stored nodes") {
    const SurvivalSolution sol = solve_survival(0.5, default_grid(2.0, 1.0, 10.0));
    const TailCurve c = curve_from_solution(sol, 2.0, 1.0, 10.0);
    CHECK(c.points.size() == 33);  // one decade at 32 nodes per decade, inclusive
    for (const auto& p : c.points) {
        CHECK(p.value == sol.tail_at(2.0, p.t));
        CHECK(p.source == TailSource::oracle);
    }
    CHECK_THROWS_AS(curve_from_solution(sol, 2.0, 20.0, 30.0), std::domain_error);
}

TEST_CASE("coarsening halves the resolution with sane floors") {
    SurvivalGrid g = default_grid(2.0, 1.0, 10.0);
    const SurvivalGrid c = coarsened(g);
    CHECK(c.n_x == g.n_x / 2);
    CHECK(c.substeps == g.substeps / 2);
    g.n_x = 17;
    g.substeps = 1;
    const SurvivalGrid floor = coarsened(g);
    CHECK(floor.n_x == 16);
    CHECK(floor.substeps == 1);
}

TEST_CASE("the gap integral approaches its closed large-t form") {
    const double exact2 = k1_integral(0.4, 1e2, 1.0);
    const double exact4 = k1_integral(0.4, 1e4, 1.0);
    const double asym2 = k1_asymptotic_form(0.4, 1e2, 1.0);
    const double asym4 = k1_asymptotic_form(0.4, 1e4, 1.0);
    CHECK(exact4 > 0.0);
    const double gap2 = std::fabs(exact2 / asym2 - 1.0);
    const double gap4 = std::fabs(exact4 / asym4 - 1.0);
    CHECK(gap4 < 0.02);
    CHECK(gap4 < gap2);
}

TEST_CASE("at index one the gap integral carries a logarithmic factor") {
    const double t = 1e6;
    const double scaled = t * t / std::log(t) * k1_integral(1.0, t, 1.0);
    CHECK(std::fabs(scaled - 2.0) < 2.5 / std::log(t));
}

TEST_CASE("the gap integral vanishes as the window closes") {
    CHECK(k1_integral(0.4, 1.0 + 1e-6, 1.0) < 1e-5);
    CHECK_THROWS_AS(k1_integral(0.4, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(k1_integral(0.4, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(k1_integral(-0.4, 2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(k1_asymptotic_form(0.4, 2.0, 0.0), std::domain_error);
}

TEST_CASE("the cancellation scan classifies indices around one half") {
    const CancellationReport rep = cancellation_scan({0.25, 0.5, 0.75});
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].sign == 1);
    CHECK(rep.rows[1].sign == 0);
    CHECK(rep.rows[2].sign == -1);
    CHECK(rep.rows[1].kappa == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.pattern_holds);
}

TEST_CASE("above index one the gap stays over its liminf bound and the remainder stays negative") {
    const double nu = 1.5, a = 2.0, b = 1.0;
    const SurvivalSolution sol = solve_survival(nu, default_grid(a, b, 1e3));
    const TailCurve tail = curve_from_solution(sol, a, 1e2, 1e3);
    const BoundReport rep = jbound_check(nu, a, b, tail, 0.05);
    CHECK(rep.j_lower_bound == doctest::Approx(ref::jlb_15_2_1).epsilon(1e-12));
    CHECK(rep.j_above_bound);
    CHECK(rep.remainder_negative);
    CHECK(rep.remainder_bounded);
    CHECK(rep.t.size() == tail.points.size());

    CHECK_THROWS_AS(jbound_check(0.5, a, b, tail, 0.05), std::domain_error);
}

TEST_CASE("the renewal identity closes against an exact left side") {
    // nu = 1/2: P_a(tau_b > t) = erf((a - b) / sqrt(2 t)) exactly
    const double nu = 0.5, a = 2.0, b = 1.0, t = 2.0;
    const double lhs = bessel::erf((a - b) / std::sqrt(2.0 * t));
    EulerConfig cfg;
    cfg.dt = 5e-4;
    const std::size_t n = 20000;
    const ResidualReport rep = identity_residual(nu, a, b, t, n, cfg, 123, 1, lhs);
    CHECK(rep.lhs == lhs);
    CHECK(rep.difference_term > 0.0);
    CHECK(rep.d_term > 0.0);
    // the MC interval covers the D-term noise; leave room for the O(dt)
    // sampler bias on top
    CHECK(std::fabs(rep.residual) <= rep.ci95 + 5.0 * cfg.dt);

    const std::vector<double> pre = sample_hitting_times(nu, a, b, n, cfg, 123, 1);
    const ResidualReport rep2 = identity_residual(nu, a, b, t, n, cfg, 123, 1, lhs, 0.0, &pre);
    CHECK(rep2.residual == rep.residual);

    const std::vector<double> wrong(n - 1, 1.0);
    CHECK_THROWS_AS(identity_residual(nu, a, b, t, n, cfg, 123, 1, lhs, 0.0, &wrong),
                    std::domain_error);
    CHECK_THROWS_AS(identity_residual(nu, b, a, t, n, cfg, 123, 1, lhs), std::domain_error);
}
