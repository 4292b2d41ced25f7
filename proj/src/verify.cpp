#include "bessel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "bessel/analysis.hpp"
#include "bessel/laws.hpp"
#include "bessel/quadrature.hpp"
#include "bessel/samplers.hpp"
#include "bessel/special.hpp"
#include "bessel/survival_pde.hpp"

#include "json.hpp"

namespace bessel {
namespace {

// Pinned acceptance tolerances.  Statistical checks use kSigmaFactor times
// the standard error plus, where the estimator is a discretized path
// functional, an O(dt) allowance with the constant below.
constexpr double kTolKappa = 1e-9;
constexpr double kTolRecurrence = 1e-12;
constexpr double kTolIntegralTransform = 1e-8;   // relative
constexpr double kTolLeading = 0.02;         // relative
constexpr double kTolExactScaling = 1e-15;   // the plus/minus tail ratio is algebraic
constexpr double kTolSlope = 0.15;           // absolute, on the fitted exponent
constexpr double kTolSecondCoef = 0.10;      // relative
constexpr double kTolLogCoef = 0.10;         // relative
constexpr double kTolJLimit = 0.05;          // relative
constexpr double kTolJBound = 0.05;          // relative slack below the lower bound
constexpr double kSigmaFactor = 4.0;
constexpr double kDtBiasPerUnit = 5.0;      // first-order discretization allowance: 5 * dt
constexpr double kRhoBiasAllowance = 0.03;  // relative, finite-horizon convergence gap
constexpr double kKs1Percent = 1.628;       // asymptotic 1% Kolmogorov quantile
constexpr double kTolOracleB0 = 2e-3;        // absolute
constexpr double kTolResidualFloor = 1e-5;   // oracle CI floor in the renewal check

CheckResult abs_check(std::string claim, std::string location, double measured, double expected,
                      double tol) {
    CheckResult r{std::move(claim), std::move(location), measured, expected, tol, false};
    r.pass = std::isfinite(measured) && std::fabs(measured - expected) <= tol;
    return r;
}

CheckResult rel_check(std::string claim, std::string location, double measured, double expected,
                      double rel_tol) {
    CheckResult r{std::move(claim), std::move(location), measured, expected, rel_tol, false};
    r.pass = std::isfinite(measured) &&
             std::fabs(measured - expected) <= rel_tol * std::fabs(expected);
    return r;
}

SurvivalSolution oracle_fine(double nu, double a, double b, double t_max,
                             const VerifyOptions& opt) {
    return solve_survival_cached(nu, default_grid(a, b, t_max), opt.cache_dir);
}

SurvivalSolution oracle_coarse(double nu, double a, double b, double t_max,
                               const VerifyOptions& opt) {
    return solve_survival_cached(nu, coarsened(default_grid(a, b, t_max)), opt.cache_dir);
}

// Hitting-time batches are the slowest Monte Carlo ingredient; two criteria
// share the (0.8, 2, 1) batch, so memoize per process.
const std::vector<double>& memo_hits(double nu, double a, double b, std::size_t n,
                                     const EulerConfig& cfg, std::uint64_t seed, int threads) {
    static std::mutex mu;
    static std::map<std::string, std::vector<double>> store;
    char key[160];
    std::snprintf(key, sizeof key, "%.17g|%.17g|%.17g|%zu|%.17g|%llu", nu, a, b, n, cfg.dt,
                  static_cast<unsigned long long>(seed));
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = store.find(key); it != store.end()) return it->second;
    }
    std::vector<double> s = sample_hitting_times(nu, a, b, n, cfg, seed, threads);
    std::lock_guard<std::mutex> lock(mu);
    return store.emplace(key, std::move(s)).first->second;
}

double sigma_of(const McEstimate& est) { return est.ci95 / 1.96; }

// nu_filter > 0 narrows a run to the checks pinned at that index.  Checks
// without a single pinned index (scans, random-tuple identities) run only
// when no filter is set.
bool selected(const VerifyOptions& opt, double nu) {
    return opt.nu_filter <= 0.0 || std::fabs(opt.nu_filter - nu) <= 1e-12;
}

bool unfiltered(const VerifyOptions& opt) { return opt.nu_filter <= 0.0; }

}  // namespace

std::vector<CheckResult> check_constants_cancellation(const VerifyOptions& opt) {
    if (!unfiltered(opt)) return {};
    std::vector<CheckResult> out;
    const KappaForms kf = kappa_forms(0.5);
    out.push_back(abs_check("kappa(1/2) = 2 by the semi-infinite representation",
                            "laws/kappa-semi-infinite", kf.semi_infinite, 2.0, kTolKappa));
    out.push_back(abs_check("kappa(1/2) = 2 by the finite-interval representation",
                            "laws/kappa-finite-interval", kf.finite_interval, 2.0, kTolKappa));
    const CancellationReport rep = cancellation_scan({0.25, 0.5, 0.75});
    auto sign_check = [](std::string claim, const CancellationRow& row, int want) {
        CheckResult r{std::move(claim), "analysis/cancellation-scan", row.one_minus_nu_kappa,
                      static_cast<double>(want), 0.0, row.sign == want};
        return r;
    };
    out.push_back(sign_check("1 - nu kappa(nu) positive at nu = 1/4", rep.rows[0], 1));
    out.push_back(abs_check("1 - nu kappa(nu) vanishes at nu = 1/2",
                            "analysis/cancellation-scan", rep.rows[1].one_minus_nu_kappa, 0.0,
                            kTolKappa));
    out.push_back(sign_check("1 - nu kappa(nu) negative at nu = 3/4", rep.rows[2], -1));
    out.push_back(CheckResult{"sign pattern of 1 - nu kappa across nu = 1/2 is (+, 0, -)",
                              "analysis/cancellation-scan", rep.pattern_holds ? 1.0 : 0.0, 1.0,
                              0.0, rep.pattern_holds});
    return out;
}

std::vector<CheckResult> check_exact_identities(const VerifyOptions& opt) {
    if (!unfiltered(opt)) return {};
    std::vector<CheckResult> out;
    RngStream rng(opt.seed, 0x2222);
    double worst_rec = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double nu = 0.1 + 4.9 * rng.uniform();
        const double x = 0.05 + 5.0 * rng.uniform();
        const double t = 0.05 + 10.0 * rng.uniform();
        const double head = std::exp(2.0 * nu * std::log(x) - x * x / (2.0 * t) -
                                     nu * std::log(2.0 * t) - log_gamma(nu + 1.0));
        const double resid =
            std::fabs(tau0_tail(nu, x, t) - head - tau0_tail(nu + 1.0, x, t));
        worst_rec = std::max(worst_rec, resid);
    }
    out.push_back(abs_check(
        "index-raising recurrence of the tau_0 tail holds on 100 random tuples",
        "laws/tau0-tail-recurrence", worst_rec, 0.0, kTolRecurrence));

    double worst_int = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double c = 0.3 + 2.7 * rng.uniform();
        const double x = c + 0.05 + 8.0 * rng.uniform();
        const double al = -2.0 + 5.0 * rng.uniform();
        const double be = -2.0 + 5.0 * rng.uniform();
        auto lhs_f = [&](double y) {
            return std::pow(y, -al) * std::pow(x + c - y, -be);
        };
        auto rhs_f = [&](double y) {
            return std::pow(y + c, al + be - 2.0) *
                   (std::pow(c, al) * std::pow(y, -al) + std::pow(c, be) * std::pow(y, -be));
        };
        // integral magnitudes range over orders of magnitude with the random
        // exponents, so scale the quadrature tolerance off a one-panel pass
        auto refined = [](const std::function<double(double)>& f, double lo, double hi) {
            const double crude = std::fabs(integrate(f, lo, hi, 1e6).value);
            return integrate(f, lo, hi, 1e-11 * std::max(1.0, crude)).value;
        };
        const double lhs = refined(lhs_f, c, x);
        const double rhs = std::pow(c * (x + c), -(al + be - 1.0)) * refined(rhs_f, c, x);
        const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        worst_int = std::max(worst_int, std::fabs(lhs - rhs) / scale);
    }
    out.push_back(abs_check(
        "convolution-kernel integral transform holds on 100 random tuples",
        "analysis/integral-transform", worst_int, 0.0, kTolIntegralTransform));
    return out;
}

std::vector<CheckResult> check_leading_order_limits(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const double a = 2.0, b = 1.0, t = 1e4;
    const struct {
        double nu, t_max;
    } cases[] = {{0.5, 1e4}, {1.0, 1e5}, {1.5, 1e4}};
    char buf[160];
    for (const auto& cs : cases) {
        if (!selected(opt, cs.nu)) continue;
        const SurvivalSolution sol = oracle_fine(cs.nu, a, b, cs.t_max, opt);
        const double measured = std::pow(t, cs.nu) * sol.tail_at(a, t);
        std::snprintf(buf, sizeof buf,
                      "t^nu times the downward tail approaches its constant at nu=%g", cs.nu);
        out.push_back(rel_check(buf, "oracle/leading-order-limit", measured,
                                c_const(cs.nu, a, b), kTolLeading));
        const SignedIndex up{cs.nu, Sign::plus}, down{cs.nu, Sign::minus};
        const double ratio = leading_coefficient(up, a, b) / leading_coefficient(down, a, b);
        std::snprintf(buf, sizeof buf,
                      "upper-index tail constant is the exact (b/a)^{2 nu} multiple at nu=%g",
                      cs.nu);
        out.push_back(abs_check(buf, "laws/plus-minus-tail-relation", ratio,
                                sign_relation_factor(cs.nu, a, b), kTolExactScaling));
    }
    return out;
}

std::vector<CheckResult> check_second_order_below_one(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const double a = 2.0, b = 1.0;
    char buf[160];
    for (double nu : {0.3, 0.4, 0.7}) {
        if (!selected(opt, nu)) continue;
        const SignedIndex idx{nu, Sign::minus};
        // the second-order coefficient converges slowly along these curves
        // (at nu = 0.7 its relative deficit is still ~11% at t = 1e4), so the
        // window has to reach t ~ 1e5, and gating the scheme error below 10%
        // of a remainder four decades under the tail needs the refined grid
        SurvivalGrid grid = default_grid(a, b, 1e5);
        grid.n_x = 7200;
        grid.substeps = 16;
        const SurvivalSolution fine = solve_survival_cached(nu, grid, opt.cache_dir);
        const SurvivalSolution coarse = solve_survival_cached(nu, coarsened(grid), opt.cache_dir);
        const FitWindow win = select_fit_window(fine, coarse, idx, a, b);
        const double hi = std::min(win.hi, 1e5);
        const double lo = std::max(hi / 10.0, 1e2);
        const TailCurve curve = curve_from_solution(fine, a, lo, hi);
        const TailCurve rem = remainder(curve, idx, a, b);
        const RateFit fit = fit_rate(rem);
        std::snprintf(buf, sizeof buf, "remainder of the downward tail decays at rate 2 nu (nu=%g)",
                      nu);
        out.push_back(abs_check(buf, "analysis/remainder-rate", fit.slope, -2.0 * nu, kTolSlope));
        const TailPoint& end = rem.points.back();
        const double coef = end.value * std::pow(end.t, 2.0 * nu);
        std::snprintf(buf, sizeof buf, "second-order coefficient matches at the window end (nu=%g)",
                      nu);
        out.push_back(rel_check(buf, "laws/expansion-second-order", coef,
                                expansion(idx, a, b).second, kTolSecondCoef));
    }
    return out;
}

std::vector<CheckResult> check_second_order_log_regime(const VerifyOptions& opt) {
    if (!selected(opt, 1.0)) return {};
    std::vector<CheckResult> out;
    const double a = 2.0, b = 1.0;
    const double c1 = c_const(1.0, a, b);
    // resolving a remainder of ~1.4e-7 at t = 1e4 under a tail of 1.5e-4
    // needs about 3e-5 relative accuracy, an order beyond the default grid
    SurvivalGrid grid = default_grid(a, b, 1e5);
    grid.n_x = 7200;
    grid.substeps = 16;
    const SurvivalSolution fine = solve_survival_cached(1.0, grid, opt.cache_dir);
    const SurvivalSolution coarse = solve_survival_cached(1.0, coarsened(grid), opt.cache_dir);
    double t_star = 0.0, rem_star = 0.0;
    for (std::size_t k = fine.t.size(); k-- > 0;) {
        const double t = fine.t[k];
        const double rem = fine.tail_at(a, t) - c1 / t;
        const double err = std::fabs(fine.tail_at(a, t) - coarse.tail_at(a, t));
        if (rem != 0.0 && err <= 0.1 * std::fabs(rem)) {
            t_star = t;  // largest stored time where scheme error is gated
            rem_star = rem;
            break;
        }
    }
    out.push_back(CheckResult{
        "oracle resolves the log-regime remainder at a time of at least 1e4",
        "oracle/reliable-horizon", t_star, 1e4, 0.0, t_star >= 1e4 * (1.0 - 1e-12)});
    const double measured =
        t_star > 0.0 ? t_star * t_star / std::log(t_star) * rem_star
                     : std::numeric_limits<double>::quiet_NaN();
    out.push_back(rel_check(
        "scaled remainder (t^2 / log t) approaches -b^2 C at the unit index",
        "laws/expansion-log-regime", measured, -(b * b) * c1, kTolLogCoef));
    return out;
}

std::vector<CheckResult> check_second_order_above_one(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const double a = 2.0, b = 1.0;
    char buf[160];
    for (double nu : {1.5, 2.0}) {
        if (!selected(opt, nu)) continue;
        const SurvivalSolution sol = oracle_fine(nu, a, b, 1e3, opt);
        const TailCurve curve = curve_from_solution(sol, a, 1e2, 1e3);
        const BoundReport rep = jbound_check(nu, a, b, curve, kTolJBound);
        const double max_scaled =
            *std::max_element(rep.scaled_remainder.begin(), rep.scaled_remainder.end());
        std::snprintf(buf, sizeof buf,
                      "scaled remainder t^{nu+1} (tail - leading) stays negative (nu=%g)", nu);
        out.push_back(CheckResult{buf, "analysis/remainder-sign", max_scaled, 0.0, 0.0,
                                  rep.remainder_negative});
        double max_abs = 0.0;
        for (double v : rep.scaled_remainder) max_abs = std::max(max_abs, std::fabs(v));
        std::snprintf(buf, sizeof buf, "scaled remainder stays bounded over the decade (nu=%g)",
                      nu);
        out.push_back(CheckResult{buf, "analysis/remainder-bounded", max_abs, rep.remainder_cap,
                                  0.0, rep.remainder_bounded});
        double min_top = rep.scaled_j.back();
        for (std::size_t i = rep.t.size() >= 3 ? rep.t.size() - 3 : 0; i < rep.t.size(); ++i)
            min_top = std::min(min_top, rep.scaled_j[i]);
        std::snprintf(buf, sizeof buf,
                      "scaled identity gap t^{nu+1} J stays above its lower bound (nu=%g)", nu);
        out.push_back(CheckResult{buf, "analysis/identity-gap-bound", min_top, rep.j_lower_bound,
                                  kTolJBound * rep.j_lower_bound, rep.j_above_bound});
    }
    return out;
}

std::vector<CheckResult> check_identity_gap_limit(const VerifyOptions& opt) {
    if (!selected(opt, 0.4)) return {};
    const double nu = 0.4, a = 2.0, b = 1.0, t = 1e4;
    const SurvivalSolution sol = oracle_fine(nu, a, b, 1e5, opt);
    const double j = i_parts(nu, a, b, t).direct - sol.tail_at(a, t);
    const double measured = std::pow(t, 2.0 * nu) * j;
    const double expected = std::exp(2.0 * nu * std::log(b) - nu * M_LN2 - log_gamma(nu)) *
                            c_const(nu, a, b) * kappa(nu);
    return {rel_check("scaled identity gap t^{2 nu} J approaches its constant at nu = 0.4",
                      "analysis/identity-gap-limit", measured, expected, kTolJLimit)};
}

std::vector<CheckResult> check_renewal_identity(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const EulerConfig cfg;  // dt = 1e-4, bridge correction on
    const std::size_t n = 100000;
    const struct {
        double nu, a, b, t;
    } pts[] = {{0.8, 2.0, 1.0, 5.0}, {1.5, 3.0, 1.0, 10.0}};
    char buf[160];
    for (const auto& p : pts) {
        if (!selected(opt, p.nu)) continue;
        const SurvivalSolution fine = oracle_fine(p.nu, p.a, p.b, p.t, opt);
        const SurvivalSolution coarse = oracle_coarse(p.nu, p.a, p.b, p.t, opt);
        const double lhs = fine.tail_at(p.a, p.t);
        const double oci =
            3.0 * std::fabs(lhs - coarse.tail_at(p.a, p.t)) + kTolResidualFloor;
        const auto& hits = memo_hits(p.nu, p.a, p.b, n, cfg, opt.seed, opt.threads);
        const ResidualReport rep = identity_residual(p.nu, p.a, p.b, p.t, n, cfg, opt.seed,
                                                     opt.threads, lhs, oci, &hits);
        std::snprintf(buf, sizeof buf,
                      "renewal identity residual vanishes at (nu=%g, a=%g, b=%g, t=%g)", p.nu,
                      p.a, p.b, p.t);
        out.push_back(abs_check(buf, "analysis/renewal-identity", rep.residual, 0.0, rep.ci95));
    }
    return out;
}

std::vector<CheckResult> check_convolution_consistency(const VerifyOptions& opt) {
    if (!selected(opt, 0.8)) return {};
    const double nu = 0.8, a = 2.0, b = 1.0, t = 5.0;
    const EulerConfig cfg;
    const std::size_t n = 100000;
    const auto& s = memo_hits(nu, a, b, n, cfg, opt.seed, opt.threads);
    RngStream urng(opt.seed, 0x601);
    std::size_t count = 0;
    for (double si : s)
        if (si + tau0_sample(nu, b, urng) > t) ++count;
    const double p_hat = static_cast<double>(count) / static_cast<double>(n);
    const double expected = tau0_tail(nu, a, t);
    const double sigma = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
    return {abs_check(
        "hit-then-restart convolution reproduces the tau_0 tail from the start point",
        "samplers/strong-markov-convolution", p_hat, expected, kSigmaFactor * sigma)};
}

std::vector<CheckResult> check_infimum_time_limits(const VerifyOptions& opt) {
    if (!selected(opt, 1.0)) return {};
    std::vector<CheckResult> out;

    // argmin-time tail
    {
        const double nu = 1.0, a = 1.0, t = 50.0;
        EulerConfig cfg;
        cfg.dt = 5e-4;
        const McEstimate est = estimate_rho_tail(nu, a, t, 1000000, cfg, opt.seed, opt.threads);
        const double measured = std::pow(t, nu) * est.mean;
        const double expected = rho_limits(nu, a, 0.0).argmin_tail;
        const double tol = kSigmaFactor * std::pow(t, nu) * sigma_of(est) +
                           kRhoBiasAllowance * expected;
        out.push_back(abs_check(
            "t^nu times the argmin-time tail approaches a^{2 nu}/(2^{nu+1} Gamma(nu+1))",
            "samplers/argmin-time-tail", measured, expected, tol));
    }

    // weighted-minimum functional
    {
        const double nu = 1.0, a = 1.0, t = 100.0;
        EulerConfig cfg;
        cfg.dt = 2e-3;
        auto g = [](double m, double r) { return m * m * (2.0 - m) / (r * r); };
        const McEstimate est =
            estimate_upper_functional(nu, a, t, g, 400000, cfg, opt.seed, opt.threads);
        const double measured = std::pow(t, nu) * est.mean;
        auto f = [](double z) { return z * z * (2.0 - z); };
        const double expected = functional_limit(nu, a, f, FunctionalKind::weighted_min);
        const double tol = kSigmaFactor * std::pow(t, nu) * sigma_of(est);
        out.push_back(abs_check(
            "t^nu times the weighted running-minimum functional approaches its integral",
            "samplers/weighted-minimum-functional", measured, expected, tol));
    }
    return out;
}

std::vector<CheckResult> check_long_horizon_conditioning(const VerifyOptions& opt) {
    if (!selected(opt, 0.7)) return {};
    const double nu = 0.7, a = 1.0, t = 1.0, s = 1000.0;
    EulerConfig cfg;
    cfg.dt = 2e-4;
    auto f = [](double x) { return x * x / (1.0 + x * x); };
    const McEstimate cond =
        conditioned_expectation(nu, a, t, s, f, 100000, cfg, opt.seed, opt.threads);
    auto g = [&f](double, double r) { return f(r); };
    const McEstimate upper =
        estimate_upper_functional(nu, a, t, g, 100000, cfg, opt.seed, opt.threads);
    const double sigma = std::hypot(sigma_of(cond), sigma_of(upper));
    return {abs_check(
        "surviving-path conditioning at a long horizon matches the upper-index law",
        "samplers/long-horizon-conditioning", cond.mean - upper.mean, 0.0,
        kSigmaFactor * sigma)};
}

std::vector<CheckResult> check_sampler_validity(const VerifyOptions& opt) {
    std::vector<CheckResult> out;

    // exact tau_0 sampler distribution
    if (selected(opt, 0.8)) {
        const double nu = 0.8, a = 2.0;
        const std::size_t n = 200000;
        RngStream rng(opt.seed, 0x777);
        std::vector<double> us(n);
        for (auto& u : us) u = reg_gamma_p(nu, a * a / (2.0 * tau0_sample(nu, a, rng)));
        const double ks = ks_statistic(std::move(us), [](double x) { return x; });
        out.push_back(abs_check(
            "closed-form hitting-time sampler passes a 1% Kolmogorov test",
            "samplers/tau0-distribution", ks, 0.0, kKs1Percent / std::sqrt(static_cast<double>(n))));
    }

    // path-sampler benchmark against the exact half-index curve
    const double a = 2.0, b = 1.0, t = 4.0;
    const double exact = erf((a - b) / std::sqrt(2.0 * t));
    if (selected(opt, 0.5)) {
        const EulerConfig cfg;  // dt = 1e-4
        const McEstimate est =
            estimate_tail({0.5, Sign::minus}, a, b, t, 100000, cfg, opt.seed, opt.threads);
        out.push_back(abs_check(
            "discretized walk reproduces the exact half-index survival probability",
            "samplers/half-index-benchmark", est.mean, exact,
            kSigmaFactor * sigma_of(est) + kDtBiasPerUnit * cfg.dt));
    }

    // first-order bias: halving dt roughly halves the error.  A wide gap
    // keeps the coarse rung of the ladder inside the walk's asymptotic
    // regime, and a horizon near the hitting-density peak amplifies the
    // clock bias far above the Monte Carlo noise floor.
    if (selected(opt, 0.5)) {
        const double wa = 4.0, wb = 1.0, wt = 9.0;
        const double wide_exact = erf((wa - wb) / std::sqrt(2.0 * wt));
        EulerConfig coarse_cfg, mid_cfg;
        coarse_cfg.dt = 0.1;
        mid_cfg.dt = 0.05;
        const std::size_t n = 4000000;
        const McEstimate e0 =
            estimate_tail({0.5, Sign::minus}, wa, wb, wt, n, coarse_cfg, opt.seed, opt.threads);
        const McEstimate e1 =
            estimate_tail({0.5, Sign::minus}, wa, wb, wt, n, mid_cfg, opt.seed, opt.threads);
        const double ratio = (e0.mean - wide_exact) / (e1.mean - wide_exact);
        out.push_back(abs_check("halving the step halves the discretization bias",
                                "samplers/bias-order", ratio, 2.0, 0.5));
    }
    return out;
}

std::vector<CheckResult> check_oracle_validity(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    if (selected(opt, 0.5)) {
        const double a = 2.0, b = 1.0;
        const SurvivalSolution fine = oracle_fine(0.5, a, b, 1e3, opt);
        const SurvivalSolution coarse = oracle_coarse(0.5, a, b, 1e3, opt);
        double ef = 0.0, ec = 0.0;
        for (double t : fine.t) {
            if (t < 10.0) continue;
            const double exact = erf((a - b) / std::sqrt(2.0 * t));
            ef = std::max(ef, std::fabs(fine.tail_at(a, t) - exact) / exact);
            ec = std::max(ec, std::fabs(coarse.tail_at(a, t) - exact) / exact);
        }
        const double factor = ec / ef;
        CheckResult conv = abs_check(
            "doubling the grid shrinks the oracle error by the second-order factor",
            "oracle/convergence-order", factor, 4.0, 1.0);
        out.push_back(conv);
    }
    if (selected(opt, 1.0)) {
        SurvivalGrid g = default_grid(1.0, 1e-6, 1.0);
        const SurvivalSolution sol = solve_survival_cached(1.0, g, opt.cache_dir);
        out.push_back(abs_check(
            "oracle degenerates to the closed-form tau_0 tail as the barrier vanishes",
            "oracle/vanishing-barrier", sol.tail_at(1.0, 1.0), tau0_tail(1.0, 1.0, 1.0),
            kTolOracleB0));
    }
    return out;
}

const std::vector<Criterion>& all_criteria() {
    static const std::vector<Criterion> table = {
        {"constants-cancellation", check_constants_cancellation},
        {"exact-identities", check_exact_identities},
        {"leading-order-limits", check_leading_order_limits},
        {"second-order-below-one", check_second_order_below_one},
        {"second-order-log-regime", check_second_order_log_regime},
        {"second-order-above-one", check_second_order_above_one},
        {"identity-gap-limit", check_identity_gap_limit},
        {"renewal-identity", check_renewal_identity},
        {"convolution-consistency", check_convolution_consistency},
        {"infimum-time-limits", check_infimum_time_limits},
        {"long-horizon-conditioning", check_long_horizon_conditioning},
        {"sampler-validity", check_sampler_validity},
        {"oracle-validity", check_oracle_validity},
    };
    return table;
}

namespace {

const std::map<std::string, std::vector<std::size_t>>& suite_table() {
    static const std::map<std::string, std::vector<std::size_t>> suites = {
        {"identities", {0, 1}},
        {"asymptotics", {2, 3, 4, 5, 6}},
        {"simulation", {7, 8, 9, 10, 11}},
        {"oracle", {12}},
        {"all", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
    };
    return suites;
}

}  // namespace

bool suite_exists(const std::string& suite) { return suite_table().count(suite) > 0; }

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt) {
    const auto it = suite_table().find(suite);
    if (it == suite_table().end())
        throw std::domain_error("unknown suite: " + suite +
                                " (expected identities|asymptotics|simulation|oracle|all)");
    std::vector<CheckResult> out;
    for (std::size_t i : it->second) {
        const auto results = all_criteria()[i].run(opt);
        out.insert(out.end(), results.begin(), results.end());
    }
    return out;
}

std::string to_json(const std::vector<CheckResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json row;
        row["claim"] = r.claim;
        row["paper_location"] = r.location;
        row["measured"] = r.measured;
        row["expected"] = r.expected;
        row["tolerance"] = r.tolerance;
        row["pass"] = r.pass;
        arr.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["checks"] = std::move(arr);
    doc["all_pass"] =
        std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
    return doc.dump(2) + "\n";
}

std::string to_table(const std::vector<CheckResult>& results) {
    std::string out;
    char buf[256];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%-4s  %-72s  measured=%-13.6g expected=%-13.6g tol=%g\n",
                      r.pass ? "ok" : "FAIL", r.claim.c_str(), r.measured, r.expected,
                      r.tolerance);
        out += buf;
    }
    return out;
}

}  // namespace bessel
