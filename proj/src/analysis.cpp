#include "bessel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bessel/quadrature.hpp"
#include "bessel/special.hpp"

namespace bessel {
namespace {

constexpr std::uint64_t kTagConvolution = 0x600;  // stream salt for the U draws

double require_positive_span(double lo, double hi, const char* who) {
    if (!(hi > lo && lo > 0.0)) throw std::domain_error(std::string(who) + ": need hi > lo > 0");
    return hi / lo;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    require_positive_span(lo, hi, "log_grid");
    if (count < 2) throw std::domain_error("log_grid: need at least 2 points");
    std::vector<double> out(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

TailCurve curve_from_solution(const SurvivalSolution& sol, double a, double lo, double hi) {
    require_positive_span(lo, hi, "curve_from_solution");
    TailCurve c;
    for (double tn : sol.t)
        if (tn >= lo * (1.0 - 1e-12) && tn <= hi * (1.0 + 1e-12))
            c.points.push_back({tn, sol.tail_at(a, tn), TailSource::oracle, 0.0});
    if (c.points.size() < 2)
        throw std::domain_error("curve_from_solution: window misses the stored nodes");
    return c;
}

TailCurve curve_from_function(const std::function<double(double)>& f,
                              const std::vector<double>& ts, TailSource source) {
    TailCurve c;
    c.points.reserve(ts.size());
    for (double t : ts) c.points.push_back({t, f(t), source, 0.0});
    return c;
}

TailCurve remainder(const TailCurve& curve, const SignedIndex& idx, double a, double b) {
    const double coef = leading_coefficient(idx, a, b);
    TailCurve out;
    out.points.reserve(curve.points.size());
    for (const auto& p : curve.points)
        out.points.push_back(
            {p.t, p.value - coef * std::pow(p.t, -idx.nu), p.source, p.ci95});
    return out;
}

RateFit fit_rate(const TailCurve& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 5) throw std::domain_error("fit_rate: need at least 5 points");
    const int sign = pts.front().value > 0.0 ? 1 : -1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        if (p.value == 0.0 || (p.value > 0.0 ? 1 : -1) != sign)
            throw std::runtime_error("fit_rate: sign change inside the window");
        const double x = std::log(p.t), y = std::log(std::fabs(p.value));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double det = n * sxx - sx * sx;
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (const auto& p : pts) {
        const double r = std::log(std::fabs(p.value)) - fit.intercept - fit.slope * std::log(p.t);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.window_lo = pts.front().t;
    fit.window_hi = pts.back().t;
    fit.sign = sign;
    return fit;
}

TailCurve j_curve(double nu, double a, double b, const TailCurve& oracle_tail) {
    TailCurve out;
    out.points.reserve(oracle_tail.points.size());
    for (const auto& p : oracle_tail.points) {
        const IParts parts = i_parts(nu, a, b, p.t);
        out.points.push_back({p.t, parts.direct - p.value, TailSource::oracle, p.ci95});
    }
    return out;
}

double k1_asymptotic_form(double nu, double t, double lambda) {
    if (!(t > lambda && lambda > 0.0))
        throw std::domain_error("k1_asymptotic_form: need t > lambda > 0");
    const double upper = t / lambda;
    // integrand ((v+1)^{2nu} - v^{2nu}) v^{-nu-1} ~ 2nu v^{nu-2} for large v
    const double crude =
        std::fabs(nu - 1.0) < 1e-12
            ? 2.0 * std::log(upper)
            : 2.0 * nu * (std::pow(upper, nu - 1.0) - 1.0) / (nu - 1.0);
    auto f = [nu](double v) {
        return std::pow(v, nu - 1.0) * std::expm1(2.0 * nu * std::log1p(1.0 / v));
    };
    const QuadResult q = integrate(f, 1.0, upper, 1e-9 * (1.0 + std::fabs(crude)));
    return std::pow(t + lambda, -2.0 * nu) * q.value;
}

double k1_integral(double nu, double t, double lambda) {
    if (!(t > lambda && lambda > 0.0)) throw std::domain_error("k1_integral: need t > lambda > 0");
    if (!(nu > 0.0)) throw std::domain_error("k1_integral: need nu > 0");
    const double rough = k1_asymptotic_form(nu, t, lambda);
    // substitute u = lambda e^y; (t+lambda-u)^{-nu} - t^{-nu} stays a stable
    // expm1 of a log1p for the whole range
    auto f = [nu, t, lambda](double y) {
        const double u = lambda * std::exp(y);
        return std::pow(lambda, -nu) * std::exp(-nu * y) * std::pow(t, -nu) *
               std::expm1(-nu * std::log1p((lambda - u) / t));
    };
    const QuadResult q =
        integrate(f, 0.0, std::log(t / lambda), std::max(1e-300, 1e-7 * rough));
    return q.value;
}

ResidualReport identity_residual(double nu, double a, double b, double t, std::size_t n_mc,
                                 const EulerConfig& cfg, std::uint64_t seed, int threads,
                                 double oracle_lhs, double oracle_ci,
                                 const std::vector<double>* hit_samples) {
    if (!(b > 0.0 && a > b && t > 0.0))
        throw std::domain_error("identity_residual: need a > b > 0, t > 0");
    if (hit_samples && hit_samples->size() != n_mc)
        throw std::domain_error("identity_residual: presampled hit count differs from n_mc");
    const std::vector<double> s =
        hit_samples ? *hit_samples : sample_hitting_times(nu, a, b, n_mc, cfg, seed, threads);
    RngStream urng(seed, kTagConvolution);
    std::size_t hits = 0;
    for (double si : s) {
        const double ui = tau0_sample(nu, b, urng);
        if (si <= t && ui <= t && si + ui > t) ++hits;
    }
    const double n = static_cast<double>(n_mc);
    const double d_hat = static_cast<double>(hits) / n;
    const double d_ci = 1.96 * std::sqrt(std::max(0.0, d_hat * (1.0 - d_hat)) / n);

    const double pb_le = reg_gamma_q(nu, b * b / (2.0 * t));  // P_b(tau_0 <= t), no cancellation
    if (!(pb_le > 0.0)) throw std::runtime_error("identity_residual: degenerate denominator");
    ResidualReport rep;
    rep.lhs = oracle_lhs;
    rep.difference_term = (tau0_tail(nu, a, t) - tau0_tail(nu, b, t)) / pb_le;
    rep.d_term = d_hat / pb_le;
    rep.residual = rep.lhs - (rep.difference_term - rep.d_term);
    rep.ci95 = d_ci / pb_le + oracle_ci;
    return rep;
}

BoundReport jbound_check(double nu, double a, double b, const TailCurve& oracle_tail,
                         double tolerance) {
    if (!(nu > 1.0)) throw std::domain_error("jbound_check: needs nu > 1");
    if (!(a > b && b >= 0.0)) throw std::domain_error("jbound_check: need a > b >= 0");
    BoundReport rep;
    rep.j_lower_bound = b == 0.0 ? 0.0
                                 : std::exp(2.0 * nu * std::log(b) - nu * M_LN2 - log_gamma(nu)) *
                                       (a * a - b * b) / (2.0 * (nu - 1.0));
    const SignedIndex idx{nu, Sign::minus};
    const ExpansionPrediction pred = expansion(idx, a, b);
    rep.remainder_cap = 10.0 * std::fabs(pred.second_upper);

    const TailCurve jc = j_curve(nu, a, b, oracle_tail);
    const TailCurve rem = remainder(oracle_tail, idx, a, b);
    for (std::size_t i = 0; i < oracle_tail.points.size(); ++i) {
        const double t = oracle_tail.points[i].t;
        const double sc = std::pow(t, nu + 1.0);
        rep.t.push_back(t);
        rep.scaled_j.push_back(sc * jc.points[i].value);
        rep.scaled_remainder.push_back(sc * rem.points[i].value);
    }
    const std::size_t m = rep.t.size();
    const std::size_t top = m >= 3 ? m - 3 : 0;
    rep.j_above_bound = true;
    for (std::size_t i = top; i < m; ++i)
        if (rep.scaled_j[i] < rep.j_lower_bound * (1.0 - tolerance) - tolerance)
            rep.j_above_bound = false;
    rep.remainder_negative =
        std::all_of(rep.scaled_remainder.begin(), rep.scaled_remainder.end(),
                    [](double v) { return v < 0.0; });
    rep.remainder_bounded =
        std::all_of(rep.scaled_remainder.begin(), rep.scaled_remainder.end(),
                    [&](double v) { return std::fabs(v) <= rep.remainder_cap; });
    return rep;
}

CancellationReport cancellation_scan(const std::vector<double>& nu_grid) {
    CancellationReport rep;
    rep.pattern_holds = true;
    for (double nu : nu_grid) {
        CancellationRow row;
        row.nu = nu;
        row.kappa = kappa(nu);
        row.one_minus_nu_kappa = 1.0 - nu * row.kappa;
        if (std::fabs(row.one_minus_nu_kappa) < 1e-9)
            row.sign = 0;
        else
            row.sign = row.one_minus_nu_kappa > 0.0 ? 1 : -1;
        const int expected = std::fabs(nu - 0.5) < 1e-12 ? 0 : (nu < 0.5 ? 1 : -1);
        if (row.sign != expected) rep.pattern_holds = false;
        rep.rows.push_back(row);
    }
    return rep;
}

SurvivalGrid coarsened(const SurvivalGrid& grid) {
    SurvivalGrid g = grid;
    g.n_x = std::max(16, grid.n_x / 2);
    g.substeps = std::max(1, grid.substeps / 2);
    return g;
}

FitWindow select_fit_window(const SurvivalSolution& fine, const SurvivalSolution& coarse,
                            const SignedIndex& idx, double a, double b) {
    const double coef = leading_coefficient(idx, a, b);
    double hi = 0.0;
    for (std::size_t k = fine.t.size(); k-- > 0;) {
        const double t = fine.t[k];
        if (t > coarse.t.back() * (1.0 + 1e-12) || t < coarse.t.front()) continue;
        const double uf = fine.tail_at(a, t);
        const double uc = coarse.tail_at(a, t);
        const double rem = std::fabs(uf - coef * std::pow(t, -idx.nu));
        if (rem > 0.0 && std::fabs(uf - uc) <= 0.1 * rem) {
            hi = t;
            break;
        }
    }
    if (hi <= 0.0 || hi / 10.0 < fine.t.front())
        throw std::runtime_error("select_fit_window: no decade with trustworthy remainders");
    return {hi / 10.0, hi};
}

}  // namespace bessel
