#include "bessel/laws.hpp"

#include <cmath>
#include <stdexcept>

#include "bessel/quadrature.hpp"
#include "bessel/special.hpp"

namespace bessel {
namespace {

constexpr double kNearOne = 1e-9;
constexpr double kUnderflow = 1e-300;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

double pow2nu(double x, double nu) { return std::pow(x, 2.0 * nu); }

}  // namespace

void validate(const SignedIndex& idx) {
    require(std::isfinite(idx.nu) && idx.nu > 0.0, "index: nu must be positive");
}

void validate(const LawQuery& q) {
    validate(q.index);
    require(std::isfinite(q.a) && q.a > 0.0, "query: start a must be positive");
    require(std::isfinite(q.b) && q.b >= 0.0 && q.b < q.a, "query: need 0 <= b < a");
    require(std::isfinite(q.t) && q.t > 0.0, "query: time t must be positive");
}

Regime classify_regime(double nu) {
    if (std::fabs(nu - 1.0) <= kNearOne) return Regime::equal_one;
    return nu < 1.0 ? Regime::below_one : Regime::above_one;
}

double tau0_tail(double nu, double x, double t) { return tau0_tail_checked(nu, x, t).value; }

TailValue tau0_tail_checked(double nu, double x, double t) {
    require(nu > 0.0, "tau0_tail: nu must be positive");
    require(x >= 0.0, "tau0_tail: x must be non-negative");
    require(t > 0.0, "tau0_tail: t must be positive");
    if (x == 0.0) return {0.0, false};
    const double p = reg_gamma_p(nu, x * x / (2.0 * t));
    if (p < kUnderflow) return {0.0, true};
    return {p, false};
}

double inverse_moment(double nu, double x, double t) {
    require(x > 0.0, "inverse_moment: x must be positive");
    return std::pow(x, -2.0 * nu) * tau0_tail(nu, x, t);
}

double infimum_tail(double nu, double x, double y) {
    require(nu > 0.0, "infimum_tail: nu must be positive");
    require(x > 0.0, "infimum_tail: x must be positive");
    require(y >= 0.0 && y <= x, "infimum_tail: need 0 <= y <= x");
    return -std::expm1(2.0 * nu * std::log(y / x));  // 1 - (y/x)^{2nu}, stable for y near x
}

double c_const(double nu, double a, double b) {
    require(nu > 0.0, "c_const: nu must be positive");
    require(a > 0.0 && b >= 0.0 && b < a, "c_const: need 0 <= b < a");
    return (pow2nu(a, nu) - pow2nu(b, nu)) * std::exp(-nu * M_LN2 - log_gamma(nu + 1.0));
}

KappaForms kappa_forms(double nu) {
    require(nu > 0.0 && nu < 1.0, "kappa: defined for 0 < nu < 1");
    // Both representations carry an integrable endpoint singularity of order
    // 1 - nu that sharpens without bound as nu -> 1.  Substituting the
    // singular variable as y^p with p = 2 / (1 - nu) turns that endpoint into
    // a linear zero the panel rule resolves at any index.
    const double p = 2.0 / (1.0 - nu);

    // Semi-infinite form int_1^inf v^{nu-1} [(1+1/v)^{2nu} - 1] dv through
    // v = y^{-p}; the bracket is expm1(2nu log1p(1/v)) so the large-v
    // cancellation never hits doubles.
    auto f = [nu, p](double y) {
        const double u = std::pow(y, p);  // 1/v
        if (u < 1e-300) return 2.0 * nu * p * y;
        return p * std::pow(y, -p * nu - 1.0) * std::expm1(2.0 * nu * std::log1p(u));
    };
    const QuadResult semi = integrate(f, 0.0, 1.0, 1e-10);

    // Finite-interval form int_{1/2}^1 (1 - x^{2nu}) / (x (1-x))^{nu+1} dx
    // through 1 - x = y^p.
    auto g = [nu, p](double y) {
        const double w = std::pow(y, p);  // 1 - x
        if (w < 1e-300) return 2.0 * nu * p * y;
        return -p * std::expm1(2.0 * nu * std::log1p(-w)) *
               std::pow(1.0 - w, -nu - 1.0) * std::pow(y, -p * nu - 1.0);
    };
    const QuadResult fin = integrate(g, 0.0, std::pow(0.5, 1.0 / p), 1e-10);
    return {semi.value, fin.value};
}

double kappa(double nu) {
    const KappaForms k = kappa_forms(nu);
    if (std::fabs(k.semi_infinite - k.finite_interval) >
        1e-8 * std::max(1.0, std::fabs(k.finite_interval)))
        throw std::runtime_error("kappa: representations disagree beyond 1e-8");
    return k.finite_interval;
}

double sign_relation_factor(double nu, double a, double b) {
    require(a > 0.0 && b >= 0.0, "relation factor: need a > 0, b >= 0");
    return pow2nu(b / a, nu);
}

double leading_coefficient(const SignedIndex& idx, double a, double b) {
    validate(idx);
    const double c = c_const(idx.nu, a, b);
    return idx.sign == Sign::minus ? c : sign_relation_factor(idx.nu, a, b) * c;
}

double leading_tail(const LawQuery& q) {
    validate(q);
    return leading_coefficient(q.index, q.a, q.b) * std::pow(q.t, -q.index.nu);
}

ExpansionPrediction expansion(const SignedIndex& idx, double a, double b) {
    validate(idx);
    require(a > 0.0 && b >= 0.0 && b < a, "expansion: need 0 <= b < a");
    const double nu = idx.nu;
    ExpansionPrediction out;
    out.regime = classify_regime(nu);
    out.near_one_warning = (out.regime == Regime::equal_one) && (nu != 1.0);
    out.leading = leading_coefficient(idx, a, b);
    const double rel = idx.sign == Sign::minus ? 1.0 : sign_relation_factor(nu, a, b);
    switch (out.regime) {
        case Regime::below_one: {
            out.scale = SecondOrderScale::t_minus_2nu;
            out.second_is_point = true;
            const double base = b == 0.0 ? 0.0
                                         : pow2nu(b, nu) *
                                               std::exp(-nu * M_LN2 - log_gamma(nu + 1.0)) *
                                               c_const(nu, a, b) * (1.0 - nu * kappa(nu));
            out.second = rel * base;
            out.second_upper = out.second;
            break;
        }
        case Regime::equal_one: {
            out.scale = SecondOrderScale::log_t_over_t2;
            out.second_is_point = true;
            out.second = rel * (-(b * b) * c_const(1.0, a, b));
            out.second_upper = out.second;
            break;
        }
        case Regime::above_one: {
            out.scale = SecondOrderScale::t_minus_nu_minus_1;
            out.second_is_point = false;
            out.second = 0.0;
            // limsup t^{nu+1} (tail - leading) <= this (strictly negative).
            const double bound =
                nu * c_const(nu + 1.0, a, b) +
                pow2nu(b, nu) * (a * a - b * b) *
                    std::exp(-(nu + 1.0) * M_LN2 - log_gamma(nu)) / (nu - 1.0);
            out.second_upper = -rel * bound;
            break;
        }
    }
    return out;
}

IParts i_parts(double nu, double a, double b, double t) {
    require(nu > 0.0, "i_parts: nu must be positive");
    require(a > b && b >= 0.0, "i_parts: need 0 <= b < a");
    require(t > 0.0, "i_parts: t must be positive");
    const double pa = tau0_tail(nu, a, t);
    const double pb = tau0_tail(nu, b, t);
    const double qb = reg_gamma_q(nu, b * b / (2.0 * t));  // P_b(tau_0 <= t), accurately
    if (qb < kUnderflow)
        throw std::domain_error("i_parts: t too small, P_b(tau_0 <= t) underflows");
    IParts out;
    // x^{2nu} e^{-x^2/2t} / ((2t)^nu Gamma(nu+1)), assembled in log space.
    auto head = [nu, t](double x) {
        if (x == 0.0) return 0.0;
        return std::exp(2.0 * nu * std::log(x) - x * x / (2.0 * t) - nu * std::log(2.0 * t) -
                        log_gamma(nu + 1.0));
    };
    out.i1 = head(a) - head(b);
    out.i2 = tau0_tail(nu + 1.0, a, t) - tau0_tail(nu + 1.0, b, t);
    out.i3 = pb / qb * (pa - pb);
    out.total = out.i1 + out.i2 + out.i3;
    out.direct = (pa - pb) / qb;
    if (std::fabs(out.total - out.direct) > 1e-12)
        throw std::runtime_error("i_parts: decomposition drifted beyond 1e-12");
    return out;
}

double iasympt_check(double nu, double a, double b, double t) {
    const IParts parts = i_parts(nu, a, b, t);
    const double c = c_const(nu, a, b);
    double expansion_value = c * std::pow(t, -nu);
    switch (classify_regime(nu)) {
        case Regime::below_one:
            expansion_value += pow2nu(b, nu) * std::exp(-nu * M_LN2 - log_gamma(nu + 1.0)) * c *
                               std::pow(t, -2.0 * nu);
            break;
        case Regime::equal_one:
            expansion_value -= 0.5 * c * c / (t * t);
            break;
        case Regime::above_one:
            expansion_value -= nu * c_const(nu + 1.0, a, b) * std::pow(t, -nu - 1.0);
            break;
    }
    return parts.direct - expansion_value;
}

double halfindex_exact(double a, double b, double t) {
    require(a > 0.0 && b >= 0.0 && b < a, "halfindex_exact: need 0 <= b < a");
    require(t > 0.0, "halfindex_exact: t must be positive");
    return (b / a) * erf((a - b) / std::sqrt(2.0 * t));
}

RhoLimits rho_limits(double nu, double a, double b) {
    require(nu > 0.0, "rho_limits: nu must be positive");
    require(a > 0.0 && b >= 0.0 && b < a, "rho_limits: need 0 <= b < a");
    const double pref =
        2.0 * nu * std::exp(-nu * M_LN2 - 2.0 * nu * std::log(a) - log_gamma(nu + 1.0));
    auto f = [nu, b](double z) {
        return std::pow(z, 2.0 * nu - 1.0) * std::pow(z - b, 2.0 * nu);
    };
    RhoLimits out;
    out.infimum_gap = pref * integrate(f, b, a, 1e-10).value;
    out.argmin_tail = pow2nu(a, nu) * std::exp(-(nu + 1.0) * M_LN2 - log_gamma(nu + 1.0));
    return out;
}

double functional_limit(double nu, double a, const std::function<double(double)>& f,
                        FunctionalKind kind) {
    require(nu > 0.0 && a > 0.0, "functional_limit: need nu > 0, a > 0");
    const double pref =
        2.0 * nu * std::exp(-nu * M_LN2 - 2.0 * nu * std::log(a) - log_gamma(nu + 1.0));
    const double a2nu = pow2nu(a, nu);
    auto integrand = [&](double z) {
        const double w = std::pow(z, 2.0 * nu - 1.0) * f(z);
        return kind == FunctionalKind::weighted_min ? w : (a2nu - 2.0 * pow2nu(z, nu)) * w;
    };
    return pref * integrate(integrand, 0.0, a, 1e-10).value;
}

}  // namespace bessel
