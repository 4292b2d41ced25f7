#pragma once

#include <functional>

namespace bessel {

// Sign convention for the process index: 'plus' is the transient upper index
// +nu (dimension 2(nu+1)), 'minus' the recurrent-to-zero lower index -nu.
enum class Sign { minus, plus };

struct SignedIndex {
    double nu = 0.5;
    Sign sign = Sign::minus;
    double dimension() const { return 2.0 * (nu + 1.0); }
};

void validate(const SignedIndex& idx);  // throws std::domain_error

struct LawQuery {
    SignedIndex index;
    double a = 1.0;  // start
    double b = 0.0;  // barrier, 0 <= b < a
    double t = 1.0;  // time
};

void validate(const LawQuery& q);

enum class Regime { below_one, equal_one, above_one };

// |nu - 1| <= 1e-9 is folded into the logarithmic regime.
Regime classify_regime(double nu);

struct TailValue {
    double value;
    bool underflowed;  // true when the exact tail is below 1e-300 and reported as 0
};

// P(tau_0 > t) for the lower index -nu started at x; equals P(gamma_nu < x^2/(2t)).
double tau0_tail(double nu, double x, double t);
TailValue tau0_tail_checked(double nu, double x, double t);

// E[R_t^{-2nu}] under the upper index +nu started at x, via x^{-2nu} P(tau_0 > t).
double inverse_moment(double nu, double x, double t);

// P(I_inf > y) = 1 - (y/x)^{2nu} under the upper index, 0 <= y <= x.
double infimum_tail(double nu, double x, double y);

// C_nu = (a^{2nu} - b^{2nu}) / (2^nu Gamma(nu+1)).
double c_const(double nu, double a, double b);

// kappa_nu = int_1^inf ((v+1)^{2nu} - v^{2nu}) v^{-nu-1} dv, for nu in (0, 1).
// Evaluated through both this form and its finite-interval transform; the two
// must agree to 1e-8 or the call throws.
double kappa(double nu);
struct KappaForms {
    double semi_infinite;
    double finite_interval;
};
KappaForms kappa_forms(double nu);

// (b/a)^{2nu}: the exact ratio between upper- and lower-index hitting tails.
double sign_relation_factor(double nu, double a, double b);

// First-order tail approximation: coefficient * t^{-nu}.
double leading_coefficient(const SignedIndex& idx, double a, double b);
double leading_tail(const LawQuery& q);

enum class SecondOrderScale { t_minus_2nu, log_t_over_t2, t_minus_nu_minus_1 };

struct ExpansionPrediction {
    Regime regime;
    double leading;        // coefficient of t^{-nu}
    SecondOrderScale scale;
    bool second_is_point;  // false above nu = 1, where only bounds are known
    double second;         // point value of the second-order coefficient
    double second_upper;   // upper bound for the limsup when !second_is_point
    bool near_one_warning;  // nu within 1e-9 of 1 but not exactly 1
};

ExpansionPrediction expansion(const SignedIndex& idx, double a, double b);

// Decomposition of the conditional ratio
//   I(t) = (P_a(tau_0 > t) - P_b(tau_0 > t)) / P_b(tau_0 <= t)
// into the three closed-form parts whose sum must reproduce it exactly.
struct IParts {
    double i1, i2, i3;
    double total;   // i1 + i2 + i3
    double direct;  // the ratio evaluated directly
};
IParts i_parts(double nu, double a, double b, double t);

// Residual of I(t) against its full two-term expansion in the given regime.
double iasympt_check(double nu, double a, double b, double t);

// Exact upper-index hitting tail at nu = 1/2: (b/a) erf((a-b)/sqrt(2t)).
double halfindex_exact(double a, double b, double t);

// Limits of t^nu * P(I_t - I_inf > b) and t^nu * P(rho_inf > t).
struct RhoLimits {
    double infimum_gap;  // general b
    double argmin_tail;  // b-independent
};
RhoLimits rho_limits(double nu, double a, double b);

// Limiting functionals of the running-infimum laws under the upper index.
enum class FunctionalKind {
    weighted_min,   // lim t^nu E[f(I_t) R_t^{-2nu}]
    inf_vs_final,   // lim t^nu (E g(I_inf) - E g(I_t))
};
double functional_limit(double nu, double a, const std::function<double(double)>& f,
                        FunctionalKind kind);

}  // namespace bessel
