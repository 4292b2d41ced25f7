#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bessel/laws.hpp"
#include "bessel/samplers.hpp"
#include "bessel/survival_pde.hpp"

namespace bessel {

// Remainder extraction, rate fitting, and residual checks: the pieces that
// turn limit statements about hitting-time tails into finite-t pass/fail
// numbers.

enum class TailSource { closed_form, oracle, mc };

struct TailPoint {
    double t = 0.0;
    double value = 0.0;
    TailSource source = TailSource::closed_form;
    double ci95 = 0.0;
};

struct TailCurve {
    std::vector<TailPoint> points;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;  // fit of log|value| = intercept + slope * log t
    double residual_rms = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    int sign = 0;  // common sign of the fitted values
};

std::vector<double> log_grid(double lo, double hi, std::size_t count);

// Curve evaluated at the solution's stored time nodes inside [lo, hi],
// started from a.  No time interpolation, so the points carry pure scheme
// error.
TailCurve curve_from_solution(const SurvivalSolution& sol, double a, double lo, double hi);

TailCurve curve_from_function(const std::function<double(double)>& f,
                              const std::vector<double>& ts, TailSource source);

// value - leading_tail(idx, a, b, t) pointwise; signed.
TailCurve remainder(const TailCurve& curve, const SignedIndex& idx, double a, double b);

// Least squares on (log t, log |value|).  Throws if the curve has a sign
// change, a zero, or fewer than 5 points.
RateFit fit_rate(const TailCurve& curve);

// J(t) = I(t) - P_a(tau_b > t): the gap between the hitting-identity main
// term and the true downward tail.  Nonnegative up to oracle error.
TailCurve j_curve(double nu, double a, double b, const TailCurve& oracle_tail);

// K1(t; lambda) = int_lambda^t u^{-nu-1} [(t + lambda - u)^{-nu} - t^{-nu}] du,
// by adaptive quadrature, and the closed large-t form it converges to.
double k1_integral(double nu, double t, double lambda);
double k1_asymptotic_form(double nu, double t, double lambda);

// Residual of the renewal identity
//   P_a(tau_b > t) = [P_a(tau_0 > t) - P_b(tau_0 > t) - D_t] / P_b(tau_0 <= t)
// under the downward law, where D_t = P(S + U > t, S <= t, U <= t) for
// independent S = tau_b from a and U = tau_0 from b.  The left side comes
// from the caller's oracle; S is simulated, U is sampled exactly.
struct ResidualReport {
    double residual = 0.0;  // lhs - rhs
    double ci95 = 0.0;      // MC half-width plus the caller's oracle allowance
    double lhs = 0.0;
    double difference_term = 0.0;  // (P_a - P_b) / P_b(tau_0 <= t)
    double d_term = 0.0;           // D_t estimate / P_b(tau_0 <= t)
};
// hit_samples may carry presampled tau_b draws (from sample_hitting_times
// with the same parameters and seed); when null they are drawn here.
ResidualReport identity_residual(double nu, double a, double b, double t, std::size_t n_mc,
                                 const EulerConfig& cfg, std::uint64_t seed, int threads,
                                 double oracle_lhs, double oracle_ci = 0.0,
                                 const std::vector<double>* hit_samples = nullptr);

// nu > 1 checks: t^{nu+1} J(t) against its lower-bound constant, and
// t^{nu+1} (tail - leading) against the sign/boundedness expectations.
struct BoundReport {
    double j_lower_bound = 0.0;   // liminf bound for t^{nu+1} J(t)
    double remainder_cap = 0.0;   // magnitude ceiling used for "bounded"
    std::vector<double> t;
    std::vector<double> scaled_j;
    std::vector<double> scaled_remainder;
    bool j_above_bound = false;
    bool remainder_negative = false;
    bool remainder_bounded = false;
};
BoundReport jbound_check(double nu, double a, double b, const TailCurve& oracle_tail,
                         double tolerance = 0.05);

struct CancellationRow {
    double nu = 0.0;
    double kappa = 0.0;
    double one_minus_nu_kappa = 0.0;
    int sign = 0;  // sign classification of 1 - nu * kappa
};
struct CancellationReport {
    std::vector<CancellationRow> rows;
    bool pattern_holds = false;  // + below 1/2, 0 at 1/2, - above
};
CancellationReport cancellation_scan(const std::vector<double>& nu_grid);

// One-decade fit window ending where the gap between a fine and a coarsened
// solve exceeds 10% of the remainder magnitude, so rate fits never ingest
// scheme noise.
struct FitWindow {
    double lo = 0.0, hi = 0.0;
};
FitWindow select_fit_window(const SurvivalSolution& fine, const SurvivalSolution& coarse,
                            const SignedIndex& idx, double a, double b);

// Half-resolution copy of a grid, for the error estimate above.
SurvivalGrid coarsened(const SurvivalGrid& grid);

}  // namespace bessel
