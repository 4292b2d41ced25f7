#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bessel/laws.hpp"
#include "bessel/rng.hpp"

namespace bessel {

// Parameters of the log-scale Euler walk.  dt is the step of the driving
// Brownian clock (the time of the underlying drifted Brownian motion, not of
// the Bessel process itself).
struct EulerConfig {
    double dt = 1e-4;
    bool bridge_correction = true;
    double escape_log_gap = 20.0;       // upward barrier above log(a), sign plus only
    std::uint64_t max_steps = 200000000;
    double censored_tolerance = 1e-3;   // max tolerated fraction of truncated paths
};

struct HitSample {
    enum class Kind { hit, never, censored } kind;
    double time;  // Bessel clock at the hit, or accumulated clock when stopped
};

struct McEstimate {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // sample variance of one draw
    double ci95 = 0.0;      // 1.96 * sqrt(variance / n)
    std::string fingerprint;  // hash of (seed, op tag, n) for reproducibility reports
};

// Gamma(shape, 1) via Marsaglia-Tsang squeeze; shapes below 1 use the
// boost gamma(s) = gamma(s+1) * U^{1/s}.
double gamma_sample(double shape, RngStream& rng);

// tau_0 under the lower index -nu started at a: a^2 / (2 gamma_nu), exact.
double tau0_sample(double nu, double a, RngStream& rng);

// Barrier sample for the argmin-time representation: density
// (2nu / a^{2nu}) z^{2nu-1} on (0, a), i.e. a * U^{1/(2nu)}.
double z_sample(double nu, double a, RngStream& rng);

// First hitting time of b by the signed-index process started at a > b > 0.
// Simulated as a drifted Brownian motion on the log scale whose clock
// integral recovers Bessel time; sub-step crossings are caught by a Brownian
// bridge test when cfg.bridge_correction is set.
HitSample hitting_sample(const SignedIndex& idx, double a, double b, const EulerConfig& cfg,
                         RngStream& rng);

// Time of the global infimum under the upper index: hit a z_sample barrier
// with the lower-index walk.
HitSample rho_inf_sample(double nu, double a, const EulerConfig& cfg, RngStream& rng);

// P(tau_b > t) (sign minus) or P(t < tau_b < inf) (sign plus) by Monte Carlo.
// Deterministic for fixed seed regardless of `threads`.
McEstimate estimate_tail(const SignedIndex& idx, double a, double b, double t, std::size_t n,
                         const EulerConfig& cfg, std::uint64_t seed, int threads = 1);

// P(rho_inf > t) under the upper index.
McEstimate estimate_rho_tail(double nu, double a, double t, std::size_t n,
                             const EulerConfig& cfg, std::uint64_t seed, int threads = 1);

// E[f(R_t) | tau_0 > s] under the lower index, s >= t, by importance
// reweighting of paths surviving to t: weight = P_{R_t}(tau_0 > s - t).
// Radial Euler scheme with step cfg.dt * t and reflection-free absorption.
McEstimate conditioned_expectation(double nu, double a, double t, double s,
                                   const std::function<double(double)>& f, std::size_t n,
                                   const EulerConfig& cfg, std::uint64_t seed, int threads = 1);

// E[g(I_t, R_t)] under the upper index (I_t = running infimum), log-scale walk
// with exact sub-step bridge minima.  Backs the limit checks for weighted
// infimum functionals and the long-horizon conditioning comparison.
McEstimate estimate_upper_functional(double nu, double a, double t,
                                     const std::function<double(double, double)>& g,
                                     std::size_t n, const EulerConfig& cfg, std::uint64_t seed,
                                     int threads = 1);

// n independent hitting times (sign minus), for convolution/identity checks.
// Censored paths throw once their fraction exceeds cfg.censored_tolerance.
std::vector<double> sample_hitting_times(double nu, double a, double b, std::size_t n,
                                         const EulerConfig& cfg, std::uint64_t seed,
                                         int threads = 1);

// Kolmogorov-Smirnov statistic of xs against a CDF, and the two-sample variant.
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> xs, std::vector<double> ys);

}  // namespace bessel
