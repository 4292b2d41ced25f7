#include "bessel/samplers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "bessel/special.hpp"

namespace bessel {
namespace {

constexpr int kStrata = 64;  // fixed stream partition, independent of thread count
constexpr double kInf = std::numeric_limits<double>::infinity();

// Operation salts keep the streams of different estimators disjoint even when
// they share a seed.
constexpr std::uint64_t kTagTail = 0x100, kTagRho = 0x200, kTagCond = 0x300,
                        kTagUpper = 0x400, kTagHits = 0x500;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

std::string fingerprint(std::uint64_t seed, std::uint64_t tag, std::size_t n) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(mix64(seed ^ mix64(tag + n))));
    return buf;
}

struct StratumStats {
    double sum = 0.0, sumsq = 0.0;
    // ratio-estimator extras (weighted means)
    double sw = 0.0, swf = 0.0, sww = 0.0, swwf = 0.0, swwff = 0.0;
    std::size_t n = 0, censored = 0;
};

// Runs `per_sample` over a fixed 64-way stratification of [0, n).  Every
// stratum owns one counter-based stream, so the result is bit-identical for
// any thread count or scheduling.
template <typename PerSample>
std::vector<StratumStats> run_strata(std::uint64_t seed, std::uint64_t tag, std::size_t n,
                                     int threads, PerSample per_sample) {
    std::vector<StratumStats> slots(kStrata);
    auto run_one = [&](int j) {
        RngStream rng(seed, tag + static_cast<std::uint64_t>(j));
        const std::size_t nj = n / kStrata + (static_cast<std::size_t>(j) < n % kStrata ? 1 : 0);
        StratumStats& s = slots[j];
        for (std::size_t i = 0; i < nj; ++i) per_sample(rng, s);
        s.n = nj;
    };
    if (threads <= 1) {
        for (int j = 0; j < kStrata; ++j) run_one(j);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        const int nw = std::min(threads, kStrata);
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                int j;
                while ((j = next.fetch_add(1)) < kStrata) run_one(j);
            });
        for (auto& th : pool) th.join();
    }
    return slots;
}

McEstimate reduce_plain(const std::vector<StratumStats>& slots, std::uint64_t seed,
                        std::uint64_t tag, const EulerConfig& cfg) {
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0, censored = 0;
    for (const auto& s : slots) {  // fixed order: deterministic reduction
        sum += s.sum;
        sumsq += s.sumsq;
        n += s.n;
        censored += s.censored;
    }
    if (n > 0 && static_cast<double>(censored) > cfg.censored_tolerance * static_cast<double>(n))
        throw std::runtime_error("monte carlo: censored fraction exceeds tolerance");
    McEstimate est;
    est.n = n;
    est.mean = sum / static_cast<double>(n);
    est.variance =
        n > 1 ? std::max(0.0, (sumsq - sum * est.mean) / static_cast<double>(n - 1)) : 0.0;
    est.ci95 = 1.96 * std::sqrt(est.variance / static_cast<double>(n));
    est.fingerprint = fingerprint(seed, tag, n);
    return est;
}

// ---------------------------------------------------------------------------
// Log-scale walk.  W follows dW = mu dt + dB from w0; the Bessel clock is
// A(s) = int_0^s e^{2W} du, accumulated by the left-endpoint rule, so the
// clock carries a first-order step bias that the dt-halving ladder in the
// verification suite pins down.  Hitting the level l in W-time sigma means
// hitting e^l in Bessel time A(sigma).

struct WalkStop {
    enum class Kind { hit, never, censored, passed } kind;
    double clock;  // Bessel time of the event (hit / stop), or best lower bound
};

WalkStop walk_to_level(double mu, double w0, double l, double escape_w, double stop_clock,
                       const EulerConfig& cfg, RngStream& rng) {
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const double e2l = std::exp(2.0 * l);
    double w = w0, e2w = std::exp(2.0 * w0), clock = 0.0;
    for (std::uint64_t step = 0; step < cfg.max_steps; ++step) {
        const double w1 = w + mu * dt + sqdt * rng.normal();
        const double e2w1 = std::exp(2.0 * w1);
        if (w1 <= l) {
            // crossing time by linear interpolation within the step
            const double frac = (w - l) / (w - w1);
            const double t_hit = clock + frac * dt * e2w;
            return {t_hit <= stop_clock ? WalkStop::Kind::hit : WalkStop::Kind::passed, t_hit};
        }
        if (cfg.bridge_correction && (w - l) * (w1 - l) < 9.0 * dt) {
            // P(bridge dips to l) = exp(-2 (w-l)(w1-l)/dt); the 9 dt guard
            // skips the exp/uniform when that is below ~1.5e-8.
            if (rng.uniform() < std::exp(-2.0 * (w - l) * (w1 - l) / dt)) {
                const double t_hit = clock + 0.5 * dt * e2w;
                return {t_hit <= stop_clock ? WalkStop::Kind::hit : WalkStop::Kind::passed,
                        t_hit};
            }
        }
        clock += dt * e2w;
        w = w1;
        e2w = e2w1;
        if (clock >= stop_clock) return {WalkStop::Kind::passed, clock};
        if (w >= escape_w) return {WalkStop::Kind::never, clock};
    }
    return {WalkStop::Kind::censored, clock};
}

double bridge_minimum(double w0, double w1, double dt, RngStream& rng) {
    const double d = w1 - w0;
    return 0.5 * (w0 + w1 - std::sqrt(d * d - 2.0 * dt * std::log(rng.uniform())));
}

}  // namespace

double gamma_sample(double shape, RngStream& rng) {
    if (!(shape > 0.0)) throw std::domain_error("gamma_sample: shape must be positive");
    if (shape < 1.0) {
        const double u = rng.uniform();
        return gamma_sample(shape + 1.0, rng) * std::exp(std::log(u) / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double tau0_sample(double nu, double a, RngStream& rng) {
    if (!(nu > 0.0 && a > 0.0)) throw std::domain_error("tau0_sample: need nu > 0, a > 0");
    return a * a / (2.0 * gamma_sample(nu, rng));
}

double z_sample(double nu, double a, RngStream& rng) {
    if (!(nu > 0.0 && a > 0.0)) throw std::domain_error("z_sample: need nu > 0, a > 0");
    return a * std::exp(std::log(rng.uniform()) / (2.0 * nu));
}

HitSample hitting_sample(const SignedIndex& idx, double a, double b, const EulerConfig& cfg,
                         RngStream& rng) {
    validate(idx);
    if (!(a > b && b > 0.0)) throw std::domain_error("hitting_sample: need a > b > 0");
    const double mu = idx.sign == Sign::minus ? -idx.nu : idx.nu;
    const double escape =
        idx.sign == Sign::plus ? std::log(a) + cfg.escape_log_gap : kInf;
    const WalkStop st = walk_to_level(mu, std::log(a), std::log(b), escape, kInf, cfg, rng);
    switch (st.kind) {
        case WalkStop::Kind::hit:
            return {HitSample::Kind::hit, st.clock};
        case WalkStop::Kind::never:
            return {HitSample::Kind::never, st.clock};
        default:
            return {HitSample::Kind::censored, st.clock};
    }
}

HitSample rho_inf_sample(double nu, double a, const EulerConfig& cfg, RngStream& rng) {
    if (!(nu > 0.0 && a > 0.0)) throw std::domain_error("rho_inf_sample: need nu > 0, a > 0");
    const double z = z_sample(nu, a, rng);
    return hitting_sample({nu, Sign::minus}, a, z, cfg, rng);
}

McEstimate estimate_tail(const SignedIndex& idx, double a, double b, double t, std::size_t n,
                         const EulerConfig& cfg, std::uint64_t seed, int threads) {
    validate(idx);
    if (!(a > b && b > 0.0 && t > 0.0))
        throw std::domain_error("estimate_tail: need a > b > 0 and t > 0");
    const double mu = idx.sign == Sign::minus ? -idx.nu : idx.nu;
    const double escape = idx.sign == Sign::plus ? std::log(a) + cfg.escape_log_gap : kInf;
    const double la = std::log(a), lb = std::log(b);
    // minus: indicator(tau_b > t), walk stops once the clock passes t.
    // plus: indicator(t < tau_b < inf), walk runs to the hit or the escape.
    const double stop = idx.sign == Sign::minus ? t : kInf;
    auto slots = run_strata(seed, kTagTail, n, threads, [&](RngStream& rng, StratumStats& s) {
        const WalkStop st = walk_to_level(mu, la, lb, escape, stop, cfg, rng);
        double v = 0.0;
        if (st.kind == WalkStop::Kind::censored) {
            ++s.censored;
        } else if (idx.sign == Sign::minus) {
            v = st.kind == WalkStop::Kind::passed ? 1.0 : 0.0;
        } else {
            v = (st.kind == WalkStop::Kind::hit && st.clock > t) ? 1.0 : 0.0;
        }
        s.sum += v;
        s.sumsq += v * v;
    });
    return reduce_plain(slots, seed, kTagTail, cfg);
}

McEstimate estimate_rho_tail(double nu, double a, double t, std::size_t n,
                             const EulerConfig& cfg, std::uint64_t seed, int threads) {
    if (!(nu > 0.0 && a > 0.0 && t > 0.0))
        throw std::domain_error("estimate_rho_tail: need nu > 0, a > 0, t > 0");
    const double la = std::log(a);
    auto slots = run_strata(seed, kTagRho, n, threads, [&](RngStream& rng, StratumStats& s) {
        const double z = z_sample(nu, a, rng);
        const WalkStop st = walk_to_level(-nu, la, std::log(z), kInf, t, cfg, rng);
        double v = 0.0;
        if (st.kind == WalkStop::Kind::censored)
            ++s.censored;
        else
            v = st.kind == WalkStop::Kind::passed ? 1.0 : 0.0;
        s.sum += v;
        s.sumsq += v * v;
    });
    return reduce_plain(slots, seed, kTagRho, cfg);
}

McEstimate conditioned_expectation(double nu, double a, double t, double s,
                                   const std::function<double(double)>& f, std::size_t n,
                                   const EulerConfig& cfg, std::uint64_t seed, int threads) {
    if (!(nu > 0.0 && a > 0.0 && t > 0.0))
        throw std::domain_error("conditioned_expectation: need nu > 0, a > 0, t > 0");
    if (!(s >= t)) throw std::domain_error("conditioned_expectation: need s >= t");
    const double h = cfg.dt * t;  // radial step scales with the horizon
    const auto steps = static_cast<std::size_t>(std::llround(t / h));
    const double sqh = std::sqrt(h);
    auto slots = run_strata(seed, kTagCond, n, threads, [&](RngStream& rng, StratumStats& st) {
        double x = a;
        bool absorbed = false;
        for (std::size_t k = 0; k < steps; ++k) {
            x += (1.0 - 2.0 * nu) / (2.0 * x) * h + sqh * rng.normal();
            if (x <= 0.0) {  // reflection-free: the path is dead from here on
                absorbed = true;
                break;
            }
        }
        double w = 0.0, fx = 0.0;
        if (!absorbed) {
            w = s > t ? tau0_tail(nu, x, s - t) : 1.0;
            fx = f(x);
        }
        st.sw += w;
        st.swf += w * fx;
        st.sww += w * w;
        st.swwf += w * w * fx;
        st.swwff += w * w * fx * fx;
    });
    double sw = 0, swf = 0, sww = 0, swwf = 0, swwff = 0;
    std::size_t total = 0;
    for (const auto& sl : slots) {
        sw += sl.sw;
        swf += sl.swf;
        sww += sl.sww;
        swwf += sl.swwf;
        swwff += sl.swwff;
        total += sl.n;
    }
    if (sw <= 0.0) throw std::runtime_error("conditioned_expectation: no surviving paths");
    McEstimate est;
    est.n = total;
    est.mean = swf / sw;
    // Delta-method variance of the ratio estimator.
    const double nn = static_cast<double>(total);
    const double vbar = sw / nn;
    const double suu = swwff / nn - (swf / nn) * (swf / nn);
    const double suv = swwf / nn - (swf / nn) * vbar;
    const double svv = sww / nn - vbar * vbar;
    est.variance = std::max(0.0, (suu - 2.0 * est.mean * suv + est.mean * est.mean * svv) /
                                     (vbar * vbar));
    est.ci95 = 1.96 * std::sqrt(est.variance / nn);
    est.fingerprint = fingerprint(seed, kTagCond, total);
    return est;
}

McEstimate estimate_upper_functional(double nu, double a, double t,
                                     const std::function<double(double, double)>& g,
                                     std::size_t n, const EulerConfig& cfg, std::uint64_t seed,
                                     int threads) {
    if (!(nu > 0.0 && a > 0.0 && t > 0.0))
        throw std::domain_error("estimate_upper_functional: need nu > 0, a > 0, t > 0");
    const double dt = cfg.dt, sqdt = std::sqrt(dt), la = std::log(a);
    auto slots = run_strata(seed, kTagUpper, n, threads, [&](RngStream& rng, StratumStats& s) {
        double w = la, e2w = std::exp(2.0 * la), clock = 0.0, wmin = la;
        bool done = false;
        for (std::uint64_t k = 0; k < cfg.max_steps; ++k) {
            const double w1 = w + nu * dt + sqdt * rng.normal();
            const double e2w1 = std::exp(2.0 * w1);
            const double da = 0.5 * dt * (e2w + e2w1);
            if (clock + da >= t) {
                const double frac = (t - clock) / da;
                const double wt = w + frac * (w1 - w);
                if (frac > 1e-12)
                    wmin = std::min(wmin, bridge_minimum(w, wt, frac * dt, rng));
                wmin = std::min(wmin, wt);
                const double v = g(std::exp(wmin), std::exp(wt));
                s.sum += v;
                s.sumsq += v * v;
                done = true;
                break;
            }
            wmin = std::min(wmin, bridge_minimum(w, w1, dt, rng));
            clock += da;
            w = w1;
            e2w = e2w1;
        }
        if (!done) ++s.censored;
    });
    return reduce_plain(slots, seed, kTagUpper, cfg);
}

std::vector<double> sample_hitting_times(double nu, double a, double b, std::size_t n,
                                         const EulerConfig& cfg, std::uint64_t seed,
                                         int threads) {
    if (!(nu > 0.0 && a > b && b > 0.0))
        throw std::domain_error("sample_hitting_times: need nu > 0, a > b > 0");
    std::vector<double> out(n);
    const double la = std::log(a), lb = std::log(b);
    std::atomic<std::size_t> censored{0};
    auto run_one = [&](int j) {
        RngStream rng(seed, kTagHits + static_cast<std::uint64_t>(j));
        const std::size_t nj = n / kStrata + (static_cast<std::size_t>(j) < n % kStrata ? 1 : 0);
        std::size_t base = 0;  // start offset of stratum j in the output
        for (int q = 0; q < j; ++q)
            base += n / kStrata + (static_cast<std::size_t>(q) < n % kStrata ? 1 : 0);
        for (std::size_t i = 0; i < nj; ++i) {
            const WalkStop st = walk_to_level(-nu, la, lb, kInf, kInf, cfg, rng);
            if (st.kind != WalkStop::Kind::hit) ++censored;
            out[base + i] = st.clock;
        }
    };
    if (threads <= 1) {
        for (int j = 0; j < kStrata; ++j) run_one(j);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min(threads, kStrata); ++w)
            pool.emplace_back([&] {
                int j;
                while ((j = next.fetch_add(1)) < kStrata) run_one(j);
            });
        for (auto& th : pool) th.join();
    }
    if (static_cast<double>(censored.load()) > cfg.censored_tolerance * static_cast<double>(n))
        throw std::runtime_error("sample_hitting_times: censored fraction exceeds tolerance");
    return out;
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = cdf(xs[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(F - static_cast<double>(i + 1) / n));
    }
    return d;
}

double ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        if (xs[i] <= ys[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / xs.size() -
                                  static_cast<double>(j) / ys.size()));
    }
    return d;
}

}  // namespace bessel
