// Command-line front end: constants, tail tables, simulation estimates,
// verification suites, and remainder-rate fits.  All numeric output uses 17
// significant digits and carries no timestamps, so reruns with the same flags
// (seed and thread count included) produce byte-identical files.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bessel/analysis.hpp"
#include "bessel/laws.hpp"
#include "bessel/rng.hpp"
#include "bessel/samplers.hpp"
#include "bessel/special.hpp"
#include "bessel/survival_pde.hpp"
#include "bessel/verify.hpp"

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

bessel::Sign parse_sign(const std::string& s) {
    if (s == "minus") return bessel::Sign::minus;
    if (s == "plus") return bessel::Sign::plus;
    throw CLI::ValidationError("--sign", "expected 'plus' or 'minus'");
}

struct TGrid {
    double lo = 0.0, hi = 0.0;
    std::size_t points = 0;
};

TGrid parse_tgrid(const std::string& s) {
    TGrid g;
    unsigned long long p = 0;
    char trailing = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%llu%c", &g.lo, &g.hi, &p, &trailing) != 3)
        throw CLI::ValidationError("--t-grid", "expected lo:hi:points");
    g.points = static_cast<std::size_t>(p);
    if (!(g.lo > 0.0) || !(g.hi > g.lo) || g.points < 2)
        throw CLI::ValidationError("--t-grid", "need 0 < lo < hi and points >= 2");
    return g;
}

const char* regime_name(bessel::Regime r) {
    switch (r) {
        case bessel::Regime::below_one: return "nu_lt_1";
        case bessel::Regime::equal_one: return "nu_eq_1";
        default: return "nu_gt_1";
    }
}

const char* scale_name(bessel::SecondOrderScale s) {
    switch (s) {
        case bessel::SecondOrderScale::t_minus_2nu: return "t^-2nu";
        case bessel::SecondOrderScale::log_t_over_t2: return "log(t)/t^2";
        default: return "t^-(nu+1)-bounded";
    }
}

const char* source_name(bessel::TailSource s) {
    switch (s) {
        case bessel::TailSource::closed_form: return "closed_form";
        case bessel::TailSource::oracle: return "oracle";
        default: return "mc";
    }
}

// The lower-index tail has a closed form only at the half index (reflection)
// and at a vanishing barrier.
bool closed_form_tail_available(double nu, double b) { return b == 0.0 || nu == 0.5; }

double closed_form_minus_tail(double nu, double a, double b, double t) {
    if (nu == 0.5) return bessel::erf((a - b) / std::sqrt(2.0 * t));
    return bessel::tau0_tail(nu, a, t);  // b == 0
}

// ---------------------------------------------------------------- constants

int cmd_constants(double nu, double a, double b, const std::string& format,
                  const std::string& out_path) {
    bessel::validate(bessel::SignedIndex{nu, bessel::Sign::minus});
    if (!(b >= 0.0 && b < a)) throw std::domain_error("constants: need 0 <= b < a");
    const bessel::SignedIndex minus{nu, bessel::Sign::minus};
    const bessel::SignedIndex plus{nu, bessel::Sign::plus};
    const bessel::ExpansionPrediction exp = bessel::expansion(minus, a, b);
    const bool has_kappa = nu < 1.0;
    const double kap = has_kappa ? bessel::kappa(nu) : 0.0;

    if (format == "json") {
        json doc;
        doc["nu"] = nu;
        doc["a"] = a;
        doc["b"] = b;
        doc["dimension"] = minus.dimension();
        doc["regime"] = regime_name(exp.regime);
        doc["c"] = bessel::c_const(nu, a, b);
        if (has_kappa) {
            doc["kappa"] = kap;
            doc["cancellation"] = 1.0 - nu * kap;
        } else {
            doc["kappa"] = nullptr;
            doc["cancellation"] = nullptr;
        }
        doc["leading_minus"] = bessel::leading_coefficient(minus, a, b);
        doc["leading_plus"] = bessel::leading_coefficient(plus, a, b);
        doc["plus_minus_factor"] = bessel::sign_relation_factor(nu, a, b);
        json second;
        second["scale"] = scale_name(exp.scale);
        if (exp.second_is_point) {
            second["coefficient"] = exp.second;
        } else {
            second["coefficient"] = nullptr;
            second["upper_bound"] = exp.second_upper;
        }
        doc["second_order"] = std::move(second);
        if (exp.near_one_warning) doc["near_one_warning"] = true;
        write_out(out_path, doc.dump(2) + "\n");
        return 0;
    }

    std::string csv =
        "nu,a,b,dimension,regime,c,kappa,cancellation,leading_minus,leading_plus,"
        "plus_minus_factor,second_scale,second_coefficient,second_upper_bound\n";
    csv += num(nu) + "," + num(a) + "," + num(b) + "," + num(minus.dimension()) + "," +
           regime_name(exp.regime) + "," + num(bessel::c_const(nu, a, b)) + ",";
    csv += has_kappa ? num(kap) : "";
    csv += ",";
    csv += has_kappa ? num(1.0 - nu * kap) : "";
    csv += "," + num(bessel::leading_coefficient(minus, a, b)) + "," +
           num(bessel::leading_coefficient(plus, a, b)) + "," +
           num(bessel::sign_relation_factor(nu, a, b)) + "," + scale_name(exp.scale) + ",";
    csv += exp.second_is_point ? num(exp.second) : "";
    csv += ",";
    csv += exp.second_is_point ? "" : num(exp.second_upper);
    csv += "\n";
    write_out(out_path, csv);
    return 0;
}

// --------------------------------------------------------------------- tail

int cmd_tail(double nu, const std::string& sign_str, double a, double b, const TGrid& tg,
             const std::string& cache_dir, const std::string& format,
             const std::string& out_path) {
    const bessel::Sign sign = parse_sign(sign_str);
    const bessel::SignedIndex idx{nu, sign};
    bessel::validate(bessel::LawQuery{idx, a, b, tg.lo});

    const std::vector<double> ts = bessel::log_grid(tg.lo, tg.hi, tg.points);
    const double factor =
        sign == bessel::Sign::plus ? bessel::sign_relation_factor(nu, a, b) : 1.0;
    const double lead_coef = bessel::leading_coefficient(idx, a, b);

    std::vector<double> minus_tail(ts.size());
    bessel::TailSource source = bessel::TailSource::closed_form;
    if (closed_form_tail_available(nu, b)) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            minus_tail[i] = closed_form_minus_tail(nu, a, b, ts[i]);
    } else {
        source = bessel::TailSource::oracle;
        bessel::SurvivalGrid grid = bessel::default_grid(a, b, tg.hi);
        grid.t_min = std::min(grid.t_min, tg.lo * 0.5);
        const bessel::SurvivalSolution sol = bessel::solve_survival_cached(nu, grid, cache_dir);
        for (std::size_t i = 0; i < ts.size(); ++i) minus_tail[i] = sol.tail_at(a, ts[i]);
    }

    if (format == "json") {
        json doc;
        doc["nu"] = nu;
        doc["sign"] = sign_str;
        doc["a"] = a;
        doc["b"] = b;
        doc["source"] = source_name(source);
        json rows = json::array();
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double tail = factor * minus_tail[i];
            json row;
            row["t"] = ts[i];
            row["tail"] = tail;
            row["leading"] = lead_coef * std::pow(ts[i], -nu);
            row["remainder"] = tail - lead_coef * std::pow(ts[i], -nu);
            row["scaled_tail"] = std::pow(ts[i], nu) * tail;
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
        write_out(out_path, doc.dump(2) + "\n");
        return 0;
    }

    std::string csv = "t,tail,leading,remainder,scaled_tail,source\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double tail = factor * minus_tail[i];
        const double lead = lead_coef * std::pow(ts[i], -nu);
        csv += num(ts[i]) + "," + num(tail) + "," + num(lead) + "," + num(tail - lead) + "," +
               num(std::pow(ts[i], nu) * tail) + "," + source_name(source) + "\n";
    }
    write_out(out_path, csv);
    return 0;
}

// ----------------------------------------------------------------- simulate

int cmd_simulate(const std::string& target, double nu, const std::string& sign_str, double a,
                 double b, double t, double s, std::size_t n, double dt, std::uint64_t seed,
                 int threads, const std::string& format, const std::string& out_path) {
    bessel::EulerConfig cfg;
    cfg.dt = dt;
    json doc;
    doc["target"] = target;
    doc["nu"] = nu;
    doc["a"] = a;
    doc["t"] = t;
    doc["n"] = n;
    doc["dt"] = dt;
    doc["seed"] = seed;
    doc["threads"] = threads;

    bessel::McEstimate est;
    bool have_exact = false, have_predicted = false, have_pass = false;
    double exact = 0.0, predicted = 0.0;
    bool pass = false;

    if (target == "tail") {
        const bessel::Sign sign = parse_sign(sign_str);
        const bessel::SignedIndex idx{nu, sign};
        bessel::validate(bessel::LawQuery{idx, a, b, t});
        doc["sign"] = sign_str;
        doc["b"] = b;
        est = bessel::estimate_tail(idx, a, b, t, n, cfg, seed, threads);
        predicted = bessel::leading_tail(bessel::LawQuery{idx, a, b, t});
        have_predicted = true;
        if (closed_form_tail_available(nu, b)) {
            const double f =
                sign == bessel::Sign::plus ? bessel::sign_relation_factor(nu, a, b) : 1.0;
            exact = f * closed_form_minus_tail(nu, a, b, t);
            have_exact = true;
        }
    } else if (target == "rho-tail") {
        est = bessel::estimate_rho_tail(nu, a, t, n, cfg, seed, threads);
        predicted = bessel::rho_limits(nu, a, 0.0).argmin_tail * std::pow(t, -nu);
        have_predicted = true;
    } else if (target == "conditioned") {
        if (!(s >= t)) throw std::domain_error("simulate conditioned: need --s >= --t");
        doc["s"] = s;
        auto f = [](double x) { return x * x / (1.0 + x * x); };
        est = bessel::conditioned_expectation(nu, a, t, s, f, n, cfg, seed, threads);
    } else if (target == "convolution") {
        if (!(b > 0.0 && b < a)) throw std::domain_error("simulate convolution: need 0 < b < a");
        doc["b"] = b;
        const std::vector<double> hits =
            bessel::sample_hitting_times(nu, a, b, n, cfg, seed, threads);
        bessel::RngStream rng(seed, 0x601);
        std::size_t count = 0;
        for (double si : hits)
            if (si + bessel::tau0_sample(nu, b, rng) > t) ++count;
        est.n = n;
        est.mean = static_cast<double>(count) / static_cast<double>(n);
        est.variance = est.mean * (1.0 - est.mean);
        est.ci95 = 1.96 * std::sqrt(est.variance / static_cast<double>(n));
        exact = bessel::tau0_tail(nu, a, t);
        have_exact = true;
        pass = std::fabs(est.mean - exact) <= 4.0 * std::sqrt(est.variance / double(n));
        have_pass = true;
    } else {
        throw std::domain_error("unknown target: " + target +
                                " (expected tail|rho-tail|conditioned|convolution)");
    }

    doc["mean"] = est.mean;
    doc["ci95"] = est.ci95;
    doc["variance"] = est.variance;
    if (!est.fingerprint.empty()) doc["fingerprint"] = est.fingerprint;
    if (have_exact) doc["exact"] = exact;
    if (have_predicted) doc["predicted"] = predicted;
    if (have_pass) doc["pass"] = pass;

    if (format == "json") {
        write_out(out_path, doc.dump(2) + "\n");
    } else {
        std::string header, row;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!header.empty()) {
                header += ",";
                row += ",";
            }
            header += it.key();
            const json& v = it.value();
            if (v.is_number_float())
                row += num(v.get<double>());
            else if (v.is_string())
                row += v.get<std::string>();
            else
                row += v.dump();
        }
        write_out(out_path, header + "\n" + row + "\n");
    }
    return 0;
}

// -------------------------------------------------------------------- rates

int cmd_rates(double nu, const std::string& sign_str, double a, double b, const TGrid& tg,
              bool have_tgrid, const std::string& cache_dir, const std::string& format,
              const std::string& out_path) {
    const bessel::Sign sign = parse_sign(sign_str);
    const bessel::SignedIndex idx{nu, sign};
    bessel::validate(bessel::SignedIndex{nu, bessel::Sign::minus});
    if (!(b >= 0.0 && b < a)) throw std::domain_error("rates: need 0 <= b < a");
    const double factor =
        sign == bessel::Sign::plus ? bessel::sign_relation_factor(nu, a, b) : 1.0;

    bessel::TailCurve curve;
    double win_lo = 0.0, win_hi = 0.0;
    if (closed_form_tail_available(nu, b)) {
        const TGrid g = have_tgrid ? tg : TGrid{1e2, 1e4, 33};
        win_lo = g.lo;
        win_hi = g.hi;
        curve = bessel::curve_from_function(
            [&](double t) { return factor * closed_form_minus_tail(nu, a, b, t); },
            bessel::log_grid(g.lo, g.hi, g.points), bessel::TailSource::closed_form);
    } else {
        const double t_max = have_tgrid ? tg.hi : 1e4;
        const bessel::SurvivalGrid fine_grid = bessel::default_grid(a, b, t_max);
        const bessel::SurvivalSolution fine =
            bessel::solve_survival_cached(nu, fine_grid, cache_dir);
        if (have_tgrid) {
            win_lo = tg.lo;
            win_hi = tg.hi;
        } else {
            // Default window: one decade ending where grid refinement still
            // moves the tail by less than a tenth of the remainder.
            const bessel::SurvivalSolution coarse =
                bessel::solve_survival_cached(nu, bessel::coarsened(fine_grid), cache_dir);
            const bessel::FitWindow w = bessel::select_fit_window(fine, coarse, idx, a, b);
            win_lo = w.lo;
            win_hi = w.hi;
        }
        curve = bessel::curve_from_solution(fine, a, win_lo, win_hi);
        if (sign == bessel::Sign::plus)
            for (auto& p : curve.points) p.value *= factor;
    }

    const bessel::TailCurve rem = bessel::remainder(curve, idx, a, b);
    const bessel::RateFit fit = bessel::fit_rate(rem);
    const bessel::ExpansionPrediction exp = bessel::expansion(idx, a, b);
    double expected_slope = 0.0;
    switch (exp.regime) {
        case bessel::Regime::below_one: expected_slope = -2.0 * nu; break;
        case bessel::Regime::equal_one: expected_slope = -2.0; break;  // up to the log factor
        case bessel::Regime::above_one: expected_slope = -(nu + 1.0); break;
    }

    json doc;
    doc["nu"] = nu;
    doc["sign"] = sign_str;
    doc["a"] = a;
    doc["b"] = b;
    doc["window_lo"] = win_lo;
    doc["window_hi"] = win_hi;
    doc["n_points"] = rem.points.size();
    doc["source"] = source_name(curve.points.front().source);
    doc["slope"] = fit.slope;
    doc["expected_slope"] = expected_slope;
    doc["regime"] = regime_name(exp.regime);
    doc["intercept"] = fit.intercept;
    doc["residual_rms"] = fit.residual_rms;
    doc["remainder_sign"] = fit.sign;
    if (exp.regime == bessel::Regime::below_one) {
        const bessel::TailPoint& end = rem.points.back();
        doc["coefficient_at_window_end"] = end.value * std::pow(end.t, 2.0 * nu);
        doc["expected_coefficient"] = factor * exp.second;
    }

    if (format == "json") {
        write_out(out_path, doc.dump(2) + "\n");
        return 0;
    }
    std::string header, row;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!header.empty()) {
            header += ",";
            row += ",";
        }
        header += it.key();
        const json& v = it.value();
        if (v.is_number_float())
            row += num(v.get<double>());
        else if (v.is_string())
            row += v.get<std::string>();
        else
            row += v.dump();
    }
    write_out(out_path, header + "\n" + row + "\n");
    return 0;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, const bessel::VerifyOptions& opt,
               const std::string& format, const std::string& out_path) {
    if (!bessel::suite_exists(suite))
        throw std::domain_error("unknown suite: " + suite +
                                " (expected identities|asymptotics|simulation|oracle|all)");
    const std::vector<bessel::CheckResult> results = bessel::run_suite(suite, opt);
    if (results.empty())
        throw std::domain_error("no checks in suite '" + suite + "' match the --nu filter");
    const bool all_pass =
        std::all_of(results.begin(), results.end(),
                    [](const bessel::CheckResult& r) { return r.pass; });
    if (format == "json") {
        write_out(out_path, bessel::to_json(results));
    } else {
        std::string text = bessel::to_table(results);
        std::size_t passed = 0;
        for (const auto& r : results)
            if (r.pass) ++passed;
        char buf[64];
        std::snprintf(buf, sizeof buf, "passed %zu/%zu\n", passed, results.size());
        text += buf;
        write_out(out_path, text);
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hitting-time laws, samplers, and asymptotics for Bessel processes"};
    app.require_subcommand(1);

    const char* env_cache = std::getenv("BESSEL_CACHE_DIR");
    std::string cache_dir = env_cache ? env_cache : "";

    double nu = 0.5, a = 1.0, b = 0.0, t = 1.0, s = 0.0, dt = 1e-4;
    std::string sign_str = "minus", tgrid_str, format = "json", out_path, suite = "all";
    std::string target;
    std::size_t n = 100000;
    std::uint64_t seed = 20250816;
    int threads = 1;
    double nu_filter = 0.0;

    auto* constants = app.add_subcommand("constants", "Leading and second-order constants");
    constants->add_option("--nu", nu, "index magnitude")->required();
    constants->add_option("--a", a, "start level")->required();
    constants->add_option("--b", b, "barrier level")->required();
    constants->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    constants->add_option("--out", out_path, "output file (default stdout)");

    auto* tail = app.add_subcommand("tail", "Tail table over a log-spaced time grid");
    tail->add_option("--nu", nu, "index magnitude")->required();
    tail->add_option("--sign", sign_str, "plus or minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    tail->add_option("--a", a, "start level")->required();
    tail->add_option("--b", b, "barrier level")->required();
    tail->add_option("--t-grid", tgrid_str, "lo:hi:points, log-spaced")->required();
    tail->add_option("--cache-dir", cache_dir, "oracle cache directory");
    tail->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    tail->add_option("--out", out_path, "output file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
    simulate->add_option("--target", target, "tail | rho-tail | conditioned | convolution")
        ->required()
        ->check(CLI::IsMember({"tail", "rho-tail", "conditioned", "convolution"}));
    simulate->add_option("--nu", nu, "index magnitude")->required();
    simulate->add_option("--sign", sign_str, "plus or minus (tail target)")
        ->check(CLI::IsMember({"plus", "minus"}));
    simulate->add_option("--a", a, "start level")->required();
    simulate->add_option("--b", b, "barrier level");
    simulate->add_option("--t", t, "time")->required();
    simulate->add_option("--s", s, "conditioning horizon (conditioned target)");
    simulate->add_option("--n", n, "sample count");
    simulate->add_option("--dt", dt, "walk step");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--threads", threads, "worker threads");
    simulate->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--out", out_path, "output file (default stdout)");

    auto* rates = app.add_subcommand("rates", "Remainder decay-rate fit");
    rates->add_option("--nu", nu, "index magnitude")->required();
    rates->add_option("--sign", sign_str, "plus or minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    rates->add_option("--a", a, "start level")->required();
    rates->add_option("--b", b, "barrier level")->required();
    rates->add_option("--t-grid", tgrid_str, "lo:hi:points fit window (default: auto)");
    rates->add_option("--cache-dir", cache_dir, "oracle cache directory");
    rates->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    rates->add_option("--out", out_path, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
    verify->add_option("suite", suite, "identities | asymptotics | simulation | oracle | all");
    verify->add_option("--nu", nu_filter, "restrict to checks pinned at this index");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--threads", threads, "worker threads");
    verify->add_option("--cache-dir", cache_dir, "oracle cache directory");
    verify->add_option("--format", format, "json or table")
        ->check(CLI::IsMember({"json", "table"}));
    verify->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (constants->parsed()) return cmd_constants(nu, a, b, format, out_path);
        if (tail->parsed())
            return cmd_tail(nu, sign_str, a, b, parse_tgrid(tgrid_str), cache_dir, format,
                            out_path);
        if (simulate->parsed())
            return cmd_simulate(target, nu, sign_str, a, b, t, s, n, dt, seed, threads, format,
                                out_path);
        if (rates->parsed()) {
            const bool have_tgrid = !tgrid_str.empty();
            const TGrid tg = have_tgrid ? parse_tgrid(tgrid_str) : TGrid{};
            return cmd_rates(nu, sign_str, a, b, tg, have_tgrid, cache_dir, format, out_path);
        }
        if (verify->parsed()) {
            bessel::VerifyOptions opt;
            opt.seed = seed;
            opt.threads = threads;
            opt.cache_dir = cache_dir;
            opt.nu_filter = nu_filter;
            return cmd_verify(suite, opt, format, out_path);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
