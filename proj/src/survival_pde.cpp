#include "bessel/survival_pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bessel {
namespace {

struct Operator {
    // L u_j = lo[j] u_{j-1} + di[j] u_j + up[j] u_{j+1} on the interior;
    // row 0 is the Dirichlet wall, row n the zero-flux wall.
    std::vector<double> lo, di, up;
};

Operator build_operator(double nu, const std::vector<double>& x) {
    const std::size_t n = x.size() - 1;
    Operator op;
    op.lo.assign(n + 1, 0.0);
    op.di.assign(n + 1, 0.0);
    op.up.assign(n + 1, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double hm = x[j] - x[j - 1];
        const double hp = x[j + 1] - x[j];
        const double c = (1.0 - 2.0 * nu) / (2.0 * x[j]);
        op.lo[j] = 1.0 / (hm * (hm + hp)) - c * hp / (hm * (hm + hp));
        op.up[j] = 1.0 / (hp * (hm + hp)) + c * hm / (hp * (hm + hp));
        op.di[j] = -1.0 / (hm * hp) + c * (hp - hm) / (hm * hp);
    }
    // Mirror ghost at the outer wall: u_{n+1} = u_{n-1} with equal spacing,
    // which collapses to a pure diffusion exchange with the last interior cell.
    const double h = x[n] - x[n - 1];
    op.lo[n] = 1.0 / (h * h);
    op.di[n] = -1.0 / (h * h);
    return op;
}

// One theta-step of (I - theta dt L) u_new = (I + (1-theta) dt L) u_old with
// u_new[0] = 0.  Thomas elimination; cw/dw are scratch.
void theta_step(const Operator& op, double dt, double theta, std::vector<double>& u,
                std::vector<double>& cw, std::vector<double>& dw) {
    const std::size_t n = u.size() - 1;
    const double ex = (1.0 - theta) * dt;
    // explicit half into dw (right-hand side)
    dw[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j)
        dw[j] = u[j] + ex * (op.lo[j] * u[j - 1] + op.di[j] * u[j] + op.up[j] * u[j + 1]);
    dw[n] = u[n] + ex * (op.lo[n] * u[n - 1] + op.di[n] * u[n]);
    // implicit sweep
    double beta = 1.0;  // pivot of row 0 (identity row, u[0] = 0)
    cw[0] = 0.0;
    u[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double aj = -theta * dt * op.lo[j];
        const double bj = 1.0 - theta * dt * op.di[j];
        const double cj = j < n ? -theta * dt * op.up[j] : 0.0;
        beta = bj - aj * cw[j - 1];
        if (!(std::fabs(beta) > 1e-300)) throw std::runtime_error("survival solve: singular pivot");
        cw[j] = cj / beta;
        dw[j] = (dw[j] - aj * dw[j - 1]) / beta;
    }
    u[n] = dw[n];
    for (std::size_t j = n; j-- > 1;) u[j] = dw[j] - cw[j] * u[j + 1];
    for (std::size_t j = 0; j <= n; ++j)
        if (!(u[j] > -0.01 && u[j] < 1.01))
            throw std::runtime_error("survival solve: solution left [0, 1], unstable step");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string grid_key(double nu, const SurvivalGrid& g) {
    char buf[352];
    std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%d|%.17g|%.17g|%d|%d|%.17g|%.17g|%.17g",
                  nu, g.b, g.x_max, g.n_x, g.t_min, g.t_max, g.nodes_per_decade, g.substeps,
                  g.layer_frac, g.width_ratio, g.snap_point);
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(fnv1a(buf)));
    return out;
}

constexpr char kCacheMagic[8] = {'S', 'R', 'V', 'G', 'R', 'D', '0', '2'};

}  // namespace

SurvivalGrid default_grid(double a, double b, double t_max) {
    if (!(a > b && b > 0.0 && t_max > 0.0))
        throw std::domain_error("default_grid: need a > b > 0 and t_max > 0");
    SurvivalGrid g;
    g.b = b;
    g.x_max = a + 10.0 * std::sqrt(t_max);
    g.t_max = t_max;
    g.snap_point = a;
    return g;
}

SurvivalSolution solve_survival(double nu, const SurvivalGrid& grid) {
    if (!(nu > 0.0)) throw std::domain_error("solve_survival: need nu > 0");
    if (!(grid.x_max > grid.b && grid.b > 0.0))
        throw std::domain_error("solve_survival: need x_max > b > 0");
    if (!(grid.t_max > grid.t_min && grid.t_min > 0.0))
        throw std::domain_error("solve_survival: need t_max > t_min > 0");
    if (grid.n_x < 16 || grid.nodes_per_decade < 1 || grid.substeps < 1)
        throw std::domain_error("solve_survival: degenerate grid");
    if (!(grid.layer_frac > 0.0 && grid.layer_frac <= 1.0) || !(grid.width_ratio >= 1.0))
        throw std::domain_error("solve_survival: bad mesh shape parameters");

    SurvivalSolution sol;
    sol.nu = nu;
    sol.grid = grid;

    // Graded mesh sampled from one fixed width density: cell widths grow
    // exponentially across the wall layer (the first layer_frac of the index
    // range), then stay uniform at width_ratio times the wall width.  Every
    // n_x samples the same density, so meshes at different resolutions form a
    // single refinement family and halving n_x scales the truncation error
    // by a clean factor of four.
    const std::size_t n = static_cast<std::size_t>(grid.n_x);
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        w[i] = std::pow(grid.width_ratio, std::min(xi / grid.layer_frac, 1.0));
        total += w[i];
    }
    sol.x.assign(n + 1, grid.b);
    const double span = grid.x_max - grid.b;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += w[i];
        sol.x[i + 1] = grid.b + span * acc / total;
    }
    sol.x[n] = grid.x_max;
    if (grid.snap_point > grid.b && grid.snap_point < grid.x_max) {
        const auto it = std::lower_bound(sol.x.begin(), sol.x.end(), grid.snap_point);
        std::size_t j = static_cast<std::size_t>(it - sol.x.begin());
        if (j > 0 && grid.snap_point - sol.x[j - 1] < sol.x[j] - grid.snap_point) --j;
        if (j > 0 && j < n) sol.x[j] = grid.snap_point;
    }

    const int decades_nodes = static_cast<int>(
        std::lround(grid.nodes_per_decade * std::log10(grid.t_max / grid.t_min)));
    const std::size_t n_t = static_cast<std::size_t>(decades_nodes) + 1;
    sol.t.assign(n_t, 0.0);
    const double lr = std::log(grid.t_max / grid.t_min) / static_cast<double>(n_t - 1);
    for (std::size_t k = 0; k < n_t; ++k) sol.t[k] = grid.t_min * std::exp(lr * static_cast<double>(k));
    sol.t[n_t - 1] = grid.t_max;

    const Operator op = build_operator(nu, sol.x);
    std::vector<double> u(n + 1, 1.0), cw(n + 1), dw(n + 1);
    u[0] = 0.0;

    // Smoothing of the u(0, .) = 1 vs u(t, b) = 0 corner: a ramp of L-stable
    // implicit Euler steps on a quadratically graded subdivision of [0, t_min].
    // The step count grows with substeps^2 so the first-order ramp error falls
    // by the same factor of four per refinement as the interior scheme.
    {
        const int m = 3 * grid.substeps * grid.substeps;
        double prev = 0.0;
        for (int k = 1; k <= m; ++k) {
            const double frac = static_cast<double>(k) / static_cast<double>(m);
            const double tk = grid.t_min * frac * frac;
            theta_step(op, tk - prev, 1.0, u, cw, dw);
            prev = tk;
        }
    }

    sol.u.assign(n_t * (n + 1), 0.0);
    std::copy(u.begin(), u.end(), sol.u.begin());
    for (std::size_t k = 1; k < n_t; ++k) {
        const double dt = (sol.t[k] - sol.t[k - 1]) / grid.substeps;
        for (int s = 0; s < grid.substeps; ++s) theta_step(op, dt, 0.5, u, cw, dw);
        std::copy(u.begin(), u.end(), sol.u.begin() + k * (n + 1));
    }
    return sol;
}

double SurvivalSolution::tail_at(double x0, double tq) const {
    if (!(x0 >= x.front() && x0 <= x.back()))
        throw std::out_of_range("tail_at: start point outside the mesh");
    if (!(tq >= t.front() * (1.0 - 1e-12) && tq <= t.back() * (1.0 + 1e-12)))
        throw std::out_of_range("tail_at: time outside the stored range");
    tq = std::clamp(tq, t.front(), t.back());
    const std::size_t nx = x.size();
    const auto xi = std::upper_bound(x.begin(), x.end(), x0);
    const std::size_t j = std::min(nx - 2, static_cast<std::size_t>(
                                               std::max<std::ptrdiff_t>(0, xi - x.begin() - 1)));
    const double wx = (x0 - x[j]) / (x[j + 1] - x[j]);
    const auto ti = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t k = std::min(t.size() - 2, static_cast<std::size_t>(
                                                     std::max<std::ptrdiff_t>(0, ti - t.begin() - 1)));
    const double wt = std::log(tq / t[k]) / std::log(t[k + 1] / t[k]);
    const double u0 = (1.0 - wx) * u[k * nx + j] + wx * u[k * nx + j + 1];
    const double u1 = (1.0 - wx) * u[(k + 1) * nx + j] + wx * u[(k + 1) * nx + j + 1];
    return (1.0 - wt) * u0 + wt * u1;
}

void to_csv(const SurvivalSolution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("to_csv: cannot open " + path);
    out << "t,x,u\n";
    char buf[80];
    const std::size_t nx = sol.x.size();
    for (std::size_t k = 0; k < sol.t.size(); ++k)
        for (std::size_t j = 0; j < nx; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sol.t[k], sol.x[j],
                          sol.u[k * nx + j]);
            out << buf;
        }
}

bool save_cache(const SurvivalSolution& sol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    auto put = [&out](const void* p, std::size_t bytes) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
    };
    put(kCacheMagic, sizeof kCacheMagic);
    put(&sol.nu, sizeof sol.nu);
    put(&sol.grid, sizeof sol.grid);
    const std::uint64_t nx = sol.x.size(), nt = sol.t.size();
    put(&nx, sizeof nx);
    put(&nt, sizeof nt);
    put(sol.x.data(), nx * sizeof(double));
    put(sol.t.data(), nt * sizeof(double));
    put(sol.u.data(), sol.u.size() * sizeof(double));
    return static_cast<bool>(out);
}

bool load_cache(SurvivalSolution& sol, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    auto get = [&in](void* p, std::size_t bytes) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
        return static_cast<bool>(in);
    };
    char magic[sizeof kCacheMagic];
    if (!get(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kCacheMagic))
        return false;
    SurvivalSolution tmp;
    std::uint64_t nx = 0, nt = 0;
    if (!get(&tmp.nu, sizeof tmp.nu) || !get(&tmp.grid, sizeof tmp.grid) ||
        !get(&nx, sizeof nx) || !get(&nt, sizeof nt))
        return false;
    if (nx == 0 || nt == 0 || nx > (1u << 24) || nt > (1u << 24)) return false;
    tmp.x.resize(nx);
    tmp.t.resize(nt);
    tmp.u.resize(nx * nt);
    if (!get(tmp.x.data(), nx * sizeof(double)) || !get(tmp.t.data(), nt * sizeof(double)) ||
        !get(tmp.u.data(), tmp.u.size() * sizeof(double)))
        return false;
    sol = std::move(tmp);
    return true;
}

SurvivalSolution solve_survival_cached(double nu, const SurvivalGrid& grid,
                                       const std::string& cache_dir) {
    const std::string key = grid_key(nu, grid);
    static std::mutex mu;
    static std::map<std::string, SurvivalSolution> memory;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = memory.find(key); it != memory.end()) return it->second;
    }
    SurvivalSolution sol;
    std::string path;
    if (!cache_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        path = (std::filesystem::path(cache_dir) / ("survival_" + key + ".bin")).string();
        if (load_cache(sol, path) && sol.nu == nu) {
            std::lock_guard<std::mutex> lock(mu);
            memory.emplace(key, sol);
            return sol;
        }
    }
    sol = solve_survival(nu, grid);
    if (!path.empty()) save_cache(sol, path);
    std::lock_guard<std::mutex> lock(mu);
    memory.emplace(key, sol);
    return sol;
}

}  // namespace bessel
