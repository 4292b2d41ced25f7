#pragma once

#include <string>
#include <vector>

namespace bessel {

// Finite-difference oracle for u(t, x) = P_x(tau_b > t) under the downward
// law with index nu.  u solves u_t = u_xx / 2 + (1 - 2 nu) / (2 x) u_x on
// (b, x_max) with u(t, b) = 0, zero flux at the outer wall, and u(0, .) = 1.

struct SurvivalGrid {
    double b = 1.0;
    double x_max = 0.0;   // computed by default_grid when left at 0
    int n_x = 2400;       // spatial cells (graded toward x = b)
    double t_min = 1e-3;  // first stored time node
    double t_max = 1e4;
    int nodes_per_decade = 32;  // stored time nodes, geometric spacing
    int substeps = 4;           // time steps between consecutive stored nodes
    double layer_frac = 0.06;     // index fraction of cells in the refined wall layer
    double width_ratio = 1000.0;  // bulk cell width over wall cell width
    // When positive, the nearest interior mesh point is moved onto this
    // coordinate so queries started there carry no x-interpolation error.
    double snap_point = 0.0;
};

struct SurvivalSolution {
    double nu = 0.0;
    SurvivalGrid grid;
    std::vector<double> x;  // n_x + 1 mesh points, x[0] = b
    std::vector<double> t;  // stored time nodes, ascending
    std::vector<double> u;  // row-major, u[i * x.size() + j] = u(t[i], x[j])

    // Survival probability started from x0 at time tq.  Interpolates linearly
    // in x and linearly in log t between stored nodes.
    double tail_at(double x0, double tq) const;
};

// Grid sized for queries started from a with horizon t_max: the outer wall
// sits far enough out that the mass lost through it is negligible.
SurvivalGrid default_grid(double a, double b, double t_max);

SurvivalSolution solve_survival(double nu, const SurvivalGrid& grid);

// Same solve, but consults an on-disk cache keyed by (nu, grid) first.
// cache_dir may be empty, which disables caching.
SurvivalSolution solve_survival_cached(double nu, const SurvivalGrid& grid,
                                       const std::string& cache_dir);

void to_csv(const SurvivalSolution& sol, const std::string& path);
bool save_cache(const SurvivalSolution& sol, const std::string& path);
bool load_cache(SurvivalSolution& sol, const std::string& path);

}  // namespace bessel
