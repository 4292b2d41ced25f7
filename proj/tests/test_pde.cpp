#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"

#include "bessel/analysis.hpp"
#include "bessel/laws.hpp"
#include "bessel/survival_pde.hpp"

using namespace bessel;
namespace fs = std::filesystem;

// At nu = 1/2 the downward tail is erf((a - b) / sqrt(2 t)), which pins the
// solver end to end.

TEST_CASE("half-index survival matches the error-function law") {
    const SurvivalGrid grid = default_grid(2.0, 1.0, 10.0);
    const SurvivalSolution sol = solve_survival(0.5, grid);
    for (double t : {0.05, 0.2, 1.0, 3.0, 10.0}) {
        const double exact = std::erf(1.0 / std::sqrt(2.0 * t));
        CHECK(sol.tail_at(2.0, t) == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("default grid snaps a mesh point onto the start and the horizon onto a node") {
    const SurvivalGrid grid = default_grid(2.0, 1.0, 10.0);
    CHECK(grid.snap_point == 2.0);
    CHECK(grid.x_max == doctest::Approx(2.0 + 10.0 * std::sqrt(10.0)));
    const SurvivalSolution sol = solve_survival(0.5, grid);
    CHECK(std::find(sol.x.begin(), sol.x.end(), 2.0) != sol.x.end());
    CHECK(sol.t.back() == 10.0);
    CHECK(sol.x.front() == 1.0);
}

TEST_CASE("survival values are probabilities with the right monotonicity") {
    const SurvivalSolution sol = solve_survival(0.8, default_grid(2.0, 1.0, 10.0));
    for (double v : sol.u) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
    CHECK(sol.tail_at(1.0, 1.0) == 0.0);
    CHECK(sol.tail_at(2.0, 1.0) > sol.tail_at(2.0, 10.0));
    CHECK(sol.tail_at(1.5, 5.0) < sol.tail_at(2.5, 5.0));
}

TEST_CASE("barrier survival never exceeds the zero-barrier tail") {
    // {tau_b > t} is contained in {tau_0 > t} when b > 0
    const SurvivalSolution sol = solve_survival(0.7, default_grid(2.0, 1.0, 10.0));
    for (double t : {0.5, 2.0, 10.0})
        CHECK(sol.tail_at(2.0, t) <= tau0_tail(0.7, 2.0, t) + 5e-4);
}

TEST_CASE("halving the resolution scales the error like a second-order scheme") {
    const SurvivalGrid grid = default_grid(2.0, 1.0, 100.0);
    const SurvivalSolution fine = solve_survival(0.5, grid);
    const SurvivalSolution coarse = solve_survival(0.5, coarsened(grid));
    double ef = 0.0, ec = 0.0;
    for (double t : fine.t) {
        if (t < 1.0) continue;
        const double exact = std::erf(1.0 / std::sqrt(2.0 * t));
        ef = std::max(ef, std::fabs(fine.tail_at(2.0, t) - exact) / exact);
        if (t <= coarse.t.back())
            ec = std::max(ec, std::fabs(coarse.tail_at(2.0, t) - exact) / exact);
    }
    CHECK(ef < 1e-3);
    const double factor = ec / ef;
    CHECK(factor > 2.5);
    CHECK(factor < 6.5);
}

TEST_CASE("a vanishing barrier reproduces the zero-barrier law") {
    const SurvivalSolution sol = solve_survival(1.0, default_grid(1.0, 1e-6, 1.0));
    CHECK(std::fabs(sol.tail_at(1.0, 1.0) - tau0_tail(1.0, 1.0, 1.0)) < 2e-3);
}

TEST_CASE("queries outside the mesh or the stored horizon are rejected") {
    const SurvivalSolution sol = solve_survival(0.5, default_grid(2.0, 1.0, 10.0));
    CHECK_THROWS_AS((void)sol.tail_at(0.9, 1.0), std::out_of_range);
    CHECK_THROWS_AS((void)sol.tail_at(100.0, 1.0), std::out_of_range);
    CHECK_THROWS_AS((void)sol.tail_at(2.0, 1e-4), std::out_of_range);
    CHECK_THROWS_AS((void)sol.tail_at(2.0, 20.0), std::out_of_range);
}

TEST_CASE("degenerate parameters are rejected up front") {
    SurvivalGrid g = default_grid(2.0, 1.0, 1.0);
    CHECK_THROWS_AS(solve_survival(0.0, g), std::domain_error);
    CHECK_THROWS_AS(solve_survival(-0.5, g), std::domain_error);
    SurvivalGrid flat = g;
    flat.x_max = flat.b;
    CHECK_THROWS_AS(solve_survival(0.5, flat), std::domain_error);
    SurvivalGrid backwards = g;
    backwards.t_max = backwards.t_min / 2.0;
    CHECK_THROWS_AS(solve_survival(0.5, backwards), std::domain_error);
    SurvivalGrid skeletal = g;
    skeletal.n_x = 8;
    CHECK_THROWS_AS(solve_survival(0.5, skeletal), std::domain_error);

    CHECK_THROWS_AS(default_grid(1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(default_grid(1.0, 2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(default_grid(2.0, 1.0, 0.0), std::domain_error);
}

namespace {

SurvivalGrid tiny_grid() {
    SurvivalGrid g;
    g.b = 1.0;
    g.x_max = 5.0;
    g.n_x = 64;
    g.t_min = 0.01;
    g.t_max = 0.1;
    g.nodes_per_decade = 8;
    g.substeps = 2;
    return g;
}

}  // namespace

TEST_CASE("cache files round-trip the solution exactly") {
    const SurvivalSolution sol = solve_survival(0.8, tiny_grid());
    const fs::path path = fs::temp_directory_path() / "survival_roundtrip_test.bin";
    REQUIRE(save_cache(sol, path.string()));

    SurvivalSolution back;
    REQUIRE(load_cache(back, path.string()));
    CHECK(back.nu == sol.nu);
    CHECK(back.x == sol.x);
    CHECK(back.t == sol.t);
    CHECK(back.u == sol.u);
    CHECK(back.grid.n_x == sol.grid.n_x);

    SurvivalSolution missing;
    CHECK_FALSE(load_cache(missing, (fs::temp_directory_path() / "no_such_cache.bin").string()));

    std::ofstream(path, std::ios::binary) << "not a cache file";
    CHECK_FALSE(load_cache(missing, path.string()));
    fs::remove(path);
}

TEST_CASE("the cached solver persists to disk and reuses entries") {
    const fs::path dir = fs::temp_directory_path() / "survival_cache_dir_test";
    fs::remove_all(dir);
    const SurvivalGrid g = tiny_grid();
    const SurvivalSolution first = solve_survival_cached(0.9, g, dir.string());
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    const SurvivalSolution again = solve_survival_cached(0.9, g, dir.string());
    CHECK(again.u == first.u);
    const SurvivalSolution other = solve_survival_cached(1.1, g, dir.string());
    CHECK(other.u != first.u);
    fs::remove_all(dir);
}

TEST_CASE("csv export writes one labelled row per stored value") {
    const SurvivalSolution sol = solve_survival(0.8, tiny_grid());
    const fs::path path = fs::temp_directory_path() / "survival_csv_test.csv";
    to_csv(sol, path.string());

    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,x,u");
    REQUIRE(std::getline(in, line));
    double t = 0, x = 0, u = -1;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &u) == 3);
    CHECK(t == sol.t.front());
    CHECK(x == sol.x.front());
    CHECK(u == 0.0);
    std::size_t rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == sol.t.size() * sol.x.size());
    fs::remove(path);
}
