// Acceptance gate: runs every verification criterion and prints one PASS or
// FAIL line per criterion, with the individual checks underneath.  Exits
// nonzero when anything fails, so ctest treats any red line as a failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>

#include "bessel/verify.hpp"

int main() {
    bessel::VerifyOptions opt;
    if (const char* dir = std::getenv("BESSEL_CACHE_DIR")) opt.cache_dir = dir;

    const auto& criteria = bessel::all_criteria();
    int failures = 0;
    int index = 0;
    for (const auto& crit : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        bool pass = true;
        std::string detail;
        std::vector<bessel::CheckResult> checks;
        try {
            checks = crit.run(opt);
            for (const auto& c : checks) pass = pass && c.pass;
        } catch (const std::exception& e) {
            pass = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d (%s): %s  [%.1fs]\n", index, crit.name,
                    pass ? "PASS" : "FAIL", secs);
        for (const auto& c : checks)
            std::printf("    %-4s %-64s measured=%-13.6g expected=%-13.6g tol=%g\n",
                        c.pass ? "ok" : "FAIL", c.claim.c_str(), c.measured, c.expected,
                        c.tolerance);
        if (!detail.empty()) std::printf("    threw: %s\n", detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
    return failures == 0 ? 0 : 1;
}
