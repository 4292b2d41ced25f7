#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bessel {

// One verified claim: what was checked, where the claim lives in the library,
// and the numbers behind the verdict.  `tolerance` is the pinned acceptance
// tolerance, interpreted by the individual check (absolute, relative, or a
// statistical width), and reported so failures are self-describing.
struct CheckResult {
    std::string claim;
    std::string location;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    std::uint64_t seed = 20250816;
    int threads = 1;
    std::string cache_dir;    // empty: in-memory PDE cache only
    double nu_filter = 0.0;   // > 0: run only checks pinned at this index
};

// The thirteen acceptance criteria, in release order.  Each returns one
// CheckResult per sub-claim; a criterion passes iff all of them do.
std::vector<CheckResult> check_constants_cancellation(const VerifyOptions& opt);
std::vector<CheckResult> check_exact_identities(const VerifyOptions& opt);
std::vector<CheckResult> check_leading_order_limits(const VerifyOptions& opt);
std::vector<CheckResult> check_second_order_below_one(const VerifyOptions& opt);
std::vector<CheckResult> check_second_order_log_regime(const VerifyOptions& opt);
std::vector<CheckResult> check_second_order_above_one(const VerifyOptions& opt);
std::vector<CheckResult> check_identity_gap_limit(const VerifyOptions& opt);
std::vector<CheckResult> check_renewal_identity(const VerifyOptions& opt);
std::vector<CheckResult> check_convolution_consistency(const VerifyOptions& opt);
std::vector<CheckResult> check_infimum_time_limits(const VerifyOptions& opt);
std::vector<CheckResult> check_long_horizon_conditioning(const VerifyOptions& opt);
std::vector<CheckResult> check_sampler_validity(const VerifyOptions& opt);
std::vector<CheckResult> check_oracle_validity(const VerifyOptions& opt);

struct Criterion {
    const char* name;
    std::vector<CheckResult> (*run)(const VerifyOptions&);
};

// All criteria in order; the acceptance harness and `verify` subcommand both
// drive this table.
const std::vector<Criterion>& all_criteria();

// Named bundles: identities | asymptotics | simulation | oracle | all.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt);
bool suite_exists(const std::string& suite);

std::string to_json(const std::vector<CheckResult>& results);
std::string to_table(const std::vector<CheckResult>& results);

}  // namespace bessel
