#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "singlab/report.hpp"

namespace singlab {

// Default seed for reproducible runs; documented in the README.
inline constexpr std::uint64_t kDefaultSeed = 271828;

struct SuiteOptions {
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
};

struct SuiteCheck {
    std::string name;
    bool passed = false;
    double wall_s = 0.0;
    std::string detail;
};

struct SuiteResult {
    std::vector<SuiteCheck> checks;
    std::vector<ReportRow> rows;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Runs the whole verification battery over the example polynomial
// family: integrability thresholds, blow-up exponents, Lojasiewicz fits,
// dimension estimates, monotonicity bounds, and the cutoff partition
// checks.  One report row per experiment, one check per claim.
SuiteResult run_suite(const SuiteOptions& options);

}  // namespace singlab
