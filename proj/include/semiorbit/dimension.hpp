#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semiorbit/semigroups.hpp"

namespace semiorbit {

struct CountingSeries {
    std::vector<std::uint64_t> thresholds; // ascending N
    std::vector<double> counts;            // #{w in orbit : |w|_inf < N}
};

// Roughly geometric integer thresholds from lo to hi inclusive, deduplicated.
std::vector<std::uint64_t> geometric_thresholds(std::uint64_t lo, std::uint64_t hi, std::size_t points);

inline constexpr std::size_t kDefaultPoints = 20;
// Thresholds used by the estimator when only N_max is given: geometric from N_max / 100.
std::vector<std::uint64_t> default_thresholds(std::uint64_t nmax, std::size_t points = kDefaultPoints);

CountingSeries orbit_count(const GeneratorSet& g, Vec64 v0, const std::vector<std::uint64_t>& thresholds,
                           const ExecPolicy& policy = {});

inline constexpr double kDefaultDropFraction = 0.2;

// Least-squares fit of log count against log N; delta = slope / 2. Not a rigorous bound.
struct DimensionEstimate {
    double delta = 0;
    double stderr_delta = 0;
    double r_squared = 0;
    double intercept = 0;
    std::size_t points_used = 0;
    const char* note = "non-rigorous estimate";
};

// Drops the smallest drop_fraction of thresholds (keeping at least three points).
DimensionEstimate estimate_dimension(const CountingSeries& series, double drop_fraction = kDefaultDropFraction);

} // namespace semiorbit
