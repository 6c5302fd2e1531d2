#pragma once

#include <cstdint>
#include <vector>

#include "semiorbit/parallel.hpp"

namespace semiorbit {

// f(n): least m such that every m consecutive integers contain both symbol values +1 and -1 against n.
struct WindowResult {
    std::uint64_t n = 0;
    std::uint64_t f = 0;
    // Start of a window of length f - 1 missing one of the two values.
    std::uint64_t worst_window_start = 0;
};

// Requires n >= 3 and n not a square. Memory is one byte per residue of the period.
WindowResult f_of_n(std::uint64_t n);

inline constexpr double kPvMinimum = 3.41e6;
inline constexpr double kPvConstant = 0.942836;

double pv_bound(std::uint64_t n);

struct PvSample {
    std::uint64_t n = 0;
    std::uint64_t f = 0;
    double bound = 0;
    bool pass = false;
};

// Each sample must be a non-square >= 3.41e6 with n != 2 mod 4.
std::vector<PvSample> verify_pv_bound(const std::vector<std::uint64_t>& samples, const ExecPolicy& policy = {});

} // namespace semiorbit
