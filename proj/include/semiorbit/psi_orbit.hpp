#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semiorbit/parallel.hpp"

namespace semiorbit {

// Membership and obstruction data for orbits of the master semigroup Psi
// = { M in Gamma1(4) with nonnegative entries : (a|b) = 1 }.
// Vectors are given as coprime nonnegative (x, y); values are 64-bit.

enum class Side { Numerator, Denominator };

std::string side_name(Side s);
Side parse_side(const std::string& s);

// Exact tests; cost is at most one symbol evaluation per solution of u x + v y = n.
bool appears_as_numerator(std::uint64_t x, std::uint64_t y, std::uint64_t n);
bool appears_as_denominator(std::uint64_t x, std::uint64_t y, std::uint64_t n);
bool appears(std::uint64_t x, std::uint64_t y, std::uint64_t n, Side side);

struct Thresholds {
    double r = 0;              // root of sqrt(r)/(log r log log r) = 7.542795 x y, rounded outward
    std::uint64_t pow2 = 0;    // largest power of two <= 8xy
    std::uint64_t square = 0;  // 8xy
    std::uint64_t nonsquare = 0;
};

inline constexpr double kThresholdConstant = 7.542795;
inline constexpr std::uint64_t kThresholdFloor = 3410000;

// Requires x, y >= 1. Throws std::overflow_error if a threshold exceeds 64 bits.
Thresholds effective_threshold(std::uint64_t x, std::uint64_t y);

struct ObstructionReport {
    Side side = Side::Numerator;
    std::uint64_t modulus = 1;
    std::vector<std::uint64_t> residues;
    bool reciprocity = false;
    std::uint64_t square_threshold = 0;    // 0 when the orbit has a zero coordinate
    std::uint64_t nonsquare_threshold = 0;
    std::vector<std::uint64_t> sporadic;
    // Whether sporadic has been computed, making contains() exact.
    bool complete = false;

    bool congruent(std::uint64_t n) const;
    // Passes the congruence and is not a square excluded by reciprocity.
    bool admissible(std::uint64_t n) const;
    bool contains(std::uint64_t n) const;
};

// Congruence and reciprocity data without the sporadic scan.
std::pair<ObstructionReport, ObstructionReport> classify(std::uint64_t x, std::uint64_t y);
ObstructionReport classify_side(std::uint64_t x, std::uint64_t y, Side side);

// Sufficient conditions for appearance: the twice-a-square branch, the window
// condition floor(n/8xy) >= f(odd part of n), and squares >= 8xy without reciprocity.
bool sufficient_check(std::uint64_t x, std::uint64_t y, std::uint64_t n, Side side);

struct MissingOptions {
    // Scan squares on a reciprocity-flagged side instead of listing them directly.
    bool scan_flagged_squares = false;
};

// Congruent n in [1, bound] that are absent from the orbit, ascending.
std::vector<std::uint64_t> orbit_missing(std::uint64_t x, std::uint64_t y, Side side, std::uint64_t bound,
                                         const ExecPolicy& policy = {}, const MissingOptions& opts = {});
std::vector<std::uint64_t> orbit_missing_serial(std::uint64_t x, std::uint64_t y, Side side, std::uint64_t bound,
                                                const MissingOptions& opts = {});

// Full description: scans below the non-square threshold and records the sporadic exceptions.
ObstructionReport orbit_complete_description(std::uint64_t x, std::uint64_t y, Side side,
                                             const ExecPolicy& policy = {});

} // namespace semiorbit
