#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semiorbit/parallel.hpp"
#include "semiorbit/words.hpp"

namespace semiorbit {

// Search over continued fractions [0; 4a_1, ..., 4a_n, k, 1, 2] (a_i, k >= 1):
// the orbit of the roots (3, 3k+2) under (u, v) -> (v, u + 4a v).

inline constexpr int kManifestSchema = 1;

class CheckpointError : public DomainError {
public:
    using DomainError::DomainError;
};

struct ClassStats {
    std::uint64_t found = 0;
    std::uint64_t missing = 0;         // non-squares only
    std::uint64_t largest_missing = 0; // non-squares only; 0 when none
    std::uint64_t squares_missing = 0;
};

struct SearchManifest {
    std::uint64_t bound = 0;
    bool complete = false;
    std::uint64_t roots_total = 0;
    std::uint64_t roots_completed = 0; // roots k = 1 .. roots_completed are done
    std::array<ClassStats, 4> classes{};
    std::uint64_t squares_marked = 0;
    std::vector<std::uint64_t> bitmap; // bit v set when v is a denominator

    bool marked(std::uint64_t v) const { return (bitmap[v >> 6] >> (v & 63)) & 1u; }
    // Unmarked v in [1, bound], squares included.
    std::vector<std::uint64_t> missing() const;
    void finalize();
};

struct CfSearchOptions {
    ExecPolicy policy;
    std::string checkpoint;        // manifest path; the bitmap goes to <path>.bitmap
    std::uint64_t max_roots = 0;   // stop after this many roots (0: run to completion)
    std::uint64_t batch_roots = 4096;
    double checkpoint_interval_s = 30; // the final state is always saved
};

SearchManifest search_missing_denominators(std::uint64_t bound, const CfSearchOptions& opts = {});
SearchManifest search_missing_denominators_serial(std::uint64_t bound);

// Continues the search stored at path; a missing or empty file starts afresh.
SearchManifest checkpoint_resume(const std::string& path, std::uint64_t bound, const CfSearchOptions& opts = {});

// Reverse descent from (u, v) to a root, following a = floor(v/u).
bool tail_chain_member(std::uint64_t u, std::uint64_t v);

// Independent check: for every v <= bound, search u with a valid descent.
std::vector<std::uint64_t> missing_by_pullback(std::uint64_t bound, const ExecPolicy& policy = {});

// A continued fraction of the searched shape with denominator v, if one exists.
std::optional<ContinuedFraction> find_certificate(std::uint64_t v);

// JSON text of the manifest (without the bitmap).
std::string manifest_json(const SearchManifest& m, int indent = 2);

} // namespace semiorbit
