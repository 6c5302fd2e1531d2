#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semiorbit/parallel.hpp"

namespace semiorbit {

inline constexpr int kReportSchema = 1;
inline constexpr int kCriterionCount = 10;

struct VerifyOptions {
    bool quick = false;
    std::uint64_t seed = 1;
    ExecPolicy policy;
    std::vector<int> only; // criterion ids to run; empty runs all
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0; // wall time, kept out of the JSON report
};

struct VerifyReport {
    bool quick = false;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> results;

    bool all_pass() const;
    std::string json(int indent = 2) const;
};

std::string criterion_name(int id);
CriterionResult run_criterion(int id, const VerifyOptions& opts);
VerifyReport verify_all(const VerifyOptions& opts);

} // namespace semiorbit
