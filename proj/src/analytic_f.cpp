#include "semiorbit/analytic_f.hpp"

#include <cmath>
#include <string>

#include "semiorbit/bigint.hpp"
#include "semiorbit/kronecker.hpp"

namespace semiorbit {

WindowResult f_of_n(std::uint64_t n)
{
    if (n < 3) {
        throw DomainError("f(n) requires n >= 3");
    }
    if (is_square(n)) {
        throw DomainError("f(n) is undefined for the square " + std::to_string(n));
    }
    const std::uint64_t period = (n % 4 == 2) ? 4 * n : n;
    std::vector<std::int8_t> sym(period);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(period); ++i) {
        sym[i] = static_cast<std::int8_t>(kronecker_u64(static_cast<std::uint64_t>(i), n));
    }

    // Two concatenated periods catch runs that wrap around.
    std::uint64_t best = 0, best_start = 0;
    std::uint64_t run_plus = 0, run_minus = 0; // lengths of current runs avoiding -1 / +1
    for (std::uint64_t j = 0; j < 2 * period; ++j) {
        int s = sym[j % period];
        run_plus = (s == -1) ? 0 : run_plus + 1;
        run_minus = (s == 1) ? 0 : run_minus + 1;
        std::uint64_t r = std::max(run_plus, run_minus);
        if (r > best) {
            best = r;
            best_start = j + 1 - r;
        }
    }
    return WindowResult{n, best + 1, best_start % period};
}

double pv_bound(std::uint64_t n)
{
    double x = static_cast<double>(n);
    return kPvConstant * std::sqrt(x) * std::log(x) * std::log(std::log(x));
}

std::vector<PvSample> verify_pv_bound(const std::vector<std::uint64_t>& samples, const ExecPolicy& policy)
{
    for (auto n : samples) {
        if (static_cast<double>(n) < kPvMinimum || is_square(n) || n % 4 == 2) {
            throw DomainError("sample outside the bound's hypotheses: " + std::to_string(n));
        }
    }
    std::vector<PvSample> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        WindowResult w = f_of_n(samples[i]);
        double b = pv_bound(samples[i]);
        out.push_back(PvSample{samples[i], w.f, b, static_cast<double>(w.f) <= b});
        policy.report(i + 1, samples.size());
    }
    return out;
}

} // namespace semiorbit
