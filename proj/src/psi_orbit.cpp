#include "semiorbit/psi_orbit.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "semiorbit/analytic_f.hpp"
#include "semiorbit/bigint.hpp"
#include "semiorbit/kronecker.hpp"

namespace semiorbit {

namespace {

void require_coprime(std::uint64_t x, std::uint64_t y)
{
    if (std::gcd(x, y) != 1) {
        throw DomainError("orbit vector must be coprime: " + std::to_string(x) + "/" + std::to_string(y));
    }
}

// Inverse of a modulo m (m >= 1, gcd(a, m) = 1); 0 when m = 1.
std::uint64_t modinv(std::uint64_t a, std::uint64_t m)
{
    if (m == 1) {
        return 0;
    }
    __int128 t0 = 0, t1 = 1;
    __int128 r0 = m, r1 = a % m;
    while (r1 != 0) {
        __int128 q = r0 / r1;
        __int128 tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t0 < 0) {
        t0 += m;
    }
    return static_cast<std::uint64_t>(t0);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

// Walks u = u0 + su*k, v = v0 - sv*k while v >= 0, looking for (u|v) = 1.
bool scan_line(std::uint64_t u, std::uint64_t v, std::uint64_t su, std::uint64_t sv)
{
    for (;;) {
        if (kronecker_u64(u, v) == 1) {
            return true;
        }
        if (v < sv) {
            return false;
        }
        v -= sv;
        u += su;
    }
}

int kron_signed_minus_one(std::uint64_t y) { return kronecker(std::int64_t{-1}, static_cast<std::int64_t>(y)).value; }

bool reciprocity_flag(std::uint64_t x, std::uint64_t y, Side side)
{
    int k = kronecker_u64(x, y);
    switch (y % 4) {
    case 0:
        if (x % 4 == 1) {
            return k == -1;
        }
        return side == Side::Denominator && k == -kron_signed_minus_one(y);
    case 1: return k == -1;
    case 3: return side == Side::Numerator && k == -1;
    default: return false;
    }
}

} // namespace

std::string side_name(Side s) { return s == Side::Numerator ? "num" : "den"; }

Side parse_side(const std::string& s)
{
    if (s == "num" || s == "numerator") {
        return Side::Numerator;
    }
    if (s == "den" || s == "denominator") {
        return Side::Denominator;
    }
    throw std::invalid_argument("side must be num or den, got " + s);
}

bool appears_as_numerator(std::uint64_t x, std::uint64_t y, std::uint64_t n)
{
    require_coprime(x, y);
    if (n == 0) {
        throw DomainError("n must be positive");
    }
    if (x == 0) {
        return true;
    }
    if (y == 0) {
        return n % 4 == 1;
    }
    const std::uint64_t g = std::gcd(y, std::uint64_t{4});
    if (n % g != x % g) {
        return false;
    }
    const std::uint64_t h = 4 / g;
    const std::uint64_t t = mulmod(n % y, modinv(x % y, y), y);
    std::uint64_t u0 = 0;
    bool found = false;
    for (std::uint64_t j = 0; j < h; ++j) {
        std::uint64_t u = t + y * j;
        if (u % 4 == 1) {
            u0 = u;
            found = true;
            break;
        }
    }
    if (!found || static_cast<u128>(u0) * x > n) {
        return false;
    }
    const std::uint64_t v0 = (n - u0 * x) / y;
    return scan_line(u0, v0, h * y, h * x);
}

bool appears_as_denominator(std::uint64_t x, std::uint64_t y, std::uint64_t n)
{
    require_coprime(x, y);
    if (n == 0) {
        throw DomainError("n must be positive");
    }
    if (x == 0) {
        return n % 4 == 1;
    }
    if (y == 0) {
        return n % 4 == 0;
    }
    if (n % 4 != y % 4 || n < y) {
        return false;
    }
    // u = 4t, v = 1 + 4s with t x + s y = (n - y)/4.
    const std::uint64_t m = (n - y) / 4;
    const std::uint64_t t0 = mulmod(m % y, modinv(x % y, y), y);
    if (static_cast<u128>(t0) * x > m) {
        return false;
    }
    const std::uint64_t s0 = (m - t0 * x) / y;
    return scan_line(4 * t0, 1 + 4 * s0, 4 * y, 4 * x);
}

bool appears(std::uint64_t x, std::uint64_t y, std::uint64_t n, Side side)
{
    return side == Side::Numerator ? appears_as_numerator(x, y, n) : appears_as_denominator(x, y, n);
}

Thresholds effective_threshold(std::uint64_t x, std::uint64_t y)
{
    if (x == 0 || y == 0) {
        throw DomainError("effective thresholds require x, y >= 1");
    }
    const std::uint64_t xy8 = checked_mul(checked_mul(x, y), 8);
    const long double rhs = static_cast<long double>(kThresholdConstant) * x * y;
    auto g = [](long double r) { return std::sqrt(r) / (std::log(r) * std::log(std::log(r))); };
    long double lo = 100.0L, hi = 1e18L;
    if (g(hi) < rhs) {
        throw std::overflow_error("threshold root exceeds 1e18");
    }
    if (g(lo) >= rhs) {
        hi = lo;
    } else {
        for (int i = 0; i < 200 && hi - lo > 1e-6L * lo; ++i) {
            long double mid = (lo + hi) / 2;
            (g(mid) < rhs ? lo : hi) = mid;
        }
    }
    // The bracket's upper end is never below the root.
    const auto r_up = static_cast<std::uint64_t>(std::ceil(hi));
    Thresholds t;
    t.r = static_cast<double>(r_up);
    t.pow2 = std::bit_floor(xy8);
    t.square = xy8;
    t.nonsquare = checked_mul(t.pow2, std::max(r_up, kThresholdFloor));
    return t;
}

bool ObstructionReport::congruent(std::uint64_t n) const
{
    return std::binary_search(residues.begin(), residues.end(), n % modulus);
}

bool ObstructionReport::admissible(std::uint64_t n) const
{
    return n >= 1 && congruent(n) && !(reciprocity && is_square(n));
}

bool ObstructionReport::contains(std::uint64_t n) const
{
    if (!complete) {
        throw std::logic_error("report has no sporadic scan; contains() is not exact");
    }
    return admissible(n) && !std::binary_search(sporadic.begin(), sporadic.end(), n);
}

ObstructionReport classify_side(std::uint64_t x, std::uint64_t y, Side side)
{
    require_coprime(x, y);
    ObstructionReport r;
    r.side = side;
    if (side == Side::Numerator) {
        r.modulus = std::gcd(y, std::uint64_t{4});
        r.residues = {x % r.modulus};
    } else {
        r.modulus = 4;
        r.residues = {y % 4};
    }
    r.reciprocity = reciprocity_flag(x, y, side);
    if (x > 0 && y > 0) {
        Thresholds t = effective_threshold(x, y);
        r.square_threshold = t.square;
        r.nonsquare_threshold = t.nonsquare;
    } else {
        r.complete = true;
    }
    return r;
}

std::pair<ObstructionReport, ObstructionReport> classify(std::uint64_t x, std::uint64_t y)
{
    return {classify_side(x, y, Side::Numerator), classify_side(x, y, Side::Denominator)};
}

bool sufficient_check(std::uint64_t x, std::uint64_t y, std::uint64_t n, Side side)
{
    if (x == 0 || y == 0) {
        throw DomainError("sufficient_check requires x, y >= 1");
    }
    ObstructionReport r = classify_side(x, y, side);
    if (n == 0 || !r.congruent(n)) {
        throw DomainError("n = " + std::to_string(n) + " fails the congruence condition");
    }
    const std::uint64_t xy8 = checked_mul(checked_mul(x, y), 8);
    if (n % 2 == 0 && is_square(n / 2)) {
        return n >= xy8;
    }
    if (is_square(n)) {
        return n >= xy8 && !r.reciprocity;
    }
    std::uint64_t odd = n >> ctz(n);
    if (odd < 3 || is_square(odd)) {
        return false;
    }
    const std::uint64_t q = n / xy8;
    if (q < 2) {
        return false;
    }
    return q >= f_of_n(odd).f;
}

namespace {

bool missing_at(std::uint64_t x, std::uint64_t y, Side side, std::uint64_t n, const ObstructionReport& r,
                const MissingOptions& opts)
{
    if (!r.congruent(n)) {
        return false;
    }
    if (r.reciprocity && !opts.scan_flagged_squares && is_square(n)) {
        return true;
    }
    return !appears(x, y, n, side);
}

} // namespace

std::vector<std::uint64_t> orbit_missing_serial(std::uint64_t x, std::uint64_t y, Side side, std::uint64_t bound,
                                                const MissingOptions& opts)
{
    ObstructionReport r = classify_side(x, y, side);
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= bound; ++n) {
        if (missing_at(x, y, side, n, r, opts)) {
            out.push_back(n);
        }
    }
    return out;
}

std::vector<std::uint64_t> orbit_missing(std::uint64_t x, std::uint64_t y, Side side, std::uint64_t bound,
                                         const ExecPolicy& policy, const MissingOptions& opts)
{
    ObstructionReport r = classify_side(x, y, side);
    constexpr std::uint64_t kBlock = 1u << 16;
    const std::uint64_t blocks = bound / kBlock + 1;
    std::vector<std::vector<std::uint64_t>> parts(blocks);
    std::atomic<std::uint64_t> done{0};
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(policy.resolved_threads())
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        try {
            const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(b) * kBlock);
            const std::uint64_t hi = std::min(bound, (static_cast<std::uint64_t>(b) + 1) * kBlock - 1);
            for (std::uint64_t n = lo; n <= hi; ++n) {
                if (missing_at(x, y, side, n, r, opts)) {
                    parts[b].push_back(n);
                }
            }
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
        std::uint64_t d = ++done;
        if (omp_get_thread_num() == 0) {
            policy.report(d, blocks);
        }
    }
    if (err) {
        std::rethrow_exception(err);
    }
    std::vector<std::uint64_t> out;
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

ObstructionReport orbit_complete_description(std::uint64_t x, std::uint64_t y, Side side, const ExecPolicy& policy)
{
    ObstructionReport r = classify_side(x, y, side);
    if (r.complete) {
        return r;
    }
    std::vector<std::uint64_t> missing = orbit_missing(x, y, side, r.nonsquare_threshold - 1, policy);
    for (auto n : missing) {
        if (r.admissible(n)) {
            r.sporadic.push_back(n);
        }
    }
    r.complete = true;
    return r;
}

} // namespace semiorbit
