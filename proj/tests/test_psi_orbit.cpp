#include <doctest.h>

#include <cmath>
#include <set>

#include "gen.hpp"
#include "oracles.hpp"
#include "semiorbit/analytic_f.hpp"
#include "semiorbit/kronecker.hpp"
#include "semiorbit/psi_orbit.hpp"

using namespace semiorbit;

namespace {

const std::vector<std::uint64_t> kSporadic23{3, 6, 7, 10, 12, 15, 18, 19, 27, 31, 34, 55, 63, 99, 115};

ExecPolicy threads(int t)
{
    ExecPolicy p;
    p.threads = t;
    return p;
}

} // namespace

TEST_CASE("appears examples")
{
    for (std::uint64_t n = 1; n <= 300; ++n) {
        CHECK(appears_as_numerator(0, 1, n));
        CHECK(appears_as_denominator(1, 0, n) == (n % 4 == 0));
        CHECK(appears_as_denominator(0, 1, n) == (n % 4 == 1));
    }
    CHECK_FALSE(appears_as_numerator(2, 3, 4));
    CHECK_FALSE(appears_as_numerator(2, 3, 115));
    CHECK(appears_as_numerator(2, 3, 116));
    CHECK(appears_as_denominator(0, 1, 5));
    CHECK_FALSE(appears_as_denominator(0, 1, 7));
    for (std::uint64_t k = 1; k <= 1000; ++k) {
        REQUIRE_FALSE(appears_as_denominator(3, 8, k * k));
    }
    CHECK_THROWS_AS(appears_as_numerator(2, 4, 10), DomainError);
    CHECK_THROWS_AS(appears(2, 4, 10, Side::Denominator), DomainError);
}

TEST_CASE("appears agrees with a search over matrices of Psi")
{
    for (std::int64_t x = 0; x <= 9; ++x) {
        for (std::int64_t y = 0; y <= 9; ++y) {
            if (std::gcd(x, y) != 1) {
                continue;
            }
            for (std::int64_t n = 1; n <= 150; ++n) {
                REQUIRE_MESSAGE(appears_as_numerator(x, y, n) == oracle::psi_side_member(x, y, n, 0),
                                x << "/" << y << " num " << n);
                REQUIRE_MESSAGE(appears_as_denominator(x, y, n) == oracle::psi_side_member(x, y, n, 1),
                                x << "/" << y << " den " << n);
            }
        }
    }
}

TEST_CASE("orbit values of small Psi matrices pass the appearance test")
{
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, int>> seen;
    for (std::int64_t a = 1; a <= 200; a += 4) {
        for (std::int64_t c = 0; c <= 200; c += 4) {
            for (std::int64_t b = 0; b <= 200; ++b) {
                if ((1 + b * c) % a != 0) {
                    continue;
                }
                const std::int64_t d = (1 + b * c) / a;
                if (d > 200 || !oracle::in_psi(a, b, c, d)) {
                    continue;
                }
                for (auto [x, y] : {std::pair<std::int64_t, std::int64_t>{2, 3}, {1, 1}, {3, 8}, {5, 2}}) {
                    REQUIRE(appears_as_numerator(x, y, a * x + b * y));
                    REQUIRE(appears_as_denominator(x, y, c * x + d * y));
                }
            }
        }
    }
}

TEST_CASE("classify by residue class mod 4")
{
    auto [n23, d23] = classify(2, 3);
    CHECK(n23.modulus == 1);
    CHECK(n23.reciprocity);
    CHECK(d23.modulus == 4);
    CHECK(d23.residues == std::vector<std::uint64_t>{3});
    CHECK_FALSE(d23.reciprocity);

    auto [n10, d10] = classify(1, 0);
    CHECK(n10.modulus == 4);
    CHECK(n10.residues == std::vector<std::uint64_t>{1});
    CHECK_FALSE(n10.reciprocity);

    auto [n38, d38] = classify(3, 8);
    CHECK(d38.modulus == 4);
    CHECK(d38.residues == std::vector<std::uint64_t>{0});
    CHECK(d38.reciprocity);
    CHECK_FALSE(n38.reciprocity);
    CHECK_THROWS_AS(classify(4, 6), DomainError);

    // reciprocity flags written out per residue class of y
    for (std::int64_t x = 0; x <= 40; ++x) {
        for (std::int64_t y = 0; y <= 40; ++y) {
            if (std::gcd(x, y) != 1) {
                continue;
            }
            auto [num, den] = classify(x, y);
            const int k = oracle::kronecker(x, y), km = oracle::kronecker(-1, y);
            bool fn = false, fd = false;
            switch (y % 4) {
            case 0:
                fn = x % 4 == 1 && k == -1;
                fd = (x % 4 == 1 && k == -1) || (x % 4 == 3 && k == -km);
                break;
            case 1: fn = fd = k == -1; break;
            case 3: fn = k == -1; break;
            default: break;
            }
            REQUIRE_MESSAGE(num.reciprocity == fn, x << "/" << y);
            REQUIRE_MESSAGE(den.reciprocity == fd, x << "/" << y);
            REQUIRE(num.modulus == (y == 0 ? 4 : std::gcd<std::uint64_t>(y, 4)));
            REQUIRE(den.modulus == 4);
            REQUIRE(den.residues == std::vector<std::uint64_t>{static_cast<std::uint64_t>(y % 4)});
        }
    }
}

TEST_CASE("reciprocity flags exclude every square up to 10^6")
{
    for (std::int64_t x = 0; x <= 12; ++x) {
        for (std::int64_t y = 0; y <= 12; ++y) {
            if (std::gcd(x, y) != 1) {
                continue;
            }
            auto [num, den] = classify(x, y);
            for (const ObstructionReport* r : {&num, &den}) {
                if (!r->reciprocity) {
                    continue;
                }
                for (std::uint64_t k = 1; k <= 1000; ++k) {
                    REQUIRE_FALSE(appears(x, y, k * k, r->side));
                }
            }
        }
    }
}

TEST_CASE("effective thresholds")
{
    auto t23 = effective_threshold(2, 3);
    CHECK(t23.pow2 == 32);
    CHECK(t23.square == 48);
    CHECK(t23.nonsquare == 109120000);
    CHECK(t23.r <= 3410000);
    auto t11 = effective_threshold(1, 1);
    CHECK(t11.pow2 == 8);
    CHECK(t11.nonsquare == 27280000);
    CHECK_THROWS_AS(effective_threshold(0, 1), DomainError);
    CHECK_THROWS_AS(effective_threshold(150, 149), std::overflow_error);

    // the root is not below the true root of sqrt(r)/(log r log log r) = 7.542795 xy
    for (auto [x, y] : {std::pair<std::uint64_t, std::uint64_t>{7, 9}, {30, 31}, {60, 61}, {100, 101}}) {
        auto t = effective_threshold(x, y);
        const double lhs = std::sqrt(t.r) / (std::log(t.r) * std::log(std::log(t.r)));
        CHECK(lhs >= kThresholdConstant * x * y * (1 - 1e-12));
        const double below = t.r * (1 - 1e-6);
        CHECK(std::sqrt(below) / (std::log(below) * std::log(std::log(below))) < kThresholdConstant * x * y);
        CHECK(t.nonsquare == t.pow2 * static_cast<std::uint64_t>(std::max(t.r, 3410000.0)));
    }
}

TEST_CASE("sufficient_check implies appearance")
{
    CHECK_THROWS_AS(sufficient_check(1, 1, 2000000, Side::Denominator), DomainError);
    CHECK_THROWS_AS(sufficient_check(2, 3, 4, Side::Denominator), DomainError);

    gen::Gen g(53);
    int fired = 0;
    for (int i = 0; i < 4000; ++i) {
        auto [x, y] = g.coprime(1, 6);
        const Side side = g.coin() ? Side::Numerator : Side::Denominator;
        const ObstructionReport rep = classify_side(x, y, side);
        const std::uint64_t n = g.range(1, 200000);
        if (!rep.congruent(n)) {
            CHECK_THROWS_AS(sufficient_check(x, y, n, side), DomainError);
            continue;
        }
        if (sufficient_check(x, y, n, side)) {
            ++fired;
            REQUIRE_MESSAGE(appears(x, y, n, side), x << "/" << y << " " << n);
        }
    }
    CHECK(fired > 100);
    // the window hypothesis consumes f of the odd part
    const std::uint64_t n = 48 * 2000 + 1;
    const std::uint64_t odd = n; // odd already
    if (n / 48 >= f_of_n(odd).f) {
        CHECK(sufficient_check(2, 3, n, Side::Numerator));
    }
}

TEST_CASE("orbit_missing")
{
    CHECK(orbit_missing(2, 3, Side::Numerator, 120) ==
          std::vector<std::uint64_t>{1, 3, 4, 6, 7, 9, 10, 12, 15, 16, 18, 19, 25, 27, 31, 34, 36, 49, 55, 63, 64, 81,
                                     99, 100, 115});
    CHECK(orbit_missing(0, 1, Side::Numerator, 100).empty());
    CHECK(orbit_missing(1, 0, Side::Denominator, 20).empty());

    MissingOptions scan;
    scan.scan_flagged_squares = true;
    CHECK(orbit_missing(2, 3, Side::Numerator, 5000, {}, scan) == orbit_missing(2, 3, Side::Numerator, 5000));

    for (auto [x, y] : {std::pair<std::uint64_t, std::uint64_t>{2, 3}, {3, 8}, {5, 7}, {1, 4}}) {
        for (Side side : {Side::Numerator, Side::Denominator}) {
            const auto fast = orbit_missing(x, y, side, 20000, threads(3));
            REQUIRE(fast == orbit_missing_serial(x, y, side, 20000));
            const ObstructionReport rep = classify_side(x, y, side);
            std::vector<std::uint64_t> direct;
            for (std::uint64_t n = 1; n <= 20000; ++n) {
                if (rep.congruent(n) && !appears(x, y, n, side)) {
                    direct.push_back(n);
                }
            }
            REQUIRE(fast == direct);
        }
    }
}

TEST_CASE("complete description of (2,3)")
{
    ObstructionReport r = orbit_complete_description(2, 3, Side::Numerator);
    CHECK(r.reciprocity);
    CHECK(r.complete);
    CHECK(r.sporadic == kSporadic23);
    for (std::uint64_t n = 1; n <= 200000; ++n) {
        REQUIRE(r.contains(n) == appears_as_numerator(2, 3, n));
    }

    ObstructionReport d01 = orbit_complete_description(0, 1, Side::Denominator);
    CHECK(d01.residues == std::vector<std::uint64_t>{1});
    CHECK_FALSE(d01.reciprocity);
    CHECK(d01.sporadic.empty());
    ObstructionReport n10 = orbit_complete_description(1, 0, Side::Numerator);
    CHECK(n10.residues == std::vector<std::uint64_t>{1});
    CHECK(n10.sporadic.empty());

    ObstructionReport partial = classify_side(2, 3, Side::Numerator);
    CHECK_THROWS(partial.contains(5));
}

TEST_CASE("admissible non-squares above the threshold appear")
{
    gen::Gen g(59);
    for (auto [x, y] : {std::pair<std::uint64_t, std::uint64_t>{1, 1}, {2, 3}, {1, 2}}) {
        for (Side side : {Side::Numerator, Side::Denominator}) {
            const ObstructionReport rep = classify_side(x, y, side);
            int tried = 0;
            while (tried < 150) {
                const std::uint64_t n = rep.nonsquare_threshold + g.range(0, 1000000000);
                if (!rep.congruent(n) || is_square(n)) {
                    continue;
                }
                ++tried;
                REQUIRE(appears(x, y, n, side));
            }
        }
    }
}
