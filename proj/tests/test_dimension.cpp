#include <doctest.h>

#include <cmath>
#include <random>

#include "semiorbit/dimension.hpp"

using namespace semiorbit;

namespace {

CountingSeries planted(double delta, double noise, std::uint64_t seed)
{
    CountingSeries s;
    s.thresholds = geometric_thresholds(100, 1000000, 30);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0, noise);
    for (auto n : s.thresholds) {
        s.counts.push_back(5 * std::pow(static_cast<double>(n), 2 * delta) * std::exp(noise > 0 ? eps(rng) : 0.0));
    }
    return s;
}

} // namespace

TEST_CASE("geometric thresholds")
{
    auto t = geometric_thresholds(10, 1000, 5);
    CHECK(t.front() == 10);
    CHECK(t.back() == 1000);
    CHECK(t.size() == 5);
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
    // short ranges collapse duplicates
    auto u = geometric_thresholds(2, 5, 20);
    CHECK(u == std::vector<std::uint64_t>{2, 3, 4, 5});
    auto d = default_thresholds(50000);
    CHECK(d.front() == 500);
    CHECK(d.back() == 50000);
    CHECK(d.size() == kDefaultPoints);
}

TEST_CASE("exact power law")
{
    CountingSeries s;
    s.thresholds = geometric_thresholds(100, 1000000, 25);
    for (auto n : s.thresholds) {
        s.counts.push_back(std::floor(std::pow(static_cast<double>(n), 1.2)));
    }
    const DimensionEstimate e = estimate_dimension(s);
    CHECK(e.delta == doctest::Approx(0.6).epsilon(0.001));
    CHECK(e.r_squared > 0.9999);
    CHECK(e.points_used == 20);
    CHECK(std::string(e.note) == "non-rigorous estimate");
}

TEST_CASE("planted exponents are recovered")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (double d0 : {0.3, 0.5, 0.75, 0.9}) {
            const DimensionEstimate e = estimate_dimension(planted(d0, 0.02, seed));
            REQUIRE(e.stderr_delta > 0);
            REQUIRE(std::abs(e.delta - d0) < 5 * e.stderr_delta);
            REQUIRE(std::abs(e.delta - d0) < 0.01);
        }
    }
}

TEST_CASE("invalid series are rejected")
{
    CountingSeries s{{10, 100}, {3, 30}};
    CHECK_THROWS_AS(estimate_dimension(s), DomainError);
    CountingSeries flat{{10, 100, 1000, 10000}, {7, 7, 7, 7}};
    CHECK_THROWS_AS(estimate_dimension(flat, 0), DomainError);
    CountingSeries mismatch{{10, 100, 1000}, {1, 2}};
    CHECK_THROWS_AS(estimate_dimension(mismatch), DomainError);
    CountingSeries zero{{10, 100, 1000}, {0, 2, 4}};
    CHECK_THROWS_AS(estimate_dimension(zero), DomainError);
    CountingSeries unsorted{{10, 1000, 100}, {1, 2, 4}};
    CHECK_THROWS_AS(estimate_dimension(unsorted), DomainError);
    CHECK_THROWS_AS(estimate_dimension(planted(0.5, 0, 1), 1.0), DomainError);
    CHECK_THROWS_AS(estimate_dimension(planted(0.5, 0, 1), -0.1), DomainError);
    // a large drop still keeps three points
    CHECK(estimate_dimension(planted(0.5, 0, 1), 0.99).points_used == 3);
}

TEST_CASE("orbit counts")
{
    auto c = orbit_count(GeneratorSet::psi2(), {0, 1}, {21});
    CHECK(c.counts == std::vector<double>{7});
    auto t = default_thresholds(20000);
    auto s = orbit_count(GeneratorSet::psi1(), {1, 1}, t);
    CHECK(s.thresholds == t);
    CHECK(std::is_sorted(s.counts.begin(), s.counts.end()));
    ExecPolicy two;
    two.threads = 2;
    CHECK(orbit_count(GeneratorSet::psi1(), {1, 1}, t, two).counts == s.counts);
}

TEST_CASE("a smaller generating set gives a smaller exponent")
{
    const auto t = default_thresholds(30000);
    const double d1 = estimate_dimension(orbit_count(GeneratorSet::psi1(), {1, 1}, t)).delta;
    const double d2 = estimate_dimension(orbit_count(GeneratorSet::psi2(), {0, 1}, t)).delta;
    CHECK(d2 <= d1 + 0.05);
    CHECK(d1 > 0.6);
    CHECK(d1 < 0.8);
    CHECK(d2 > 0.5);
    CHECK(d2 < 0.7);
}
