#include <doctest.h>

#include "gen.hpp"
#include "oracles.hpp"
#include "semiorbit/kronecker.hpp"
#include "semiorbit/matrix.hpp"

using namespace semiorbit;

namespace {

int gmp_kronecker(const BigInt& x, const BigInt& y) { return mpz_kronecker(x.get_mpz_t(), y.get_mpz_t()); }

BigInt random_big(gen::Gen& g, int limbs)
{
    BigInt r = 0;
    for (int i = 0; i < limbs; ++i) {
        r = (r << 64) + from_u64(g.range(0, UINT64_MAX));
    }
    return r;
}

Symbol direct(const Mat2& m, const Vec2& v)
{
    return kronecker(m.a() * v.x() + m.b() * v.y(), m.c() * v.x() + m.d() * v.y());
}

Mat2 random_gamma14(gen::Gen& g)
{
    for (;;) {
        Mat2 m = g.mat(8, 6);
        if (m.in_gamma1_4()) {
            return m;
        }
    }
}

} // namespace

TEST_CASE("kronecker examples")
{
    CHECK(kronecker(1, 1) == 1);
    CHECK(kronecker(3, 5) == -1);
    CHECK(kronecker(4, 6) == 0);
    CHECK(kronecker(3, 8) == -1);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(-1, 0) == 1);
    CHECK(kronecker(2, 0) == 0);
    CHECK(kronecker(0, 1) == 1);
    CHECK(kronecker(5, -1) == 1);
    CHECK(kronecker(-5, -1) == -1);
}

TEST_CASE("kronecker agrees with the factorization oracle on small arguments")
{
    for (std::int64_t x = -200; x <= 200; ++x) {
        for (std::int64_t y = -200; y <= 200; ++y) {
            const int expect = oracle::kronecker(x, y);
            REQUIRE_MESSAGE(kronecker(x, y).value == expect, x << " " << y);
            REQUIRE(kronecker(from_i64(x), from_i64(y)).value == expect);
            if (x >= 0 && y >= 0) {
                REQUIRE(kronecker_u64(x, y) == expect);
            }
        }
    }
}

TEST_CASE("kronecker on 64-bit and multi-limb arguments matches GMP")
{
    gen::Gen g(101);
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t x = g.range(0, UINT64_MAX), y = g.range(0, UINT64_MAX);
        REQUIRE(kronecker_u64(x, y) == gmp_kronecker(from_u64(x), from_u64(y)));
        if (y % 2 == 1) {
            REQUIRE(jacobi_u64(x, y) == gmp_kronecker(from_u64(x), from_u64(y)));
        }
    }
    for (int i = 0; i < 5000; ++i) {
        BigInt x = random_big(g, 1 + i % 4), y = random_big(g, 1 + (i / 4) % 4);
        if (i % 3 == 0) {
            x = -x;
        }
        if (i % 5 == 0) {
            y = -y;
        }
        if (i % 7 == 0) {
            y <<= 13;
        }
        REQUIRE(kronecker(x, y).value == gmp_kronecker(x, y));
    }
    for (std::uint64_t x : {UINT64_MAX, UINT64_MAX - 1, std::uint64_t{1} << 63, (std::uint64_t{1} << 63) + 1}) {
        for (std::uint64_t y : {UINT64_MAX, UINT64_MAX - 2, std::uint64_t{1} << 63, std::uint64_t{3}}) {
            CHECK(kronecker_u64(x, y) == gmp_kronecker(from_u64(x), from_u64(y)));
        }
    }
}

TEST_CASE("jacobi_u128 matches GMP")
{
    gen::Gen g(7);
    for (int i = 0; i < 5000; ++i) {
        const u128 a = (static_cast<u128>(g.range(0, UINT64_MAX)) << 64) | g.range(0, UINT64_MAX);
        const u128 n = (static_cast<u128>(g.range(0, UINT64_MAX)) << 64) | g.range(0, UINT64_MAX) | 1;
        REQUIRE(jacobi_u128(a, n) == gmp_kronecker(from_u128(a), from_u128(n)));
    }
}

TEST_CASE("odd_split")
{
    auto s = odd_split(1);
    CHECK(s.odd == 1);
    CHECK(s.exp2 == 0);
    s = odd_split(48);
    CHECK(s.odd == 3);
    CHECK(s.exp2 == 4);
    s = odd_split(10569);
    CHECK(s.odd == 10569);
    CHECK(s.exp2 == 0);
    CHECK_THROWS_AS(odd_split(0), DomainError);
    CHECK_THROWS_AS(odd_split(-4), DomainError);
    gen::Gen g(3);
    for (int i = 0; i < 1000; ++i) {
        BigInt n = random_big(g, 2) + 1;
        auto p = odd_split(n);
        REQUIRE(is_odd(p.odd));
        REQUIRE((p.odd << p.exp2) == n);
    }
}

TEST_CASE("quadratic reciprocity and periodicity")
{
    gen::Gen g(11);
    for (int i = 0; i < 20000; ++i) {
        const std::int64_t m = 2 * g.srange(0, 500000) + 1, n = 2 * g.srange(0, 500000) + 1;
        if (std::gcd(m, n) != 1) {
            continue;
        }
        const int sign = ((m - 1) / 2) % 2 == 1 && ((n - 1) / 2) % 2 == 1 ? -1 : 1;
        REQUIRE((kronecker(m, n) * kronecker(n, m)).value == sign);
    }
    for (int i = 0; i < 20000; ++i) {
        const std::int64_t x = g.srange(-1000000, 1000000), y = g.srange(1, 1000000);
        REQUIRE(kronecker(x + 4 * y, y) == kronecker(x, y));
        if (y % 4 != 2) {
            REQUIRE(kronecker(x + y, y) == kronecker(x, y));
        }
    }
}

TEST_CASE("shift of the denominator by multiples of 4x")
{
    gen::Gen g(13);
    int used = 0;
    for (int i = 0; i < 40000; ++i) {
        const std::int64_t x = g.srange(1, 100000), y = g.srange(1, 100000), k = g.srange(0, 64);
        if (std::gcd(x, y) != 1) {
            continue;
        }
        const bool cond = x % 4 != 3 || k == 0 || __builtin_ctzll(k) >= __builtin_ctzll(y);
        if (!cond) {
            continue;
        }
        ++used;
        REQUIRE(kronecker(x, y) == kronecker(x, y + 4 * k * x));
    }
    CHECK(used > 10000);
}

TEST_CASE("rows and columns of Gamma1(4) matrices share one symbol")
{
    gen::Gen g(17);
    for (int i = 0; i < 3000; ++i) {
        Mat2 m = random_gamma14(g);
        const Symbol ab = kronecker(m.a(), m.b());
        REQUIRE(ab == kronecker(m.c(), m.d()));
        REQUIRE(ab == kronecker(m.a(), m.c()));
        REQUIRE(ab == kronecker(m.b(), m.d()));
    }
}

TEST_CASE("mobius_symbol examples and errors")
{
    CHECK(mobius_symbol(Mat2::identity(), Vec2(3, 5)) == -1);
    CHECK(mobius_symbol(Mat2(1, 1, 0, 1), Vec2(2, 3)) == kronecker(5, 3));
    CHECK(mobius_symbol(Mat2(1, 1, 0, 1), Vec2(2, 3)) == -1);
    CHECK(mobius_symbol(Mat2(5, 2, 2, 1), Vec2(0, 1)) == kronecker(2, 1));
    // gcd(x, d) = 3 hits the dedicated error type
    CHECK_THROWS_AS(mobius_symbol(Mat2(1, 2, 1, 3), Vec2(3, 5)), CoprimalityError);
}

TEST_CASE("mobius_symbol matches direct evaluation")
{
    gen::Gen g(19);
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
        Mat2 m = g.mat(10, 12);
        auto [x, y] = g.coprime(0, 2000000);
        Vec2 v(from_u64(x), from_u64(y));
        if (gcd(v.x(), m.d()) != 1) {
            CHECK_THROWS_AS(mobius_symbol(m, v), CoprimalityError);
            continue;
        }
        ++checked;
        REQUIRE_MESSAGE(mobius_symbol(m, v) == direct(m, v), m.str() << " " << v.str());
    }
    CHECK(checked > 5000);
    // exhaustive for small entries
    for (std::int64_t c = 0; c <= 20; ++c) {
        for (std::int64_t d = 1; d <= 20; ++d) {
            for (std::int64_t b = 0; b <= 20; ++b) {
                if ((1 + b * c) % d != 0) {
                    continue;
                }
                Mat2 m((1 + b * c) / d, b, c, d);
                for (std::int64_t x = 0; x <= 20; ++x) {
                    for (std::int64_t y = 0; y <= 20; ++y) {
                        if (std::gcd(x, y) != 1 || std::gcd(x, d) != 1) {
                            continue;
                        }
                        REQUIRE(mobius_symbol(m, Vec2(x, y)) == direct(m, Vec2(x, y)));
                    }
                }
            }
        }
    }
}

TEST_CASE("gamma14_symbol examples and errors")
{
    CHECK(gamma14_symbol(Mat2::identity(), Vec2(2, 3)) == -1);
    CHECK(gamma14_symbol(Mat2(1, 0, 4, 1), Vec2(2, 3)) == kronecker(2, 11));
    CHECK(gamma14_symbol(Mat2(1, 0, 4, 1), Vec2(2, 3)) == -1);
    CHECK_THROWS_AS(gamma14_symbol(Mat2(1, 0, 1, 1), Vec2(2, 3)), DomainError);
    CHECK_THROWS_AS(gamma14_symbol(Mat2(2, 1, 1, 1), Vec2(2, 3)), DomainError);
    // y = 2 mod 4 with b not divisible by 4
    CHECK_THROWS_AS(gamma14_symbol(Mat2(1, 1, 0, 1), Vec2(1, 2)), DomainError);
    CHECK_NOTHROW(gamma14_symbol(Mat2(1, 4, 0, 1), Vec2(1, 2)));
}

TEST_CASE("gamma14_symbol matches direct evaluation and preserves symbols on Psi")
{
    gen::Gen g(23);
    for (int i = 0; i < 5000; ++i) {
        Mat2 m = random_gamma14(g);
        auto [x, y] = g.coprime(0, 1000000);
        Vec2 v(from_u64(x), from_u64(y));
        const bool excluded = y % 4 == 2 && m.b() % 4 != 0;
        if (excluded) {
            CHECK_THROWS_AS(gamma14_symbol(m, v), DomainError);
            continue;
        }
        const Symbol s = gamma14_symbol(m, v);
        REQUIRE(s == direct(m, v));
        if (y % 2 == 1 || (x % 4 == 1 && y % 4 == 0)) {
            REQUIRE(s == kronecker(m.a(), m.b()) * kronecker(v.x(), v.y()));
        }
    }
    for (int i = 0; i < 2000; ++i) {
        Mat2 m = g.psi(10, 9);
        auto [x, y] = g.coprime(0, 1000000);
        if (y % 2 == 0) {
            continue;
        }
        Vec2 v(from_u64(x), from_u64(y));
        REQUIRE(gamma14_symbol(m, v) == kronecker(v.x(), v.y()));
    }
}
