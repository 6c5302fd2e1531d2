#include <doctest.h>

#include "gen.hpp"
#include "semiorbit/kronecker.hpp"
#include "semiorbit/words.hpp"

using namespace semiorbit;

namespace {

LRWord make(std::initializer_list<std::pair<Letter, int>> runs)
{
    LRWord w;
    for (auto [l, e] : runs) {
        w.push(l, e);
    }
    return w;
}

ContinuedFraction cf(long a0, std::initializer_list<long> coeffs)
{
    ContinuedFraction c;
    c.a0 = a0;
    for (long a : coeffs) {
        c.coeffs.emplace_back(a);
    }
    return c;
}

} // namespace

TEST_CASE("Mat2 and Vec2 validation")
{
    CHECK_THROWS_AS(Mat2(1, 1, 1, 1), DomainError);
    CHECK_THROWS_AS(Mat2(-1, 0, 0, -1), DomainError);
    CHECK_THROWS_AS(Vec2(2, 4), DomainError);
    CHECK_THROWS_AS(Vec2(-1, 1), DomainError);
    CHECK_NOTHROW(Vec2(1, 0));
    CHECK_NOTHROW(Vec2(0, 1));
    CHECK(parse_fraction("3/8") == Vec2(3, 8));
    CHECK_THROWS(parse_fraction("3/"));
    CHECK_THROWS(parse_fraction("6/8"));
}

TEST_CASE("word_to_matrix")
{
    CHECK(word_to_matrix(LRWord{}) == Mat2::identity());
    CHECK(word_to_matrix(make({{Letter::R, 1}, {Letter::L, 4}, {Letter::R, 3}})) == Mat2(13, 4, 16, 5));
    CHECK(word_to_matrix(make({{Letter::L, 1}, {Letter::R, 1}})) == Mat2(2, 1, 1, 1));
}

TEST_CASE("LRWord merges runs")
{
    LRWord w = make({{Letter::L, 2}, {Letter::L, 3}, {Letter::R, 0}, {Letter::R, 1}});
    REQUIRE(w.runs().size() == 2);
    CHECK(w.runs()[0].exp == 5);
    CHECK(w.str() == "L^5 R^1");
    CHECK(w.length() == 6);
    CHECK(LRWord{}.str() == "1");
}

TEST_CASE("matrix_to_word")
{
    CHECK(matrix_to_word(Mat2::identity()).empty());
    CHECK(matrix_to_word(Mat2(13, 4, 16, 5)) == make({{Letter::R, 1}, {Letter::L, 4}, {Letter::R, 3}}));
    CHECK(matrix_to_word(Mat2(13, 4, 16, 5)).str() == "R^1 L^4 R^3");
    // a huge exponent factors in one step
    BigInt e = BigInt(1) << 200;
    CHECK(matrix_to_word(Mat2::L(e)).runs().front().exp == e);
}

TEST_CASE("word and matrix round trips")
{
    gen::Gen g(29);
    for (int i = 0; i < 10000; ++i) {
        LRWord w = g.word(12, 50);
        Mat2 m = word_to_matrix(w);
        REQUIRE(matrix_to_word(m) == w);
        REQUIRE(word_to_matrix(matrix_to_word(m)) == m);
    }
}

TEST_CASE("even_cf and cf_eval")
{
    CHECK(even_cf(Vec2(3, 5)) == cf(0, {1, 1, 2}));
    CHECK(even_cf(Vec2(1, 1)) == cf(0, {1}));
    CHECK(even_cf(Vec2(3, 5)).str() == "[0; 1, 1, 2]");
    CHECK(cf_eval(cf(0, {1, 1, 2})) == Vec2(3, 5));
    CHECK(cf_eval(cf(5, {})) == Vec2(5, 1));
    for (long k = 1; k <= 10; ++k) {
        CHECK(cf_eval(cf(0, {k, 1, 2})) == Vec2(3, 3 * k + 2));
    }
    CHECK_THROWS_AS(even_cf(Vec2(1, 0)), DomainError);

    gen::Gen g(31);
    for (int i = 0; i < 10000; ++i) {
        auto [x, y] = g.coprime(1, 1000000000);
        Vec2 v(from_u64(x), from_u64(y));
        ContinuedFraction c = even_cf(v);
        REQUIRE(c.coeffs.size() % 2 == 1);
        for (const auto& a : c.coeffs) {
            REQUIRE(a >= 1);
        }
        REQUIRE(cf_eval(c) == v);
        if (x < y) {
            REQUIRE(c.a0 == 0);
        }
    }
}

TEST_CASE("vec_to_word")
{
    CHECK(vec_to_word(Vec2(1, 0)).empty());
    CHECK(vec_to_word(Vec2(3, 5)) == make({{Letter::R, 1}, {Letter::L, 1}, {Letter::R, 2}}));
    gen::Gen g(37);
    for (int i = 0; i < 5000; ++i) {
        auto [x, y] = g.coprime(1, 1000000);
        Vec2 v(from_u64(x), from_u64(y));
        LRWord w = vec_to_word(v);
        REQUIRE(!w.empty());
        REQUIRE(w.runs().back().letter == Letter::R);
        REQUIRE(word_to_matrix(w) * Vec2(1, 0) == v);
    }
}

TEST_CASE("psi_member")
{
    CHECK(psi_member(Mat2::identity()));
    CHECK(psi_member(Mat2(13, 4, 16, 5)));
    CHECK(psi_member(Mat2::L(1)));
    CHECK_FALSE(psi_member(Mat2::R(1)));
    CHECK(psi_member(Mat2::R(4)));
    // in Gamma1(4) with (a|b) = -1: (5, 2; 12, 5) has (5|2) = -1
    CHECK(Mat2(5, 2, 12, 5).in_gamma1_4());
    CHECK_FALSE(psi_member(Mat2(5, 2, 12, 5)));

    gen::Gen g(41);
    for (int i = 0; i < 2000; ++i) {
        Mat2 a = g.psi(8, 6), b = g.psi(8, 6);
        REQUIRE(psi_member(a * b));
    }
}

TEST_CASE("is_initial_subword")
{
    const Mat2 L = Mat2::L(), R = Mat2::R();
    CHECK(is_initial_subword(Mat2(13, 4, 16, 5), Mat2(13, 4, 16, 5)));
    CHECK(is_initial_subword(L, L * R));
    CHECK_FALSE(is_initial_subword(R, L));

    gen::Gen g(43);
    for (int i = 0; i < 3000; ++i) {
        LRWord w1 = g.word(5, 4), w2 = g.word(5, 4);
        const Mat2 m1 = word_to_matrix(w1), m12 = m1 * word_to_matrix(w2);
        REQUIRE(is_initial_subword(m1, m12));
        const Mat2 other = word_to_matrix(g.word(6, 4));
        // prefix relation on the factored words
        const auto& r1 = w1.runs();
        const LRWord w2o = matrix_to_word(other);
        const auto& r2 = w2o.runs();
        bool prefix = r1.size() <= r2.size();
        for (std::size_t k = 0; prefix && k < r1.size(); ++k) {
            const bool last = k + 1 == r1.size();
            prefix = r1[k].letter == r2[k].letter && (last ? r1[k].exp <= r2[k].exp : r1[k].exp == r2[k].exp);
        }
        REQUIRE_MESSAGE(is_initial_subword(m1, other) == prefix, w1.str() << " vs " << w2o.str());
    }
}

TEST_CASE("concat_even_cf")
{
    CHECK(concat_even_cf(cf(0, {1}), cf(0, {1})) == cf(0, {2}));
    CHECK(concat_even_cf(cf(0, {1, 1, 2}), cf(0, {1, 1, 2})) == cf(0, {1, 1, 3, 1, 2}));
    CHECK_THROWS_AS(concat_even_cf(cf(0, {1, 1}), cf(0, {1})), DomainError);
    CHECK_THROWS_AS(concat_even_cf(cf(1, {1}), cf(0, {1})), DomainError);

    gen::Gen g(47);
    for (int i = 0; i < 5000; ++i) {
        auto [s1, t1] = g.coprime(1, 100000);
        auto [s2, t2] = g.coprime(1, 100000);
        if (s1 >= t1 || s2 >= t2) {
            continue;
        }
        const Vec2 v1(from_u64(s1), from_u64(t1)), v2(from_u64(s2), from_u64(t2));
        const ContinuedFraction c = concat_even_cf(even_cf(v1), even_cf(v2));
        // the merged expansion is the first column of the product of the two words
        const Mat2 prod = word_to_matrix(vec_to_word(v1)) * word_to_matrix(vec_to_word(v2));
        REQUIRE(c == even_cf(Vec2(prod.a(), prod.c())));
    }
    // closure of {s/t : (s, t) = (1, 0) mod 4, (s|t) = 1}
    auto sample = [&g] {
        for (;;) {
            const std::uint64_t s = 4 * g.range(0, 25000) + 1, t = 4 * g.range(1, 25000);
            if (s < t && std::gcd(s, t) == 1 && kronecker(from_u64(s), from_u64(t)) == 1) {
                return Vec2(from_u64(s), from_u64(t));
            }
        }
    };
    for (int i = 0; i < 2000; ++i) {
        const Vec2 out = cf_eval(concat_even_cf(even_cf(sample()), even_cf(sample())));
        REQUIRE(out.x() % 4 == 1);
        REQUIRE(out.y() % 4 == 0);
        REQUIRE(kronecker(out.x(), out.y()) == 1);
    }
}
