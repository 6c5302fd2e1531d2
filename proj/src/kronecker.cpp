#include "semiorbit/kronecker.hpp"

#include <utility>

#include "semiorbit/matrix.hpp"

namespace semiorbit {

namespace {

template <class U>
int jacobi_binary(U a, U n)
{
    a %= n;
    int t = 1;
    while (a != 0) {
        unsigned z = ctz(a);
        a >>= z;
        unsigned r8 = static_cast<unsigned>(n & 7u);
        if ((z & 1u) && (r8 == 3 || r8 == 5)) {
            t = -t;
        }
        if (a < n) {
            std::swap(a, n);
            if ((a & 3u) == 3 && (n & 3u) == 3) {
                t = -t;
            }
        }
        a -= n;
    }
    return n == 1 ? t : 0;
}

unsigned mod8(const BigInt& x) { return static_cast<unsigned>(mpz_fdiv_ui(x.get_mpz_t(), 8)); }

// Jacobi symbol (a|n), n odd positive, 0 <= a.
int jacobi_big(BigInt a, BigInt n)
{
    int t = 1;
    a %= n;
    while (!fits_u128(n)) {
        if (a == 0) {
            return n == 1 ? t : 0;
        }
        unsigned long z = mpz_scan1(a.get_mpz_t(), 0);
        a >>= z;
        unsigned r8 = mod8(n);
        if ((z & 1u) && (r8 == 3 || r8 == 5)) {
            t = -t;
        }
        if ((mod8(a) & 3u) == 3 && (r8 & 3u) == 3) {
            t = -t;
        }
        BigInt r = n % a;
        n = std::move(a);
        a = std::move(r);
    }
    return t * jacobi_binary<u128>(to_u128(a), to_u128(n));
}

int half_odd_parity(const BigInt& odd) { return (mod8(odd) >> 1) & 1u; }

// (o(n) - 1)/2 mod 2, with the odd part of 0 taken to be 1.
int half_odd_part(const BigInt& n)
{
    if (n == 0) {
        return 0;
    }
    return half_odd_parity(odd_split(n).odd);
}

bool exactly_two(const BigInt& n) { return n != 0 && mod8(n) % 4 == 2; }

} // namespace

int jacobi_u64(std::uint64_t a, std::uint64_t n) { return jacobi_binary<std::uint64_t>(a, n); }

int jacobi_u128(u128 a, u128 n) { return jacobi_binary<u128>(a, n); }

int kronecker_u64(std::uint64_t x, std::uint64_t y)
{
    if (y == 0) {
        return x == 1 ? 1 : 0;
    }
    unsigned v = ctz(y);
    if (v > 0 && (x & 1u) == 0) {
        return 0;
    }
    y >>= v;
    int t = (v & 1u) ? kron2(x) : 1;
    return y == 1 ? t : t * jacobi_binary<std::uint64_t>(x, y);
}

Symbol kronecker(std::int64_t x, std::int64_t y)
{
    if (x >= 0 && y >= 0) {
        return Symbol(kronecker_u64(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)));
    }
    return kronecker(from_i64(x), from_i64(y));
}

Symbol kronecker(const BigInt& x, const BigInt& y)
{
    if (y == 0) {
        return Symbol(abs(x) == 1 ? 1 : 0);
    }
    int t = 1;
    BigInt n = y;
    if (n < 0) {
        n = -n;
        if (x < 0) {
            t = -t;
        }
    }
    unsigned long v = mpz_scan1(n.get_mpz_t(), 0);
    if (v > 0) {
        if (!is_odd(x)) {
            return Symbol(0);
        }
        n >>= v;
        if (v & 1u) {
            t *= kron2(mod8(x));
        }
    }
    if (n == 1) {
        return Symbol(t);
    }
    BigInt a;
    mpz_fdiv_r(a.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    if (fits_u64(n)) {
        return Symbol(t * jacobi_u64(to_u64(a), to_u64(n)));
    }
    return Symbol(t * jacobi_big(std::move(a), std::move(n)));
}

OddSplit odd_split(const BigInt& n)
{
    if (n <= 0) {
        throw DomainError("odd_split requires a positive integer, got " + to_string(n));
    }
    OddSplit s;
    s.exp2 = mpz_scan1(n.get_mpz_t(), 0);
    s.odd = n >> s.exp2;
    return s;
}

Symbol mobius_symbol(const Mat2& m, const Vec2& v)
{
    const BigInt& x = v.x();
    const BigInt& y = v.y();
    if (gcd(x, m.d()) != 1) {
        throw CoprimalityError("mobius_symbol requires gcd(x, d) = 1");
    }
    BigInt den = m.c() * x + m.d() * y;
    int A = half_odd_part(x);
    int B = half_odd_part(m.d());
    int C = half_odd_part(den);
    int D = half_odd_part(y);
    int alpha = (A * B + A * C + B * C + A * D) & 1;

    int mu1 = 1;
    if (exactly_two(m.d()) || exactly_two(x)) {
        BigInt t = m.c() * m.d() * x * y + 1;
        mu1 = kron2(mod8(t));
    }
    int mu2 = 1;
    if (exactly_two(den)) {
        BigInt t = m.b() * x * den + 1;
        mu2 = kron2(mod8(t));
    }
    Symbol s = kronecker(m.c(), m.d()) * kronecker(x, y);
    return Symbol((alpha ? -1 : 1) * mu1 * mu2) * s;
}

Symbol gamma14_symbol(const Mat2& m, const Vec2& v)
{
    if (!m.in_gamma1_4()) {
        throw DomainError("gamma14_symbol requires a matrix in Gamma1(4): " + m.str());
    }
    if (mod8(v.y()) % 4 == 2 && mod8(m.b()) % 4 != 0) {
        throw DomainError("gamma14_symbol excludes y = 2 mod 4 unless b = 0 mod 4");
    }
    const BigInt& x = v.x();
    const BigInt& y = v.y();
    BigInt den = m.c() * x + m.d() * y;
    int A = half_odd_part(x);
    int alpha = (A * (half_odd_part(y) + half_odd_part(den))) & 1;
    Symbol s = kronecker(m.c(), m.d()) * kronecker(x, y);
    return alpha ? -s : s;
}

} // namespace semiorbit
