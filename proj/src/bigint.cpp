#include "semiorbit/bigint.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

namespace semiorbit {

BigInt parse_bigint(std::string_view text)
{
    std::string s(text);
    if (s.empty()) {
        throw std::invalid_argument("empty integer");
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        throw std::invalid_argument("malformed integer: " + s);
    }
    for (std::size_t j = i; j < s.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
            throw std::invalid_argument("malformed integer: " + s);
        }
    }
    if (s[0] == '+') {
        s.erase(0, 1);
    }
    return BigInt(s, 10);
}

std::string to_string(const BigInt& n) { return n.get_str(10); }

bool fits_u64(const BigInt& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

bool fits_u128(const BigInt& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 128; }

std::uint64_t to_u64(const BigInt& n)
{
    if (!fits_u64(n)) {
        throw std::overflow_error("integer does not fit in 64 bits: " + to_string(n));
    }
    static_assert(sizeof(unsigned long) == 8);
    return mpz_get_ui(n.get_mpz_t());
}

u128 to_u128(const BigInt& n)
{
    if (!fits_u128(n)) {
        throw std::overflow_error("integer does not fit in 128 bits: " + to_string(n));
    }
    BigInt hi = n >> 64;
    BigInt lo = n - (hi << 64);
    return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
}

BigInt from_u128(u128 v)
{
    BigInt hi = from_u64(static_cast<std::uint64_t>(v >> 64));
    return (hi << 64) + from_u64(static_cast<std::uint64_t>(v));
}

unsigned long valuation2(const BigInt& n)
{
    if (sgn(n) == 0) {
        throw DomainError("2-adic valuation of zero");
    }
    return mpz_scan1(n.get_mpz_t(), 0);
}

BigInt gcd(const BigInt& a, const BigInt& b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (r > n / r)) {
        --r;
    }
    while ((r + 1) <= n / (r + 1)) {
        ++r;
    }
    return r;
}

bool is_square(std::uint64_t n)
{
    std::uint64_t r = isqrt(n);
    return r * r == n;
}

bool is_square(const BigInt& n) { return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("64-bit addition overflow");
    }
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("64-bit multiplication overflow");
    }
    return r;
}

std::uint64_t parse_count(std::string_view text)
{
    std::string s(text);
    if (s.empty()) {
        throw std::invalid_argument("empty count");
    }
    bool plain = true;
    for (char ch : s) {
        plain = plain && std::isdigit(static_cast<unsigned char>(ch));
    }
    if (plain) {
        return to_u64(BigInt(s, 10));
    }
    // Scientific notation is evaluated exactly: mantissa digits times a power of ten.
    auto epos = s.find_first_of("eE");
    if (epos == std::string::npos) {
        throw std::invalid_argument("malformed count: " + s);
    }
    std::string mant = s.substr(0, epos);
    std::string expo = s.substr(epos + 1);
    if (mant.empty() || expo.empty()) {
        throw std::invalid_argument("malformed count: " + s);
    }
    long e = 0;
    try {
        std::size_t used = 0;
        e = std::stol(expo, &used);
        if (used != expo.size()) {
            throw std::invalid_argument("exponent");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed count: " + s);
    }
    std::string digits;
    long frac = 0;
    bool seen_dot = false;
    for (char ch : mant) {
        if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            frac += seen_dot ? 1 : 0;
        } else {
            throw std::invalid_argument("malformed count: " + s);
        }
    }
    if (digits.empty()) {
        throw std::invalid_argument("malformed count: " + s);
    }
    long shift = e - frac;
    if (shift > 40 || shift < -40) {
        throw std::invalid_argument("count out of range: " + s);
    }
    BigInt m(digits, 10);
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0) {
        m *= p;
    } else {
        if (m % p != 0) {
            throw std::invalid_argument("count is not an integer: " + s);
        }
        m /= p;
    }
    return to_u64(m);
}

} // namespace semiorbit
