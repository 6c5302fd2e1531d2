#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace semiorbit {

using BigInt = mpz_class;
using u128 = unsigned __int128;

// Input that violates a mathematical precondition of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

BigInt parse_bigint(std::string_view text);
std::string to_string(const BigInt& n);

inline BigInt from_u64(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }
inline BigInt from_i64(std::int64_t v) { return BigInt(static_cast<long>(v)); }

bool fits_u64(const BigInt& n);
bool fits_u128(const BigInt& n);
// Throws std::overflow_error when n is negative or needs more than 64 bits.
std::uint64_t to_u64(const BigInt& n);
u128 to_u128(const BigInt& n);
BigInt from_u128(u128 v);

inline bool is_odd(const BigInt& n) { return mpz_odd_p(n.get_mpz_t()) != 0; }
inline int sign(const BigInt& n) { return sgn(n); }
// 2-adic valuation; n must be nonzero.
unsigned long valuation2(const BigInt& n);
BigInt gcd(const BigInt& a, const BigInt& b);

std::uint64_t isqrt(std::uint64_t n);
bool is_square(std::uint64_t n);
bool is_square(const BigInt& n);

inline unsigned ctz(std::uint64_t v) { return static_cast<unsigned>(__builtin_ctzll(v)); }
inline unsigned ctz(u128 v)
{
    auto lo = static_cast<std::uint64_t>(v);
    return lo != 0 ? ctz(lo) : 64 + ctz(static_cast<std::uint64_t>(v >> 64));
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Checked 64-bit arithmetic; throws std::overflow_error.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

// Parses "123", "1e6" or "1.0912e8"; the value must be a nonnegative integer.
std::uint64_t parse_count(std::string_view text);

} // namespace semiorbit
