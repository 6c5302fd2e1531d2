#pragma once

#include <cstdint>

#include "semiorbit/bigint.hpp"

namespace semiorbit {

class Mat2;
class Vec2;

struct Symbol {
    int value = 0;

    constexpr Symbol() = default;
    constexpr explicit Symbol(int v) : value(v) {}

    constexpr Symbol operator*(Symbol o) const { return Symbol(value * o.value); }
    constexpr Symbol operator-() const { return Symbol(-value); }
    constexpr bool operator==(const Symbol&) const = default;
    constexpr bool operator==(int v) const { return value == v; }
};

struct OddSplit {
    BigInt odd;
    unsigned long exp2 = 0;
};

// Raised by mobius_symbol when gcd(x, d) != 1.
class CoprimalityError : public DomainError {
public:
    using DomainError::DomainError;
};

// Jacobi symbol (a|n) for odd n >= 1.
int jacobi_u64(std::uint64_t a, std::uint64_t n);
int jacobi_u128(u128 a, u128 n);

// Kronecker symbol for nonnegative arguments.
int kronecker_u64(std::uint64_t x, std::uint64_t y);
// (x|2), which depends only on x mod 8.
inline int kron2(std::uint64_t x)
{
    switch (x & 7u) {
    case 1:
    case 7: return 1;
    case 3:
    case 5: return -1;
    default: return 0;
    }
}

Symbol kronecker(std::int64_t x, std::int64_t y);
Symbol kronecker(const BigInt& x, const BigInt& y);

OddSplit odd_split(const BigInt& n);

// (ax+by | cx+dy) evaluated from (c|d) and (x|y) through the transformation law.
Symbol mobius_symbol(const Mat2& m, const Vec2& v);

// Specialization to M in Gamma1(4); requires y != 2 mod 4 or b = 0 mod 4.
Symbol gamma14_symbol(const Mat2& m, const Vec2& v);

} // namespace semiorbit
