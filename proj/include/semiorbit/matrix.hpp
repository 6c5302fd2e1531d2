#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>

#include "semiorbit/bigint.hpp"

namespace semiorbit {

// Element of SL(2,Z) with nonnegative entries.
class Mat2 {
public:
    Mat2() : a_(1), b_(0), c_(0), d_(1) {}
    // Throws DomainError on a negative entry or determinant != 1.
    Mat2(BigInt a, BigInt b, BigInt c, BigInt d);
    Mat2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    static Mat2 identity() { return Mat2(); }
    static Mat2 L(const BigInt& e = 1);
    static Mat2 R(const BigInt& e = 1);

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& c() const { return c_; }
    const BigInt& d() const { return d_; }

    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }
    bool in_gamma1_4() const;

    Mat2 operator*(const Mat2& o) const;
    bool operator==(const Mat2& o) const;

    std::string str() const;

private:
    struct Unchecked {};
    Mat2(Unchecked, BigInt a, BigInt b, BigInt c, BigInt d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    BigInt a_, b_, c_, d_;
};

// Coprime pair of nonnegative integers, read as the fraction x/y.
class Vec2 {
public:
    Vec2() : x_(1), y_(0) {}
    // Throws DomainError when negative or gcd(x, y) != 1.
    Vec2(BigInt x, BigInt y);
    Vec2(std::int64_t x, std::int64_t y);

    const BigInt& x() const { return x_; }
    const BigInt& y() const { return y_; }

    bool operator==(const Vec2& o) const { return x_ == o.x_ && y_ == o.y_; }
    std::string str() const;

private:
    BigInt x_, y_;
};

Vec2 operator*(const Mat2& m, const Vec2& v);

// Parses "x/y".
Vec2 parse_fraction(const std::string& text);

std::ostream& operator<<(std::ostream& os, const Mat2& m);
std::ostream& operator<<(std::ostream& os, const Vec2& v);

// Unrestricted element of SL(2,Z); used where inverse generators leave the cone.
struct GroupMat {
    BigInt a{1}, b{0}, c{0}, d{1};

    static GroupMat L(std::int64_t e);
    static GroupMat R(std::int64_t e);
    GroupMat operator*(const GroupMat& o) const;
    bool nonnegative() const { return a >= 0 && b >= 0 && c >= 0 && d >= 0; }
};

// Small integer matrix for residue arithmetic.
struct IMat2 {
    std::array<std::int64_t, 4> e{1, 0, 0, 1};

    IMat2 mul_mod(const IMat2& o, std::int64_t m) const;
};

} // namespace semiorbit
