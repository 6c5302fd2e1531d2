#include "semiorbit/matrix.hpp"

#include <sstream>

namespace semiorbit {

Mat2::Mat2(BigInt a, BigInt b, BigInt c, BigInt d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
{
    if (a_ < 0 || b_ < 0 || c_ < 0 || d_ < 0) {
        throw DomainError("matrix has a negative entry: " + str());
    }
    if (a_ * d_ - b_ * c_ != 1) {
        throw DomainError("matrix determinant is not 1: " + str());
    }
}

Mat2::Mat2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : Mat2(from_i64(a), from_i64(b), from_i64(c), from_i64(d))
{
}

Mat2 Mat2::L(const BigInt& e)
{
    if (e < 0) {
        throw DomainError("negative generator exponent");
    }
    return Mat2(Unchecked{}, 1, e, 0, 1);
}

Mat2 Mat2::R(const BigInt& e)
{
    if (e < 0) {
        throw DomainError("negative generator exponent");
    }
    return Mat2(Unchecked{}, 1, 0, e, 1);
}

bool Mat2::in_gamma1_4() const
{
    auto r4 = [](const BigInt& v) { return mpz_fdiv_ui(v.get_mpz_t(), 4); };
    return r4(a_) == 1 && r4(d_) == 1 && r4(c_) == 0;
}

Mat2 Mat2::operator*(const Mat2& o) const
{
    return Mat2(Unchecked{}, a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                c_ * o.b_ + d_ * o.d_);
}

bool Mat2::operator==(const Mat2& o) const
{
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

std::string Mat2::str() const
{
    return "(" + to_string(a_) + "," + to_string(b_) + ";" + to_string(c_) + "," + to_string(d_) + ")";
}

Vec2::Vec2(BigInt x, BigInt y) : x_(std::move(x)), y_(std::move(y))
{
    if (x_ < 0 || y_ < 0) {
        throw DomainError("vector has a negative component: " + str());
    }
    if (gcd(x_, y_) != 1) {
        throw DomainError("vector components are not coprime: " + str());
    }
}

Vec2::Vec2(std::int64_t x, std::int64_t y) : Vec2(from_i64(x), from_i64(y)) {}

std::string Vec2::str() const { return to_string(x_) + "/" + to_string(y_); }

Vec2 operator*(const Mat2& m, const Vec2& v)
{
    return Vec2(m.a() * v.x() + m.b() * v.y(), m.c() * v.x() + m.d() * v.y());
}

Vec2 parse_fraction(const std::string& text)
{
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        throw std::invalid_argument("expected a fraction x/y, got " + text);
    }
    return Vec2(parse_bigint(text.substr(0, slash)), parse_bigint(text.substr(slash + 1)));
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.str(); }
std::ostream& operator<<(std::ostream& os, const Vec2& v) { return os << v.str(); }

GroupMat GroupMat::L(std::int64_t e) { return GroupMat{1, from_i64(e), 0, 1}; }
GroupMat GroupMat::R(std::int64_t e) { return GroupMat{1, 0, from_i64(e), 1}; }

GroupMat GroupMat::operator*(const GroupMat& o) const
{
    return GroupMat{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

IMat2 IMat2::mul_mod(const IMat2& o, std::int64_t m) const
{
    auto md = [m](std::int64_t v) { return ((v % m) + m) % m; };
    return IMat2{{md(e[0] * o.e[0] + e[1] * o.e[2]), md(e[0] * o.e[1] + e[1] * o.e[3]),
                  md(e[2] * o.e[0] + e[3] * o.e[2]), md(e[2] * o.e[1] + e[3] * o.e[3])}};
}

} // namespace semiorbit
