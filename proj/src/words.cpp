#include "semiorbit/words.hpp"

#include <algorithm>

#include "semiorbit/kronecker.hpp"

namespace semiorbit {

void LRWord::push(Letter letter, const BigInt& exp)
{
    if (exp < 0) {
        throw DomainError("negative run exponent");
    }
    if (exp == 0) {
        return;
    }
    if (!runs_.empty() && runs_.back().letter == letter) {
        runs_.back().exp += exp;
    } else {
        runs_.push_back(Run{letter, exp});
    }
}

BigInt LRWord::length() const
{
    BigInt n = 0;
    for (const auto& r : runs_) {
        n += r.exp;
    }
    return n;
}

std::string LRWord::str() const
{
    if (runs_.empty()) {
        return "1";
    }
    std::string s;
    for (const auto& r : runs_) {
        if (!s.empty()) {
            s += ' ';
        }
        s += (r.letter == Letter::L ? "L^" : "R^") + to_string(r.exp);
    }
    return s;
}

std::string ContinuedFraction::str() const
{
    std::string s = "[" + to_string(a0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        s += (i == 0 ? "; " : ", ") + to_string(coeffs[i]);
    }
    return s + "]";
}

Mat2 word_to_matrix(const LRWord& w)
{
    Mat2 m;
    for (const auto& r : w.runs()) {
        m = m * (r.letter == Letter::L ? Mat2::L(r.exp) : Mat2::R(r.exp));
    }
    return m;
}

LRWord matrix_to_word(const Mat2& m)
{
    BigInt a = m.a(), b = m.b(), c = m.c(), d = m.d();
    LRWord w;
    while (!(a == 1 && b == 0 && c == 0 && d == 1)) {
        if (a >= c && b >= d) {
            BigInt e = (c == 0) ? b : std::min(BigInt(a / c), BigInt(b / d));
            a -= e * c;
            b -= e * d;
            w.push(Letter::L, e);
        } else {
            BigInt e = (b == 0) ? c : std::min(BigInt(c / a), BigInt(d / b));
            c -= e * a;
            d -= e * b;
            w.push(Letter::R, e);
        }
    }
    return w;
}

ContinuedFraction even_cf(const Vec2& v)
{
    if (v.y() == 0) {
        throw DomainError("even_cf requires a nonzero denominator");
    }
    if (v.x() == 0) {
        throw DomainError("0/1 has no even continued fraction with a0 >= 0");
    }
    ContinuedFraction cf;
    BigInt p = v.x(), q = v.y();
    cf.a0 = p / q;
    BigInt r = p % q;
    p = q;
    q = r;
    while (q != 0) {
        cf.coeffs.push_back(p / q);
        r = p % q;
        p = q;
        q = r;
    }
    if (cf.coeffs.size() % 2 == 0) {
        if (cf.coeffs.empty()) {
            cf.a0 -= 1;
            cf.coeffs.push_back(1);
        } else if (cf.coeffs.back() > 1) {
            cf.coeffs.back() -= 1;
            cf.coeffs.push_back(1);
        } else {
            cf.coeffs.pop_back();
            cf.coeffs.back() += 1;
        }
    }
    return cf;
}

Vec2 cf_eval(const ContinuedFraction& cf)
{
    if (cf.a0 < 0) {
        throw DomainError("continued fraction a0 must be nonnegative");
    }
    BigInt p1 = 1, p0 = cf.a0, q1 = 0, q0 = 1;
    for (const auto& a : cf.coeffs) {
        if (a < 1) {
            throw DomainError("continued fraction coefficients must be positive");
        }
        BigInt p = a * p0 + p1;
        BigInt q = a * q0 + q1;
        p1 = std::move(p0);
        q1 = std::move(q0);
        p0 = std::move(p);
        q0 = std::move(q);
    }
    return Vec2(p0, q0);
}

LRWord vec_to_word(const Vec2& v)
{
    if (v.x() == 1 && v.y() == 0) {
        return LRWord{};
    }
    if (v.x() == 0) {
        throw DomainError("no LR word maps (1,0) to " + v.str());
    }
    ContinuedFraction cf = even_cf(v);
    LRWord w;
    w.push(Letter::L, cf.a0);
    for (std::size_t i = 0; i < cf.coeffs.size(); ++i) {
        w.push(i % 2 == 0 ? Letter::R : Letter::L, cf.coeffs[i]);
    }
    return w;
}

bool psi_member(const Mat2& m) { return m.in_gamma1_4() && kronecker(m.a(), m.b()) == 1; }

bool is_initial_subword(const Mat2& g1, const Mat2& g2)
{
    const BigInt &a = g1.a(), &b = g1.b(), &c = g1.c(), &d = g1.d();
    return d * g2.a() - b * g2.c() >= 0 && d * g2.b() - b * g2.d() >= 0 && a * g2.c() - c * g2.a() >= 0 &&
           a * g2.d() - c * g2.b() >= 0;
}

namespace {

void require_even_form(const ContinuedFraction& cf)
{
    if (cf.a0 != 0 || cf.coeffs.size() % 2 == 0) {
        throw DomainError("expected an even continued fraction with a0 = 0: " + cf.str());
    }
    for (const auto& a : cf.coeffs) {
        if (a < 1) {
            throw DomainError("continued fraction coefficients must be positive");
        }
    }
}

} // namespace

ContinuedFraction concat_even_cf(const ContinuedFraction& cf1, const ContinuedFraction& cf2)
{
    require_even_form(cf1);
    require_even_form(cf2);
    ContinuedFraction out;
    out.a0 = 0;
    out.coeffs = cf1.coeffs;
    out.coeffs.back() += cf2.coeffs.front();
    out.coeffs.insert(out.coeffs.end(), cf2.coeffs.begin() + 1, cf2.coeffs.end());
    return out;
}

} // namespace semiorbit
