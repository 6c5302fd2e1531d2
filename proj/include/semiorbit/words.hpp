#pragma once

#include <string>
#include <vector>

#include "semiorbit/matrix.hpp"

namespace semiorbit {

enum class Letter { L, R };

struct Run {
    Letter letter;
    BigInt exp;

    bool operator==(const Run&) const = default;
};

// Run-length encoded word in L and R with alternating letters.
class LRWord {
public:
    LRWord() = default;
    // Appends a run, merging with the last run when letters agree; zero exponents are dropped.
    void push(Letter letter, const BigInt& exp);

    const std::vector<Run>& runs() const { return runs_; }
    bool empty() const { return runs_.empty(); }
    BigInt length() const;
    bool operator==(const LRWord&) const = default;

    // "R^1 L^4 R^3"; empty word prints as "1".
    std::string str() const;

private:
    std::vector<Run> runs_;
};

struct ContinuedFraction {
    BigInt a0;
    std::vector<BigInt> coeffs;

    bool operator==(const ContinuedFraction&) const = default;
    // "[0; 1, 1, 2]"
    std::string str() const;
};

Mat2 word_to_matrix(const LRWord& w);
LRWord matrix_to_word(const Mat2& m);

// Expansion with an odd number of coefficients after a0; requires x, y >= 1.
ContinuedFraction even_cf(const Vec2& v);
Vec2 cf_eval(const ContinuedFraction& cf);

// Word W with W (1,0)^T = (x,y)^T, ending in an R run.
LRWord vec_to_word(const Vec2& v);

bool psi_member(const Mat2& m);
bool is_initial_subword(const Mat2& g1, const Mat2& g2);
ContinuedFraction concat_even_cf(const ContinuedFraction& cf1, const ContinuedFraction& cf2);

} // namespace semiorbit
