#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semiorbit/matrix.hpp"
#include "semiorbit/parallel.hpp"
#include "semiorbit/psi_orbit.hpp"

namespace semiorbit {

enum class GenKind { Psi1, Psi2, Alphabet, Custom };

using SmallMat = std::array<std::int64_t, 4>; // row-major a, b, c, d

// Finite generating set of a continued-fraction semigroup.
//
// For alphabets the action uses C_a = (0 1; 1 a) directly, so the orbit of v
// is every C_{a1}...C_{an} v with n >= 0; `gens` then holds the SL(2,Z)
// products C_a C_b.
class GeneratorSet {
public:
    static GeneratorSet psi1();
    static GeneratorSet psi2();
    static GeneratorSet alphabet(std::vector<std::uint64_t> letters);
    static GeneratorSet custom(std::vector<Mat2> gens);
    // "psi1", "psi2", "alphabet:4,8,12", "alphabet:4..128:4", "custom:a,b,c,d;a,b,c,d".
    static GeneratorSet parse(const std::string& spec);

    GenKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const std::vector<Mat2>& gens() const { return gens_; }
    const std::vector<std::uint64_t>& letters() const { return letters_; }
    // Matrices acting on vectors: the generators, or C_a for alphabets.
    const std::vector<SmallMat>& action() const { return action_; }
    // At most one inverse generator keeps a nonnegative vector nonnegative.
    bool deterministic() const { return deterministic_; }
    // Exponents p, q when the set is {L^p, R^q}; 0 otherwise.
    std::uint64_t l_power() const { return lp_; }
    std::uint64_t r_power() const { return rq_; }

private:
    GenKind kind_ = GenKind::Custom;
    std::string label_;
    std::vector<Mat2> gens_;
    std::vector<std::uint64_t> letters_;
    std::vector<SmallMat> action_;
    bool deterministic_ = false;
    std::uint64_t lp_ = 0, rq_ = 0;

    void classify_shape();
};

using Vec64 = std::pair<std::uint64_t, std::uint64_t>;

// Every M v0 with both components <= bound, sorted by max component then x.
std::vector<Vec64> enumerate_orbit(const GeneratorSet& g, Vec64 v0, std::uint64_t bound,
                                   const ExecPolicy& policy = {});
std::vector<Vec64> enumerate_orbit_serial(const GeneratorSet& g, Vec64 v0, std::uint64_t bound);

// Counts orbit points with max component < N for each N (ascending).
std::vector<std::uint64_t> count_orbit(const GeneratorSet& g, Vec64 v0, const std::vector<std::uint64_t>& thresholds,
                                       const ExecPolicy& policy = {});

// Exact membership by reverse descent; requires a deterministic set.
bool pullback_membership(const GeneratorSet& g, Vec64 v0, Vec64 target);

// Bitmap of side values n <= bound taken on the orbit (bit n set), for {L^p, R^q} families.
std::vector<std::uint64_t> side_value_bitmap(const GeneratorSet& g, Vec64 v0, Side side, std::uint64_t bound,
                                             const ExecPolicy& policy = {});
inline bool bit_test(const std::vector<std::uint64_t>& bm, std::uint64_t n) { return (bm[n >> 6] >> (n & 63)) & 1u; }

class ResidueImage {
public:
    ResidueImage(std::uint64_t modulus, std::vector<std::uint64_t> keys);

    std::uint64_t modulus() const { return m_; }
    std::size_t size() const { return keys_.size(); }
    const std::vector<std::uint64_t>& keys() const { return keys_; }
    bool contains(const SmallMat& r) const;
    SmallMat decode(std::uint64_t key) const;
    std::uint64_t encode(const SmallMat& r) const;

private:
    std::uint64_t m_;
    std::vector<std::uint64_t> keys_; // sorted
};

// Multiplicative closure of the reduced generators in M_2(Z/m); m in [2, 65535].
ResidueImage congruence_closure(const GeneratorSet& g, std::uint64_t m);

std::vector<std::uint64_t> orbit_residues(const GeneratorSet& g, Vec64 v0, std::uint64_t m, Side side);

// |SL2(Z/2^k)| = 6 * 8^(k-1).
std::uint64_t sl2_order_pow2(unsigned k);

// Index of the image at level 2^k equals the index at level 2^e for every k in (e, kmax].
bool strong_approx_verify(const GeneratorSet& g, unsigned e, unsigned kmax);

struct WitnessCheck {
    Mat2 m;
    bool psi_member = false;
    std::size_t prefixes_checked = 0;
    bool no_prefix_in_gamma1_4 = false;
};

// M_k = R L^{4k} R^3 = (12k+1, 4k; 12k+4, 4k+1) with its prefix check.
WitnessCheck psi_generator_witness(std::uint64_t k);

// Parses "R^4 L^-2 R^4 L^-2" into an element of SL(2,Z).
GroupMat parse_group_word(const std::string& word);
std::pair<BigInt, BigInt> apply(const GroupMat& g, const BigInt& x, const BigInt& y);

} // namespace semiorbit
