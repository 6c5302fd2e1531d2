#include "semiorbit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "semiorbit/analytic_f.hpp"
#include "semiorbit/cf_search.hpp"
#include "semiorbit/dimension.hpp"
#include "semiorbit/kronecker.hpp"
#include "semiorbit/psi_orbit.hpp"
#include "semiorbit/semigroups.hpp"
#include "semiorbit/words.hpp"

namespace semiorbit {

namespace {

using Rng = std::mt19937_64;

// Tolerances of the dimension criterion.
constexpr double kPlantedNoise = 0.02;
constexpr double kPlantedStderrs = 2.0;
constexpr double kPsi1DeltaLo = 0.69;
constexpr double kPsi1DeltaHi = 0.75;
constexpr double kPsi2Delta = 0.6046;
constexpr double kPsi2DeltaTol = 0.02;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi)
{
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

std::string join(const std::vector<std::uint64_t>& v, std::size_t limit = 40)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size() && i < limit; ++i) {
        os << (i ? "," : "") << v[i];
    }
    if (v.size() > limit) {
        os << ",...";
    }
    return os.str();
}

struct Outcome {
    bool pass;
    std::string detail;
};

// Non-square exceptions of the numerators of Psi (2,3).
const std::vector<std::uint64_t> kExceptions23{3, 6, 7, 10, 12, 15, 18, 19, 27, 31, 34, 55, 63, 99, 115};

Outcome crit_missing_23(const VerifyOptions& o)
{
    const std::uint64_t bound = o.quick ? 1000000 : 109120000;
    auto missing = orbit_missing(2, 3, Side::Numerator, bound, o.policy);
    std::vector<std::uint64_t> nonsq;
    std::uint64_t squares = 0;
    for (auto n : missing) {
        if (is_square(n)) {
            ++squares;
        } else {
            nonsq.push_back(n);
        }
    }
    const std::uint64_t expected_squares = isqrt(bound);
    const bool pass = nonsq == kExceptions23 && squares == expected_squares;
    return {pass, "bound=" + std::to_string(bound) + " squares_missing=" + std::to_string(squares) + "/" +
                      std::to_string(expected_squares) + " nonsquares=[" + join(nonsq) + "]"};
}

// Random element of SL(2,Z) with nonnegative entries at most bound.
Mat2 random_mat(Rng& rng, std::uint64_t bound)
{
    for (;;) {
        std::uint64_t c = uniform(rng, 0, bound), d = uniform(rng, 1, bound);
        if (gcd_u64(c, d) != 1) {
            continue;
        }
        // b = -c^{-1} mod d, a = (1 + bc) / d
        std::uint64_t b = 0;
        if (d > 1) {
            BigInt inv;
            BigInt cc = from_u64(c), dd = from_u64(d);
            mpz_invert(inv.get_mpz_t(), cc.get_mpz_t(), dd.get_mpz_t());
            b = to_u64((dd - inv) % dd);
        }
        BigInt a = (1 + from_u64(b) * from_u64(c)) / from_u64(d);
        Mat2 m(a, from_u64(b), from_u64(c), from_u64(d));
        switch (uniform(rng, 0, 3)) {
        case 1: return Mat2(m.a(), m.c(), m.b(), m.d());
        case 2: return Mat2(m.d(), m.c(), m.b(), m.a());
        case 3: return Mat2(m.d(), m.b(), m.c(), m.a());
        default: return m;
        }
    }
}

bool mobius_agrees(const Mat2& m, const Vec2& v)
{
    const Symbol direct = kronecker(m.a() * v.x() + m.b() * v.y(), m.c() * v.x() + m.d() * v.y());
    return mobius_symbol(m, v) == direct;
}

Outcome crit_mobius(const VerifyOptions& o)
{
    Rng rng(o.seed);
    const std::uint64_t samples = o.quick ? 10000 : 100000;
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Mat2 m = random_mat(rng, 1000000);
        for (;;) {
            std::uint64_t x = uniform(rng, 0, 1000000), y = uniform(rng, 0, 1000000);
            if (gcd_u64(x, y) != 1 || gcd(from_u64(x), m.d()) != 1) {
                continue;
            }
            bad += !mobius_agrees(m, Vec2(from_u64(x), from_u64(y)));
            break;
        }
    }
    const std::int64_t e = o.quick ? 12 : 50;
    std::uint64_t checked = 0, bad_exh = 0;
    std::vector<Mat2> mats;
    for (std::int64_t c = 0; c <= e; ++c) {
        for (std::int64_t d = 1; d <= e; ++d) {
            if (std::gcd(c, d) != 1) {
                continue;
            }
            for (std::int64_t b = 0; b <= e; ++b) {
                if ((1 + b * c) % d == 0 && (1 + b * c) / d <= e) {
                    mats.emplace_back((1 + b * c) / d, b, c, d);
                }
            }
        }
    }
    std::vector<Vec2> vecs;
    for (std::int64_t x = 0; x <= e; ++x) {
        for (std::int64_t y = 0; y <= e; ++y) {
            if (std::gcd(x, y) == 1) {
                vecs.emplace_back(x, y);
            }
        }
    }
    for (const auto& m : mats) {
        for (const auto& v : vecs) {
            if (gcd(v.x(), m.d()) != 1) {
                continue;
            }
            ++checked;
            bad_exh += !mobius_agrees(m, v);
        }
    }
    return {bad == 0 && bad_exh == 0, "random=" + std::to_string(samples) + " mismatches=" + std::to_string(bad) +
                                          " exhaustive(entries<=" + std::to_string(e) + ")=" + std::to_string(checked) +
                                          " mismatches=" + std::to_string(bad_exh)};
}

// Generator pool: witnesses M_k, L, R^4, L^4 and random members of Psi from short words.
std::vector<Mat2> psi_pool(Rng& rng)
{
    std::vector<Mat2> pool{Mat2::L(1), Mat2::R(4), Mat2::L(4)};
    for (std::uint64_t k = 1; k <= 6; ++k) {
        pool.push_back(psi_generator_witness(k).m);
    }
    while (pool.size() < 29) {
        LRWord w;
        const auto runs = uniform(rng, 2, 8);
        for (std::uint64_t r = 0; r < runs; ++r) {
            w.push(r % 2 ? Letter::L : Letter::R, from_u64(uniform(rng, 1, 8)));
        }
        Mat2 m = word_to_matrix(w);
        if (psi_member(m)) {
            pool.push_back(m);
        }
    }
    return pool;
}

Outcome crit_psi_symbols(const VerifyOptions& o)
{
    Rng rng(o.seed + 3);
    const std::vector<Mat2> pool = psi_pool(rng);
    const std::uint64_t products = o.quick ? 1000 : 10000, vectors = o.quick ? 100 : 1000;
    std::uint64_t bad_member = 0, bad_rows = 0, bad_pres = 0;
    for (std::uint64_t i = 0; i < products; ++i) {
        Mat2 m;
        const auto len = uniform(rng, 1, 30);
        for (std::uint64_t j = 0; j < len; ++j) {
            m = m * pool[uniform(rng, 0, pool.size() - 1)];
        }
        bad_member += !psi_member(m);
        const Symbol ab = kronecker(m.a(), m.b());
        if (!(ab == kronecker(m.c(), m.d()) && ab == kronecker(m.a(), m.c()) && ab == kronecker(m.b(), m.d()))) {
            ++bad_rows;
        }
        for (std::uint64_t t = 0; t < vectors; ++t) {
            std::uint64_t x, y;
            do {
                x = uniform(rng, 0, 1000000);
                y = 2 * uniform(rng, 0, 499999) + 1;
            } while (gcd_u64(x, y) != 1);
            const Vec2 v(from_u64(x), from_u64(y));
            const Symbol s = kronecker(v.x(), v.y());
            const Symbol direct = kronecker(m.a() * v.x() + m.b() * v.y(), m.c() * v.x() + m.d() * v.y());
            if (!(direct == s && gamma14_symbol(m, v) == s)) {
                ++bad_pres;
            }
        }
    }
    return {bad_member == 0 && bad_rows == 0 && bad_pres == 0,
            "products=" + std::to_string(products) + " vectors_each=" + std::to_string(vectors) +
                " non_members=" + std::to_string(bad_member) + " row_column_failures=" + std::to_string(bad_rows) +
                " preservation_failures=" + std::to_string(bad_pres)};
}

Outcome crit_psi1_23(const VerifyOptions& o)
{
    const std::uint64_t bound = o.quick ? 1000000 : 10000000;
    auto bm = side_value_bitmap(GeneratorSet::psi1(), {2, 3}, Side::Numerator, bound, o.policy);
    std::uint64_t largest = 0;
    for (std::uint64_t n = bound; n >= 1; --n) {
        if (!bit_test(bm, n) && !is_square(n)) {
            largest = n;
            break;
        }
    }
    return {largest == 10569, "bound=" + std::to_string(bound) + " largest_missing_nonsquare=" + std::to_string(largest)};
}

Outcome crit_strong_approx(const VerifyOptions& o)
{
    const auto psi1 = GeneratorSet::psi1(), psi2 = GeneratorSet::psi2();
    const unsigned kmax = o.quick ? 6 : 7;
    ResidueImage img16 = congruence_closure(psi2, 16);
    bool shape = img16.size() == 16;
    for (auto key : img16.keys()) {
        SmallMat r = img16.decode(key);
        shape = shape && r[0] == 1 && r[3] == 1 && r[1] % 4 == 0 && r[2] % 4 == 0;
    }
    const std::size_t n5 = congruence_closure(psi2, 5).size();
    const bool e1 = strong_approx_verify(psi1, 2, kmax);
    const bool e2 = strong_approx_verify(psi2, 4, kmax);
    const bool e2_low = strong_approx_verify(psi2, 3, kmax);
    return {shape && n5 == 120 && e1 && e2 && !e2_low,
            "closure16=" + std::to_string(img16.size()) + (shape ? " (all (1,4b;4c,1))" : " (shape mismatch)") +
                " closure5=" + std::to_string(n5) + " psi1_e2=" + (e1 ? "ok" : "fail") + " psi2_e4=" +
                (e2 ? "ok" : "fail") + " psi2_e3=" + (e2_low ? "holds" : "fails") + " kmax=" + std::to_string(kmax)};
}

// Residues mod 4 implied by the congruence condition of a report.
std::vector<std::uint64_t> table_residues_mod4(const ObstructionReport& r)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t t = 0; t < 4; ++t) {
        if (r.congruent(t)) {
            out.push_back(t);
        }
    }
    return out;
}

Outcome crit_table_rows(const VerifyOptions& o)
{
    const std::uint64_t root = o.quick ? 100 : 1000;
    const auto psi1 = GeneratorSet::psi1();
    std::uint64_t pairs = 0, flagged = 0, bad_cong = 0, bad_sq = 0;
    std::string first_bad;
    for (std::uint64_t x = 0; x <= 30; ++x) {
        for (std::uint64_t y = 0; y <= 30; ++y) {
            if (gcd_u64(x, y) != 1) {
                continue;
            }
            ++pairs;
            auto [num, den] = classify(x, y);
            for (const ObstructionReport* r : {&num, &den}) {
                if (orbit_residues(psi1, {x, y}, 4, r->side) != table_residues_mod4(*r)) {
                    ++bad_cong;
                    if (first_bad.empty()) {
                        first_bad = " first=" + std::to_string(x) + "/" + std::to_string(y) + ":" + side_name(r->side);
                    }
                }
                if (!r->reciprocity) {
                    continue;
                }
                ++flagged;
                for (std::uint64_t k = 1; k <= root; ++k) {
                    if (appears(x, y, k * k, r->side)) {
                        ++bad_sq;
                        if (first_bad.empty()) {
                            first_bad = " first_square=" + std::to_string(k * k) + " in " + std::to_string(x) + "/" +
                                        std::to_string(y);
                        }
                    }
                }
            }
        }
    }
    return {bad_cong == 0 && bad_sq == 0,
            "pairs=" + std::to_string(pairs) + " congruence_mismatches=" + std::to_string(bad_cong) + " flagged_sides=" +
                std::to_string(flagged) + " squares_found(<=" + std::to_string(root * root) +
                ")=" + std::to_string(bad_sq) + first_bad};
}

Outcome crit_window(const VerifyOptions& o)
{
    const std::uint64_t top = o.quick ? 2000 : 5000;
    std::uint64_t checked = 0, bad = 0;
    for (std::uint64_t n = 5; n <= top; n += 2) {
        if (is_square(n)) {
            continue;
        }
        ++checked;
        bad += f_of_n(n).f > n - 1;
    }
    Rng rng(o.seed + 7);
    const std::size_t want = o.quick ? 10 : 50;
    std::vector<std::uint64_t> samples;
    while (samples.size() < want) {
        std::uint64_t n = uniform(rng, 3410000, 3600000);
        if (n % 4 != 2 && !is_square(n) && std::find(samples.begin(), samples.end(), n) == samples.end()) {
            samples.push_back(n);
        }
    }
    std::sort(samples.begin(), samples.end());
    std::uint64_t pv_bad = 0;
    double worst = 0;
    for (const auto& s : verify_pv_bound(samples, o.policy)) {
        pv_bad += !s.pass;
        worst = std::max(worst, static_cast<double>(s.f) / s.bound);
    }
    std::ostringstream os;
    os << "trivial_bound n<=" << top << " checked=" << checked << " failures=" << bad << " pv_samples=" << samples.size()
       << " failures=" << pv_bad << " max_f_over_bound=" << worst;
    return {bad == 0 && pv_bad == 0, os.str()};
}

Outcome crit_cf_search(const VerifyOptions& o)
{
    const std::uint64_t bound = o.quick ? 100000 : 1000000;
    CfSearchOptions opts;
    opts.policy = o.policy;
    SearchManifest m = search_missing_denominators(bound, opts);
    const auto fast = m.missing();
    const auto oracle = missing_by_pullback(bound, o.policy);
    bool squares = true;
    for (std::uint64_t k = 1; k * k <= bound; ++k) {
        squares = squares && !m.marked(k * k);
    }
    auto j = nlohmann::json::parse(manifest_json(m));
    bool schema = j.contains("classes") && j["classes"].size() == 4;
    for (const auto& c : j["classes"]) {
        schema = schema && c.contains("d_mod_4") && c.contains("total_missing") && c.contains("largest_missing");
    }
    std::ostringstream os;
    os << "bound=" << bound << " missing=" << fast.size() << " oracle=" << oracle.size()
       << " equal=" << (fast == oracle ? "yes" : "no") << " squares_missing=" << (squares ? "all" : "not all")
       << " per_class=";
    for (int r = 0; r < 4; ++r) {
        os << (r ? "," : "") << m.classes[r].missing;
    }
    return {m.complete && fast == oracle && squares && schema, os.str()};
}

Outcome crit_dimension(const VerifyOptions& o)
{
    Rng rng(o.seed + 11);
    std::normal_distribution<double> noise(0.0, kPlantedNoise);
    std::ostringstream os;
    bool pass = true;
    for (double d0 : {0.3, 0.5, 0.9}) {
        CountingSeries s;
        s.thresholds = geometric_thresholds(100, 1000000, 30);
        for (auto n : s.thresholds) {
            s.counts.push_back(std::max(1.0, 5.0 * std::pow(static_cast<double>(n), 2 * d0) * std::exp(noise(rng))));
        }
        auto e = estimate_dimension(s);
        const bool ok = std::abs(e.delta - d0) <= kPlantedStderrs * e.stderr_delta;
        pass = pass && ok;
        os << "planted " << d0 << "->" << e.delta << "+-" << e.stderr_delta << (ok ? " ok; " : " FAIL; ");
    }
    const std::uint64_t nmax = 50000;
    auto t = default_thresholds(nmax, kDefaultPoints);
    auto e1 = estimate_dimension(orbit_count(GeneratorSet::psi1(), {1, 1}, t, o.policy));
    auto e2 = estimate_dimension(orbit_count(GeneratorSet::psi2(), {0, 1}, t, o.policy));
    const bool ok1 = e1.delta >= kPsi1DeltaLo && e1.delta <= kPsi1DeltaHi;
    const bool ok2 = std::abs(e2.delta - kPsi2Delta) <= kPsi2DeltaTol;
    os << "psi1(1,1) N=" << nmax << ": " << e1.delta << " R2=" << e1.r_squared << (ok1 ? " ok; " : " FAIL; ")
       << "psi2(0,1) N=" << nmax << ": " << e2.delta << " R2=" << e2.r_squared << (ok2 ? " ok" : " FAIL");
    return {pass && ok1 && ok2, os.str()};
}

Outcome crit_group_word(const VerifyOptions&)
{
    GroupMat g = parse_group_word("R^4 L^-2 R^4 L^-2");
    auto [u, v] = apply(g, 3, 8);
    const bool image = u == 75 && v == 256 && is_square(v);
    const bool pull = pullback_membership(GeneratorSet::psi2(), {3, 8}, {75, 256});
    const bool den = appears_as_denominator(3, 8, 256);
    return {image && !pull && !den, "image=(" + to_string(u) + "," + to_string(v) + ") psi2_pullback=" +
                                        (pull ? "true" : "false") + " psi_denominator_256=" + (den ? "true" : "false")};
}

} // namespace

std::string criterion_name(int id)
{
    static const char* names[kCriterionCount] = {
        "missing numerators of Psi(2,3)",
        "Mobius symbol formula vs direct evaluation",
        "Psi symbol agreement and preservation",
        "largest missing numerator of Psi1(2,3)",
        "congruence closures and strong approximation",
        "mod 4 congruence rows and reciprocity",
        "window function bounds",
        "continued fraction denominator search vs oracle",
        "dimension estimates",
        "group word counterexample",
    };
    if (id < 1 || id > kCriterionCount) {
        throw DomainError("unknown criterion " + std::to_string(id));
    }
    return names[id - 1];
}

CriterionResult run_criterion(int id, const VerifyOptions& opts)
{
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        switch (id) {
        case 1: out = crit_missing_23(opts); break;
        case 2: out = crit_mobius(opts); break;
        case 3: out = crit_psi_symbols(opts); break;
        case 4: out = crit_psi1_23(opts); break;
        case 5: out = crit_strong_approx(opts); break;
        case 6: out = crit_table_rows(opts); break;
        case 7: out = crit_window(opts); break;
        case 8: out = crit_cf_search(opts); break;
        case 9: out = crit_dimension(opts); break;
        case 10: out = crit_group_word(opts); break;
        }
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    r.pass = out.pass;
    r.detail = out.detail;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

bool VerifyReport::all_pass() const
{
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

std::string VerifyReport::json(int indent) const
{
    nlohmann::json j;
    j["schema_version"] = kReportSchema;
    j["quick"] = quick;
    j["seed"] = seed;
    j["all_pass"] = all_pass();
    j["criteria"] = nlohmann::json::array();
    for (const auto& r : results) {
        j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    return j.dump(indent);
}

VerifyReport verify_all(const VerifyOptions& opts)
{
    VerifyReport rep;
    rep.quick = opts.quick;
    rep.seed = opts.seed;
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) {
            continue;
        }
        rep.results.push_back(run_criterion(id, opts));
        opts.policy.report(rep.results.size(), opts.only.empty() ? kCriterionCount : opts.only.size());
    }
    return rep;
}

} // namespace semiorbit
