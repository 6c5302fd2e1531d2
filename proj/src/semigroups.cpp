#include "semiorbit/semigroups.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <omp.h>

#include "semiorbit/words.hpp"

namespace semiorbit {

namespace {

std::int64_t to_i64(const BigInt& v)
{
    if (!mpz_fits_slong_p(v.get_mpz_t())) {
        throw std::overflow_error("generator entry does not fit in 64 bits");
    }
    return mpz_get_si(v.get_mpz_t());
}

SmallMat small(const Mat2& m) { return {to_i64(m.a()), to_i64(m.b()), to_i64(m.c()), to_i64(m.d())}; }

Mat2 alphabet_pair(std::uint64_t a, std::uint64_t b)
{
    // C_a C_b = (0 1; 1 a)(0 1; 1 b) = (1 b; a 1+ab)
    BigInt ab = from_u64(a) * from_u64(b);
    return Mat2(BigInt(1), from_u64(b), from_u64(a), ab + 1);
}

std::uint64_t parse_u64(const std::string& s)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
        throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

// Applies an action matrix; false when a component leaves [0, bound].
bool act(const SmallMat& g, Vec64 v, std::uint64_t bound, Vec64& out)
{
    __int128 x = static_cast<__int128>(g[0]) * v.first + static_cast<__int128>(g[1]) * v.second;
    __int128 y = static_cast<__int128>(g[2]) * v.first + static_cast<__int128>(g[3]) * v.second;
    if (x < 0 || y < 0 || x > bound || y > bound) {
        return false;
    }
    out = {static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)};
    return true;
}

struct VecHash {
    std::size_t operator()(const Vec64& v) const
    {
        std::uint64_t h = v.first * 0x9E3779B97F4A7C15ull ^ (v.second + 0x632BE59BD9B4E019ull + (v.first << 6));
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

bool by_max_then_x(const Vec64& a, const Vec64& b)
{
    auto ma = std::max(a.first, a.second), mb = std::max(b.first, b.second);
    if (ma != mb) {
        return ma < mb;
    }
    return a < b;
}

void check_root(const Vec64& v0, std::uint64_t bound)
{
    if (std::gcd(v0.first, v0.second) != 1) {
        throw DomainError("start vector must be coprime");
    }
    if (bound < std::max(v0.first, v0.second)) {
        throw DomainError("bound is below the start vector");
    }
}

} // namespace

GeneratorSet GeneratorSet::psi1()
{
    GeneratorSet g = custom({Mat2::L(1), Mat2::R(4)});
    g.kind_ = GenKind::Psi1;
    g.label_ = "psi1";
    return g;
}

GeneratorSet GeneratorSet::psi2()
{
    GeneratorSet g = custom({Mat2::L(4), Mat2::R(4)});
    g.kind_ = GenKind::Psi2;
    g.label_ = "psi2";
    return g;
}

GeneratorSet GeneratorSet::alphabet(std::vector<std::uint64_t> letters)
{
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    if (letters.empty() || letters.front() == 0) {
        throw DomainError("alphabet letters must be positive");
    }
    GeneratorSet g;
    g.kind_ = GenKind::Alphabet;
    g.letters_ = letters;
    g.label_ = "alphabet:";
    for (std::size_t i = 0; i < letters.size(); ++i) {
        g.label_ += (i ? "," : "") + std::to_string(letters[i]);
    }
    for (auto a : letters) {
        g.action_.push_back({0, 1, 1, static_cast<std::int64_t>(a)});
        for (auto b : letters) {
            g.gens_.push_back(alphabet_pair(a, b));
        }
    }
    // The descent recovers a as floor(q/p); letters >= 2 keep it unambiguous at every step.
    g.deterministic_ = letters.front() >= 2;
    return g;
}

GeneratorSet GeneratorSet::custom(std::vector<Mat2> gens)
{
    if (gens.empty()) {
        throw DomainError("generator set is empty");
    }
    GeneratorSet g;
    g.kind_ = GenKind::Custom;
    g.label_ = "custom";
    for (const auto& m : gens) {
        if (m.is_identity()) {
            throw DomainError("the identity is not allowed as a generator");
        }
        g.action_.push_back(small(m));
    }
    g.gens_ = std::move(gens);
    g.classify_shape();
    return g;
}

void GeneratorSet::classify_shape()
{
    std::uint64_t p = 0, q = 0;
    for (const auto& m : action_) {
        bool is_l = m[0] == 1 && m[2] == 0 && m[3] == 1;
        bool is_r = m[0] == 1 && m[1] == 0 && m[3] == 1;
        if (is_l && p == 0) {
            p = static_cast<std::uint64_t>(m[1]);
        } else if (is_r && q == 0) {
            q = static_cast<std::uint64_t>(m[2]);
        } else {
            return;
        }
    }
    // L^{-p} and R^{-q} both keep (x, y) nonnegative only when x >= p y and y >= q x.
    if (p * q >= 2 || p == 0 || q == 0) {
        deterministic_ = true;
        lp_ = p;
        rq_ = q;
    }
}

GeneratorSet GeneratorSet::parse(const std::string& spec)
{
    if (spec == "psi1") {
        return psi1();
    }
    if (spec == "psi2") {
        return psi2();
    }
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("unknown generator spec: " + spec);
    }
    std::string head = spec.substr(0, colon), body = spec.substr(colon + 1);
    if (head == "alphabet") {
        std::vector<std::uint64_t> letters;
        auto dots = body.find("..");
        if (dots != std::string::npos) {
            auto parts = split(body.substr(dots + 2), ':');
            std::uint64_t lo = parse_u64(body.substr(0, dots));
            if (parts.empty() || parts.size() > 2) {
                throw std::invalid_argument("alphabet range must be lo..hi[:stride]");
            }
            std::uint64_t hi = parse_u64(parts[0]);
            std::uint64_t step = parts.size() == 2 ? parse_u64(parts[1]) : 1;
            if (step == 0 || hi < lo) {
                throw std::invalid_argument("bad alphabet range: " + body);
            }
            for (std::uint64_t a = lo; a <= hi; a += step) {
                letters.push_back(a);
            }
        } else {
            for (const auto& t : split(body, ',')) {
                letters.push_back(parse_u64(t));
            }
        }
        return alphabet(letters);
    }
    if (head == "custom") {
        std::vector<Mat2> gens;
        for (const auto& t : split(body, ';')) {
            auto e = split(t, ',');
            if (e.size() != 4) {
                throw std::invalid_argument("custom generator needs 4 entries: " + t);
            }
            gens.emplace_back(parse_bigint(e[0]), parse_bigint(e[1]), parse_bigint(e[2]), parse_bigint(e[3]));
        }
        return custom(std::move(gens));
    }
    throw std::invalid_argument("unknown generator spec: " + spec);
}

std::vector<Vec64> enumerate_orbit_serial(const GeneratorSet& g, Vec64 v0, std::uint64_t bound)
{
    check_root(v0, bound);
    std::unordered_set<Vec64, VecHash> seen{v0};
    std::vector<Vec64> queue{v0};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        Vec64 cur = queue[i];
        for (const auto& m : g.action()) {
            Vec64 nxt;
            if (act(m, cur, bound, nxt) && seen.insert(nxt).second) {
                queue.push_back(nxt);
            }
        }
    }
    std::sort(queue.begin(), queue.end(), by_max_then_x);
    return queue;
}

std::vector<Vec64> enumerate_orbit(const GeneratorSet& g, Vec64 v0, std::uint64_t bound, const ExecPolicy& policy)
{
    check_root(v0, bound);
    const int threads = policy.resolved_threads();
    const bool tree = g.deterministic();
    std::unordered_set<Vec64, VecHash> seen;
    if (!tree) {
        seen.insert(v0);
    }
    std::vector<Vec64> all{v0};
    std::vector<Vec64> frontier{v0};
    while (!frontier.empty()) {
        std::vector<std::vector<Vec64>> local(threads);
#pragma omp parallel num_threads(threads)
        {
            auto& out = local[omp_get_thread_num()];
#pragma omp for schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(frontier.size()); ++i) {
                for (const auto& m : g.action()) {
                    Vec64 nxt;
                    if (act(m, frontier[i], bound, nxt) && nxt != frontier[i]) {
                        out.push_back(nxt);
                    }
                }
            }
        }
        std::vector<Vec64> next;
        for (auto& l : local) {
            next.insert(next.end(), l.begin(), l.end());
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (!tree) {
            std::erase_if(next, [&](const Vec64& v) { return !seen.insert(v).second; });
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
        policy.report(all.size(), 0);
    }
    std::sort(all.begin(), all.end(), by_max_then_x);
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

namespace {

// Depth-first count for {L^p, R^q} trees: hist[i] counts points with max component in [t_{i-1}, t_i).
void count_tree(const GeneratorSet& g, Vec64 root, std::uint64_t bound, const std::vector<std::uint64_t>& thr,
                std::vector<std::uint64_t>& hist)
{
    std::vector<Vec64> stack{root};
    while (!stack.empty()) {
        Vec64 v = stack.back();
        stack.pop_back();
        std::uint64_t mx = std::max(v.first, v.second);
        hist[std::upper_bound(thr.begin(), thr.end(), mx) - thr.begin()]++;
        for (const auto& m : g.action()) {
            Vec64 nxt;
            if (act(m, v, bound, nxt) && nxt != v) {
                stack.push_back(nxt);
            }
        }
    }
}

} // namespace

std::vector<std::uint64_t> count_orbit(const GeneratorSet& g, Vec64 v0, const std::vector<std::uint64_t>& thresholds,
                                       const ExecPolicy& policy)
{
    if (thresholds.empty() || !std::is_sorted(thresholds.begin(), thresholds.end()) || thresholds.front() == 0) {
        throw DomainError("thresholds must be positive and ascending");
    }
    const std::uint64_t bound = thresholds.back() - 1;
    std::vector<std::uint64_t> counts(thresholds.size(), 0);
    if (std::max(v0.first, v0.second) > bound) {
        return counts;
    }
    // A point with max component m falls in bucket #{i : t_i <= m} and counts for every t_i > m.
    const auto& thr = thresholds;
    std::vector<std::uint64_t> hist(thresholds.size() + 1, 0);
    if (g.deterministic() && g.kind() != GenKind::Alphabet && std::gcd(v0.first, v0.second) == 1) {
        // Expand a few levels, then count subtrees in parallel.
        std::vector<Vec64> frontier{v0};
        std::vector<Vec64> counted;
        const int threads = policy.resolved_threads();
        while (!frontier.empty() && frontier.size() < static_cast<std::size_t>(64 * threads)) {
            std::vector<Vec64> next;
            for (const auto& v : frontier) {
                counted.push_back(v);
                for (const auto& m : g.action()) {
                    Vec64 nxt;
                    if (act(m, v, bound, nxt) && nxt != v) {
                        next.push_back(nxt);
                    }
                }
            }
            frontier = std::move(next);
        }
        for (const auto& v : counted) {
            hist[std::upper_bound(thr.begin(), thr.end(), std::max(v.first, v.second)) - thr.begin()]++;
        }
        std::vector<std::vector<std::uint64_t>> local(threads, std::vector<std::uint64_t>(hist.size(), 0));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(frontier.size()); ++i) {
            count_tree(g, frontier[i], bound, thr, local[omp_get_thread_num()]);
        }
        for (const auto& l : local) {
            for (std::size_t i = 0; i < hist.size(); ++i) {
                hist[i] += l[i];
            }
        }
    } else {
        for (const auto& v : enumerate_orbit(g, v0, bound, policy)) {
            hist[std::upper_bound(thr.begin(), thr.end(), std::max(v.first, v.second)) - thr.begin()]++;
        }
    }
    std::uint64_t run = 0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        run += hist[i];
        counts[i] = run;
    }
    return counts;
}

bool pullback_membership(const GeneratorSet& g, Vec64 v0, Vec64 target)
{
    if (!g.deterministic()) {
        throw DomainError("pullback membership needs a deterministic generator set (" + g.label() + ")");
    }
    auto [x, y] = target;
    if (g.kind() == GenKind::Alphabet) {
        const auto& letters = g.letters();
        auto letter = [&](std::uint64_t a) { return std::binary_search(letters.begin(), letters.end(), a); };
        for (;;) {
            if (Vec64{x, y} == v0) {
                return true;
            }
            // One step from the root: (x, y) = C_a v0 = (y0, x0 + a y0).
            if (x == v0.second) {
                if (v0.second == 0) {
                    if (y == v0.first) {
                        return true;
                    }
                } else if (y >= v0.first && (y - v0.first) % v0.second == 0 && letter((y - v0.first) / v0.second)) {
                    return true;
                }
            }
            if (x == 0) {
                return false;
            }
            std::uint64_t a = y / x;
            if (!letter(a)) {
                return false;
            }
            std::uint64_t px = y - a * x;
            y = x;
            x = px;
        }
    }
    const std::uint64_t p = g.l_power(), q = g.r_power();
    for (;;) {
        if (Vec64{x, y} == v0) {
            return true;
        }
        if (p > 0 && y > 0 && x / y >= p) {
            x -= p * y;
        } else if (q > 0 && x > 0 && y / x >= q) {
            y -= q * x;
        } else {
            return false;
        }
    }
}

std::vector<std::uint64_t> side_value_bitmap(const GeneratorSet& g, Vec64 v0, Side side, std::uint64_t bound,
                                             const ExecPolicy& policy)
{
    if (!g.deterministic() || g.kind() == GenKind::Alphabet || g.l_power() == 0 || g.r_power() == 0) {
        throw DomainError("side values need a generator set {L^p, R^q}");
    }
    if (v0.first == 0 || v0.second == 0) {
        throw DomainError("side values need a start vector with positive components");
    }
    const std::uint64_t p = g.l_power(), q = g.r_power();
    const std::uint64_t x = v0.first, y = v0.second;
    const std::size_t words = bound / 64 + 1;
    // Rows (1,0)M or (0,1)M; right multiplication by L^p, R^q acts on the row.
    auto value = [&](const Vec64& r) -> u128 { return static_cast<u128>(r.first) * x + static_cast<u128>(r.second) * y; };
    auto children = [&](const Vec64& r, auto&& emit) {
        if (r.first > 0) {
            Vec64 c{r.first, r.second + p * r.first};
            if (value(c) <= bound) {
                emit(c);
            }
        }
        if (r.second > 0) {
            Vec64 c{r.first + q * r.second, r.second};
            if (value(c) <= bound) {
                emit(c);
            }
        }
    };
    std::vector<std::uint64_t> bm(words, 0);
    auto mark = [](std::vector<std::uint64_t>& b, u128 v) {
        auto n = static_cast<std::uint64_t>(v);
        b[n >> 6] |= std::uint64_t{1} << (n & 63);
    };
    Vec64 root = side == Side::Numerator ? Vec64{1, 0} : Vec64{0, 1};
    if (value(root) > bound) {
        return bm;
    }
    const int threads = policy.resolved_threads();
    std::vector<Vec64> frontier{root};
    while (!frontier.empty() && frontier.size() < static_cast<std::size_t>(256 * threads)) {
        std::vector<Vec64> next;
        for (const auto& r : frontier) {
            mark(bm, value(r));
            children(r, [&](const Vec64& c) { next.push_back(c); });
        }
        frontier = std::move(next);
    }
    std::vector<std::vector<std::uint64_t>> local(threads);
    std::atomic<std::uint64_t> done{0};
#pragma omp parallel num_threads(threads)
    {
        auto& b = local[omp_get_thread_num()];
        b.assign(words, 0);
        std::vector<Vec64> stack;
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(frontier.size()); ++i) {
            stack.push_back(frontier[i]);
            while (!stack.empty()) {
                Vec64 r = stack.back();
                stack.pop_back();
                mark(b, value(r));
                children(r, [&](const Vec64& c) { stack.push_back(c); });
            }
            std::uint64_t d = ++done;
            if (omp_get_thread_num() == 0) {
                policy.report(d, frontier.size());
            }
        }
    }
    for (const auto& b : local) {
        for (std::size_t i = 0; i < words; ++i) {
            bm[i] |= b[i];
        }
    }
    return bm;
}

ResidueImage::ResidueImage(std::uint64_t modulus, std::vector<std::uint64_t> keys) : m_(modulus), keys_(std::move(keys))
{
    std::sort(keys_.begin(), keys_.end());
}

std::uint64_t ResidueImage::encode(const SmallMat& r) const
{
    auto md = [this](std::int64_t v) {
        auto m = static_cast<std::int64_t>(m_);
        return static_cast<std::uint64_t>(((v % m) + m) % m);
    };
    return ((md(r[0]) * m_ + md(r[1])) * m_ + md(r[2])) * m_ + md(r[3]);
}

SmallMat ResidueImage::decode(std::uint64_t key) const
{
    SmallMat r;
    for (int i = 3; i >= 0; --i) {
        r[i] = static_cast<std::int64_t>(key % m_);
        key /= m_;
    }
    return r;
}

bool ResidueImage::contains(const SmallMat& r) const { return std::binary_search(keys_.begin(), keys_.end(), encode(r)); }

ResidueImage congruence_closure(const GeneratorSet& g, std::uint64_t m)
{
    if (m < 2 || m > 65535) {
        throw DomainError("modulus must lie in [2, 65535]");
    }
    ResidueImage coder(m, {});
    const auto mi = static_cast<std::int64_t>(m);
    std::vector<IMat2> gens;
    for (const auto& a : g.action()) {
        gens.push_back(IMat2{{a[0] % mi, a[1] % mi, a[2] % mi, a[3] % mi}});
    }
    IMat2 id;
    std::unordered_set<std::uint64_t> seen{coder.encode(id.e)};
    std::vector<IMat2> work{id};
    for (std::size_t i = 0; i < work.size(); ++i) {
        for (const auto& gm : gens) {
            IMat2 nxt = work[i].mul_mod(gm, mi);
            if (seen.insert(coder.encode(nxt.e)).second) {
                work.push_back(nxt);
            }
        }
    }
    return ResidueImage(m, std::vector<std::uint64_t>(seen.begin(), seen.end()));
}

std::vector<std::uint64_t> orbit_residues(const GeneratorSet& g, Vec64 v0, std::uint64_t m, Side side)
{
    ResidueImage img = congruence_closure(g, m);
    std::vector<bool> hit(m, false);
    const std::uint64_t x = v0.first % m, y = v0.second % m;
    for (auto key : img.keys()) {
        SmallMat r = img.decode(key);
        std::uint64_t v = side == Side::Numerator ? static_cast<std::uint64_t>(r[0]) * x + static_cast<std::uint64_t>(r[1]) * y
                                                  : static_cast<std::uint64_t>(r[2]) * x + static_cast<std::uint64_t>(r[3]) * y;
        hit[v % m] = true;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < m; ++i) {
        if (hit[i]) {
            out.push_back(i);
        }
    }
    return out;
}

std::uint64_t sl2_order_pow2(unsigned k)
{
    if (k == 0) {
        return 1;
    }
    std::uint64_t n = 6;
    for (unsigned i = 1; i < k; ++i) {
        n *= 8;
    }
    return n;
}

bool strong_approx_verify(const GeneratorSet& g, unsigned e, unsigned kmax)
{
    if (g.kind() != GenKind::Psi1 && g.kind() != GenKind::Psi2) {
        throw DomainError("strong approximation check supports psi1 and psi2 only");
    }
    if (e < 1 || kmax <= e || kmax > 7) {
        throw DomainError("need 1 <= e < kmax <= 7");
    }
    const std::uint64_t base = congruence_closure(g, std::uint64_t{1} << e).size();
    for (unsigned k = e + 1; k <= kmax; ++k) {
        const std::uint64_t img = congruence_closure(g, std::uint64_t{1} << k).size();
        if (static_cast<u128>(img) * sl2_order_pow2(e) != static_cast<u128>(base) * sl2_order_pow2(k)) {
            return false;
        }
    }
    return true;
}

WitnessCheck psi_generator_witness(std::uint64_t k)
{
    std::vector<Letter> letters{Letter::R};
    letters.insert(letters.end(), 4 * k, Letter::L);
    letters.insert(letters.end(), 3, Letter::R);
    WitnessCheck w;
    Mat2 prefix;
    w.no_prefix_in_gamma1_4 = true;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        prefix = prefix * (letters[i] == Letter::L ? Mat2::L() : Mat2::R());
        if (i + 1 < letters.size()) {
            ++w.prefixes_checked;
            if (prefix.in_gamma1_4()) {
                w.no_prefix_in_gamma1_4 = false;
            }
        }
    }
    w.m = prefix;
    w.psi_member = psi_member(prefix);
    return w;
}

GroupMat parse_group_word(const std::string& word)
{
    GroupMat g;
    std::istringstream is(word);
    std::string tok;
    while (is >> tok) {
        if (tok[0] != 'L' && tok[0] != 'R') {
            throw std::invalid_argument("bad letter in group word: " + tok);
        }
        std::int64_t e = 1;
        if (tok.size() > 1) {
            if (tok[1] != '^') {
                throw std::invalid_argument("bad letter in group word: " + tok);
            }
            try {
                std::size_t used = 0;
                e = std::stoll(tok.substr(2), &used);
                if (used != tok.size() - 2) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::exception&) {
                throw std::invalid_argument("bad exponent in group word: " + tok);
            }
        }
        g = g * (tok[0] == 'L' ? GroupMat::L(e) : GroupMat::R(e));
    }
    return g;
}

std::pair<BigInt, BigInt> apply(const GroupMat& g, const BigInt& x, const BigInt& y)
{
    return {g.a * x + g.b * y, g.c * x + g.d * y};
}

} // namespace semiorbit
