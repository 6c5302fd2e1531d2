#include "semiorbit/cf_search.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <numeric>

#include <fcntl.h>
#include <omp.h>
#include <unistd.h>

#include "json.hpp"

#include "semiorbit/bigint.hpp"

namespace semiorbit {

namespace {

using Bitmap = std::vector<std::uint64_t>;

inline void mark(Bitmap& bm, std::uint64_t v) { bm[v >> 6] |= std::uint64_t{1} << (v & 63); }

std::uint64_t root_count(std::uint64_t bound) { return bound >= 5 ? (bound - 2) / 3 : 0; }

bool is_root(std::uint64_t u, std::uint64_t v) { return u == 3 && v >= 5 && v % 3 == 2; }

// Marks the denominators of the subtree rooted at (u, v).
void dfs(std::uint64_t u, std::uint64_t v, std::uint64_t bound, Bitmap& bm, std::vector<std::pair<std::uint64_t, std::uint64_t>>& stack)
{
    stack.clear();
    stack.emplace_back(u, v);
    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        mark(bm, q);
        for (std::uint64_t w = p + 4 * q; w <= bound && w >= p; w += 4 * q) {
            stack.emplace_back(q, w);
        }
    }
}

void check_bound(std::uint64_t bound)
{
    if (bound < 5) {
        throw DomainError("search bound must be at least 5");
    }
}

struct Task {
    std::uint64_t v;      // root denominator
    std::uint64_t a_lo;   // first-level multipliers a in [a_lo, a_hi]
    std::uint64_t a_hi;
};

void write_all(int fd, const void* data, std::size_t len, const std::string& path)
{
    const char* p = static_cast<const char*>(data);
    while (len > 0) {
        ssize_t n = ::write(fd, p, len);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw std::runtime_error("write failed for " + path + ": " + std::strerror(errno));
        }
        p += n;
        len -= static_cast<std::size_t>(n);
    }
}

// Writes via a temporary file, fsyncs, then renames over the target.
void durable_write(const std::string& path, const void* data, std::size_t len)
{
    std::string tmp = path + ".tmp";
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) {
        throw std::runtime_error("cannot open " + tmp + ": " + std::strerror(errno));
    }
    try {
        write_all(fd, data, len, tmp);
        if (::fsync(fd) != 0) {
            throw std::runtime_error("fsync failed for " + tmp);
        }
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

nlohmann::ordered_json manifest_object(const SearchManifest& m)
{
    nlohmann::ordered_json j;
    j["schema_version"] = kManifestSchema;
    j["bound"] = m.bound;
    j["complete"] = m.complete;
    j["roots_total"] = m.roots_total;
    j["roots_completed"] = m.roots_completed;
    j["squares_marked"] = m.squares_marked;
    auto rows = nlohmann::ordered_json::array();
    for (int c = 0; c < 4; ++c) {
        nlohmann::ordered_json r;
        r["d_mod_4"] = c;
        r["found"] = m.classes[c].found;
        r["total_missing"] = m.classes[c].missing;
        r["largest_missing"] = m.classes[c].largest_missing;
        r["squares_missing"] = m.classes[c].squares_missing;
        rows.push_back(r);
    }
    j["classes"] = rows;
    return j;
}

void save_checkpoint(const std::string& path, const SearchManifest& m)
{
    durable_write(path + ".bitmap", m.bitmap.data(), m.bitmap.size() * sizeof(std::uint64_t));
    auto j = manifest_object(m);
    j["bitmap_words"] = m.bitmap.size();
    std::string text = j.dump(2) + "\n";
    durable_write(path, text.data(), text.size());
}

void run(SearchManifest& m, const CfSearchOptions& opts)
{
    const std::uint64_t bound = m.bound;
    const int threads = opts.policy.resolved_threads();
    const std::uint64_t batch = std::max<std::uint64_t>(1, opts.batch_roots);
    std::uint64_t stop = m.roots_total;
    if (opts.max_roots > 0) {
        stop = std::min(stop, m.roots_completed + opts.max_roots);
    }
    std::vector<Bitmap> local(threads);
    const auto interval = std::chrono::duration<double>(opts.checkpoint_interval_s);
    auto last_save = std::chrono::steady_clock::now();
    while (m.roots_completed < stop) {
        const std::uint64_t k_lo = m.roots_completed + 1;
        const std::uint64_t k_hi = std::min(stop, m.roots_completed + batch);
        std::vector<Task> tasks;
        constexpr std::uint64_t kChunk = 256;
        for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
            const std::uint64_t v = 3 * k + 2;
            mark(m.bitmap, v);
            if (bound < 3 + 4 * v) {
                continue;
            }
            const std::uint64_t a_max = (bound - 3) / (4 * v);
            for (std::uint64_t a = 1; a <= a_max; a += kChunk) {
                tasks.push_back(Task{v, a, std::min(a_max, a + kChunk - 1)});
            }
        }
#pragma omp parallel num_threads(threads)
        {
            auto& bm = local[omp_get_thread_num()];
            if (bm.size() != m.bitmap.size()) {
                bm.assign(m.bitmap.size(), 0);
            }
            std::vector<std::pair<std::uint64_t, std::uint64_t>> stack;
#pragma omp for schedule(dynamic, 1)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
                const Task& t = tasks[i];
                for (std::uint64_t a = t.a_lo; a <= t.a_hi; ++a) {
                    dfs(t.v, 3 + 4 * a * t.v, bound, bm, stack);
                }
            }
        }
        for (auto& bm : local) {
            for (std::size_t i = 0; i < bm.size(); ++i) {
                m.bitmap[i] |= bm[i];
            }
            std::fill(bm.begin(), bm.end(), 0);
        }
        m.roots_completed = k_hi;
        m.complete = m.roots_completed == m.roots_total;
        const auto now = std::chrono::steady_clock::now();
        if (!opts.checkpoint.empty() && (m.roots_completed == stop || now - last_save >= interval)) {
            m.finalize();
            save_checkpoint(opts.checkpoint, m);
            last_save = now;
        }
        opts.policy.report(m.roots_completed, m.roots_total);
    }
    m.complete = m.roots_completed == m.roots_total;
    m.finalize();
}

SearchManifest fresh(std::uint64_t bound)
{
    SearchManifest m;
    m.bound = bound;
    m.roots_total = root_count(bound);
    m.bitmap.assign(bound / 64 + 1, 0);
    return m;
}

} // namespace

std::vector<std::uint64_t> SearchManifest::missing() const
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 1; v <= bound; ++v) {
        if (!marked(v)) {
            out.push_back(v);
        }
    }
    return out;
}

void SearchManifest::finalize()
{
    classes = {};
    squares_marked = 0;
    std::uint64_t r = 1; // next square root candidate
    for (std::uint64_t v = 1; v <= bound; ++v) {
        bool sq = r * r == v;
        if (sq) {
            ++r;
        }
        ClassStats& c = classes[v % 4];
        if (marked(v)) {
            ++c.found;
            squares_marked += sq ? 1 : 0;
        } else if (sq) {
            ++c.squares_missing;
        } else {
            ++c.missing;
            c.largest_missing = v;
        }
    }
}

SearchManifest search_missing_denominators(std::uint64_t bound, const CfSearchOptions& opts)
{
    check_bound(bound);
    SearchManifest m = fresh(bound);
    run(m, opts);
    return m;
}

SearchManifest search_missing_denominators_serial(std::uint64_t bound)
{
    check_bound(bound);
    SearchManifest m = fresh(bound);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> stack;
    for (std::uint64_t k = 1; k <= m.roots_total; ++k) {
        dfs(3, 3 * k + 2, bound, m.bitmap, stack);
    }
    m.roots_completed = m.roots_total;
    m.complete = true;
    m.finalize();
    return m;
}

SearchManifest checkpoint_resume(const std::string& path, std::uint64_t bound, const CfSearchOptions& opts)
{
    check_bound(bound);
    CfSearchOptions o = opts;
    o.checkpoint = path;
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in.good() && text.empty()) {
        return search_missing_denominators(bound, o);
    }
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return search_missing_denominators(bound, o);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw CheckpointError("corrupt checkpoint " + path + ": " + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"] != kManifestSchema) {
        throw CheckpointError("checkpoint schema version mismatch in " + path);
    }
    if (j.value("bound", std::uint64_t{0}) != bound) {
        throw CheckpointError("checkpoint bound " + j["bound"].dump() + " differs from requested bound");
    }
    SearchManifest m = fresh(bound);
    m.roots_completed = j.value("roots_completed", std::uint64_t{0});
    if (m.roots_completed > m.roots_total || j.value("bitmap_words", std::uint64_t{0}) != m.bitmap.size()) {
        throw CheckpointError("checkpoint is inconsistent with bound " + std::to_string(bound));
    }
    std::ifstream bin(path + ".bitmap", std::ios::binary);
    bin.read(reinterpret_cast<char*>(m.bitmap.data()), static_cast<std::streamsize>(m.bitmap.size() * sizeof(std::uint64_t)));
    if (bin.gcount() != static_cast<std::streamsize>(m.bitmap.size() * sizeof(std::uint64_t))) {
        throw CheckpointError("checkpoint bitmap is truncated: " + path + ".bitmap");
    }
    run(m, o);
    return m;
}

bool tail_chain_member(std::uint64_t u, std::uint64_t v)
{
    for (;;) {
        if (is_root(u, v)) {
            return true;
        }
        if (u == 0 || u >= v) {
            return false;
        }
        std::uint64_t a = v / u;
        if (a % 4 != 0) {
            return false;
        }
        std::uint64_t p = v - a * u;
        v = u;
        u = p;
    }
}

namespace {

// Visits candidate numerators u of v: u = 3 for a root, then u with floor(v/u) in 4Z+.
// A non-root pair (u, v) descends to (p, u) with p = v - a u, which is a root (p = 3)
// or descends again only when p <= u/4. Pairs with gcd(u, v) > 1 never reach a root.
template <class F>
bool for_each_candidate(std::uint64_t v, F&& f)
{
    if (is_root(3, v) && f(std::uint64_t{3})) {
        return true;
    }
    const std::uint64_t s = isqrt(v);
    for (std::uint64_t u = 4; u <= s; ++u) {
        const std::uint64_t a = v / u;
        if (a % 4 != 0) {
            continue;
        }
        const std::uint64_t p = v - a * u;
        if ((p == 3 || 4 * p <= u) && f(u)) {
            return true;
        }
    }
    // For u > s, floor(v/u) = a  <=>  v/(a+1) < u <= v/a; and p <= u/4  <=>  u >= 4v/(4a+1).
    for (std::uint64_t a = 4; a <= v / (s + 1); a += 4) {
        const std::uint64_t hi = v / a;
        const std::uint64_t lo = std::max(v / (a + 1) + 1, s + 1);
        const std::uint64_t lo4 = std::max(lo, (4 * v + 4 * a) / (4 * a + 1));
        for (std::uint64_t u = lo4; u <= hi; ++u) {
            if (f(u)) {
                return true;
            }
        }
        if (v >= 3 && (v - 3) % a == 0) {
            const std::uint64_t u = (v - 3) / a;
            if (u >= lo && u < lo4 && f(u)) {
                return true;
            }
        }
    }
    return false;
}

} // namespace

std::vector<std::uint64_t> missing_by_pullback(std::uint64_t bound, const ExecPolicy& policy)
{
    check_bound(bound);
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t blocks = bound / kBlock + 1;
    std::vector<std::vector<std::uint64_t>> parts(blocks);
    std::atomic<std::uint64_t> done{0};
#pragma omp parallel for schedule(dynamic, 1) num_threads(policy.resolved_threads())
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(b) * kBlock);
        const std::uint64_t hi = std::min(bound, (static_cast<std::uint64_t>(b) + 1) * kBlock - 1);
        for (std::uint64_t v = lo; v <= hi; ++v) {
            if (!for_each_candidate(v, [v](std::uint64_t u) { return tail_chain_member(u, v); })) {
                parts[b].push_back(v);
            }
        }
        std::uint64_t d = ++done;
        if (omp_get_thread_num() == 0) {
            policy.report(d, blocks);
        }
    }
    std::vector<std::uint64_t> out;
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::optional<ContinuedFraction> find_certificate(std::uint64_t v)
{
    std::uint64_t hit = 0;
    if (!for_each_candidate(v, [&](std::uint64_t u) {
            if (tail_chain_member(u, v)) {
                hit = u;
                return true;
            }
            return false;
        })) {
        return std::nullopt;
    }
    ContinuedFraction cf;
    cf.a0 = 0;
    std::uint64_t u = hit, w = v;
    while (!is_root(u, w)) {
        std::uint64_t a = w / u;
        cf.coeffs.push_back(from_u64(a));
        std::uint64_t p = w - a * u;
        w = u;
        u = p;
    }
    cf.coeffs.push_back(from_u64((w - 2) / 3));
    cf.coeffs.push_back(1);
    cf.coeffs.push_back(2);
    return cf;
}

std::string manifest_json(const SearchManifest& m, int indent) { return manifest_object(m).dump(indent); }

} // namespace semiorbit
