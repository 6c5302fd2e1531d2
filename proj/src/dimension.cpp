#include "semiorbit/dimension.hpp"

#include <algorithm>
#include <cmath>

namespace semiorbit {

std::vector<std::uint64_t> geometric_thresholds(std::uint64_t lo, std::uint64_t hi, std::size_t points)
{
    if (lo < 1 || hi < lo || points < 1) {
        throw DomainError("need 1 <= lo <= hi and at least one point");
    }
    std::vector<std::uint64_t> out;
    const double ratio = points > 1 ? std::log(static_cast<double>(hi) / lo) / (points - 1) : 0;
    for (std::size_t i = 0; i < points; ++i) {
        auto t = static_cast<std::uint64_t>(std::llround(lo * std::exp(ratio * i)));
        out.push_back(std::clamp(t, lo, hi));
    }
    out.back() = hi;
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> default_thresholds(std::uint64_t nmax, std::size_t points)
{
    return geometric_thresholds(std::max<std::uint64_t>(2, nmax / 100), nmax, points);
}

CountingSeries orbit_count(const GeneratorSet& g, Vec64 v0, const std::vector<std::uint64_t>& thresholds,
                           const ExecPolicy& policy)
{
    CountingSeries s;
    s.thresholds = thresholds;
    for (auto c : count_orbit(g, v0, thresholds, policy)) {
        s.counts.push_back(static_cast<double>(c));
    }
    return s;
}

DimensionEstimate estimate_dimension(const CountingSeries& series, double drop_fraction)
{
    const std::size_t n = series.thresholds.size();
    if (n < 3 || series.counts.size() != n) {
        throw DomainError("dimension estimate needs at least three (N, count) points");
    }
    if (drop_fraction < 0 || drop_fraction >= 1) {
        throw DomainError("drop fraction must lie in [0, 1)");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (series.counts[i] < 1 || series.thresholds[i] < 1) {
            throw DomainError("counts and thresholds must be at least 1");
        }
        if (i > 0 && series.thresholds[i] <= series.thresholds[i - 1]) {
            throw DomainError("thresholds must be strictly ascending");
        }
    }
    std::size_t skip = static_cast<std::size_t>(std::floor(drop_fraction * n));
    skip = std::min(skip, n - 3);
    std::vector<double> xs, ys;
    for (std::size_t i = skip; i < n; ++i) {
        xs.push_back(std::log(static_cast<double>(series.thresholds[i])));
        ys.push_back(std::log(series.counts[i]));
    }
    if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
        throw DomainError("degenerate series: counts are constant");
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (my + slope * (xs[i] - mx));
        ssr += r * r;
    }
    DimensionEstimate e;
    e.delta = slope / 2;
    e.stderr_delta = std::sqrt(ssr / (m - 2) / sxx) / 2;
    e.r_squared = syy > 0 ? 1 - ssr / syy : 1;
    e.intercept = my - slope * mx;
    e.points_used = xs.size();
    return e;
}

} // namespace semiorbit
