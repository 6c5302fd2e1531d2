#include <benchmark/benchmark.h>

#include "semiorbit/analytic_f.hpp"
#include "semiorbit/cf_search.hpp"
#include "semiorbit/psi_orbit.hpp"
#include "semiorbit/semigroups.hpp"

using namespace semiorbit;

namespace {

ExecPolicy threads(const benchmark::State& st)
{
    ExecPolicy p;
    p.threads = static_cast<int>(st.range(0));
    return p;
}

void BM_OrbitMissingSerial(benchmark::State& st)
{
    for (auto _ : st) {
        benchmark::DoNotOptimize(orbit_missing_serial(2, 3, Side::Numerator, 1000000));
    }
}

void BM_OrbitMissingParallel(benchmark::State& st)
{
    const ExecPolicy p = threads(st);
    for (auto _ : st) {
        benchmark::DoNotOptimize(orbit_missing(2, 3, Side::Numerator, 1000000, p));
    }
}

void BM_EnumerateSerial(benchmark::State& st)
{
    for (auto _ : st) {
        benchmark::DoNotOptimize(enumerate_orbit_serial(GeneratorSet::psi1(), {1, 1}, 20000));
    }
}

void BM_EnumerateParallel(benchmark::State& st)
{
    const ExecPolicy p = threads(st);
    for (auto _ : st) {
        benchmark::DoNotOptimize(enumerate_orbit(GeneratorSet::psi1(), {1, 1}, 20000, p));
    }
}

void BM_CfSearchSerial(benchmark::State& st)
{
    for (auto _ : st) {
        benchmark::DoNotOptimize(search_missing_denominators_serial(1000000));
    }
}

void BM_CfSearchParallel(benchmark::State& st)
{
    CfSearchOptions o;
    o.policy = threads(st);
    for (auto _ : st) {
        benchmark::DoNotOptimize(search_missing_denominators(1000000, o));
    }
}

void BM_PvSamples(benchmark::State& st)
{
    const std::vector<std::uint64_t> samples{3410001, 3410003, 3410005, 3410007};
    const ExecPolicy p = threads(st);
    for (auto _ : st) {
        benchmark::DoNotOptimize(verify_pv_bound(samples, p));
    }
}

} // namespace

BENCHMARK(BM_OrbitMissingSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrbitMissingParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CfSearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CfSearchParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PvSamples)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
