#include <benchmark/benchmark.h>

#include <numeric>

#include "fractalis/hurst.hpp"
#include "fractalis/stats.hpp"
#include "fractalis/synth.hpp"

using namespace fractalis;

namespace {

ReturnSeries daily(std::vector<double> v) {
    ReturnSeries r;
    r.asset_id = "B";
    for (std::size_t i = 0; i < v.size(); ++i) r.points.push_back({make_date(2020, 1, 1) + std::chrono::days{i}, v[i]});
    return r;
}

void BM_RsCurve(benchmark::State& state) {
    const auto x = white_noise(static_cast<std::size_t>(state.range(0)), 1.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(rs_curve(x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RsCurve)->RangeMultiplier(8)->Range(1 << 10, 1 << 17);

void BM_RsCurveHarmonic(benchmark::State& state) {
    const auto x = white_noise(static_cast<std::size_t>(state.range(0)), 1.0, 1);
    const PartitionPolicy policy{PartitionKind::Harmonic};
    for (auto _ : state) benchmark::DoNotOptimize(rs_curve(x, policy));
}
BENCHMARK(BM_RsCurveHarmonic)->Arg(1 << 10)->Arg(1 << 13);

void BM_Fgn(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(fgn(n, 0.7, 1.0, seed++));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fgn)->RangeMultiplier(8)->Range(1 << 10, 1 << 17);

void BM_AdfDefaultLag(benchmark::State& state) {
    const auto x = white_noise(static_cast<std::size_t>(state.range(0)), 1.0, 2);
    for (auto _ : state) benchmark::DoNotOptimize(adf_test(x));
}
BENCHMARK(BM_AdfDefaultLag)->Arg(919)->Arg(22019)->Arg(88060);

void BM_RollingHurst(benchmark::State& state) {
    const auto r = daily(white_noise(static_cast<std::size_t>(state.range(0)), 1.0, 3));
    for (auto _ : state) benchmark::DoNotOptimize(rolling_hurst(r, 150, 1));
}
BENCHMARK(BM_RollingHurst)->Arg(919)->Arg(5000);

void BM_JarqueBera(benchmark::State& state) {
    const auto x = white_noise(static_cast<std::size_t>(state.range(0)), 1.0, 4);
    for (auto _ : state) benchmark::DoNotOptimize(jarque_bera(x));
}
BENCHMARK(BM_JarqueBera)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
