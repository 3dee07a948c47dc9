#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mmac/analytics.hpp"
#include "mmac/numerics.hpp"
#include "mmac/rate_region.hpp"
#include "mmac/simulate.hpp"

namespace {

mmac::SystemConfig detection(int n) {
    mmac::SystemConfig c;
    c.snr = 100.0;
    c.rho = 0.5;
    c.channel = {std::sqrt(0.2), std::nullopt};
    c.n = n;
    c.tag = mmac::TagConstellation::on_off();
    return c;
}

void BM_MarcumQ1(benchmark::State& state) {
    double b = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmac::numerics::marcum_q1(6.0, b));
        b = b < 12.0 ? b + 0.01 : 1.0;
    }
}
BENCHMARK(BM_MarcumQ1);

void BM_MIntegral(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmac::m_integral(10.0, 0.3));
    }
}
BENCHMARK(BM_MIntegral);

void BM_ThresholdBisection(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmac::threshold_lambda(static_cast<double>(state.range(0))));
    }
}
BENCHMARK(BM_ThresholdBisection)->Arg(1)->Arg(20)->Arg(100);

// One batch of tag-bit trials through the full receiver.
void BM_BerBatch(benchmark::State& state) {
    const mmac::SystemConfig c = detection(static_cast<int>(state.range(0)));
    mmac::RunOptions opts;
    opts.threads = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmac::run_ber_x2(c, 0.0, mmac::TagStrategy::full, mmac::kBatchFrames, seed++, opts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mmac::kBatchFrames));
}
BENCHMARK(BM_BerBatch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SumRateExact(benchmark::State& state) {
    mmac::SystemConfig c;
    c.snr = 10.0;
    c.rho = 0.5;
    c.n = static_cast<int>(state.range(0));
    c.channel = {std::sqrt(0.1), std::numbers::pi / 4};
    c.tag = mmac::TagConstellation::bpsk();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmac::sum_rate_exact(c));
    }
}
BENCHMARK(BM_SumRateExact)->Arg(1)->Arg(8)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
