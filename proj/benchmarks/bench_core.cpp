#include <benchmark/benchmark.h>

#include "twdp/estimators.hpp"
#include "twdp/moments.hpp"
#include "twdp/pdf.hpp"
#include "twdp/perf.hpp"
#include "twdp/sampler.hpp"

namespace {

const twdp::GammaParams kPoint{5.0, 0.5, 1.0};

void BM_EvenMoment(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(twdp::even_moment(order, kPoint));
    }
}
BENCHMARK(BM_EvenMoment)->Arg(6)->Arg(12)->Arg(40);

void BM_EnvelopePdf(benchmark::State& state) {
    double r = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(twdp::envelope_pdf(r, kPoint));
        r = r < 2.0 ? r + 0.01 : 0.1;
    }
}
BENCHMARK(BM_EnvelopePdf);

void BM_Generate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto s = twdp::generate(kPoint, n, ++seed);
        benchmark::DoNotOptimize(s.values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(10'000)->Arg(100'000);

void BM_EstimateJoint(benchmark::State& state) {
    const auto samples = twdp::generate(kPoint, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(twdp::estimate_joint(samples));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateJoint)->Arg(10'000);

void BM_Asv(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(twdp::asv(kPoint));
    }
}
BENCHMARK(BM_Asv);

void BM_FisherMatrix(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(twdp::fisher_matrix(kPoint));
    }
    state.SetLabel("joint 3x3");
}
BENCHMARK(BM_FisherMatrix)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
