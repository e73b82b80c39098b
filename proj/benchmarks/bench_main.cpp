#include <benchmark/benchmark.h>

#include <cmath>

#include "ehm/birkhoff.hpp"
#include "ehm/cocycle.hpp"
#include "ehm/spectral.hpp"

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

void BM_BirkhoffSup(benchmark::State& state) {
  const ehm::AnalyticTorusFunction f = ehm::sine_series({{1, 1.0}, {2, 0.5}, {3, 0.25}});
  for (auto _ : state) benchmark::DoNotOptimize(ehm::birkhoff_sup(f, kGolden, state.range(0)));
}
BENCHMARK(BM_BirkhoffSup)->Arg(89)->Arg(987)->Arg(10946);

void BM_ApproximantSpectrum(benchmark::State& state) {
  const ehm::CouplingTriple l(0.3, 0.7, 0.5);
  const std::int64_t q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(ehm::approximant_spectrum(l, q / 2 + 1 - (q % 2 == 0), q, 32, 8));
}
BENCHMARK(BM_ApproximantSpectrum)->Arg(13)->Arg(34)->Arg(55)->Unit(benchmark::kMillisecond);

void BM_Lyapunov(benchmark::State& state) {
  const ehm::CouplingTriple l(0.2, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ehm::lyapunov(l, 0.3, kGolden, state.range(0), 4));
}
BENCHMARK(BM_Lyapunov)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_TruncatedEigensystem(benchmark::State& state) {
  const ehm::CouplingTriple l(0.1, 0.4, 0.2);
  const ehm::Phase theta = ehm::Phase::generic(0.1234);
  for (auto _ : state)
    benchmark::DoNotOptimize(ehm::truncated_eigensystem(l, kGolden, theta, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TruncatedEigensystem)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
