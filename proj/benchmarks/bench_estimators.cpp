#include <benchmark/benchmark.h>

#include "nestdop/array_design.hpp"
#include "nestdop/coarray.hpp"
#include "nestdop/estimators.hpp"
#include "nestdop/signal_model.hpp"

using namespace nestdop;

namespace {

EmissionPattern optimal_pattern(int p) {
  const auto opt = optimal_nested(p);
  return build_nested(opt.n1, opt.n2);
}

const ToneSet kTones({{0.12, 1.0}, {0.15, 0.5}, {-0.2, 0.25}});

CoarraySignal sample_coarray(int p) {
  const auto pat = optimal_pattern(p);
  return lag_average(estimate_covariance(generate_snapshots(kTones, pat, 33, 0.02, 1), true), pat);
}

void BM_DifferenceSet(benchmark::State& state) {
  const auto pat = optimal_pattern(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(difference_set(pat));
}

void BM_GenerateSnapshots(benchmark::State& state) {
  const auto pat = optimal_pattern(static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_snapshots(kTones, pat, 33, 0.02, ++seed));
}

void BM_LagAverage(benchmark::State& state) {
  const auto pat = optimal_pattern(static_cast<int>(state.range(0)));
  const auto cov = estimate_covariance(generate_snapshots(kTones, pat, 33, 0.02, 1), true);
  for (auto _ : state) benchmark::DoNotOptimize(lag_average(cov, pat));
}

void BM_Nest(benchmark::State& state) {
  const auto z = sample_coarray(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nest(z, 0.05));
}

void BM_Nesprit(benchmark::State& state) {
  const auto z = sample_coarray(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nesprit(z, 20.0));
}

void BM_Welch(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto snaps = generate_snapshots(kTones, standard_pattern(p), 33, 0.02, 1);
  for (auto _ : state) benchmark::DoNotOptimize(welch(snaps, WelchOptions{}));
}

}  // namespace

BENCHMARK(BM_DifferenceSet)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_GenerateSnapshots)->Arg(64)->Arg(256);
BENCHMARK(BM_LagAverage)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Nest)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Nesprit)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Welch)->Arg(64)->Arg(256);
BENCHMARK_MAIN();
