#include <benchmark/benchmark.h>

#include "primerace/densities.hpp"
#include "primerace/lfunc.hpp"
#include "primerace/sieve.hpp"
#include "primerace/zeros.hpp"

using namespace primerace;

namespace {

void BM_HurwitzZeta(benchmark::State& state) {
  const Complex s(0.5, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hurwitz_zeta(s, 0.25));
}
BENCHMARK(BM_HurwitzZeta)->Arg(10)->Arg(1000)->Arg(5000);

void BM_CompletedReal(benchmark::State& state) {
  const Character chi(12, 12);
  const CriticalLineEvaluator z(chi, 5000.0);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(z(t));
}
BENCHMARK(BM_CompletedReal)->Arg(100)->Arg(2000)->Arg(5000);

void BM_FindZeros(benchmark::State& state) {
  const Character chi(-4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(find_zeros(chi, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_FindZeros)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PrimeCount(benchmark::State& state) {
  SieveOptions opt;
  opt.workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(prime_count(static_cast<std::uint64_t>(state.range(0)), opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PrimeCount)->Args({10'000'000, 1})->Args({100'000'000, 1})->Args({100'000'000, 4})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void BM_ModelSamples(benchmark::State& state) {
  static const ZeroCatalog catalog = [] {
    ZeroCatalog c;
    for (std::int64_t d : {-4, 8}) c.add(find_zeros(Character(d, std::abs(d)), 1000.0));
    return c;
  }();
  const RaceModel m = build_two_way(8, 3, catalog, 1000.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_values(m, 0, n, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ModelSamples)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
