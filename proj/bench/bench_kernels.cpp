// Serial reference vs OpenMP versions of the evaluation kernels.

#include <benchmark/benchmark.h>

#include <map>

#include "gapidx/kernels.hpp"
#include "gapidx/mdl.hpp"
#include "gapidx/synthetic.hpp"

namespace {

using namespace gapidx;

struct Fixture {
  Dataset ds;
  AnyIndex index;
  std::vector<Key> queries;

  explicit Fixture(std::size_t n) {
    ds = generate_synthetic({SyntheticKind::piecewise_linear, n, 10, 16, 1});
    index = fit_optimal_pla(ds.pairs(), 64);
    queries = sample_query_keys(ds, n, 2);
  }
};

const Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

void BM_ErrorStatsSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::error_stats_serial(f.index, f.ds.keys()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ErrorStatsParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::error_stats(f.index, f.ds.keys()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LookupsSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::verify_lookups_serial(f.index, f.ds.keys(), f.queries));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LookupsParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::verify_lookups(f.index, f.ds.keys(), f.queries));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_ErrorStatsSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ErrorStatsParallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_LookupsSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_LookupsParallel)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
