#include <benchmark/benchmark.h>

#include "kext/seedsearch.hpp"

using namespace kext;

namespace {

struct ScanFixture {
  Generator g;
  SearchParams params;
  Systems systems;

  ScanFixture() : g{greedy_design(16, 4, 2, 128), Predicate::parity()} {
    params.n = 3;
    params.m = 2;
    params.s = 3;
    params.k = 2;
    params.q = 1;
    params.l_max = 6;
    params.mode = SearchMode::Plain;
    LevelSet s;
    s.n = 3;
    s.level = 4;
    s.members = {0, 1, 2};
    systems.s.pairs.push_back(s);
    s.level = 6;
    s.members = {0, 1, 2, 3, 4, 5, 6};
    systems.s.pairs.push_back(s);
    Palette p;
    p.m = 2;
    p.level = 1;
    p.colours = {0};
    systems.q.palettes.push_back(p);
  }
};

}  // namespace

static void SeedGoodness(benchmark::State& state) {
  ScanFixture f;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    bool good = seed_is_good(f.g, seed++ & 0xffff, f.params, f.systems);
    benchmark::DoNotOptimize(good);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(SeedGoodness);

static void TableFromSeedStreamed(benchmark::State& state) {
  ScanFixture f;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Table t = table_from_seed_streamed(f.g, seed++ & 0xffff, 3, 2);
    benchmark::DoNotOptimize(t.colours().data());
  }
}
BENCHMARK(TableFromSeedStreamed);

static void ScanRange(benchmark::State& state) {
  ScanFixture f;
  f.params.seed_begin = 0;
  f.params.seed_end = 1 << 12;
  f.params.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    GoodSeedReport r = find_good_seed(f.g, f.params, f.systems);
    benchmark::DoNotOptimize(r.seeds_checked);
  }
  state.SetItemsProcessed(state.iterations() * (1 << 12));
}
BENCHMARK(ScanRange)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
