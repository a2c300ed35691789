#include <benchmark/benchmark.h>

#include "kext/balance.hpp"
#include "kext/sampling.hpp"

using namespace kext;

namespace {

LevelSet set_of(int n, int level, std::vector<std::uint32_t> members) {
  LevelSet s;
  s.n = n;
  s.level = level;
  s.members = std::move(members);
  return s;
}

Palette palette_of(int m, int level, std::vector<std::uint32_t> colours) {
  Palette p;
  p.m = m;
  p.level = level;
  p.colours = std::move(colours);
  return p;
}

struct Fixture {
  Table table;
  SystemS sys_s;
  SystemQ sys_q;
  Rational b{201, 100};

  Fixture() : table(0, 1, {0}) {
    SplitMix64 rng(7);
    table = random_table(3, 2, rng);
    sys_s.pairs.push_back(set_of(3, 3, {0}));
    sys_s.pairs.push_back(set_of(3, 4, {0, 1, 2}));
    sys_s.pairs.push_back(set_of(3, 5, {0, 1, 2, 3, 4}));
    sys_s.pairs.push_back(set_of(3, 6, {0, 1, 2, 3, 4, 5, 6}));
    sys_q.palettes.push_back(palette_of(2, 1, {0}));
  }
};

}  // namespace

static void ColourCount(benchmark::State& state) {
  Fixture f;
  const LevelSet& big = f.sys_s.pairs.back();
  for (auto _ : state) {
    long long c = colour_count(f.table, big, big, f.sys_q.palettes[0]);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(ColourCount);

static void WeakBalanceCheck(benchmark::State& state) {
  Fixture f;
  for (auto _ : state) {
    auto verdict = is_weak_balanced(f.table, f.sys_s, f.sys_q, f.b);
    benchmark::DoNotOptimize(verdict.balanced);
  }
}
BENCHMARK(WeakBalanceCheck);

static void MonteCarloTrials(benchmark::State& state) {
  Fixture f;
  const long long trials = state.range(0);
  for (auto _ : state) {
    SampleStats stats = sample_balance_fraction(3, 2, f.sys_s, f.sys_q, f.b, trials, 42, 1);
    benchmark::DoNotOptimize(stats.passes);
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(MonteCarloTrials)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
