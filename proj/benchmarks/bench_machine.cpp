#include <benchmark/benchmark.h>

#include "kext/complexity.hpp"
#include "kext/machine.hpp"

using namespace kext;

static void RunFlipOutLoop(benchmark::State& state) {
  // FLIP, OUT, JMP 0: output-capped loop, the common hot shape in enumeration.
  Program p = Program::decode(BitString("011100111" "00000000"));
  RunBudget budget{1, 1000, 64};
  BitString input;
  Runner runner;
  for (auto _ : state) {
    auto outcome = runner.run_code(p.code, input.bits(), budget);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(RunFlipOutLoop);

static void EnumerateLength(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  Runner runner;
  std::vector<Instruction> code;
  BitString input;
  RunBudget budget{2, max_steps(2, len / 3 + 1, 0), 8};
  for (auto _ : state) {
    long long halted = 0;
    for (std::uint64_t value = 0; value < (1ull << len); ++value) {
      decode_program_value(value, len, code);
      halted += runner.run_code(code, input.bits(), budget) == Outcome::Halted;
    }
    benchmark::DoNotOptimize(halted);
  }
  state.SetItemsProcessed(state.iterations() * (1ll << len));
}
BENCHMARK(EnumerateLength)->Arg(9)->Arg(12)->Arg(15);

static void ProfileN2(benchmark::State& state) {
  for (auto _ : state) {
    ComplexityProfile p = complexity_profile(2, BitString(""), 2, 12, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(p.values.data());
  }
}
BENCHMARK(ProfileN2)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
