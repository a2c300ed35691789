#include "kext/generator.hpp"

#include <atomic>
#include <bit>

#include "kext/errors.hpp"
#include "kext/parallel.hpp"
#include "kext/sampling.hpp"

namespace kext {

Predicate Predicate::lookup(BitString table_bits) {
  if (!std::has_single_bit(static_cast<unsigned>(table_bits.size())))
    throw InvariantViolation("Predicate::lookup: table length must be a power of two");
  Predicate p;
  p.kind = Kind::Lookup;
  p.table = std::move(table_bits);
  return p;
}

int Predicate::eval(std::uint64_t selected_bits_msb_first, int arity) const {
  (void)arity;
  if (kind == Kind::Parity) return std::popcount(selected_bits_msb_first) & 1;
  return table.bit(static_cast<int>(selected_bits_msb_first));
}

void Generator::validate() const {
  design.validate();
  if (predicate.kind == Predicate::Kind::Lookup &&
      predicate.table.size() != (1 << design.set_size))
    throw InvariantViolation("Generator: lookup table length does not match design set size");
}

int output_bit(const Generator& g, const BitString& seed, int i) {
  if (seed.size() != g.design.ground_size)
    throw std::invalid_argument("output_bit: seed length must equal the design ground size");
  if (i < 0 || i >= g.output_length())
    throw IndexOutOfRange("output_bit: bit index " + std::to_string(i) + " not below " +
                          std::to_string(g.output_length()));
  const auto& set = g.design.sets[static_cast<std::size_t>(i)];
  std::uint64_t selected = 0;
  for (int idx : set) selected = (selected << 1) | static_cast<std::uint64_t>(seed.bit(idx));
  return g.predicate.eval(selected, g.design.set_size);
}

BitString generate(const Generator& g, const BitString& seed, int count) {
  if (count < 0 || count > g.output_length())
    throw IndexOutOfRange("generate: count " + std::to_string(count) + " exceeds design size " +
                          std::to_string(g.output_length()));
  BitString out;
  out.bits().reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(output_bit(g, seed, i));
  return out;
}

namespace {

long long count_accepting_prefixes(const TestStatistic& test) {
  long long accepted = 0;
  for (std::uint64_t v = 0; v < (1ull << test.prefix_len); ++v)
    accepted += test.accept(BitString::from_value(v, test.prefix_len));
  return accepted;
}

}  // namespace

Rational distinguisher_gap_exact(const Generator& g, const TestStatistic& test, int jobs) {
  g.validate();
  if (g.design.ground_size > 24)
    throw TooLargeForExact("distinguisher_gap_exact: ground size > 24, seed space too large");
  if (test.prefix_len > g.output_length())
    throw IndexOutOfRange("distinguisher_gap_exact: test prefix exceeds generator output");
  const std::uint64_t seeds = 1ull << g.design.ground_size;
  std::atomic<long long> accepted_gen{0};
  parallel_chunks(0, seeds, jobs, [&](std::uint64_t begin, std::uint64_t end, int) {
    long long local = 0;
    for (std::uint64_t v = begin; v < end; ++v) {
      BitString seed = BitString::from_value(v, g.design.ground_size);
      local += test.accept(generate(g, seed, test.prefix_len));
    }
    accepted_gen.fetch_add(local, std::memory_order_relaxed);
  });
  Rational gen_prob(accepted_gen.load(), static_cast<std::int64_t>(seeds));
  Rational uniform_prob = [&] {
    if (test.uniform_prob) return *test.uniform_prob;
    if (test.prefix_len > 24)
      throw TooLargeForExact("distinguisher_gap_exact: prefix > 24 without analytic uniform side");
    return Rational(count_accepting_prefixes(test), static_cast<std::int64_t>(1ull << test.prefix_len));
  }();
  return (gen_prob - uniform_prob).abs();
}

double distinguisher_gap_mc(const Generator& g, const TestStatistic& test, long long trials,
                            std::uint64_t rng_seed, int jobs) {
  g.validate();
  if (trials < 1) throw std::invalid_argument("distinguisher_gap_mc: trials >= 1 required");
  std::vector<std::uint64_t> trial_seeds(static_cast<std::size_t>(trials));
  SplitMix64 seeder(rng_seed);
  for (auto& s : trial_seeds) s = seeder.next();

  std::atomic<long long> accepted_gen{0}, accepted_uniform{0};
  parallel_chunks(0, static_cast<std::uint64_t>(trials), jobs,
                  [&](std::uint64_t begin, std::uint64_t end, int) {
                    long long gen = 0, uni = 0;
                    for (std::uint64_t i = begin; i < end; ++i) {
                      SplitMix64 rng(trial_seeds[i]);
                      BitString seed;
                      seed.bits().reserve(static_cast<std::size_t>(g.design.ground_size));
                      for (int b = 0; b < g.design.ground_size; ++b)
                        seed.push_back(static_cast<int>(rng.next_bits(1)));
                      gen += test.accept(generate(g, seed, test.prefix_len));
                      BitString uniform;
                      uniform.bits().reserve(static_cast<std::size_t>(test.prefix_len));
                      for (int b = 0; b < test.prefix_len; ++b)
                        uniform.push_back(static_cast<int>(rng.next_bits(1)));
                      uni += test.accept(uniform);
                    }
                    accepted_gen.fetch_add(gen, std::memory_order_relaxed);
                    accepted_uniform.fetch_add(uni, std::memory_order_relaxed);
                  });
  double p_gen = static_cast<double>(accepted_gen.load()) / static_cast<double>(trials);
  double p_uni = static_cast<double>(accepted_uniform.load()) / static_cast<double>(trials);
  return std::abs(p_gen - p_uni);
}

}  // namespace kext
