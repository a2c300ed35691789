#include "kext/sampling.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "kext/parallel.hpp"

namespace kext {

Table random_table(int n, int m, SplitMix64& rng) {
  std::size_t cells = static_cast<std::size_t>(1) << (2 * n);
  std::vector<std::uint32_t> colours(cells);
  for (std::size_t i = 0; i < cells; ++i)
    colours[i] = static_cast<std::uint32_t>(rng.next_bits(m));
  return Table(n, m, std::move(colours));
}

SampleStats sample_balance_fraction(int n, int m, const SystemS& sys_s, const SystemQ& sys_q,
                                    const Rational& b_mult, long long trials,
                                    std::uint64_t rng_seed, int jobs) {
  if (trials < 1) throw std::invalid_argument("sample_balance_fraction: trials >= 1 required");
  std::vector<std::uint64_t> trial_seeds(static_cast<std::size_t>(trials));
  SplitMix64 seeder(rng_seed);
  for (auto& s : trial_seeds) s = seeder.next();

  std::atomic<long long> passes{0};
  parallel_chunks(0, static_cast<std::uint64_t>(trials), jobs,
                  [&](std::uint64_t begin, std::uint64_t end, int) {
                    long long local = 0;
                    for (std::uint64_t i = begin; i < end; ++i) {
                      SplitMix64 rng(trial_seeds[i]);
                      Table t = random_table(n, m, rng);
                      local += is_weak_balanced(t, sys_s, sys_q, b_mult).balanced;
                    }
                    passes.fetch_add(local, std::memory_order_relaxed);
                  });

  SampleStats stats;
  stats.trials = trials;
  stats.passes = passes.load();
  stats.rng_seed = rng_seed;
  stats.alpha_hat = static_cast<double>(stats.passes) / static_cast<double>(trials);
  stats.ci_half_width =
      1.96 * std::sqrt(stats.alpha_hat * (1.0 - stats.alpha_hat) / static_cast<double>(trials));
  return stats;
}

}  // namespace kext
