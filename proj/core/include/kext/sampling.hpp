#pragma once

#include <cstdint>

#include "kext/balance.hpp"
#include "kext/table.hpp"

namespace kext {

/// The documented 64-bit mix generator behind every sampled quantity in this
/// project (see README "Randomness" for the exact constants). Identical
/// streams on every platform given the same seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, 2^bits); bits <= 63. Low bits of next().
  std::uint64_t next_bits(int bits) { return next() & ((1ull << bits) - 1); }

 private:
  std::uint64_t state_;
};

/// Uniform random table: one generator output per cell in flat layout order,
/// colour = low m bits.
Table random_table(int n, int m, SplitMix64& rng);

struct SampleStats {
  long long trials = 0;
  long long passes = 0;
  double alpha_hat = 0.0;
  double ci_half_width = 0.0;  // 95% normal-approximation half width
  std::uint64_t rng_seed = 0;
};

/// Fraction of uniformly random tables passing is_weak_balanced against the
/// given systems. Trial i's table stream is seeded with the i-th output of
/// SplitMix64(rng_seed), so trials are independent and the scan parallelizes
/// without changing results.
SampleStats sample_balance_fraction(int n, int m, const SystemS& sys_s, const SystemQ& sys_q,
                                    const Rational& b_mult, long long trials,
                                    std::uint64_t rng_seed, int jobs = 1);

}  // namespace kext
