#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kext/balance.hpp"
#include "kext/complexity.hpp"
#include "kext/generator.hpp"

namespace kext {

/// One level set per complexity level l in [k, profile.l_max]: members are
/// the strings with value < l. The profile counting bound keeps every set
/// below 2^l automatically.
SystemS build_system_s(const ComplexityProfile& profile, int k);

/// The single working palette {w : profile[w] < q} at level q, or, with
/// all_levels, one palette per level 1..m for diagnostics. A level q <= 0
/// yields an empty palette at level max(q, 0).
SystemQ build_system_q(const ComplexityProfile& colour_profile, int q, bool all_levels = false);

/// Conditional-complexity palettes for one anchor set: the palette attached
/// to member v is {w : profiles.at(v)[w] < q}. Throws MissingProfile if an
/// anchor member has no profile.
RainbowTuple build_system_r_tuple(const LevelSet& anchor,
                                  const std::map<std::uint32_t, ComplexityProfile>& conditional_profiles,
                                  int q);

/// The three relevant systems of one experiment.
struct Systems {
  SystemS s;
  SystemQ q;
  SystemR r;  // one tuple per level set of s, in the same order (may be empty in plain mode)
};

enum class SearchMode { Plain, Rainbow };

struct SearchParams {
  int n = 0;
  int m = 0;
  int s = 1;
  int k = 1;
  int q = 1;
  int l_max = 0;
  Rational b_mult{201, 100};
  SearchMode mode = SearchMode::Plain;
  std::uint64_t seed_begin = 0;
  std::uint64_t seed_end = 0;  // exclusive
  int jobs = 1;
  int retain_rejections = 0;  // keep the first N rejected seeds' violations

  void validate(int ground_size) const;
};

/// Why one seed was rejected: the first violating triple, in system order.
struct SeedRejection {
  std::uint64_t seed = 0;
  bool column_direction = false;  // rainbow only
  int s1_index = 0;
  int s2_index = 0;   // rainbow: tuple index
  int q_index = 0;    // plain only
  long long count = 0;
};

/// Builds the seed's table by querying output bits cell by cell; never
/// materializes the full output string.
Table table_from_seed_streamed(const Generator& g, std::uint64_t seed, int n, int m);

/// Builds the seed's table through one generate() call plus table_from_bits.
Table table_from_seed(const Generator& g, std::uint64_t seed, int n, int m);

/// Whether the seed's table passes the mode's weakened balancing check.
/// `rejection`, when non-null, receives the first violating triple on a
/// rejected seed.
bool seed_is_good(const Generator& g, std::uint64_t seed, const SearchParams& params,
                  const Systems& systems, SeedRejection* rejection = nullptr);

struct GoodSeedReport {
  std::optional<std::uint64_t> found;
  std::uint64_t seeds_checked = 0;  // sequential-scan semantics
  std::vector<SeedRejection> first_violations;  // first retain_rejections rejected seeds
  double elapsed_ms = 0.0;
};

/// Ascending scan of [seed_begin, seed_end); returns the smallest good seed.
/// Parallel partitions reduce to the same smallest seed as a sequential scan.
GoodSeedReport find_good_seed(const Generator& g, const SearchParams& params, const Systems& systems);

}  // namespace kext
