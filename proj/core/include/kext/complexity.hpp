#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kext/bitstring.hpp"
#include "kext/machine.hpp"

namespace kext {

/// KS^s(x | condition) for every x of one length, computed in one exhaustive
/// enumeration pass. values[v] is the minimal program bit-length producing
/// the string with big-endian value v, or the sentinel l_max+1 ("infinity").
struct ComplexityProfile {
  int n = 0;
  BitString condition;
  int s = 1;
  int l_max = 0;
  std::vector<int> values;  // size 2^n, entries in [0, l_max+1]

  int sentinel() const { return l_max + 1; }
  int value_of(const BitString& x) const;

  /// |{x : value < level}|, the counting-bound left-hand side.
  long long count_below(int level) const;
  void validate() const;
};

/// Minimal program length <= l_max producing x from `condition` within space
/// s, or l_max+1 if none. Step budgets come from max_steps; output is capped
/// at |x| since a halting run's output is append-only.
int ks(const BitString& x, const BitString& condition, int s, int l_max);

/// Full profile over {0,1}^n: single pass over all programs of length
/// 0..l_max, ascending length then ascending raw value. `hard_cap` guards the
/// 2^(l_max+1) enumeration (refuse l_max > hard_cap).
ComplexityProfile complexity_profile(int n, const BitString& condition, int s, int l_max,
                                     int jobs = 1, int hard_cap = 24);

/// Minimal program lengths for pair codes: entry (x, y) is the least length
/// <= pair_l_max of a program producing encode_pair(x, y) from the empty
/// condition within space `s`, or pair_l_max+1. One shared pass covers all
/// pairs of n-bit strings.
struct PairComplexityTable {
  int n = 0;
  int s = 1;
  int pair_l_max = 0;
  std::vector<int> min_len;  // size 2^(2n), index x*2^n + y

  int sentinel() const { return pair_l_max + 1; }
  int min_length(std::uint32_t x, std::uint32_t y) const {
    return min_len[(static_cast<std::size_t>(x) << n) | y];
  }
  /// KS^s(pair(x,y)) > threshold; requires threshold <= pair_l_max.
  bool pair_above(std::uint32_t x, std::uint32_t y, int threshold) const;
};

PairComplexityTable pair_complexity_table(int n, int s, int pair_l_max, int jobs = 1,
                                          int hard_cap = 26);

// Profile cache file format: header
//   bvm-v1 n=<int> s=<int> lmax=<int> cond=<len>:<hex>
// then one "<hex> <value>" line per string, ascending.
void save_profile(std::ostream& out, const ComplexityProfile& p);
ComplexityProfile load_profile(std::istream& in);
void save_profile_file(const std::string& path, const ComplexityProfile& p);
ComplexityProfile load_profile_file(const std::string& path);

/// Loads the profile from `cache_dir` if present, else computes and stores
/// it. An empty cache_dir disables caching. Keyed by (machine version, n,
/// condition, s, l_max).
ComplexityProfile cached_profile(const std::string& cache_dir, int n, const BitString& condition,
                                 int s, int l_max, int jobs = 1);

}  // namespace kext
