#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kext/bitstring.hpp"
#include "kext/design.hpp"
#include "kext/rational.hpp"

namespace kext {

/// The predicate a generator applies to the selected seed bits: parity, or an
/// arbitrary lookup table over 2^arity entries. Selected bits are read in
/// ascending index order; for lookups they form a big-endian table index
/// (first selected bit most significant).
struct Predicate {
  enum class Kind { Parity, Lookup };
  Kind kind = Kind::Parity;
  BitString table;  // Lookup only; length 2^arity

  static Predicate parity() { return Predicate{}; }
  static Predicate lookup(BitString table_bits);

  int eval(std::uint64_t selected_bits_msb_first, int arity) const;
};

/// A pseudo-random table family: every output bit is the predicate applied to
/// one design set's seed positions. The i-th output bit depends on exactly
/// set_size seed bits.
struct Generator {
  Design design;
  Predicate predicate;

  void validate() const;
  int output_length() const { return static_cast<int>(design.sets.size()); }
};

/// Bit i of the output on `seed`, touching only the i-th design set's
/// positions. Throws IndexOutOfRange if i is not a design set index.
int output_bit(const Generator& g, const BitString& seed, int i);

/// Output bits 0..count-1 as one string.
BitString generate(const Generator& g, const BitString& seed, int count);

/// A boolean statistic of a fixed-length output prefix. `uniform_prob`, when
/// set, replaces the exhaustive uniform-side enumeration with a known exact
/// acceptance probability.
struct TestStatistic {
  std::string name;
  int prefix_len = 0;
  std::function<bool(const BitString&)> accept;
  std::optional<Rational> uniform_prob;
};

/// |Pr_seed[test accepts generator output] - Pr_uniform[test accepts]|,
/// both sides enumerated exhaustively and exactly. Guarded: ground_size and
/// prefix_len (unless uniform_prob is supplied) must be <= 24.
Rational distinguisher_gap_exact(const Generator& g, const TestStatistic& test, int jobs = 1);

/// Monte Carlo variant: `trials` seeds and uniform strings from the
/// documented deterministic stream.
double distinguisher_gap_mc(const Generator& g, const TestStatistic& test, long long trials,
                            std::uint64_t rng_seed, int jobs = 1);

}  // namespace kext
