#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kext/rational.hpp"
#include "kext/table.hpp"

namespace kext {

/// A system of (set, level) pairs restricting where balancing is checked.
struct SystemS {
  std::vector<LevelSet> pairs;
  std::string origin;  // descriptor of how it was built

  void validate() const;
};

/// A system of palettes, each below its level bound.
struct SystemQ {
  std::vector<Palette> palettes;

  void validate() const;
};

/// One tuple of a rainbow system: an anchor set and one palette per anchor
/// member (in sorted member order), all palettes below 2^level.
struct RainbowTuple {
  LevelSet anchor;
  std::vector<Palette> palettes;
  int level = 0;  // palette level q

  void validate() const;
};

struct SystemR {
  std::vector<RainbowTuple> tuples;

  void validate() const;
};

/// count < b_mult * 2^exponent, evaluated exactly in 128-bit integers.
/// Throws ExponentOutOfRange beyond |exponent| > 64.
bool threshold_holds(long long count, int exponent, const Rational& b_mult);

/// count > b_mult * 2^exponent, exact (the saturation test).
bool exceeds_threshold(long long count, int exponent, const Rational& b_mult);

/// Exact balance: every rectangle S1 x S2 with |Si| >= k_size has fewer than
/// 2*q_count/2^m of its cells coloured by the q_count globally most popular
/// colours. Popularity is table-global here; only the rainbow variant below
/// ranks colours per line within the rectangle. Exhaustive over all subsets;
/// guarded at 2^n <= 8.
bool is_balanced_exact(const Table& t, int k_size, int q_count);

/// Exact rainbow balance: popularity is per row (per column) within the
/// rectangle, marked fraction below 2*q_count/2^m, both orientations.
bool is_rainbow_balanced_exact(const Table& t, int k_size, int q_count);

struct WeakViolation {
  int s1_index = 0;
  int s2_index = 0;
  int q_index = 0;
  long long count = 0;
  int exponent = 0;
};

struct WeakBalanceResult {
  bool balanced = true;
  std::optional<WeakViolation> violation;
};

/// Weakened balance over relevant systems: for every (S1,l1), (S2,l2) in
/// sys_s and every palette (Q,q) in sys_q, the number of Q-coloured cells in
/// S1 x S2 is below b_mult * 2^(l1+l2+q-m). Returns the first violating
/// triple in system order.
WeakBalanceResult is_weak_balanced(const Table& t, const SystemS& sys_s, const SystemQ& sys_q,
                                   const Rational& b_mult);

struct RainbowViolation {
  bool column_direction = false;
  int s_index = 0;  // index into sys_s
  int r_index = 0;  // index into sys_r.tuples
  long long marked_in_saturated = 0;
  int exponent = 0;
};

struct RainbowBalanceResult {
  bool balanced = true;
  std::optional<RainbowViolation> violation;
};

/// Weakened rainbow balance. Rows: for S1 in sys_s and tuple (S2, Q_1..Q_r, q)
/// in sys_r, cell (x, y_i) is marked when t(x, y_i) is in Q_i; row y_i is
/// saturated when its marked count exceeds b_mult * 2^(l1+q-m); the total
/// marked count over saturated rows must stay below b_mult * 2^(l1+q-m+k).
/// Columns: same with the tuple anchoring columns and sets of sys_s as rows.
RainbowBalanceResult is_weak_rainbow_balanced(const Table& t, const SystemS& sys_s,
                                              const SystemR& sys_r, int k, const Rational& b_mult);

/// Multi-source extractor check: for every palette A and every rectangle with
/// |Si| >= 2^k, the A-coloured fraction differs from |A|/2^m by at most eps.
/// Exhaustive over subsets and palettes; guarded at 2^n <= 8 and 2^m <= 8.
bool is_multisource_extractor(const Table& t, int k, const Rational& eps);

/// Finite distribution as outcome label -> exact weight.
using Distribution = std::map<std::string, Rational>;

/// -log2(max weight); throws NotADistribution unless weights are nonnegative
/// and sum to exactly 1.
double min_entropy(const Distribution& dist);

/// Total variation distance: half the L1 difference, equal to the maximal
/// |d1(S) - d2(S)| over subsets. Throws DomainMismatch on different outcome
/// sets.
Rational stat_distance(const Distribution& d1, const Distribution& d2);

}  // namespace kext
