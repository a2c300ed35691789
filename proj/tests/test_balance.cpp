#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kext/balance.hpp"
#include "kext/errors.hpp"
#include "test_support.hpp"

using namespace kext;
using testsupport::make_palette;
using testsupport::make_set;

namespace {

const Rational kB{201, 100};

Table constant_table(int n, int m, std::uint32_t colour) {
  return Table(n, m, std::vector<std::uint32_t>(static_cast<std::size_t>(1) << (2 * n), colour));
}

}  // namespace

TEST_CASE("threshold_holds compares exactly") {
  CHECK(threshold_holds(16, 3, kB));         // 16 < 16.08
  CHECK_FALSE(threshold_holds(9, 2, kB));    // 9 < 8.04 fails
  CHECK_FALSE(threshold_holds(1, -2, kB));   // 1 < 0.5025 fails
  CHECK(threshold_holds(0, -64, kB));
  CHECK_FALSE(exceeds_threshold(2, 0, kB));  // 2 > 2.01 fails
  CHECK(exceeds_threshold(3, 0, kB));
  CHECK_THROWS_AS(threshold_holds(1, 65, kB), ExponentOutOfRange);
  CHECK_THROWS_AS(threshold_holds(1, -65, kB), ExponentOutOfRange);
}

TEST_CASE("threshold boundary is strict") {
  CHECK_FALSE(threshold_holds(4, 1, Rational(2)));  // 4 < 4 fails
  CHECK(threshold_holds(3, 1, Rational(2)));
  CHECK_FALSE(exceeds_threshold(4, 1, Rational(2)));  // 4 > 4 fails
}

TEST_CASE("is_balanced_exact on the definitional tables") {
  CHECK_FALSE(is_balanced_exact(constant_table(1, 1, 0), 1, 1));
  CHECK(is_balanced_exact(table_from_bits(BitString("0110"), 1, 1), 2, 1));
  CHECK(is_balanced_exact(constant_table(1, 1, 0), 3, 1));  // vacuous: K > 2^n
  CHECK_THROWS_AS(is_balanced_exact(constant_table(4, 1, 0), 2, 1), TooLargeForExhaustive);
}

TEST_CASE("is_rainbow_balanced_exact on the definitional tables") {
  CHECK_FALSE(is_rainbow_balanced_exact(constant_table(1, 1, 0), 2, 1));
  CHECK(is_rainbow_balanced_exact(table_from_bits(BitString("0110"), 1, 1), 2, 1));
  CHECK(is_rainbow_balanced_exact(constant_table(1, 1, 0), 3, 1));  // vacuous
}

TEST_CASE("is_weak_balanced: vacuous and forced instances") {
  Table constant = constant_table(2, 3, 0);

  SystemS empty_s;
  SystemQ empty_q;
  CHECK(is_weak_balanced(constant, empty_s, empty_q, kB).balanced);

  SystemS sys_s;
  sys_s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
  SystemQ sys_q;
  sys_q.palettes.push_back(make_palette(3, 1, {0}));
  auto result = is_weak_balanced(constant, sys_s, sys_q, kB);
  CHECK_FALSE(result.balanced);
  REQUIRE(result.violation.has_value());
  CHECK(result.violation->s1_index == 0);
  CHECK(result.violation->s2_index == 0);
  CHECK(result.violation->q_index == 0);
  CHECK(result.violation->count == 9);  // 9 cells vs threshold 2.01*2^2 = 8.04
  CHECK(result.violation->exponent == 2);
}

TEST_CASE("is_weak_balanced agrees with the naive oracle") {
  std::mt19937_64 rng(41);
  int failures_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2;
    int m = 3 + static_cast<int>(rng() % 2);
    SystemS sys_s;
    sys_s.pairs.push_back(make_set(n, 2, {0, 1, 2}));
    sys_s.pairs.push_back(make_set(n, 2, {1, 2, 3}));
    sys_s.pairs.push_back(make_set(n, 3, {0, 1, 2, 3}));
    SystemQ sys_q;
    sys_q.palettes.push_back(make_palette(m, 1, {0}));
    sys_q.palettes.push_back(make_palette(m, 2, {1, 2}));
    Table t = trial % 2 == 0 ? testsupport::mt_random_table(n, m, rng)
                             : testsupport::biased_table(n, m, {0, 1}, rng);
    bool fast = is_weak_balanced(t, sys_s, sys_q, kB).balanced;
    bool naive = testsupport::naive_weak_balanced(t, sys_s, sys_q, kB);
    REQUIRE(fast == naive);
    failures_seen += !fast;
  }
  CHECK(failures_seen > 0);  // the biased half must exercise the failing path
}

TEST_CASE("is_weak_rainbow_balanced: vacuous, arithmetic-forced, planted") {
  SystemS sys_s;
  sys_s.pairs.push_back(make_set(1, 2, {0, 1}));
  SystemR empty_r;
  Table constant1 = constant_table(1, 1, 0);
  CHECK(is_weak_rainbow_balanced(constant1, sys_s, empty_r, 1, kB).balanced);

  // Saturation bound 2.01*2^2 = 8.04 exceeds every row count, so nothing
  // saturates and the total over saturated rows is zero.
  SystemR sys_r;
  RainbowTuple tuple;
  tuple.anchor = make_set(1, 2, {0, 1});
  tuple.level = 1;
  tuple.palettes = {make_palette(1, 1, {0}), make_palette(1, 1, {0})};
  sys_r.tuples.push_back(tuple);
  CHECK(is_weak_rainbow_balanced(constant1, sys_s, sys_r, 1, kB).balanced);

  // Planted: two rows painted entirely in the palette colour saturate
  // (3 > 2.01*2^0) and their total 6 breaches 2.01*2^1 = 4.02.
  std::vector<std::uint32_t> colours(16, 7);
  for (std::uint32_t x = 0; x < 4; ++x) {
    colours[x * 4 + 0] = 0;
    colours[x * 4 + 1] = 0;
  }
  Table planted(2, 3, std::move(colours));
  SystemS planted_s;
  planted_s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
  SystemR planted_r;
  RainbowTuple planted_tuple;
  planted_tuple.anchor = make_set(2, 2, {0, 1});
  planted_tuple.level = 1;
  planted_tuple.palettes = {make_palette(3, 1, {0}), make_palette(3, 1, {0})};
  planted_r.tuples.push_back(planted_tuple);
  auto verdict = is_weak_rainbow_balanced(planted, planted_s, planted_r, 1, kB);
  CHECK_FALSE(verdict.balanced);
  REQUIRE(verdict.violation.has_value());
  CHECK_FALSE(verdict.violation->column_direction);
  CHECK(verdict.violation->marked_in_saturated == 6);
  CHECK(testsupport::naive_weak_rainbow_balanced(planted, planted_s, planted_r, 1, kB) == false);
}

TEST_CASE("is_weak_rainbow_balanced agrees with the naive marking oracle") {
  std::mt19937_64 rng(43);
  int failures_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2, m = 3;
    SystemS sys_s;
    sys_s.pairs.push_back(make_set(n, 2, {0, 1, 2}));
    sys_s.pairs.push_back(make_set(n, 3, {0, 1, 2, 3}));
    SystemR sys_r;
    RainbowTuple tuple;
    tuple.anchor = make_set(n, 2, {0, 1});
    tuple.level = 1;
    tuple.palettes = {make_palette(m, 1, {0}), make_palette(m, 1, {1})};
    sys_r.tuples.push_back(tuple);
    Table t = trial % 3 == 0 ? testsupport::mt_random_table(n, m, rng)
                             : testsupport::biased_table(n, m, {0, 1}, rng);
    if (trial % 3 == 2) {
      // Paint both anchored rows with their palette colour over S1 so the
      // saturated-rows total breaches the bound; keeps the failing branch hot.
      std::vector<std::uint32_t> colours = t.colours();
      for (std::uint32_t x = 0; x < 3; ++x) {
        colours[x * 4 + 0] = 0;
        colours[x * 4 + 1] = 1;
      }
      t = Table(n, m, std::move(colours));
    }
    bool fast = is_weak_rainbow_balanced(t, sys_s, sys_r, 1, kB).balanced;
    bool naive = testsupport::naive_weak_rainbow_balanced(t, sys_s, sys_r, 1, kB);
    REQUIRE(fast == naive);
    failures_seen += !fast;
  }
  CHECK(failures_seen > 0);
}

TEST_CASE("monotonicity: removing a set or palette never turns pass into fail") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    Table t = testsupport::biased_table(2, 3, {0}, rng);
    SystemS sys_s;
    sys_s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
    sys_s.pairs.push_back(make_set(2, 2, {0, 2, 3}));
    SystemQ sys_q;
    sys_q.palettes.push_back(make_palette(3, 1, {0}));
    sys_q.palettes.push_back(make_palette(3, 2, {0, 1, 2}));
    if (!is_weak_balanced(t, sys_s, sys_q, kB).balanced) continue;
    SystemS smaller_s;
    smaller_s.pairs.push_back(sys_s.pairs[static_cast<std::size_t>(rng() % 2)]);
    SystemQ smaller_q;
    smaller_q.palettes.push_back(sys_q.palettes[static_cast<std::size_t>(rng() % 2)]);
    CHECK(is_weak_balanced(t, smaller_s, smaller_q, kB).balanced);
    CHECK(is_weak_balanced(t, sys_s, smaller_q, kB).balanced);
  }
}

TEST_CASE("exact balance implies weak balance on derived systems (b_mult = 2)") {
  // n = 1, m = 1: all 16 tables exhaustively.
  auto derived_systems = [](const Table& t, int k_size, int q_count) {
    SystemS sys_s;
    const std::uint32_t side = t.side();
    for (std::uint32_t mask = 0; mask < (1u << side); ++mask) {
      if (__builtin_popcount(mask) < k_size) continue;
      std::vector<std::uint32_t> members;
      for (std::uint32_t v = 0; v < side; ++v)
        if ((mask >> v) & 1) members.push_back(v);
      int level = 1;
      while ((1u << level) <= members.size()) ++level;
      sys_s.pairs.push_back(make_set(t.n(), level, members));
    }
    SystemQ sys_q;
    sys_q.palettes.push_back(popular_palette(t, q_count));
    return std::pair{sys_s, sys_q};
  };

  int exact_passes = 0;
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    Table t = table_from_bits(BitString::from_value(bits, 4), 1, 1);
    if (!is_balanced_exact(t, 2, 1)) continue;
    ++exact_passes;
    auto [sys_s, sys_q] = derived_systems(t, 2, 1);
    CHECK(is_weak_balanced(t, sys_s, sys_q, Rational(2)).balanced);
  }
  CHECK(exact_passes > 0);

  // n = 2, m = 2: 500 sampled tables.
  std::mt19937_64 rng(53);
  exact_passes = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Table t = testsupport::mt_random_table(2, 2, rng);
    for (int q_count : {1, 2}) {
      if (!is_balanced_exact(t, 2, q_count)) continue;
      ++exact_passes;
      auto [sys_s, sys_q] = derived_systems(t, 2, q_count);
      CHECK(is_weak_balanced(t, sys_s, sys_q, Rational(2)).balanced);
    }
  }
  CHECK(exact_passes > 0);
}

TEST_CASE("is_multisource_extractor definitional examples") {
  Table xor_table = table_from_bits(BitString("0110"), 1, 1);
  CHECK(is_multisource_extractor(xor_table, 1, Rational(0)));
  CHECK_FALSE(is_multisource_extractor(constant_table(1, 1, 0), 1, Rational(1, 4)));
}

TEST_CASE("is_multisource_extractor agrees with a naive re-implementation") {
  std::mt19937_64 rng(59);
  int failures_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Table t = testsupport::mt_random_table(2, 1, rng);
    bool fast = is_multisource_extractor(t, 2, Rational(1, 2));
    bool naive = testsupport::naive_multisource(t, 2, Rational(1, 2));
    REQUIRE(fast == naive);
    failures_seen += !fast;
    bool tight_fast = is_multisource_extractor(t, 1, Rational(1, 4));
    bool tight_naive = testsupport::naive_multisource(t, 1, Rational(1, 4));
    REQUIRE(tight_fast == tight_naive);
  }
  CHECK(failures_seen >= 0);
}

TEST_CASE("min_entropy") {
  Distribution uniform4{{"a", {1, 4}}, {"b", {1, 4}}, {"c", {1, 4}}, {"d", {1, 4}}};
  CHECK(min_entropy(uniform4) == doctest::Approx(2.0));
  Distribution point{{"a", {1, 1}}};
  CHECK(min_entropy(point) == doctest::Approx(0.0));
  Distribution mixed{{"a", {1, 2}}, {"b", {1, 4}}, {"c", {1, 4}}};
  CHECK(min_entropy(mixed) == doctest::Approx(1.0));
  Distribution broken{{"a", {1, 2}}};
  CHECK_THROWS_AS(min_entropy(broken), NotADistribution);
}

TEST_CASE("min_entropy of a uniform distribution on 2^k outcomes is exactly k") {
  for (int k = 0; k <= 6; ++k) {
    Distribution d;
    for (int i = 0; i < (1 << k); ++i) d["x" + std::to_string(i)] = Rational(1, 1 << k);
    CHECK(min_entropy(d) == doctest::Approx(static_cast<double>(k)));
  }
}

TEST_CASE("stat_distance examples") {
  Distribution u{{"0", {1, 2}}, {"1", {1, 2}}};
  CHECK(stat_distance(u, u) == Rational(0));
  Distribution p0{{"0", {1, 1}}, {"1", {0, 1}}};
  Distribution p1{{"0", {0, 1}}, {"1", {1, 1}}};
  CHECK(stat_distance(p0, p1) == Rational(1));
  CHECK(stat_distance(u, p0) == Rational(1, 2));
  Distribution other_domain{{"x", {1, 1}}};
  CHECK_THROWS_AS(stat_distance(p0, other_domain), DomainMismatch);
}

TEST_CASE("stat_distance is a metric on random rational distributions") {
  std::mt19937_64 rng(61);
  auto random_distribution = [&rng] {
    Distribution d;
    int denom_bits = 6;
    long long left = 1 << denom_bits;
    for (int i = 0; i < 4; ++i) {
      long long w = i == 3 ? left : static_cast<long long>(rng() % (left + 1));
      left -= w;
      d["o" + std::to_string(i)] = Rational(w, 1 << denom_bits);
    }
    return d;
  };
  for (int trial = 0; trial < 100; ++trial) {
    Distribution a = random_distribution();
    Distribution b = random_distribution();
    Distribution c = random_distribution();
    CHECK(stat_distance(a, a) == Rational(0));
    CHECK(stat_distance(a, b) == stat_distance(b, a));
    CHECK(stat_distance(a, c) <= stat_distance(a, b) + stat_distance(b, c));
    CHECK(Rational(0) <= stat_distance(a, b));
    CHECK(stat_distance(a, b) <= Rational(1));
  }
}
