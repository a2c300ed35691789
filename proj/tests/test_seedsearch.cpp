#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kext/errors.hpp"
#include "kext/seedsearch.hpp"
#include "test_support.hpp"

using namespace kext;
using testsupport::make_palette;
using testsupport::make_set;

namespace {

const Rational kB{201, 100};

ComplexityProfile profile_of(int n, int s, int l_max, std::vector<int> values) {
  ComplexityProfile p;
  p.n = n;
  p.condition = BitString("");
  p.s = s;
  p.l_max = l_max;
  p.values = std::move(values);
  p.validate();
  return p;
}

Generator constant_zero_generator(int output_bits) {
  Design d;
  d.ground_size = 4;
  d.set_size = 1;
  d.intersection_bound = 1;
  for (int i = 0; i < output_bits; ++i) d.sets.push_back({i % 4});
  Generator g{d, Predicate::lookup(BitString("00"))};  // ignores its input
  return g;
}

}  // namespace

TEST_CASE("build_system_s applies the level definition") {
  // values: 00 -> 3, 01 -> 6, 10 -> 6, 11 -> 9
  ComplexityProfile p = profile_of(2, 1, 9, {3, 6, 6, 9});
  SystemS sys = build_system_s(p, 3);
  REQUIRE(sys.pairs.size() == 7);  // levels 3..9
  CHECK(sys.pairs[0].members.empty());
  CHECK(sys.pairs[1].members == std::vector<std::uint32_t>{0});
  CHECK(sys.pairs[2].members == std::vector<std::uint32_t>{0});
  CHECK(sys.pairs[3].members == std::vector<std::uint32_t>{0});
  CHECK(sys.pairs[4].members == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(sys.pairs[5].members == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(sys.pairs[6].members == std::vector<std::uint32_t>{0, 1, 2});
  for (int i = 0; i < 7; ++i) CHECK(sys.pairs[static_cast<std::size_t>(i)].level == 3 + i);
}

TEST_CASE("build_system_s: sentinel-only profiles give empty sets, levels nest") {
  ComplexityProfile all_sentinel = profile_of(2, 1, 6, {7, 7, 7, 7});
  for (const LevelSet& s : build_system_s(all_sentinel, 1).pairs) CHECK(s.members.empty());

  ComplexityProfile real = complexity_profile(2, BitString(""), 2, 12);
  SystemS sys = build_system_s(real, 2);
  for (std::size_t i = 0; i + 1 < sys.pairs.size(); ++i)
    CHECK(std::includes(sys.pairs[i + 1].members.begin(), sys.pairs[i + 1].members.end(),
                        sys.pairs[i].members.begin(), sys.pairs[i].members.end()));
}

TEST_CASE("build_system_q") {
  ComplexityProfile none_below = profile_of(3, 1, 6, {7, 7, 7, 7, 7, 7, 7, 7});
  CHECK(build_system_q(none_below, 4).palettes.front().colours.empty());

  ComplexityProfile one_low = profile_of(3, 1, 6, {3, 7, 7, 7, 7, 7, 7, 7});
  SystemQ sys = build_system_q(one_low, 4);
  REQUIRE(sys.palettes.size() == 1);
  CHECK(sys.palettes[0].colours == std::vector<std::uint32_t>{0});
  CHECK(sys.palettes[0].level == 4);

  SystemQ all = build_system_q(one_low, 4, true);
  CHECK(all.palettes.size() == 3);  // levels 1..m
}

TEST_CASE("build_system_r_tuple") {
  std::map<std::uint32_t, ComplexityProfile> profiles;
  profiles[1] = profile_of(3, 1, 6, {2, 7, 7, 7, 7, 7, 7, 7});

  LevelSet empty_anchor = make_set(2, 1, {});
  RainbowTuple empty = build_system_r_tuple(empty_anchor, profiles, 3);
  CHECK(empty.palettes.empty());

  LevelSet anchor = make_set(2, 1, {1});
  RainbowTuple t = build_system_r_tuple(anchor, profiles, 3);
  REQUIRE(t.palettes.size() == 1);
  CHECK(t.palettes[0].colours == std::vector<std::uint32_t>{0});

  LevelSet missing = make_set(2, 2, {1, 2});
  CHECK_THROWS_AS(build_system_r_tuple(missing, profiles, 3), MissingProfile);
}

TEST_CASE("seed_is_good: vacuous systems accept every seed") {
  Generator g{greedy_design(12, 4, 2, 20), Predicate::parity()};
  SearchParams params;
  params.n = 1;
  params.m = 5;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 2;
  params.b_mult = kB;
  params.mode = SearchMode::Plain;
  Systems vacuous;
  for (std::uint64_t seed = 0; seed < 32; ++seed) CHECK(seed_is_good(g, seed, params, vacuous));
}

TEST_CASE("seed_is_good rejects the constant table against the planted systems") {
  Generator g = constant_zero_generator(48);  // n=2, m=3 table of zeros
  SearchParams params;
  params.n = 2;
  params.m = 3;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 3;
  params.b_mult = kB;
  params.mode = SearchMode::Plain;
  Systems systems;
  systems.s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
  systems.q.palettes.push_back(make_palette(3, 1, {0}));
  CHECK_FALSE(seed_is_good(g, 0, params, systems));
}

TEST_CASE("streamed and materialized table paths agree") {
  Generator g{greedy_design(14, 4, 2, 48), Predicate::parity()};
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint64_t seed = rng() & ((1ull << 14) - 1);
    CHECK(table_from_seed_streamed(g, seed, 2, 3) == table_from_seed(g, seed, 2, 3));
  }
}

TEST_CASE("generator too small for the table is refused") {
  Generator g{greedy_design(12, 4, 2, 19), Predicate::parity()};
  CHECK_THROWS_AS(table_from_seed(g, 0, 1, 5), InsufficientBits);  // needs 20 bits
  CHECK_THROWS_AS(table_from_seed_streamed(g, 0, 1, 5), InsufficientBits);
}

TEST_CASE("find_good_seed contract on ranges") {
  Generator g{greedy_design(12, 4, 2, 20), Predicate::parity()};
  SearchParams params;
  params.n = 1;
  params.m = 5;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 2;
  params.b_mult = kB;
  params.mode = SearchMode::Plain;
  params.seed_begin = 5;
  params.seed_end = 6;
  Systems vacuous;
  GoodSeedReport r = find_good_seed(g, params, vacuous);
  REQUIRE(r.found.has_value());
  CHECK(*r.found == 5);
  CHECK(r.seeds_checked == 1);

  params.seed_begin = 0;
  params.seed_end = 1 << 12;
  GoodSeedReport first = find_good_seed(g, params, vacuous);
  REQUIRE(first.found.has_value());
  CHECK(*first.found == 0);
  CHECK(first.seeds_checked == 1);
}

TEST_CASE("find_good_seed: adversarial systems reject every seed, exhaustively") {
  // n=1, m=5: every cell's colour lies in one of the 32 singleton palettes,
  // and a single palette-coloured cell in a 1x1 rectangle already breaches
  // 2.01 * 2^(1+1+1-5) = 0.5025. So no table is good.
  Generator g{greedy_design(12, 4, 2, 20), Predicate::parity()};
  SearchParams params;
  params.n = 1;
  params.m = 5;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 2;
  params.b_mult = kB;
  params.mode = SearchMode::Plain;
  params.seed_begin = 0;
  params.seed_end = 1 << 12;
  params.jobs = 4;
  Systems adversarial;
  adversarial.s.pairs.push_back(make_set(1, 1, {0}));
  adversarial.s.pairs.push_back(make_set(1, 1, {1}));
  for (std::uint32_t c = 0; c < 32; ++c)
    adversarial.q.palettes.push_back(make_palette(5, 1, {c}));
  GoodSeedReport r = find_good_seed(g, params, adversarial);
  CHECK_FALSE(r.found.has_value());
  CHECK(r.seeds_checked == (1 << 12));
}

TEST_CASE("parallel scan equivalence and determinism") {
  Generator g{greedy_design(12, 4, 2, 20), Predicate::parity()};
  SearchParams params;
  params.n = 1;
  params.m = 5;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 2;
  params.b_mult = kB;
  params.mode = SearchMode::Plain;
  params.seed_begin = 0;
  params.seed_end = 1 << 12;
  Systems systems;  // single palette: most seeds good, a few bad
  systems.s.pairs.push_back(make_set(1, 1, {0}));
  systems.s.pairs.push_back(make_set(1, 1, {1}));
  systems.q.palettes.push_back(make_palette(5, 1, {0}));

  params.jobs = 1;
  GoodSeedReport serial = find_good_seed(g, params, systems);
  params.jobs = 4;
  GoodSeedReport parallel = find_good_seed(g, params, systems);
  CHECK(serial.found == parallel.found);
  CHECK(serial.seeds_checked == parallel.seeds_checked);

  GoodSeedReport again = find_good_seed(g, params, systems);
  CHECK(again.found == parallel.found);
  CHECK(again.seeds_checked == parallel.seeds_checked);
}

TEST_CASE("rejected-seed diagnostics are retained on request") {
  Generator g{greedy_design(12, 4, 2, 20), Predicate::parity()};
  SearchParams params;
  params.n = 1;
  params.m = 5;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 2;
  params.b_mult = kB;
  params.mode = SearchMode::Plain;
  params.seed_begin = 0;
  params.seed_end = 256;
  params.retain_rejections = 8;
  Systems adversarial;
  adversarial.s.pairs.push_back(make_set(1, 1, {0}));
  adversarial.s.pairs.push_back(make_set(1, 1, {1}));
  for (std::uint32_t c = 0; c < 32; ++c)
    adversarial.q.palettes.push_back(make_palette(5, 1, {c}));
  GoodSeedReport r = find_good_seed(g, params, adversarial);
  CHECK_FALSE(r.found.has_value());
  REQUIRE(r.first_violations.size() == 8);
  for (std::size_t i = 0; i < r.first_violations.size(); ++i) {
    CHECK(r.first_violations[i].seed == i);
    CHECK(r.first_violations[i].count == 1);  // one palette-coloured cell breaches 0.5025
  }
}

TEST_CASE("rainbow seed goodness equals the checker on the materialized table") {
  Generator g{greedy_design(14, 4, 2, 48), Predicate::parity()};
  SearchParams params;
  params.n = 2;
  params.m = 3;
  params.s = 1;
  params.k = 1;
  params.q = 1;
  params.l_max = 3;
  params.b_mult = kB;
  params.mode = SearchMode::Rainbow;
  Systems systems;
  systems.s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
  RainbowTuple tuple;
  tuple.anchor = make_set(2, 2, {0, 1});
  tuple.level = 1;
  tuple.palettes = {make_palette(3, 1, {0}), make_palette(3, 1, {1})};
  systems.r.tuples.push_back(tuple);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Table t = table_from_seed(g, seed, 2, 3);
    bool direct = is_weak_rainbow_balanced(t, systems.s, systems.r, params.k, params.b_mult).balanced;
    CHECK(seed_is_good(g, seed, params, systems) == direct);
  }
}
