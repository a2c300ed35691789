// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Each criterion pins its tolerances in code; nothing is deferred to
// runtime configuration.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "kext/errors.hpp"
#include "kext/parallel.hpp"
#include "kext/pipeline.hpp"
#include "test_support.hpp"

using namespace kext;
using testsupport::make_palette;
using testsupport::make_set;

namespace {

int g_failures = 0;
int g_jobs = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));

struct Criterion {
  int number;
  const char* title;
};

void report(const Criterion& c, bool pass, const std::string& detail, double seconds) {
  std::printf("criterion %2d [%s]: %s (%.2fs)%s%s\n", c.number, c.title, pass ? "PASS" : "FAIL",
              seconds, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(const Criterion& c, const std::function<bool(std::string&)>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(c, pass, detail, seconds);
}

std::string fixture(const std::string& name) { return std::string(KEXT_FIXTURE_DIR) + "/" + name; }

// --- criterion 1: machine soundness -----------------------------------------

bool criterion_bvm_soundness(std::string& detail) {
  long long runs = 0;
  for (int len = 0; len <= 10; ++len) {
    for (std::uint64_t value = 0; value < (1ull << len); ++value) {
      Program p = Program::decode(BitString::from_value(value, len));
      for (const char* input : {"", "1"}) {
        BitString in(input);
        for (int s : {1, 2}) {
          long long bound = max_steps(s, static_cast<int>(p.code.size()), in.size());
          RunBudget budget{s, 10 * bound, 10 * bound};
          RunResult a = run(p, in, budget);
          RunResult b = run(p, in, budget);
          ++runs;
          if (!(a == b)) {
            detail = "non-deterministic run at length " + std::to_string(len);
            return false;
          }
          if (a.outcome == Outcome::Halted && a.steps > bound) {
            detail = "halt after the configuration bound at raw value " + std::to_string(value);
            return false;
          }
        }
      }
    }
  }
  detail = std::to_string(runs) + " program runs, determinism and divergence bound hold";
  return true;
}

// --- criterion 2: complexity laws --------------------------------------------

bool criterion_complexity_laws(std::string& detail) {
  if (ks(BitString("0"), BitString(""), 1, 9) != 3) {
    detail = "ks(\"0\") != 3";
    return false;
  }
  if (ks(BitString("1"), BitString(""), 1, 9) != 6) {
    detail = "ks(\"1\") != 6";
    return false;
  }
  for (int n : {1, 2}) {
    const int l_max = 9 * n;
    std::vector<ComplexityProfile> by_space;
    for (int s : {1, 2, 3})
      by_space.push_back(complexity_profile(n, BitString(""), s, l_max, g_jobs));
    for (const auto& profile : by_space) {
      for (int level = 0; level <= l_max; ++level)
        if (profile.count_below(level) > (1ll << level) - 1) {
          detail = "counting bound broken at n=" + std::to_string(n);
          return false;
        }
      for (std::uint32_t v = 0; v < (1u << n); ++v)
        if (profile.values[v] > 9 * n) {
          detail = "literal bound broken at n=" + std::to_string(n);
          return false;
        }
    }
    for (std::size_t i = 0; i + 1 < by_space.size(); ++i)
      for (std::uint32_t v = 0; v < (1u << n); ++v)
        if (by_space[i + 1].values[v] > by_space[i].values[v]) {
          detail = "space monotonicity broken at n=" + std::to_string(n);
          return false;
        }
    ComplexityProfile widened = complexity_profile(n, BitString(""), 2, l_max + 2, g_jobs);
    const ComplexityProfile& base = by_space[1];
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      if (base.values[v] <= l_max) {
        if (widened.values[v] != base.values[v]) {
          detail = "l_max monotonicity broken (found value moved)";
          return false;
        }
      } else if (widened.values[v] <= l_max) {
        detail = "l_max monotonicity broken (sentinel resolved below old bound)";
        return false;
      }
    }
  }
  detail = "counting, literal and monotonicity laws hold for n in {1,2}, s in {1,2,3}";
  return true;
}

// --- criterion 3: oracle equality --------------------------------------------

bool criterion_oracle_equality(std::string& detail) {
  std::mt19937_64 rng(20240810);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % 3);
    Table t = testsupport::mt_random_table(n, m, rng);
    std::vector<std::uint32_t> members1, members2, colours;
    for (std::uint32_t v = 0; v < t.side(); ++v) {
      if (rng() & 1) members1.push_back(v);
      if (rng() & 1) members2.push_back(v);
    }
    for (std::uint32_t c = 0; c < (1u << m); ++c)
      if (rng() & 1) colours.push_back(c);
    LevelSet s1 = make_set(n, n + 1, members1);
    LevelSet s2 = make_set(n, n + 1, members2);
    Palette p = make_palette(m, m + 1, colours);
    if (colour_count(t, s1, s2, p) != testsupport::naive_colour_count(t, s1, s2, p)) {
      detail = "colour_count mismatch at trial " + std::to_string(trial);
      return false;
    }
  }
  const Rational b{201, 100};
  std::mt19937_64 rng2(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    SystemS sys_s;
    sys_s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
    sys_s.pairs.push_back(make_set(2, 3, {0, 1, 2, 3}));
    SystemQ sys_q;
    sys_q.palettes.push_back(make_palette(3, 1, {0}));
    sys_q.palettes.push_back(make_palette(3, 2, {1, 2, 3}));
    Table t = trial % 2 ? testsupport::biased_table(2, 3, {0, 1}, rng2)
                        : testsupport::mt_random_table(2, 3, rng2);
    if (is_weak_balanced(t, sys_s, sys_q, b).balanced !=
        testsupport::naive_weak_balanced(t, sys_s, sys_q, b)) {
      detail = "weak balance mismatch at trial " + std::to_string(trial);
      return false;
    }
  }
  std::mt19937_64 rng3(20240812);
  for (int trial = 0; trial < 200; ++trial) {
    SystemS sys_s;
    sys_s.pairs.push_back(make_set(2, 2, {0, 1, 2}));
    SystemR sys_r;
    RainbowTuple tuple;
    tuple.anchor = make_set(2, 2, {0, 1});
    tuple.level = 1;
    tuple.palettes = {make_palette(3, 1, {0}), make_palette(3, 1, {1})};
    sys_r.tuples.push_back(tuple);
    Table t = trial % 2 ? testsupport::biased_table(2, 3, {0, 1}, rng3)
                        : testsupport::mt_random_table(2, 3, rng3);
    if (trial % 4 == 3) {
      std::vector<std::uint32_t> colours = t.colours();
      for (std::uint32_t x = 0; x < 3; ++x) {
        colours[x * 4 + 0] = 0;
        colours[x * 4 + 1] = 1;
      }
      t = Table(2, 3, std::move(colours));
    }
    if (is_weak_rainbow_balanced(t, sys_s, sys_r, 1, b).balanced !=
        testsupport::naive_weak_rainbow_balanced(t, sys_s, sys_r, 1, b)) {
      detail = "rainbow marking mismatch at trial " + std::to_string(trial);
      return false;
    }
  }
  detail = "600 randomized instances, zero discrepancies";
  return true;
}

// --- criterion 4: exact implies weak ------------------------------------------

bool criterion_exact_implies_weak(std::string& detail) {
  auto derived_systems = [](const Table& t, int k_size, int q_count) {
    SystemS sys_s;
    for (std::uint32_t mask = 0; mask < (1u << t.side()); ++mask) {
      if (__builtin_popcount(mask) < k_size) continue;
      std::vector<std::uint32_t> members;
      for (std::uint32_t v = 0; v < t.side(); ++v)
        if ((mask >> v) & 1) members.push_back(v);
      int level = 1;
      while ((1ull << level) <= members.size()) ++level;
      sys_s.pairs.push_back(make_set(t.n(), level, members));
    }
    SystemQ sys_q;
    sys_q.palettes.push_back(popular_palette(t, q_count));
    return std::pair{sys_s, sys_q};
  };
  long long implications = 0;
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    Table t = table_from_bits(BitString::from_value(bits, 4), 1, 1);
    if (!is_balanced_exact(t, 2, 1)) continue;
    auto [sys_s, sys_q] = derived_systems(t, 2, 1);
    if (!is_weak_balanced(t, sys_s, sys_q, Rational(2)).balanced) {
      detail = "implication failed on the n=1 table " + std::to_string(bits);
      return false;
    }
    ++implications;
  }
  std::mt19937_64 rng(20240813);
  for (int trial = 0; trial < 500; ++trial) {
    Table t = testsupport::mt_random_table(2, 2, rng);
    for (int q_count : {1, 2}) {
      if (!is_balanced_exact(t, 2, q_count)) continue;
      auto [sys_s, sys_q] = derived_systems(t, 2, q_count);
      if (!is_weak_balanced(t, sys_s, sys_q, Rational(2)).balanced) {
        detail = "implication failed on a sampled n=2 table";
        return false;
      }
      ++implications;
    }
  }
  detail = std::to_string(implications) + " exact-balanced tables, zero exceptions";
  return implications > 0;
}

// --- criterion 5: design audit -------------------------------------------------

bool criterion_design_audit(std::string& detail) {
  Design poly = poly_design(5, 2);
  if (poly.sets.size() != 25) {
    detail = "poly_design(5,2) set count";
    return false;
  }
  poly.audit_intersections();  // throws on any of the 300 pairs

  Design greedy = greedy_design(16, 4, 2, 128);
  if (greedy.sets.size() != 128) {
    detail = "greedy_design(16,4,2,128) set count";
    return false;
  }
  greedy.audit_intersections();

  Generator g{poly_design(3, 2), Predicate::parity()};
  for (std::uint64_t seed_value = 0; seed_value < (1ull << 9); ++seed_value) {
    BitString seed = BitString::from_value(seed_value, 9);
    for (int i = 0; i < 9; ++i) {
      int reference = output_bit(g, seed, i);
      const auto& inside = g.design.sets[static_cast<std::size_t>(i)];
      for (int flip = 0; flip < 9; ++flip) {
        if (std::find(inside.begin(), inside.end(), flip) != inside.end()) continue;
        BitString mutated = seed;
        mutated.set_bit(flip, 1 - mutated.bit(flip));
        if (output_bit(g, mutated, i) != reference) {
          detail = "locality broken at seed " + std::to_string(seed_value);
          return false;
        }
      }
    }
  }
  detail = "poly(5,2) and greedy(16,4,2,128) audited; locality exhaustive at ground size 9";
  return true;
}

// --- criterion 6: distinguisher sanity ------------------------------------------

bool criterion_distinguisher(std::string& detail) {
  TestStatistic bit0;
  bit0.name = "output bit 0";
  bit0.prefix_len = 1;
  bit0.accept = [](const BitString& prefix) { return prefix.bit(0) == 1; };

  Generator small{poly_design(3, 2), Predicate::parity()};
  Rational gap_small = distinguisher_gap_exact(small, bit0, g_jobs);
  Generator big{greedy_design(16, 4, 2, 128), Predicate::parity()};
  Rational gap_big = distinguisher_gap_exact(big, bit0, g_jobs);
  if (gap_small != Rational(0) || gap_big != Rational(0)) {
    detail = "single-bit gap not exactly zero: " + gap_small.str() + ", " + gap_big.str();
    return false;
  }
  detail = "gap exactly 0 at ground sizes 9 and 16";
  return true;
}

// --- criterion 7: statistical analog of the existence lemma ----------------------

bool criterion_statistical_analog(std::string& detail) {
  ComplexityProfile inputs = load_profile_file(fixture("stub_profile_n3.txt"));
  ComplexityProfile colours = load_profile_file(fixture("stub_colour_profile_m2.txt"));
  Systems systems;
  systems.s = build_system_s(inputs, 2);
  systems.q = build_system_q(colours, 1);
  const Rational b{201, 100};
  const std::uint64_t rng_seed = 20240801;

  SampleStats mc1 = sample_balance_fraction(3, 2, systems.s, systems.q, b, 10000, rng_seed, g_jobs);
  SampleStats mc2 = sample_balance_fraction(3, 2, systems.s, systems.q, b, 10000, rng_seed, 1);
  if (mc1.passes != mc2.passes || mc1.alpha_hat != mc2.alpha_hat) {
    detail = "Monte Carlo fraction not reproducible";
    return false;
  }

  Generator g{greedy_design(16, 4, 2, 128), Predicate::parity()};
  SearchParams params;
  params.n = 3;
  params.m = 2;
  params.s = 3;
  params.k = 2;
  params.q = 1;
  params.l_max = 6;
  params.b_mult = b;
  params.mode = SearchMode::Plain;
  auto scan = [&](int jobs) {
    std::atomic<long long> passes{0};
    parallel_chunks(0, 1ull << 16, jobs, [&](std::uint64_t begin, std::uint64_t end, int) {
      long long local = 0;
      for (std::uint64_t seed = begin; seed < end; ++seed)
        local += seed_is_good(g, seed, params, systems);
      passes.fetch_add(local, std::memory_order_relaxed);
    });
    return passes.load();
  };
  long long nw1 = scan(g_jobs);
  long long nw2 = scan(1);
  if (nw1 != nw2) {
    detail = "exhaustive NW fraction not reproducible";
    return false;
  }

  // Pre-registered oracle run (frozen): at m = 2 every legal palette level
  // makes the threshold exceed any possible count, so both fractions are 1.
  const long long frozen_mc_passes = 10000;
  const long long frozen_nw_passes = 65536;
  if (mc1.passes != frozen_mc_passes || nw1 != frozen_nw_passes) {
    detail = "fractions moved from the frozen oracle run: mc=" + std::to_string(mc1.passes) +
             " nw=" + std::to_string(nw1);
    return false;
  }

  double alpha_random = mc1.alpha_hat;
  double alpha_nw = static_cast<double>(nw1) / 65536.0;
  double sigma = std::sqrt(alpha_random * (1.0 - alpha_random) / 10000.0);
  std::ostringstream oss;
  oss << "alpha_random=" << alpha_random << " alpha_nw=" << alpha_nw;
  if (alpha_nw < alpha_random / 2.0 - 3.0 * sigma)
    oss << " FINDING: generator fraction below the lemma analog band (documented, not fatal)";
  detail = oss.str();
  return true;  // reproducibility is the hard gate
}

// --- criterion 8: end-to-end pipeline fixture -------------------------------------

bool criterion_pipeline_fixture(std::string& detail) {
  ExperimentConfig config = ExperimentConfig::parse_file(fixture("reference_config.txt"));
  PipelineResult result = run_pipeline(config, "acceptance_pipeline_out");
  if (result.exit_code != 0) {
    detail = "pipeline exit code " + std::to_string(result.exit_code);
    return false;
  }
  const Json& summary = result.summary;
  if (summary["search"]["found_seed"].is_null()) {
    detail = "no good seed found (frozen run found seed 0)";
    return false;
  }
  if (summary["verify_plain"]["violations"].size() != 0) {
    detail = "plain verification reported violations";
    return false;
  }
  if (summary["audit"]["dual_violations"].size() != 0) {
    detail = "dichotomy audit reported dual violations";
    return false;
  }
  if (summary["audit"]["max_certificate_bits"].get<int>() >
      summary["audit"]["certificate_bit_bound"].get<int>()) {
    detail = "certificate exceeded its bit bound";
    return false;
  }
  std::ifstream golden_in(fixture("golden_summary.json"));
  if (!golden_in) {
    detail = "missing golden fixture";
    return false;
  }
  Json golden = Json::parse(golden_in);
  if (dump_report(strip_timing(summary)) != dump_report(golden)) {
    detail = "summary differs from the golden file";
    return false;
  }
  detail = "seed " + summary["search"]["found_seed"].dump() +
           ", clean verification and audit, summary matches golden";
  return true;
}

// --- criterion 9: planted violations ------------------------------------------------

bool criterion_planted_violations(std::string& detail) {
  ExtractorParams params;
  params.n = 2;
  params.m = 3;
  params.s = 1;
  params.k = 2;
  params.delta = 2;
  params.c = 0;
  params.mu = 2;
  params.l_max = 6;
  params.pair_l_max = 16;
  Table table = load_table_file(fixture("planted_table_n2m3.txt"));

  StubOracle plain_stub = StubOracle::load_file(fixture("stub_planted_plain.txt"));
  VerificationReport plain = verify_plain(table, params, plain_stub);
  if (plain.violations.size() != 1 || plain.violations[0].x != BitString("10") ||
      plain.violations[0].y != BitString("01")) {
    detail = "plain fixture did not report exactly the planted pair";
    return false;
  }

  StubOracle strong_stub = StubOracle::load_file(fixture("stub_planted_strong.txt"));
  VerificationReport strong = verify_strong(table, params, strong_stub);
  if (strong.violations.size() != 1 || strong.violations[0].x != BitString("10") ||
      strong.violations[0].y != BitString("01") ||
      strong.violations[0].kind != ViolationKind::Row) {
    detail = "strong fixture did not report exactly the planted pair";
    return false;
  }

  StubOracle vacuous;
  for (std::uint32_t v = 0; v < 4; ++v) vacuous.set_plain(BitString::from_value(v, 2), params.k);
  VerificationReport empty = verify_plain(table, params, vacuous);
  if (!empty.vacuous || !empty.violations.empty()) {
    detail = "vacuous fixture misreported";
    return false;
  }

  StubOracle clean;
  VerificationReport fine = verify_plain(table, params, clean);
  if (fine.vacuous || !fine.violations.empty()) {
    detail = "clean fixture misreported";
    return false;
  }
  detail = "planted plain and strong pairs reported exactly; vacuous and clean fixtures correct";
  return true;
}

// --- criterion 10: certificate roundtrip ----------------------------------------------

bool criterion_certificate_roundtrip(std::string& detail) {
  ExtractorParams params;
  params.n = 2;
  params.m = 3;
  params.s = 1;
  params.k = 2;
  params.delta = 2;
  params.c = 0;
  params.mu = 2;
  params.l_max = 6;
  params.pair_l_max = 16;
  std::mt19937_64 rng(20240814);
  long long cells = 0;
  for (int fixture_index = 0; fixture_index < 20; ++fixture_index) {
    std::uint32_t special = static_cast<std::uint32_t>(rng() % 8);
    StubOracle stub;
    for (std::uint32_t v = 0; v < 4; ++v)
      stub.set_plain(BitString::from_value(v, 2), 3 + static_cast<int>(rng() % 3));
    for (std::uint32_t w = 0; w < 8; ++w)
      stub.set_plain(BitString::from_value(w, 3), w == special ? 0 : 7);
    for (std::uint32_t v = 0; v < 4; ++v) {
      std::uint32_t low = static_cast<std::uint32_t>(rng() % 8);
      for (std::uint32_t w = 0; w < 8; ++w)
        stub.set_conditional(BitString::from_value(w, 3), BitString::from_value(v, 2),
                             w == low ? 0 : 7);
    }
    Systems systems = systems_from_oracle(stub, params, true);
    Table t = testsupport::biased_table(2, 3, {special}, rng);
    for (CellMode mode : {CellMode::PlainCell, CellMode::RowCell, CellMode::SaturatedRowCell,
                          CellMode::ColumnCell, CellMode::SaturatedColumnCell}) {
      for (std::uint32_t xv = 0; xv < 4; ++xv)
        for (std::uint32_t yv = 0; yv < 4; ++yv) {
          BitString x = BitString::from_value(xv, 2), y = BitString::from_value(yv, 2);
          Certificate cert;
          try {
            cert = describe_cell(t, x, y, systems, params, mode);
          } catch (const NotAMember&) {
            continue;
          } catch (const LevelOutOfRange&) {
            continue;
          }
          auto back = reconstruct_cell(cert, t, systems, params);
          if (back.first != x || back.second != y) {
            detail = std::string("roundtrip broke in mode ") + cell_mode_name(mode);
            return false;
          }
          ++cells;
        }
    }
  }

  // The committed pipeline fixture: audited cells roundtrip too (vacuously
  // zero cells at those parameters, which the audit itself reports).
  ExperimentConfig config = ExperimentConfig::parse_file(fixture("reference_config.txt"));
  PipelineResult result = run_pipeline(config, "acceptance_pipeline_out_rt");
  if (result.summary["audit"]["dual_violations"].size() != 0) {
    detail = "pipeline fixture audit found certificate failures";
    return false;
  }
  detail = std::to_string(cells) + " certified cells across 20 fixtures, zero roundtrip failures";
  return cells > 100;
}

}  // namespace

int main() {
  std::printf("kextract acceptance suite (jobs=%d)\n", g_jobs);
  run_criterion({1, "machine soundness"}, criterion_bvm_soundness);
  run_criterion({2, "complexity laws"}, criterion_complexity_laws);
  run_criterion({3, "oracle equality"}, criterion_oracle_equality);
  run_criterion({4, "exact implies weak"}, criterion_exact_implies_weak);
  run_criterion({5, "design audit"}, criterion_design_audit);
  run_criterion({6, "distinguisher sanity"}, criterion_distinguisher);
  run_criterion({7, "statistical analog"}, criterion_statistical_analog);
  run_criterion({8, "pipeline fixture"}, criterion_pipeline_fixture);
  run_criterion({9, "planted violations"}, criterion_planted_violations);
  run_criterion({10, "certificate roundtrip"}, criterion_certificate_roundtrip);
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
