#include "kext/seedsearch.hpp"

#include <algorithm>
#include <chrono>

#include "kext/errors.hpp"
#include "kext/parallel.hpp"

namespace kext {

SystemS build_system_s(const ComplexityProfile& profile, int k) {
  SystemS sys;
  sys.origin = "levels " + std::to_string(k) + ".." + std::to_string(profile.l_max) + " of " +
               std::string(kMachineVersion) + " profile n=" + std::to_string(profile.n) +
               " s=" + std::to_string(profile.s);
  for (int level = k; level <= profile.l_max; ++level) {
    LevelSet set;
    set.n = profile.n;
    set.level = level;
    for (std::uint32_t v = 0; v < profile.values.size(); ++v)
      if (profile.values[v] < level) set.members.push_back(v);
    set.validate();  // counting bound makes |members| < 2^level automatic
    sys.pairs.push_back(std::move(set));
  }
  return sys;
}

SystemQ build_system_q(const ComplexityProfile& colour_profile, int q, bool all_levels) {
  SystemQ sys;
  auto palette_at = [&](int level) {
    Palette p;
    p.m = colour_profile.n;
    p.level = std::max(level, 0);
    for (std::uint32_t v = 0; v < colour_profile.values.size(); ++v)
      if (colour_profile.values[v] < level) p.colours.push_back(v);
    p.validate();
    return p;
  };
  if (all_levels) {
    for (int level = 1; level <= colour_profile.n; ++level) sys.palettes.push_back(palette_at(level));
  } else {
    sys.palettes.push_back(palette_at(q));
  }
  return sys;
}

RainbowTuple build_system_r_tuple(const LevelSet& anchor,
                                  const std::map<std::uint32_t, ComplexityProfile>& conditional_profiles,
                                  int q) {
  RainbowTuple tuple;
  tuple.anchor = anchor;
  tuple.level = std::max(q, 0);
  for (std::uint32_t member : anchor.members) {
    auto it = conditional_profiles.find(member);
    if (it == conditional_profiles.end())
      throw MissingProfile("build_system_r_tuple: no conditional profile for member " +
                           std::to_string(member));
    const ComplexityProfile& profile = it->second;
    Palette p;
    p.m = profile.n;
    p.level = tuple.level;
    for (std::uint32_t v = 0; v < profile.values.size(); ++v)
      if (profile.values[v] < q) p.colours.push_back(v);
    p.validate();
    tuple.palettes.push_back(std::move(p));
  }
  tuple.validate();
  return tuple;
}

void SearchParams::validate(int ground_size) const {
  if (n < 0 || m < 1) throw ConfigError("SearchParams: bad table dimensions");
  if (k < 1 || k > l_max) throw ConfigError("SearchParams: need 1 <= k <= l_max");
  if (q < 1 || q > m) throw ConfigError("SearchParams: need 1 <= q <= m");
  if (ground_size > 0 && ground_size < 64 && seed_end > (1ull << ground_size))
    throw ConfigError("SearchParams: seed range beyond 2^ground_size");
}

Table table_from_seed_streamed(const Generator& g, std::uint64_t seed, int n, int m) {
  long long need = (1ll << (2 * n)) * m;
  if (need > g.output_length())
    throw InsufficientBits("table_from_seed: generator emits " + std::to_string(g.output_length()) +
                           " bits, table needs " + std::to_string(need));
  BitString seed_bits = BitString::from_value(seed, g.design.ground_size);
  std::size_t cells = static_cast<std::size_t>(1) << (2 * n);
  std::vector<std::uint32_t> colours(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::uint32_t v = 0;
    for (int j = 0; j < m; ++j)
      v = (v << 1) | static_cast<std::uint32_t>(output_bit(g, seed_bits, static_cast<int>(cell) * m + j));
    colours[cell] = v;
  }
  return Table(n, m, std::move(colours));
}

Table table_from_seed(const Generator& g, std::uint64_t seed, int n, int m) {
  long long need = (1ll << (2 * n)) * m;
  if (need > g.output_length())
    throw InsufficientBits("table_from_seed: generator emits " + std::to_string(g.output_length()) +
                           " bits, table needs " + std::to_string(need));
  BitString seed_bits = BitString::from_value(seed, g.design.ground_size);
  return table_from_bits(generate(g, seed_bits, static_cast<int>(need)), n, m);
}

bool seed_is_good(const Generator& g, std::uint64_t seed, const SearchParams& params,
                  const Systems& systems, SeedRejection* rejection) {
  Table t = table_from_seed_streamed(g, seed, params.n, params.m);
  if (params.mode == SearchMode::Plain) {
    WeakBalanceResult r = is_weak_balanced(t, systems.s, systems.q, params.b_mult);
    if (!r.balanced && rejection && r.violation)
      *rejection = {seed, false, r.violation->s1_index, r.violation->s2_index,
                    r.violation->q_index, r.violation->count};
    return r.balanced;
  }
  RainbowBalanceResult r = is_weak_rainbow_balanced(t, systems.s, systems.r, params.k, params.b_mult);
  if (!r.balanced && rejection && r.violation)
    *rejection = {seed, r.violation->column_direction, r.violation->s_index, r.violation->r_index,
                  0, r.violation->marked_in_saturated};
  return r.balanced;
}

GoodSeedReport find_good_seed(const Generator& g, const SearchParams& params, const Systems& systems) {
  auto start = std::chrono::steady_clock::now();
  GoodSeedReport report;
  if (params.seed_begin >= params.seed_end)
    throw ConfigError("find_good_seed: empty seed range");

  // Blocks bound the work discarded when a good seed terminates the scan
  // early; per-block thread spawns are negligible at this granularity.
  const std::uint64_t block_size = std::max<std::uint64_t>(1024, static_cast<std::uint64_t>(params.jobs) * 1024);
  std::vector<std::uint8_t> good;
  std::vector<SeedRejection> rejections;
  for (std::uint64_t block_begin = params.seed_begin;
       block_begin < params.seed_end && !report.found; block_begin += block_size) {
    std::uint64_t block_end = std::min(params.seed_end, block_begin + block_size);
    good.assign(static_cast<std::size_t>(block_end - block_begin), 0);
    rejections.assign(static_cast<std::size_t>(block_end - block_begin), SeedRejection{});
    parallel_chunks(block_begin, block_end, params.jobs,
                    [&](std::uint64_t begin, std::uint64_t end, int) {
                      for (std::uint64_t seed = begin; seed < end; ++seed) {
                        std::size_t at = static_cast<std::size_t>(seed - block_begin);
                        good[at] = seed_is_good(g, seed, params, systems,
                                                params.retain_rejections > 0 ? &rejections[at]
                                                                             : nullptr);
                      }
                    });
    for (std::uint64_t seed = block_begin; seed < block_end; ++seed) {
      std::size_t at = static_cast<std::size_t>(seed - block_begin);
      if (good[at]) {
        report.found = seed;
        report.seeds_checked = seed - params.seed_begin + 1;
        break;
      }
      if (static_cast<int>(report.first_violations.size()) < params.retain_rejections)
        report.first_violations.push_back(rejections[at]);
    }
  }
  if (!report.found) report.seeds_checked = params.seed_end - params.seed_begin;
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace kext
