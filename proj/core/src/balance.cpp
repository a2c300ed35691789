#include "kext/balance.hpp"

#include <algorithm>
#include <cmath>

#include "kext/errors.hpp"

namespace kext {

void SystemS::validate() const {
  for (const LevelSet& s : pairs) s.validate();
}

void SystemQ::validate() const {
  for (const Palette& p : palettes) p.validate();
}

void RainbowTuple::validate() const {
  anchor.validate();
  if (palettes.size() != anchor.members.size())
    throw InvariantViolation("RainbowTuple: palette count differs from anchor size");
  for (const Palette& p : palettes) {
    p.validate();
    if (static_cast<unsigned long long>(p.colours.size()) >= (1ull << level))
      throw InvariantViolation("RainbowTuple: palette size not below 2^level");
  }
}

void SystemR::validate() const {
  for (const RainbowTuple& t : tuples) t.validate();
}

namespace {

enum class Cmp { Less, Greater };

bool compare_threshold(long long count, int exponent, const Rational& b_mult, Cmp cmp) {
  if (count < 0) throw std::invalid_argument("threshold: negative count");
  if (exponent < -64 || exponent > 64)
    throw ExponentOutOfRange("threshold: exponent " + std::to_string(exponent) + " out of [-64, 64]");
  if (b_mult.num() <= 0) throw std::invalid_argument("threshold: multiplier must be positive");
  // count <> num/den * 2^e  via exact cross-multiplication in 128 bits.
  unsigned __int128 lhs = static_cast<unsigned __int128>(count) * static_cast<unsigned __int128>(b_mult.den());
  unsigned __int128 rhs = static_cast<unsigned __int128>(b_mult.num());
  if (exponent >= 0)
    rhs <<= exponent;
  else
    lhs <<= -exponent;
  return cmp == Cmp::Less ? lhs < rhs : lhs > rhs;
}

}  // namespace

bool threshold_holds(long long count, int exponent, const Rational& b_mult) {
  return compare_threshold(count, exponent, b_mult, Cmp::Less);
}

bool exceeds_threshold(long long count, int exponent, const Rational& b_mult) {
  return compare_threshold(count, exponent, b_mult, Cmp::Greater);
}

namespace {

constexpr std::uint32_t kExhaustiveSideLimit = 8;  // 2^n

void guard_exhaustive(const Table& t, bool palettes_too) {
  if (t.side() > kExhaustiveSideLimit)
    throw TooLargeForExhaustive("exhaustive checker: 2^n > 8");
  if (palettes_too && (1u << t.m()) > kExhaustiveSideLimit)
    throw TooLargeForExhaustive("exhaustive checker: 2^m > 8");
}

int popcount32(std::uint32_t v) { return __builtin_popcount(v); }

/// Top `q_count` colours among `occurrences`, ties by ascending colour.
std::vector<std::uint32_t> top_colours(const std::vector<long long>& occurrences, int q_count) {
  std::vector<std::uint32_t> order(occurrences.size());
  for (std::uint32_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (occurrences[a] != occurrences[b]) return occurrences[a] > occurrences[b];
    return a < b;
  });
  order.resize(static_cast<std::size_t>(q_count));
  return order;
}

}  // namespace

bool is_balanced_exact(const Table& t, int k_size, int q_count) {
  guard_exhaustive(t, false);
  const std::uint32_t side = t.side();
  Palette popular = popular_palette(t, q_count);
  std::vector<std::uint8_t> in_palette(static_cast<std::size_t>(1) << t.m(), 0);
  for (std::uint32_t c : popular.colours) in_palette[c] = 1;

  for (std::uint32_t mask1 = 0; mask1 < (1u << side); ++mask1) {
    int size1 = popcount32(mask1);
    if (size1 < k_size) continue;
    for (std::uint32_t mask2 = 0; mask2 < (1u << side); ++mask2) {
      int size2 = popcount32(mask2);
      if (size2 < k_size) continue;
      long long count = 0;
      for (std::uint32_t x = 0; x < side; ++x) {
        if (!((mask1 >> x) & 1)) continue;
        for (std::uint32_t y = 0; y < side; ++y)
          if ((mask2 >> y) & 1) count += in_palette[t.cell(x, y)];
      }
      // fraction < 2*Q/2^m  <=>  count * 2^m < 2 * Q * |S1| * |S2|
      if (!((count << t.m()) < 2ll * q_count * size1 * size2)) return false;
    }
  }
  return true;
}

namespace {

/// Marks the popular colours of one line (a row restricted to the rectangle,
/// or a column), then reports how many of its cells are marked.
long long marked_in_line(const Table& t, std::uint32_t line, bool line_is_row, std::uint32_t mask,
                         int q_count) {
  std::vector<long long> occurrences(static_cast<std::size_t>(1) << t.m(), 0);
  const std::uint32_t side = t.side();
  for (std::uint32_t other = 0; other < side; ++other) {
    if (!((mask >> other) & 1)) continue;
    std::uint32_t c = line_is_row ? t.cell(other, line) : t.cell(line, other);
    ++occurrences[c];
  }
  auto top = top_colours(occurrences, q_count);
  std::vector<std::uint8_t> popular(occurrences.size(), 0);
  for (std::uint32_t c : top) popular[c] = 1;
  long long marked = 0;
  for (std::uint32_t other = 0; other < side; ++other) {
    if (!((mask >> other) & 1)) continue;
    std::uint32_t c = line_is_row ? t.cell(other, line) : t.cell(line, other);
    marked += popular[c];
  }
  return marked;
}

}  // namespace

bool is_rainbow_balanced_exact(const Table& t, int k_size, int q_count) {
  guard_exhaustive(t, false);
  const std::uint32_t side = t.side();
  for (int orientation = 0; orientation < 2; ++orientation) {
    const bool rows = orientation == 0;
    for (std::uint32_t mask1 = 0; mask1 < (1u << side); ++mask1) {
      int size1 = popcount32(mask1);
      if (size1 < k_size) continue;
      for (std::uint32_t mask2 = 0; mask2 < (1u << side); ++mask2) {
        int size2 = popcount32(mask2);
        if (size2 < k_size) continue;
        // For rows: lines come from S2 (mask2), cells within S1 (mask1).
        std::uint32_t line_mask = rows ? mask2 : mask1;
        std::uint32_t cell_mask = rows ? mask1 : mask2;
        long long marked = 0;
        for (std::uint32_t line = 0; line < side; ++line)
          if ((line_mask >> line) & 1) marked += marked_in_line(t, line, rows, cell_mask, q_count);
        if (!((marked << t.m()) < 2ll * q_count * size1 * size2)) return false;
      }
    }
  }
  return true;
}

WeakBalanceResult is_weak_balanced(const Table& t, const SystemS& sys_s, const SystemQ& sys_q,
                                   const Rational& b_mult) {
  WeakBalanceResult result;
  std::vector<std::vector<std::uint8_t>> masks;
  masks.reserve(sys_q.palettes.size());
  for (const Palette& p : sys_q.palettes) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(1) << t.m(), 0);
    for (std::uint32_t c : p.colours) mask[c] = 1;
    masks.push_back(std::move(mask));
  }
  for (int i = 0; i < static_cast<int>(sys_s.pairs.size()); ++i) {
    const LevelSet& s1 = sys_s.pairs[static_cast<std::size_t>(i)];
    for (int j = 0; j < static_cast<int>(sys_s.pairs.size()); ++j) {
      const LevelSet& s2 = sys_s.pairs[static_cast<std::size_t>(j)];
      for (int a = 0; a < static_cast<int>(sys_q.palettes.size()); ++a) {
        const Palette& q = sys_q.palettes[static_cast<std::size_t>(a)];
        const auto& mask = masks[static_cast<std::size_t>(a)];
        long long count = 0;
        for (std::uint32_t x : s1.members) {
          const std::uint32_t* row = t.colours().data() + (static_cast<std::size_t>(x) << t.n());
          for (std::uint32_t y : s2.members) count += mask[row[y]];
        }
        int exponent = s1.level + s2.level + q.level - t.m();
        if (!threshold_holds(count, exponent, b_mult)) {
          result.balanced = false;
          result.violation = WeakViolation{i, j, a, count, exponent};
          return result;
        }
      }
    }
  }
  return result;
}

RainbowBalanceResult is_weak_rainbow_balanced(const Table& t, const SystemS& sys_s,
                                              const SystemR& sys_r, int k, const Rational& b_mult) {
  RainbowBalanceResult result;
  for (int direction = 0; direction < 2; ++direction) {
    const bool columns = direction == 1;
    for (int i = 0; i < static_cast<int>(sys_s.pairs.size()); ++i) {
      const LevelSet& free_set = sys_s.pairs[static_cast<std::size_t>(i)];
      const int l_free = free_set.level;
      for (int r = 0; r < static_cast<int>(sys_r.tuples.size()); ++r) {
        const RainbowTuple& tuple = sys_r.tuples[static_cast<std::size_t>(r)];
        const int q = tuple.level;
        const int saturation_exp = l_free + q - t.m();
        long long total_saturated = 0;
        for (std::size_t a = 0; a < tuple.anchor.members.size(); ++a) {
          std::uint32_t anchored = tuple.anchor.members[a];
          const Palette& palette = tuple.palettes[a];
          long long marked = 0;
          for (std::uint32_t free_value : free_set.members) {
            // Rows: anchor holds rows, free set holds columns. Columns: flip.
            std::uint32_t colour =
                columns ? t.cell(anchored, free_value) : t.cell(free_value, anchored);
            marked += palette.contains(colour);
          }
          if (exceeds_threshold(marked, saturation_exp, b_mult)) total_saturated += marked;
        }
        if (!threshold_holds(total_saturated, saturation_exp + k, b_mult)) {
          result.balanced = false;
          result.violation = RainbowViolation{columns, i, r, total_saturated, saturation_exp + k};
          return result;
        }
      }
    }
  }
  return result;
}

bool is_multisource_extractor(const Table& t, int k, const Rational& eps) {
  guard_exhaustive(t, true);
  if (eps.num() < 0) throw std::invalid_argument("is_multisource_extractor: negative eps");
  const std::uint32_t side = t.side();
  const std::uint32_t palette_space = 1u << t.m();
  const long long min_size = 1ll << k;
  for (std::uint32_t mask1 = 0; mask1 < (1u << side); ++mask1) {
    long long size1 = popcount32(mask1);
    if (size1 < min_size) continue;
    for (std::uint32_t mask2 = 0; mask2 < (1u << side); ++mask2) {
      long long size2 = popcount32(mask2);
      if (size2 < min_size) continue;
      std::vector<long long> per_colour(palette_space, 0);
      for (std::uint32_t x = 0; x < side; ++x) {
        if (!((mask1 >> x) & 1)) continue;
        for (std::uint32_t y = 0; y < side; ++y)
          if ((mask2 >> y) & 1) ++per_colour[t.cell(x, y)];
      }
      const long long cells = size1 * size2;
      for (std::uint32_t palette = 0; palette < (1u << palette_space); ++palette) {
        long long count = 0;
        int palette_size = popcount32(palette);
        for (std::uint32_t c = 0; c < palette_space; ++c)
          if ((palette >> c) & 1) count += per_colour[c];
        // |count/cells - palette_size/2^m| <= eps, cross-multiplied exactly:
        // |count*2^m - palette_size*cells| * den <= num * cells * 2^m
        __int128 diff = static_cast<__int128>(count) * palette_space -
                        static_cast<__int128>(palette_size) * cells;
        if (diff < 0) diff = -diff;
        __int128 bound = static_cast<__int128>(eps.num()) * cells * palette_space;
        if (diff * eps.den() > bound) return false;
      }
    }
  }
  return true;
}

double min_entropy(const Distribution& dist) {
  Rational sum(0);
  Rational max_weight(0);
  for (const auto& [label, weight] : dist) {
    if (weight < Rational(0)) throw NotADistribution("min_entropy: negative weight for '" + label + "'");
    sum = sum + weight;
    if (max_weight < weight) max_weight = weight;
  }
  if (sum != Rational(1)) throw NotADistribution("min_entropy: weights sum to " + sum.str());
  return -std::log2(max_weight.to_double());
}

Rational stat_distance(const Distribution& d1, const Distribution& d2) {
  auto check = [](const Distribution& d, const char* name) {
    Rational sum(0);
    for (const auto& [label, weight] : d) {
      if (weight < Rational(0))
        throw NotADistribution(std::string("stat_distance: negative weight in ") + name);
      sum = sum + weight;
    }
    if (sum != Rational(1))
      throw NotADistribution(std::string("stat_distance: ") + name + " sums to " + sum.str());
  };
  check(d1, "d1");
  check(d2, "d2");
  if (d1.size() != d2.size()) throw DomainMismatch("stat_distance: different outcome sets");
  Rational total(0);
  auto it2 = d2.begin();
  for (auto it1 = d1.begin(); it1 != d1.end(); ++it1, ++it2) {
    if (it1->first != it2->first) throw DomainMismatch("stat_distance: different outcome sets");
    total = total + (it1->second - it2->second).abs();
  }
  return total / Rational(2);
}

}  // namespace kext
