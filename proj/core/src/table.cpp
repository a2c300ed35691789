#include "kext/table.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kext/errors.hpp"

namespace kext {

Table::Table(int n, int m, std::vector<std::uint32_t> colours)
    : n_(n), m_(m), colours_(std::move(colours)) {
  if (n < 0 || n > 12) throw std::invalid_argument("Table: n out of range [0, 12]");
  if (m < 1 || m > 24) throw std::invalid_argument("Table: m out of range [1, 24]");
  std::size_t expect = static_cast<std::size_t>(1) << (2 * n);
  if (colours_.size() != expect) throw std::invalid_argument("Table: colour array has wrong length");
  for (std::uint32_t c : colours_)
    if (c >= (1u << m)) throw std::invalid_argument("Table: colour value out of range");
}

Table table_from_bits(const BitString& bits, int n, int m) {
  std::size_t cells = static_cast<std::size_t>(1) << (2 * n);
  std::size_t need = cells * static_cast<std::size_t>(m);
  if (static_cast<std::size_t>(bits.size()) < need)
    throw InsufficientBits("table_from_bits: need " + std::to_string(need) + " bits, have " +
                           std::to_string(bits.size()));
  std::vector<std::uint32_t> colours(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    std::uint32_t v = 0;
    for (int j = 0; j < m; ++j) v = (v << 1) | static_cast<std::uint32_t>(bits.bit(static_cast<int>(i * m) + j));
    colours[i] = v;
  }
  return Table(n, m, std::move(colours));
}

bool Palette::contains(std::uint32_t colour) const {
  return std::binary_search(colours.begin(), colours.end(), colour);
}

void Palette::validate() const {
  if (m < 1 || m > 24) throw InvariantViolation("Palette: m out of range");
  if (!std::is_sorted(colours.begin(), colours.end()))
    throw InvariantViolation("Palette: colours not sorted");
  if (std::adjacent_find(colours.begin(), colours.end()) != colours.end())
    throw InvariantViolation("Palette: duplicate colour");
  for (std::uint32_t c : colours)
    if (c >= (1u << m)) throw InvariantViolation("Palette: colour out of range");
  if (level < 0 || level > 62) throw InvariantViolation("Palette: level out of range");
  if (static_cast<unsigned long long>(colours.size()) >= (1ull << level))
    throw InvariantViolation("Palette: size " + std::to_string(colours.size()) +
                             " not below 2^" + std::to_string(level));
}

bool LevelSet::contains(std::uint32_t value) const {
  return std::binary_search(members.begin(), members.end(), value);
}

void LevelSet::validate() const {
  if (n < 0 || n > 24) throw InvariantViolation("LevelSet: n out of range");
  if (!std::is_sorted(members.begin(), members.end()))
    throw InvariantViolation("LevelSet: members not sorted");
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw InvariantViolation("LevelSet: duplicate member");
  for (std::uint32_t v : members)
    if (v >= (1u << n)) throw InvariantViolation("LevelSet: member out of range");
  if (level < 0 || level > 62) throw InvariantViolation("LevelSet: level out of range");
  if (static_cast<unsigned long long>(members.size()) >= (1ull << level))
    throw InvariantViolation("LevelSet: size " + std::to_string(members.size()) +
                             " not below 2^" + std::to_string(level));
}

Palette popular_palette(const Table& t, int count) {
  std::uint32_t palette_space = 1u << t.m();
  if (count < 1 || static_cast<std::uint32_t>(count) > palette_space)
    throw std::invalid_argument("popular_palette: count out of [1, 2^m]");
  std::vector<long long> occurrences(palette_space, 0);
  for (std::uint32_t c : t.colours()) ++occurrences[c];
  std::vector<std::uint32_t> order(palette_space);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (occurrences[a] != occurrences[b]) return occurrences[a] > occurrences[b];
    return a < b;
  });
  Palette p;
  p.m = t.m();
  p.colours.assign(order.begin(), order.begin() + count);
  std::sort(p.colours.begin(), p.colours.end());
  int level = 0;
  while ((1ll << level) <= count) ++level;
  p.level = level;
  return p;
}

long long colour_count(const Table& t, const LevelSet& s1, const LevelSet& s2, const Palette& p) {
  // Membership mask beats binary search across the double loop.
  std::vector<std::uint8_t> in_palette(static_cast<std::size_t>(1) << t.m(), 0);
  for (std::uint32_t c : p.colours) in_palette[c] = 1;
  long long total = 0;
  for (std::uint32_t x : s1.members) {
    const std::uint32_t* row = t.colours().data() + (static_cast<std::size_t>(x) << t.n());
    for (std::uint32_t y : s2.members) total += in_palette[row[y]];
  }
  return total;
}

void save_table(std::ostream& out, const Table& t) {
  BitString bits;
  bits.bits().reserve(t.cell_count() * static_cast<std::size_t>(t.m()));
  for (std::uint32_t c : t.colours()) {
    for (int j = t.m() - 1; j >= 0; --j) bits.push_back(static_cast<int>((c >> j) & 1));
  }
  out << "n=" << t.n() << " m=" << t.m() << "\n" << to_hex(bits) << "\n";
}

Table load_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("load_table: missing header line");
  int n = -1, m = -1;
  if (std::sscanf(header.c_str(), "n=%d m=%d", &n, &m) != 2)
    throw IoError("load_table: bad header '" + header + "'");
  std::string hex, line;
  while (std::getline(in, line)) {
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) hex.push_back(c);
  }
  long long need = (1ll << (2 * n)) * m;
  BitString bits = from_hex(hex, static_cast<int>(need));
  return table_from_bits(bits, n, m);
}

void save_table_file(const std::string& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw IoError("save_table_file: cannot open " + path);
  save_table(out, t);
}

Table load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_table_file: cannot open " + path);
  return load_table(in);
}

}  // namespace kext
