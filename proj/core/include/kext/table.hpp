#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kext/bitstring.hpp"

namespace kext {

/// A colouring {0,1}^n x {0,1}^n -> {0,1}^m. The first argument is the
/// column, the second the row; cell (x, y) lives at flat index x*2^n + y.
class Table {
 public:
  Table() = default;
  Table(int n, int m, std::vector<std::uint32_t> colours);

  int n() const { return n_; }
  int m() const { return m_; }
  std::uint32_t side() const { return 1u << n_; }
  std::size_t cell_count() const { return colours_.size(); }

  std::uint32_t cell(std::uint32_t x, std::uint32_t y) const {
    return colours_[(static_cast<std::size_t>(x) << n_) | y];
  }
  const std::vector<std::uint32_t>& colours() const { return colours_; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint32_t> colours_;
};

/// Colour of cell (x,y) is the big-endian value of the m bits at offset
/// (x*2^n + y)*m; extra bits beyond 2^(2n)*m are ignored.
/// Throws InsufficientBits if fewer than 2^(2n)*m bits are supplied.
Table table_from_bits(const BitString& bits, int n, int m);

/// A set of colours with a level bound |colours| < 2^level.
struct Palette {
  int m = 0;
  int level = 0;
  std::vector<std::uint32_t> colours;  // sorted, deduplicated, < 2^m

  bool contains(std::uint32_t colour) const;
  void validate() const;
};

/// A set of n-bit strings (stored as values) with |members| < 2^level.
struct LevelSet {
  int n = 0;
  int level = 0;
  std::vector<std::uint32_t> members;  // sorted, deduplicated, < 2^n

  bool contains(std::uint32_t value) const;
  void validate() const;
};

/// The `count` colours with the most cells in t, ties broken by ascending
/// colour value. The returned level is the least q with count < 2^q.
Palette popular_palette(const Table& t, int count);

/// Exact number of cells (x, y) in s1 x s2 whose colour belongs to p.
long long colour_count(const Table& t, const LevelSet& s1, const LevelSet& s2, const Palette& p);

// Table file format: a header line "n=<int> m=<int>", then a hex dump of the
// colour bit sequence in flat layout order.
void save_table(std::ostream& out, const Table& t);
Table load_table(std::istream& in);
void save_table_file(const std::string& path, const Table& t);
Table load_table_file(const std::string& path);

}  // namespace kext
