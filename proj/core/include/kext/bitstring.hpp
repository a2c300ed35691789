#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kext {

/// A finite binary string. Strings of length n index [0, 2^n) by their
/// big-endian value (bit 0 is the most significant digit).
class BitString {
 public:
  BitString() = default;

  /// Parse from a string of '0'/'1' characters, e.g. BitString("0110").
  explicit BitString(std::string_view zeros_and_ones);

  /// The length-`width` string whose big-endian value is `value`.
  static BitString from_value(std::uint64_t value, int width);

  int size() const { return static_cast<int>(bits_.size()); }
  bool empty() const { return bits_.empty(); }

  int bit(int i) const { return bits_[static_cast<std::size_t>(i)]; }
  void set_bit(int i, int v) { bits_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 1); }
  void push_back(int v) { bits_.push_back(static_cast<std::uint8_t>(v & 1)); }
  void append(const BitString& other);
  void clear() { bits_.clear(); }

  /// Big-endian value; requires size() <= 63.
  std::uint64_t value() const;

  std::string str() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  /// Orders by length first, then lexicographically (= numerically within one length).
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b);

 private:
  std::vector<std::uint8_t> bits_;
};

/// Self-delimiting pair code: double every bit of x, append "01", append y.
/// Injective over all pairs, and |code| = 2|x| + 2 + |y|.
BitString encode_pair(const BitString& x, const BitString& y);

/// Inverse of encode_pair on its image; throws MalformedPair otherwise.
std::pair<BitString, BitString> decode_pair(const BitString& z);

/// Hex codec for bit sequences: nibbles big-endian, the last nibble
/// zero-padded on the right. The bit length is NOT recoverable from the hex
/// alone; callers must carry it (headers do).
std::string to_hex(const BitString& bits);
BitString from_hex(std::string_view hex, int bit_len);

/// Lossless one-token form "<len>:<hex>", used wherever a header does not
/// already pin the bit length.
std::string to_len_hex(const BitString& bits);
BitString from_len_hex(std::string_view token);

}  // namespace kext
