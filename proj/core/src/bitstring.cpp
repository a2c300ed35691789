#include "kext/bitstring.hpp"

#include <charconv>
#include <stdexcept>

#include "kext/errors.hpp"

namespace kext {

BitString::BitString(std::string_view zeros_and_ones) {
  bits_.reserve(zeros_and_ones.size());
  for (char c : zeros_and_ones) {
    if (c == '0') {
      bits_.push_back(0);
    } else if (c == '1') {
      bits_.push_back(1);
    } else {
      throw std::invalid_argument("BitString: expected only '0'/'1', got '" + std::string(1, c) + "'");
    }
  }
}

BitString BitString::from_value(std::uint64_t value, int width) {
  if (width < 0 || width > 63) throw std::invalid_argument("BitString::from_value: width out of range");
  if (width < 64 && width >= 0 && (value >> width) != 0)
    throw std::invalid_argument("BitString::from_value: value does not fit width");
  BitString s;
  s.bits_.resize(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i)
    s.bits_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1);
  return s;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::uint64_t BitString::value() const {
  if (size() > 63) throw std::overflow_error("BitString::value: string longer than 63 bits");
  std::uint64_t v = 0;
  for (std::uint8_t b : bits_) v = (v << 1) | b;
  return v;
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (std::uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (int i = 0; i < a.size(); ++i)
    if (auto c = a.bit(i) <=> b.bit(i); c != 0) return c;
  return std::strong_ordering::equal;
}

BitString encode_pair(const BitString& x, const BitString& y) {
  BitString z;
  z.bits().reserve(static_cast<std::size_t>(2 * x.size() + 2 + y.size()));
  for (int i = 0; i < x.size(); ++i) {
    z.push_back(x.bit(i));
    z.push_back(x.bit(i));
  }
  z.push_back(0);
  z.push_back(1);
  z.append(y);
  return z;
}

std::pair<BitString, BitString> decode_pair(const BitString& z) {
  // Scan doubled pairs until the "01" separator.
  int i = 0;
  BitString x;
  while (true) {
    if (i + 1 >= z.size()) throw MalformedPair("decode_pair: no separator found");
    int a = z.bit(i), b = z.bit(i + 1);
    if (a == 0 && b == 1) break;
    if (a != b) throw MalformedPair("decode_pair: undoubled bit before separator");
    x.push_back(a);
    i += 2;
  }
  BitString y;
  for (int j = i + 2; j < z.size(); ++j) y.push_back(z.bit(j));
  return {std::move(x), std::move(y)};
}

namespace {

char nibble_to_char(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }

int char_to_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw IoError("from_hex: invalid hex digit '" + std::string(1, c) + "'");
}

}  // namespace

std::string to_hex(const BitString& bits) {
  std::string out;
  out.reserve((static_cast<std::size_t>(bits.size()) + 3) / 4);
  for (int i = 0; i < bits.size(); i += 4) {
    unsigned v = 0;
    for (int j = 0; j < 4; ++j) {
      v <<= 1;
      if (i + j < bits.size()) v |= static_cast<unsigned>(bits.bit(i + j));
    }
    out.push_back(nibble_to_char(v));
  }
  return out;
}

BitString from_hex(std::string_view hex, int bit_len) {
  if (bit_len < 0) throw IoError("from_hex: negative bit length");
  if (static_cast<int>(hex.size()) * 4 < bit_len)
    throw IoError("from_hex: hex too short for declared bit length");
  BitString out;
  out.bits().reserve(static_cast<std::size_t>(bit_len));
  for (int i = 0; i < bit_len; ++i) {
    int nib = char_to_nibble(hex[static_cast<std::size_t>(i / 4)]);
    out.push_back((nib >> (3 - (i % 4))) & 1);
  }
  return out;
}

std::string to_len_hex(const BitString& bits) {
  return std::to_string(bits.size()) + ":" + to_hex(bits);
}

BitString from_len_hex(std::string_view token) {
  auto colon = token.find(':');
  if (colon == std::string_view::npos) throw IoError("from_len_hex: missing ':' in token");
  int len = 0;
  auto [p, ec] = std::from_chars(token.data(), token.data() + colon, len);
  if (ec != std::errc() || p != token.data() + colon) throw IoError("from_len_hex: bad length prefix");
  return from_hex(token.substr(colon + 1), len);
}

}  // namespace kext
