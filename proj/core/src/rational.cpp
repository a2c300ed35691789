#include "kext/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace kext {

namespace {

std::int64_t checked(__int128 v, const char* op) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(std::string("Rational: overflow in ") + op);
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::int64_t num = 0, den = 1;
  std::string_view num_part = slash == std::string_view::npos ? text : text.substr(0, slash);
  auto [np, nec] = std::from_chars(num_part.data(), num_part.data() + num_part.size(), num);
  if (nec != std::errc() || np != num_part.data() + num_part.size())
    throw std::invalid_argument("Rational::parse: bad numerator in '" + std::string(text) + "'");
  if (slash != std::string_view::npos) {
    std::string_view den_part = text.substr(slash + 1);
    auto [dp, dec] = std::from_chars(den_part.data(), den_part.data() + den_part.size(), den);
    if (dec != std::errc() || dp != den_part.data() + den_part.size())
      throw std::invalid_argument("Rational::parse: bad denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  __int128 num = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
  __int128 den = static_cast<__int128>(a.den_) * b.den_;
  return Rational(checked(num, "+"), checked(den, "+"));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  __int128 num = static_cast<__int128>(a.num_) * b.num_;
  __int128 den = static_cast<__int128>(a.den_) * b.den_;
  return Rational(checked(num, "*"), checked(den, "*"));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
  __int128 num = static_cast<__int128>(a.num_) * b.den_;
  __int128 den = static_cast<__int128>(a.den_) * b.num_;
  return Rational(checked(num, "/"), checked(den, "/"));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

}  // namespace kext
