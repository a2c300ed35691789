#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kext {

/// Exact rational with int64 numerator/denominator, always normalized
/// (gcd 1, denominator > 0). Arithmetic throws on int64 overflow; the
/// quantities in this project (threshold multipliers, probabilities over
/// desk-scale sample spaces) stay far below that.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t num, std::int64_t den);
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design

  static Rational parse(std::string_view text);  // "a/b" or "a"

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace kext
