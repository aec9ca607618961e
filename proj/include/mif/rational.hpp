#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace mif {

// Exact rational number in canonical form: gcd(num, den) == 1, den > 0.
// All arithmetic goes through 128-bit intermediates and throws
// std::overflow_error if a reduced result no longer fits in 64 bits.
class Rational {
 public:
  constexpr Rational() noexcept : num_(0), den_(1) {}
  Rational(long long value) : num_(value), den_(1) {}  // implicit on purpose
  Rational(long long num, long long den);

  // Accepts "7", "-3", "3/5", "-3/5", "0.6", "-1.25". Decimal strings are
  // converted exactly (0.6 -> 3/5). Throws std::invalid_argument otherwise.
  static Rational parse(std::string_view text);

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // throws on division by zero
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

  // Canonical "p/q" (or "p" when integral).
  std::string str() const;
  // Exact decimal when the denominator is of the form 2^a * 5^b ("1.4",
  // "0.375"), otherwise falls back to str() ("1/3").
  std::string decimal_str() const;

 private:
  long long num_;
  long long den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace mif
