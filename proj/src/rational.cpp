#include "mif/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace mif {
namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<long long>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

i128 parse_digits(std::string_view s) {
  if (s.size() > 18) throw std::invalid_argument("numeric literal too long");
  i128 v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  i128 n = num;
  i128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto bad = [&] {
    return std::invalid_argument("malformed rational literal: '" +
                                 std::string(text) + "'");
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash);
    std::string_view q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw bad();
    i128 num = parse_digits(p);
    i128 den = parse_digits(q);
    if (den == 0) throw bad();
    return make(negative ? -num : num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) throw bad();
    i128 num = parse_digits(whole);
    i128 den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    return make(negative ? -num : num, den);
  }
  if (!all_digits(s)) throw bad();
  i128 num = parse_digits(s);
  return make(negative ? -num : num, 1);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-i128(num_));
  r.den_ = den_;
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return make(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return make(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return make(i128(num_) * o.num_, i128(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::invalid_argument("rational division by zero");
  return make(i128(num_) * o.den_, i128(den_) * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  i128 lhs = i128(num_) * o.den_;
  i128 rhs = i128(o.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  std::string out = std::to_string(num_);
  if (den_ != 1) {
    out += '/';
    out += std::to_string(den_);
  }
  return out;
}

std::string Rational::decimal_str() const {
  if (den_ == 1) return std::to_string(num_);
  long long d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return str();  // non-terminating decimal

  int k = twos > fives ? twos : fives;
  i128 scaled = abs128(i128(num_));
  for (int i = twos; i < k; ++i) scaled *= 2;
  for (int i = fives; i < k; ++i) scaled *= 5;
  i128 pow10 = 1;
  for (int i = 0; i < k; ++i) pow10 *= 10;

  i128 whole = scaled / pow10;
  i128 frac = scaled % pow10;
  std::string digits;
  for (int i = 0; i < k; ++i) {
    digits.insert(digits.begin(), static_cast<char>('0' + int(frac % 10)));
    frac /= 10;
  }
  std::string out = num_ < 0 ? "-" : "";
  out += std::to_string(static_cast<long long>(whole));
  out += '.';
  out += digits;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.decimal_str();
}

}  // namespace mif
