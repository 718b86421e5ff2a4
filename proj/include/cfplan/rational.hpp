#ifndef CFPLAN_RATIONAL_HPP
#define CFPLAN_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cfplan {

/// Exact rational number parsed from a decimal string. Rule thresholds and
/// domain bounds are compared exactly; binary floating point never enters.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }
  explicit Rational(std::int64_t n) : num_(n), den_(1) {}

  /// Parses "[-]digits[.digits]". Throws std::invalid_argument otherwise.
  static Rational parse(std::string_view text) {
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) throw std::invalid_argument("empty number: '" + std::string(text) + "'");
    std::int64_t num = 0, den = 1;
    bool seen_dot = false, seen_digit = false;
    for (char c : s) {
      if (c == '.') {
        if (seen_dot) throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9')
        throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
      seen_digit = true;
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      if (num < 0 || den < 0) throw std::invalid_argument("number out of range: '" + std::string(text) + "'");
    }
    if (!seen_digit) throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
    return Rational(neg ? -num : num, den);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  /// Minimal decimal rendering: "6849", "0.5", "-3.25". Denominators are
  /// always powers of ten by construction.
  std::string str() const {
    std::int64_t n = num_, d = den_;
    std::string sign = n < 0 ? "-" : "";
    if (n < 0) n = -n;
    std::string out = sign + std::to_string(n / d);
    std::int64_t rem = n % d;
    if (rem != 0) {
      std::string frac;
      while (rem != 0) {
        rem *= 10;
        frac += char('0' + rem / d);
        rem %= d;
      }
      out += "." + frac;
    }
    return out;
  }

private:
  void normalize() {
    if (den_ == 0) throw std::invalid_argument("zero denominator");
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

} // namespace cfplan

#endif
