#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace qsys {

using int128 = __int128;

/// Exact rational with 64-bit numerator and positive 64-bit denominator,
/// always kept in lowest terms. Intermediate products use 128-bit integers;
/// results that do not fit back into 64 bits raise std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(int64_t num, int64_t den = 1);

  int64_t num() const noexcept { return num_; }
  int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  long double to_long_double() const noexcept {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  /// Representative of the class mod 1 in [0, 1).
  Rational mod1() const;
  /// Distance to the nearest integer, in [0, 1/2].
  Rational dist_to_int() const;

  std::string str() const;
  /// Accepts "a", "a/b" (b > 0) with optional sign on a.
  static Rational parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) noexcept {
    const int128 lhs = static_cast<int128>(a.num_) * b.den_;
    const int128 rhs = static_cast<int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  static Rational from_wide(int128 num, int128 den);

  int64_t num_ = 0;
  int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Non-negative remainder of a mod m for m > 0.
inline int64_t mod_floor(int128 a, int64_t m) {
  int128 r = a % m;
  if (r < 0) r += m;
  return static_cast<int64_t>(r);
}

/// ||v/m|| for a residue v, as an exact rational min(v, m - v) / m.
Rational residue_distance(int64_t v, int64_t m);

}  // namespace qsys
