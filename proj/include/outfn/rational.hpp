#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace outfn {

/// Exact rational number on 64-bit integers.
///
/// Always normalized: denominator positive, gcd(num, den) == 1. Intermediate
/// products are taken in 128 bits; a result that does not fit in 64 bits
/// throws std::overflow_error instead of wrapping.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num); // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  /// Largest integer <= *this.
  std::int64_t floor() const;

  Rational operator-() const;
  Rational inverse() const;

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator-(const Rational &a, const Rational &b);
  friend Rational operator*(const Rational &a, const Rational &b);
  friend Rational operator/(const Rational &a, const Rational &b);

  Rational &operator+=(const Rational &o) { return *this = *this + o; }
  Rational &operator-=(const Rational &o) { return *this = *this - o; }
  Rational &operator*=(const Rational &o) { return *this = *this * o; }
  Rational &operator/=(const Rational &o) { return *this = *this / o; }

  friend bool operator==(const Rational &a, const Rational &b) = default;
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

  /// "p" for integers, "p/q" otherwise.
  std::string str() const;
  /// Accepts "p", "-p", "p/q". Throws std::invalid_argument on bad syntax or
  /// a zero denominator.
  static Rational parse(std::string_view text);

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational pow(Rational base, unsigned exponent);

std::ostream &operator<<(std::ostream &os, const Rational &r);

} // namespace outfn
