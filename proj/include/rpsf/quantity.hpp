#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace rpsf {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational amount of money.
///
/// Values are always kept in canonical form: the denominator is positive and
/// coprime with the numerator, zero is 0/1. Division follows the meadow
/// convention and is total: anything divided by zero is zero.
class Quantity {
 public:
  Quantity() = default;
  Quantity(std::int64_t value) : num_(value) {}  // NOLINT: integers are quantities
  Quantity(BigInt numerator, BigInt denominator);

  /// Accepts "n", "n/d" and decimal literals such as "-12.345".
  /// Throws std::invalid_argument on malformed text or a zero denominator.
  static Quantity parse(std::string_view text);

  const BigInt& numerator() const noexcept { return num_; }
  const BigInt& denominator() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  int sign() const noexcept { return num_.sign(); }
  bool is_integer() const noexcept { return den_ == 1; }

  /// "n/d", or just "n" when the denominator is one.
  std::string to_string() const;

  Quantity& operator+=(const Quantity& rhs);
  Quantity& operator-=(const Quantity& rhs);
  Quantity& operator*=(const Quantity& rhs);
  Quantity& operator/=(const Quantity& rhs);

  friend Quantity operator+(Quantity lhs, const Quantity& rhs) { return lhs += rhs; }
  friend Quantity operator-(Quantity lhs, const Quantity& rhs) { return lhs -= rhs; }
  friend Quantity operator*(Quantity lhs, const Quantity& rhs) { return lhs *= rhs; }
  friend Quantity operator/(Quantity lhs, const Quantity& rhs) { return lhs /= rhs; }
  Quantity operator-() const;

  friend bool operator==(const Quantity& a, const Quantity& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Quantity& a, const Quantity& b);

 private:
  void canonicalize();

  BigInt num_{0};
  BigInt den_{1};
};

/// a / b, and 0 when b is 0.
Quantity total_div(const Quantity& a, const Quantity& b);

/// 1 / x with inverse(0) = 0.
Quantity inverse(const Quantity& x);

Quantity abs(const Quantity& x);

std::ostream& operator<<(std::ostream& os, const Quantity& q);

}  // namespace rpsf
