#include "rpsf/quantity.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace rpsf {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw std::invalid_argument("malformed quantity: '" + std::string(whole) + "'");
  }
  BigInt value = 0;
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw std::invalid_argument("malformed quantity: '" + std::string(whole) + "'");
    }
    value = value * 10 + (ch - '0');
  }
  return value;
}

}  // namespace

Quantity::Quantity(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) {
    // Meadow convention: n/0 denotes n * inverse(0) = 0.
    num_ = 0;
    den_ = 1;
    return;
  }
  canonicalize();
}

Quantity Quantity::parse(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Quantity result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), whole);
    BigInt den = parse_integer(text.substr(slash + 1), whole);
    if (den.is_zero()) {
      throw std::invalid_argument("zero denominator in quantity literal: '" + std::string(whole) + "'");
    }
    result = Quantity(std::move(num), std::move(den));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("malformed quantity: '" + std::string(whole) + "'");
    }
    BigInt num = int_part.empty() ? BigInt(0) : parse_integer(int_part, whole);
    BigInt den = 1;
    if (!frac_part.empty()) {
      BigInt frac = parse_integer(frac_part, whole);
      for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
      num = num * den + frac;
    }
    result = Quantity(std::move(num), std::move(den));
  } else {
    result = Quantity(parse_integer(text, whole), BigInt(1));
  }
  return negative ? -result : result;
}

void Quantity::canonicalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  BigInt g = boost::integer::gcd(num_, den_);
  if (g < 0) g = -g;
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Quantity::to_string() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Quantity& Quantity::operator+=(const Quantity& rhs) {
  if (den_ == rhs.den_) {
    num_ += rhs.num_;
  } else {
    num_ = num_ * rhs.den_ + rhs.num_ * den_;
    den_ *= rhs.den_;
  }
  canonicalize();
  return *this;
}

Quantity& Quantity::operator-=(const Quantity& rhs) {
  if (den_ == rhs.den_) {
    num_ -= rhs.num_;
  } else {
    num_ = num_ * rhs.den_ - rhs.num_ * den_;
    den_ *= rhs.den_;
  }
  canonicalize();
  return *this;
}

Quantity& Quantity::operator*=(const Quantity& rhs) {
  num_ *= rhs.num_;
  den_ *= rhs.den_;
  canonicalize();
  return *this;
}

Quantity& Quantity::operator/=(const Quantity& rhs) {
  if (rhs.is_zero()) {
    num_ = 0;
    den_ = 1;
    return *this;
  }
  BigInt rnum = rhs.num_;
  num_ *= rhs.den_;
  den_ *= rnum;
  canonicalize();
  return *this;
}

Quantity Quantity::operator-() const {
  Quantity out = *this;
  out.num_ = -out.num_;
  return out;
}

std::strong_ordering operator<=>(const Quantity& a, const Quantity& b) {
  const BigInt lhs = a.num_ * b.den_;
  const BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Quantity total_div(const Quantity& a, const Quantity& b) { return a / b; }

Quantity inverse(const Quantity& x) { return Quantity(1) / x; }

Quantity abs(const Quantity& x) { return x.sign() < 0 ? -x : x; }

std::ostream& operator<<(std::ostream& os, const Quantity& q) { return os << q.to_string(); }

}  // namespace rpsf
