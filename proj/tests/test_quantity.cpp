#include "rpsf/quantity.hpp"

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

using rpsf::Quantity;

namespace {

// Random canonical-or-not fraction text, with numerators up to 40 digits so
// that values span several machine words.
std::string random_fraction(std::mt19937_64& rng, bool allow_zero = true) {
  std::uniform_int_distribution<int> digits(1, 40);
  std::uniform_int_distribution<int> digit(0, 9);
  auto number = [&](bool nonzero) {
    std::string s;
    const int n = digits(rng);
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + digit(rng)));
    if (nonzero && s.find_first_not_of('0') == std::string::npos) s.back() = '7';
    return s;
  };
  std::string num = number(!allow_zero);
  if (rng() % 2) num = "-" + num;
  return num + "/" + number(true);
}

mpq_class oracle(const std::string& text) {
  mpq_class q(text, 10);
  q.canonicalize();
  return q;
}

std::string text(const mpq_class& q) { return q.get_str(10); }

}  // namespace

TEST(QuantityParse, IntegerFractionAndDecimalForms) {
  EXPECT_EQ(Quantity::parse("42").to_string(), "42");
  EXPECT_EQ(Quantity::parse("-6/8").to_string(), "-3/4");
  EXPECT_EQ(Quantity::parse("1.25").to_string(), "5/4");
  EXPECT_EQ(Quantity::parse("-0.050").to_string(), "-1/20");
  EXPECT_EQ(Quantity::parse("0/5"), Quantity{});
}

TEST(QuantityParse, RejectsMalformedText) {
  EXPECT_THROW(Quantity::parse(""), std::invalid_argument);
  EXPECT_THROW(Quantity::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Quantity::parse("1/"), std::invalid_argument);
  EXPECT_THROW(Quantity::parse("3/0"), std::invalid_argument);
  EXPECT_THROW(Quantity::parse("1.2.3"), std::invalid_argument);
}

TEST(QuantityCanonical, ZeroDenominatorConstructsZero) {
  EXPECT_EQ(Quantity(5, 0), Quantity{});
  EXPECT_EQ(Quantity(4, -6).to_string(), "-2/3");
  EXPECT_TRUE(Quantity(10, 5).is_integer());
}

TEST(QuantityOracle, ArithmeticMatchesGmpOnRandomRationals) {
  std::mt19937_64 rng(20240611);
  for (int k = 0; k < 1000; ++k) {
    const std::string ta = random_fraction(rng), tb = random_fraction(rng);
    const Quantity a = Quantity::parse(ta), b = Quantity::parse(tb);
    const mpq_class oa = oracle(ta), ob = oracle(tb);
    ASSERT_EQ(a.to_string(), text(oa)) << ta;
    EXPECT_EQ((a + b).to_string(), text(mpq_class(oa + ob)));
    EXPECT_EQ((a - b).to_string(), text(mpq_class(oa - ob)));
    EXPECT_EQ((a * b).to_string(), text(mpq_class(oa * ob)));
    if (ob != 0) EXPECT_EQ((a / b).to_string(), text(mpq_class(oa / ob)));
    EXPECT_EQ(a < b, oa < ob);
    EXPECT_EQ(a == b, oa == ob);
  }
}

TEST(QuantityOracle, DecimalsConvertExactly) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto whole = rng() % 1000000;
    const auto frac = rng() % 100000;
    std::ostringstream dec, frac_text;
    dec << whole << "." << std::string(5 - std::to_string(frac).size(), '0') << frac;
    frac_text << whole * 100000 + frac << "/100000";
    EXPECT_EQ(Quantity::parse(dec.str()).to_string(), text(oracle(frac_text.str()))) << dec.str();
  }
}

// Meadow laws over random rationals, zero included.
TEST(Meadow, RingLaws) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 1000; ++k) {
    const Quantity x = Quantity::parse(random_fraction(rng));
    const Quantity y = Quantity::parse(random_fraction(rng));
    const Quantity z = Quantity::parse(random_fraction(rng));
    EXPECT_EQ(x + y, y + x);
    EXPECT_EQ(x * y, y * x);
    EXPECT_EQ((x + y) + z, x + (y + z));
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ(x + Quantity{}, x);
    EXPECT_EQ(x * Quantity(1), x);
    EXPECT_EQ(x + (-x), Quantity{});
  }
}

TEST(Meadow, InverseLaws) {
  std::mt19937_64 rng(1234);
  for (int k = 0; k < 1000; ++k) {
    const Quantity x = k == 0 ? Quantity{} : Quantity::parse(random_fraction(rng));
    EXPECT_EQ(rpsf::inverse(rpsf::inverse(x)), x);
    EXPECT_EQ(x * rpsf::inverse(x) * x, x);
    EXPECT_EQ(rpsf::total_div(x, Quantity{}), Quantity{});
    EXPECT_EQ(x / Quantity{}, Quantity{});
  }
  EXPECT_EQ(rpsf::inverse(Quantity{}), Quantity{});
}

TEST(Meadow, DivisionIsMultiplicationByInverse) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const Quantity x = Quantity::parse(random_fraction(rng));
    const Quantity y = Quantity::parse(random_fraction(rng));
    EXPECT_EQ(x / y, x * rpsf::inverse(y));
  }
}
