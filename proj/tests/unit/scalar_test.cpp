#include <gtest/gtest.h>

#include <sstream>
#include <unordered_set>

#include "mti/scalar.hpp"

using mti::Scalar;
using mti::ScalarParseError;

TEST(Scalar, ParsesIntegers) {
  EXPECT_EQ(Scalar::parse("3"), Scalar(3));
  EXPECT_EQ(Scalar::parse("-2"), Scalar(-2));
  EXPECT_EQ(Scalar::parse("+7"), Scalar(7));
  EXPECT_EQ(Scalar::parse("0"), Scalar(0));
}

TEST(Scalar, ParsesDecimals) {
  EXPECT_EQ(Scalar::parse("2.5"), Scalar(5, 2));
  EXPECT_EQ(Scalar::parse("-.25"), Scalar(-1, 4));
  EXPECT_EQ(Scalar::parse("1."), Scalar(1));
  EXPECT_EQ(Scalar::parse("0.1"), Scalar(1, 10));
}

TEST(Scalar, ParsesRationals) {
  EXPECT_EQ(Scalar::parse("5/2"), Scalar(5, 2));
  EXPECT_EQ(Scalar::parse("-1/3"), Scalar(-1, 3));
  EXPECT_EQ(Scalar::parse("4/2"), Scalar(2));
}

TEST(Scalar, RejectsMalformed) {
  for (const char* bad : {"", " 1", "1 ", "abc", "1/0", "1//2", "1.2.3", "--1", ".", "1/", "/2", "1e3", "0x10"}) {
    EXPECT_THROW(Scalar::parse(bad), ScalarParseError) << bad;
  }
}

TEST(Scalar, CanonicalText) {
  EXPECT_EQ(Scalar(7, 2).to_string(), "7/2");
  EXPECT_EQ(Scalar(4, 2).to_string(), "2");
  EXPECT_EQ(Scalar(-1, 3).to_string(), "-1/3");
  EXPECT_EQ(Scalar(3, -6).to_string(), "-1/2");
  for (const char* s : {"0", "7/2", "-1/3", "12", "-5"}) EXPECT_EQ(Scalar::parse(s).to_string(), s);
}

TEST(Scalar, ArithmeticIsExact) {
  const Scalar third(1, 3);
  EXPECT_EQ(third + third + third, Scalar(1));
  EXPECT_EQ(Scalar(1) - third, Scalar(2, 3));
  EXPECT_EQ(Scalar(3).half(), Scalar(3, 2));
  EXPECT_EQ((Scalar(1) - Scalar(4)).abs(), Scalar(3));
  EXPECT_EQ(Scalar(2, 3) * Scalar(3, 4), Scalar(1, 2));
  Scalar x(1);
  x += Scalar(1, 2);
  x -= Scalar(1, 4);
  EXPECT_EQ(x, Scalar(5, 4));
  EXPECT_EQ(-Scalar(1, 2), Scalar(-1, 2));
}

TEST(Scalar, Ordering) {
  EXPECT_LT(Scalar(1, 3), Scalar(1, 2));
  EXPECT_GT(Scalar(0), Scalar(-1, 1000));
  EXPECT_TRUE(Scalar(-1).is_negative());
  EXPECT_TRUE(Scalar(0).is_zero());
  EXPECT_FALSE(Scalar(0).is_negative());
}

TEST(Scalar, HashAgreesWithEquality) {
  std::unordered_set<Scalar> s{Scalar(1, 2), Scalar(2, 4), Scalar::parse("0.5")};
  EXPECT_EQ(s.size(), 1u);
}

TEST(Scalar, StreamsCanonicalText) {
  std::ostringstream os;
  os << Scalar(9, 6);
  EXPECT_EQ(os.str(), "3/2");
  EXPECT_DOUBLE_EQ(Scalar(3, 2).to_double(), 1.5);
}
