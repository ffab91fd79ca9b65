#include <gtest/gtest.h>

#include "hml/rational.hpp"

using hml::Rational;

TEST(Rational, NormalizesSignAndGcd) {
    const Rational r(6, -8);
    EXPECT_EQ(r, Rational(-3, 4));
    EXPECT_EQ(r.str(), "-3/4");
    EXPECT_EQ(Rational(4, 2).str(), "2");
}

TEST(Rational, Arithmetic) {
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(1, 2) - Rational(1, 3), Rational(1, 6));
    EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
    EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3) + Rational(-5, 6), Rational(0));
}

TEST(Rational, FloorAndOrder) {
    EXPECT_EQ(Rational(-1, 2).floor(), -1);
    EXPECT_EQ(Rational(7, 2).floor(), 3);
    EXPECT_EQ(Rational(-4, 2).floor(), -2);
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_TRUE(Rational(6, 3).is_integer());
    EXPECT_DOUBLE_EQ(Rational(3, 4).to_double(), 0.75);
}
