#include <gtest/gtest.h>

#include "chainfill/sampling.hpp"

using namespace chainfill;

TEST(Slope, CanonicalForm) {
  EXPECT_EQ(make_slope(2, 4), (Slope{1, 2}));
  EXPECT_EQ(make_slope(-5, 0), infinity());
  EXPECT_EQ(make_slope(1, -2), (Slope{-1, 2}));
  EXPECT_THROW(make_slope(0, 0), Error);
}

TEST(Slope, Parse) {
  EXPECT_EQ(parse_slope("-14/5"), make_slope(-14, 5));
  EXPECT_EQ(parse_slope(" inf "), infinity());
  EXPECT_EQ(parse_slope("6/-4"), make_slope(-3, 2));
  EXPECT_THROW(parse_slope("1/x"), Error);
  EXPECT_THROW(parse_slope(""), Error);
  EXPECT_EQ(to_string(parse_slope("-5/2")), "-5/2");
}

TEST(Slope, Distance) {
  EXPECT_EQ(distance(infinity(), integer_slope(0)), 1);
  EXPECT_EQ(distance(integer_slope(-3), integer_slope(0)), 3);
  EXPECT_EQ(distance(integer_slope(-3), integer_slope(-1)), 2);
}

TEST(Slope, Moebius) {
  EXPECT_EQ(apply_moebius(maps::identity, make_slope(7, 3)), make_slope(7, 3));
  EXPECT_EQ(apply_moebius(maps::x_over_x_minus_1, make_slope(1, 2)), integer_slope(-1));
  EXPECT_EQ(apply_moebius(maps::inv, infinity()), integer_slope(0));
  EXPECT_THROW(apply_moebius({2, 0, 0, 1}, integer_slope(1)), Error);
}

TEST(SlopeProperty, DistanceSymmetricAndSeparating) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    Slope a = random_slope(rng, 40), b = random_slope(rng, 40);
    EXPECT_EQ(distance(a, b), distance(b, a));
    EXPECT_EQ(distance(a, a), 0);
    EXPECT_EQ(distance(a, b) == 0, a == b);
  }
}

TEST(SlopeProperty, MoebiusPreservesDistanceAndComposes) {
  const MoebiusMap all[] = {maps::identity,      maps::inv,           maps::one_minus, maps::x_over_x_minus_1,
                            maps::inv_one_minus, maps::x_minus_1_over_x, maps::negation, {2, 1, 1, 1}};
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    Slope a = random_slope(rng, 30), b = random_slope(rng, 30);
    const auto& m1 = all[i % 8];
    const auto& m2 = all[(i / 8) % 8];
    EXPECT_EQ(distance(apply_moebius(m1, a), apply_moebius(m1, b)), distance(a, b));
    EXPECT_EQ(apply_moebius(m1, apply_moebius(m2, a)), apply_moebius(m1 * m2, a));
    EXPECT_EQ(apply_moebius(inverse(m1), apply_moebius(m1, a)), a);
  }
}

TEST(SlopeProperty, OverflowIsReported) {
  Slope big = make_slope(INT64_MAX, 1);
  EXPECT_THROW(add_integer(big, 1), Error);
}
