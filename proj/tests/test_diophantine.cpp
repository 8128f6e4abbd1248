#include <gtest/gtest.h>

#include <random>

#include "chainfill/diophantine.hpp"

using namespace chainfill;

namespace {

struct Row {
  Int alpha, beta;
  std::set<IntPair> solutions;
};

const std::vector<Row>& rows() {
  static const std::vector<Row> r{
      {1, 1, {{0, 0}, {2, -2}}},
      {2, 1, {{0, 0}, {1, 1}, {3, -3}, {4, -2}}},
      {4, 1, {{0, 0}, {3, 3}, {5, -5}, {8, -2}, {6, -3}, {2, 1}}},
      {1, 3, {{0, 0}}},
      {2, 3, {{0, 0}, {1, -1}}},
      {4, 3, {{0, 0}, {1, 1}, {2, -1}}},
      {8, 3, {{0, 0}, {3, -3}, {2, 1}, {4, -1}}},
      {5, 3, {{0, 0}, {2, -2}}},
      {1, -5, {{0, 0}}},
      {2, -5, {{0, 0}}},
      {4, -5, {{0, 0}, {-1, 1}}},
      {8, -5, {{0, 0}, {-2, 1}}},
      {3, -5, {{0, 0}}},
  };
  return r;
}

auto bilinear(Int a, Int b) {
  return [a, b](Int n, Int s) { return bilinear_holds(a, b, n, s); };
}

std::set<IntPair> as_set(const std::vector<IntPair>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Bilinear, ThirteenRows) {
  for (auto& r : rows()) {
    auto s = solve_bilinear(r.alpha, r.beta);
    EXPECT_EQ(s.solutions, r.solutions) << r.alpha << "," << r.beta;
    EXPECT_TRUE(replay(s, bilinear(r.alpha, r.beta)));
  }
}

TEST(Bilinear, RowsAgainstBruteForce) {
  for (auto& r : rows()) EXPECT_EQ(as_set(brute_force(bilinear(r.alpha, r.beta), 2000)), r.solutions) << r.alpha << "," << r.beta;
}

TEST(Bilinear, CertificateBoundsSolutions) {
  for (Int a = -12; a <= 12; ++a)
    for (Int b = -12; b <= 12; ++b) {
      if (a == 0 || b == 0) continue;
      auto s = solve_bilinear(a, b);
      for (auto& [n, t] : s.solutions) {
        EXPECT_LE(abs_int(n), s.certificate.bound);
        EXPECT_LE(abs_int(t), s.certificate.bound);
      }
      EXPECT_TRUE(replay(s, bilinear(a, b))) << a << "," << b;
      EXPECT_FALSE(s.certificate.steps.empty());
    }
}

TEST(Bilinear, RandomAgainstBruteForce) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Int> d(-8, 8);
  for (int i = 0; i < 10; ++i) {
    Int a = 0, b = 0;
    while (a == 0 || b == 0) a = d(rng), b = d(rng);
    EXPECT_EQ(solve_bilinear(a, b).solutions, as_set(brute_force(bilinear(a, b), 1000))) << a << "," << b;
  }
}

TEST(Bilinear, Rejects) {
  EXPECT_THROW(solve_bilinear(0, 3), Error);
  EXPECT_THROW(solve_bilinear(3, 0), Error);
  EXPECT_THROW(solve_bilinear(kMaxCoefficient + 1, 1), Error);
}

TEST(Quad, ElevenPairs) {
  std::set<IntPair> expected{{-5, -1}, {-4, -3}, {-4, -5}, {-3, 1}, {-3, 2}, {-2, 1},
                             {-1, 0},  {-1, 1},  {0, -1},  {0, 1},  {1, 0}};
  auto q = solve_quad();
  EXPECT_EQ(q.solutions, expected);
  EXPECT_TRUE(replay(q, quad_holds));
  EXPECT_EQ(as_set(brute_force(quad_holds, 1000)), expected);
  EXPECT_TRUE(quad_holds(0, 1));
}

TEST(BruteForce, Basics) {
  EXPECT_EQ(brute_force(bilinear(1, 1), 100), (std::vector<IntPair>{{0, 0}, {2, -2}}));
  EXPECT_TRUE(brute_force([](Int, Int) { return false; }, 50).empty());
  EXPECT_THROW(brute_force([](Int, Int) { return true; }, kMaxBruteBound + 1), Error);
  EXPECT_THROW(brute_force([](Int, Int) { return true; }, -1), Error);
}

TEST(Linear, Examples) {
  auto f = solve_linear(5, 2, 1);
  EXPECT_TRUE(linear_identity(f));
  auto r = reindex_to(f, 1, -2, -2, 5);
  ASSERT_TRUE(r);
  for (Int k = -20; k <= 20; ++k) EXPECT_EQ(f.at(r->sign * k + r->shift), (IntPair{1 - 2 * k, 5 * k - 2}));

  auto g = solve_linear(8, 13, -1);
  EXPECT_TRUE(linear_identity(g));
  auto r2 = reindex_to(g, -5, 3, 13, -8);
  ASSERT_TRUE(r2);
  for (Int k = -20; k <= 20; ++k) EXPECT_EQ(g.at(r2->sign * k + r2->shift), (IntPair{13 * k - 5, 3 - 8 * k}));
}

TEST(Linear, Unsolvable) {
  try {
    solve_linear(2, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unsolvable"), std::string::npos);
  }
  EXPECT_THROW(solve_linear(0, 0, 1), Error);
}

TEST(Linear, IdentityProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Int> d(-60, 60);
  int solved = 0;
  for (int i = 0; i < 2000; ++i) {
    Int a = d(rng), b = d(rng), c = d(rng);
    if (a == 0 && b == 0) continue;
    if (c % std::gcd(a, b) != 0) {
      EXPECT_THROW(solve_linear(a, b, c), Error);
      continue;
    }
    auto f = solve_linear(a, b, c);
    ++solved;
    EXPECT_TRUE(linear_identity(f));
    for (Int k = -3; k <= 3; ++k) EXPECT_TRUE(linear_holds(f, k));
    if (f.dt != 0) {
      EXPECT_GE(f.t0, 0);
      EXPECT_LT(f.t0, abs_int(f.dt));
    }
  }
  EXPECT_GT(solved, 100);
}
