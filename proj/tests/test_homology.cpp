#include <gtest/gtest.h>

#include "chainfill/homology.hpp"

using namespace chainfill;

namespace {
Slope S(const char* s) { return parse_slope(s); }

Int tr_minus_us(const Slope& x, const Slope& y) {
  return abs_int(y.num * x.num - y.den * x.den);
}

// |sum_i b_i prod_{j != i} a_j| over the fibers and the Euler summand (1, e)
Int seifert_formula(const SeifS2Form& s) {
  std::vector<Fiber> f = s.fibers;
  f.push_back({1, s.euler});
  Int total = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    Int term = f[i].b;
    for (size_t j = 0; j < f.size(); ++j)
      if (j != i) term *= f[j].a;
    total += term;
  }
  return abs_int(total);
}
}  // namespace

TEST(H1, Examples) {
  EXPECT_EQ(h1_order(make_full(Link::N, {S("-5/2"), S("-1/3"), infinity()})), 1);
  EXPECT_EQ(h1_order(make_full(Link::N, {S("-5/2"), S("-1/2"), infinity()})), 1);
  for (Int n = 1; n <= 10; ++n)
    EXPECT_EQ(h1_order(make_full(Link::N, {make_slope(1 - n, n), make_slope(-1 - n, n), infinity()})), 1);
  EXPECT_THROW(h1_order(make_instruction(Link::N, {S("1"), S("2"), std::nullopt})), Error);
}

TEST(Calibration, UniqueSignClassPerLink) {
  for (Link l : all_links) {
    auto r = calibrate(l);
    EXPECT_TRUE(r.ok) << link_name(l) << ": " << r.message;
    EXPECT_EQ(r.survivor_classes.size(), 1u);
    // the shipped signs belong to the surviving class
    Int shipped = 1, found = r.survivor_classes.begin()->first;
    for (Int s : linking(l).edge_signs) shipped *= s;
    EXPECT_EQ(shipped, found) << link_name(l);
  }
}

TEST(Calibration, MirrorRelationM3N) {
  Rng rng(51);
  for (int i = 0; i < 300; ++i) {
    auto f = random_full(rng, Link::M3, 15);
    EXPECT_EQ(h1_order(f), h1_order(m3_to_n(f)));
  }
}

TEST(Calibration, M5AgreesWithM4OnReduced) {
  Rng rng(52);
  for (int i = 0; i < 500; ++i) {
    auto f = random_full(rng, Link::M5, 15);
    f.slots[2] = integer_slope(-1);
    EXPECT_EQ(h1_order(f), h1_order(m5_to_m4_direct(f)));
  }
}

TEST(H1Property, MatchesTrMinusUs) {
  Rng rng(53);
  for (int i = 0; i < 1000; ++i) {
    Slope x = random_slope(rng, 25), y = random_slope(rng, 25);
    EXPECT_EQ(h1_order(make_full(Link::N, {x, y, infinity()})), tr_minus_us(x, y));
  }
}

TEST(H1Property, MatchesSeifertFormula) {
  Rng rng(54);
  int checked = 0;
  for (int i = 0; checked < 1000 && i < 20000; ++i) {
    auto f = random_with_last(rng, Link::M4, 12, {infinity(), integer_slope(1)});
    auto e = evaluate(f);
    auto* s = std::get_if<SeifS2Form>(&e.form);
    if (!s) continue;
    ++checked;
    EXPECT_EQ(h1_order(f), seifert_formula(*s)) << to_string(f);
  }
  EXPECT_EQ(checked, 1000);
}

TEST(H1Property, ConstantOnGeneratorSteps) {
  Rng rng(55);
  for (Link l : all_links)
    for (int i = 0; i < 1000; ++i) {
      auto f = random_full(rng, l, 12);
      Int h = h1_order(f);
      for (auto& g : generators(l)) EXPECT_EQ(h1_order(apply_generator(g, f)), h) << g.id << " " << to_string(f);
    }
}

TEST(H1Property, RewritesPreserveOrder) {
  Rng rng(56);
  for (int i = 0; i < 1000; ++i) {
    auto f = random_full(rng, Link::F, 10);
    auto raw = ClosedManifoldForm(fill_F(f));
    Int h = h1_order(f);
    EXPECT_EQ(form_h1_order(raw), h);
    for (auto& r : rewrites(raw))
      if (!std::holds_alternative<UnrecognizedForm>(r)) EXPECT_EQ(form_h1_order(r), h);
  }
}
