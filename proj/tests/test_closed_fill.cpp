#include <gtest/gtest.h>

#include "chainfill/homology.hpp"

using namespace chainfill;

namespace {
Slope S(const char* s) { return parse_slope(s); }

bool same(const ClosedManifoldForm& x, const ClosedManifoldForm& y) {
  return compare_forms(normalize_closed(x), normalize_closed(y)) == Match::Equal;
}
}  // namespace

TEST(FillF, InterleavedSlots) {
  // F(1/n, c/d, k, (g-h)/h) at n=2, c/d=5/3, k=4, g/h=7/2
  auto g = fill_F(S("1/2"), S("5/3"), S("4"), S("5/2"));
  EXPECT_EQ(g, (GraphDDForm{{{1, 2}, {4, 1}}, Gluing::swap(), {{5, 3}, {5, 2}}}));
  EXPECT_TRUE(std::holds_alternative<SeifS2Form>(normalize_closed(g)) ||
              std::holds_alternative<LensForm>(normalize_closed(g)));
}

TEST(FillF, AllTwos) {
  auto f = make_full(Link::F, {S("2"), S("2"), S("2"), S("2")});
  auto n = normalize_closed(fill_F(f));
  EXPECT_EQ(classify(n).type, ExceptionalType::T);
  EXPECT_EQ(form_h1_order(n), h1_order(f));
}

TEST(M5Fill, SlotFormulas) {
  // inf: F(-a/b, f/e, d/c, -g/h)
  EXPECT_EQ(m5_to_f(S("2/3"), S("5/7"), S("4/9"), S("8/5"), infinity()),
            make_full(Link::F, {S("-2/3"), S("9/4"), S("7/5"), S("-8/5")}));
  // 1: F((a-b)/b, c/d, e/f, (g-h)/h)
  EXPECT_EQ(m5_to_f(S("2/3"), S("5/7"), S("4/9"), S("8/5"), integer_slope(1)),
            make_full(Link::F, {S("-1/3"), S("5/7"), S("4/9"), S("3/5")}));
  // 0: F(b/(b-a), (c-d)/c, -h/g, (e-f)/f)
  EXPECT_EQ(m5_to_f(S("2/3"), S("5/7"), S("4/9"), S("8/5"), integer_slope(0)),
            make_full(Link::F, {S("3"), S("-2/5"), S("-5/8"), S("-5/9")}));
  EXPECT_THROW(m5_to_f(S("2/3"), S("5/7"), S("4/9"), S("8/5"), integer_slope(3)), NotEvaluable);
}

TEST(M5Fill, WorkedExpression) {
  // M5(1/n, 1/m, k, l)(1) = (S2,(1-n,n),(k,1),(1+ml-m,1-l)) at n=3, m=2, k=5, l=4
  Int n = 3, m = 2, k = 5, l = 4;
  auto got = m5_fill(make_slope(1, n), make_slope(1, m), integer_slope(k), integer_slope(l), integer_slope(1));
  SeifS2Form expected{{{1 - n, n}, {k, 1}, {1 + m * l - m, 1 - l}}, 0};
  EXPECT_TRUE(same(got, expected)) << to_string(got);
}

TEST(M4Fill, SlotFormulas) {
  Slope ab = S("3/2"), cd = S("5/7"), ef = S("4/9");
  EXPECT_EQ(m4_fill_raw(ab, cd, ef, infinity()), ClosedManifoldForm(SeifS2Form{{{3, 2}, {7, -5}, {4, 9}}, 0}));
  EXPECT_EQ(m4_fill_raw(ab, cd, ef, integer_slope(1)), ClosedManifoldForm(SeifS2Form{{{-1, 2}, {-2, 5}, {-14, 9}}, 0}));
  // |a-b| = 1 at slope 2: (S2,(c,d),(2,-1),(f+b(e-f),f-e))
  Int b = 2, e = 4, f = 9;
  SeifS2Form expected{{{5, 7}, {2, -1}, {f + b * (e - f), f - e}}, 0};
  EXPECT_TRUE(same(m4_fill_raw(ab, cd, ef, integer_slope(2)), expected));
}

TEST(FToM5, Formulas) {
  auto f = make_full(Link::F, {S("2/3"), S("5/7"), S("4/9"), S("8/5")});
  EXPECT_EQ(f_to_m5(f, FTarget::One), make_full(Link::M5, {S("5/3"), S("5/7"), S("4/9"), S("13/5"), S("1")}));
  EXPECT_EQ(f_to_m5(f, FTarget::Zero), make_full(Link::M5, {S("-1/2"), S("7/2"), S("13/5"), S("-9/4"), S("0")}));
}

TEST(FToM5, PreservesOracleOrder) {
  Rng rng(40);
  for (int i = 0; i < 300; ++i) {
    auto f = random_full(rng, Link::F, 12);
    for (auto t : {FTarget::Infinity, FTarget::One, FTarget::Zero}) EXPECT_EQ(h1_order(f_to_m5(f, t)), h1_order(f)) << to_string(f);
  }
}

TEST(ClosedFillProperty, RoundTripsThroughM5) {
  Rng rng(41);
  for (int i = 0; i < 500; ++i) {
    auto f = random_full(rng, Link::F, 12);
    auto direct = normalize_closed(fill_F(f));
    for (auto t : {FTarget::Infinity, FTarget::One, FTarget::Zero}) {
      auto m = f_to_m5(f, t);
      auto via = m5_fill(m);
      EXPECT_EQ(compare_forms(direct, via), Match::Equal) << to_string(f);
    }
  }
}

TEST(ClosedFillProperty, D4Invariance) {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    auto f = random_full(rng, Link::F, 12);
    auto base = normalize_closed(fill_F(f));
    for (auto& g : orbit(f)) {
      auto other = normalize_closed(fill_F(g));
      EXPECT_EQ(form_h1_order(other), form_h1_order(base));
      EXPECT_EQ(compare_forms(base, other), Match::Equal) << to_string(f) << " vs " << to_string(g);
    }
  }
}

TEST(ClosedFillProperty, ReductionCoherence) {
  Rng rng(43);
  const std::vector<Slope> last{infinity(), integer_slope(1), integer_slope(0)};
  for (int i = 0; i < 500; ++i) {
    auto f = random_with_last(rng, Link::M5, 10, last);
    f.slots[2] = integer_slope(-1);
    auto m4 = m5_to_m4_direct(f);
    auto via_m5 = m5_fill(f);
    auto via_m4 = evaluate(m4).form;
    EXPECT_EQ(h1_order(f), h1_order(m4));
    if (!std::holds_alternative<UnrecognizedForm>(via_m5)) EXPECT_EQ(form_h1_order(via_m5), h1_order(f));
    if (!std::holds_alternative<UnrecognizedForm>(via_m4)) EXPECT_EQ(form_h1_order(via_m4), h1_order(m4));
    if (!std::holds_alternative<UnrecognizedForm>(via_m5) && !std::holds_alternative<UnrecognizedForm>(via_m4))
      EXPECT_EQ(compare_forms(via_m5, via_m4), Match::Equal) << to_string(f);
  }
}

TEST(Evaluate, NAtInfinity) {
  auto e = fill_N(S("-5/2"), S("-1/3"), infinity());
  EXPECT_EQ(e.form, ClosedManifoldForm(S3Form{}));
  EXPECT_THROW(evaluate(make_instruction(Link::N, {S("1"), S("2"), std::nullopt})), Error);
}
