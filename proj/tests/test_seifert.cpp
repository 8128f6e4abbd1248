#include <gtest/gtest.h>

#include "chainfill/sampling.hpp"

using namespace chainfill;

namespace {
ClosedManifoldForm N(const char* text) { return normalize_closed(parse_form(text)); }
}  // namespace

TEST(Lens, Normalize) {
  EXPECT_EQ(lens_normalize(1, 7), ClosedManifoldForm(S3Form{}));
  EXPECT_EQ(lens_normalize(0, 1), ClosedManifoldForm(S2xS1Form{}));
  EXPECT_EQ(lens_normalize(-31, -12), ClosedManifoldForm(LensForm{31, 19}));
  EXPECT_THROW(lens_normalize(6, 4), Error);
}

TEST(Lens, HomeomorphismClasses) {
  EXPECT_TRUE(lens_homeo_eq({31, 19}, {31, 19}));
  EXPECT_TRUE(lens_homeo_eq({31, 19}, {31, 13}));
  EXPECT_FALSE(lens_homeo_eq({7, 1}, {7, 2}));
  // printed L(31,12) and canonical L(31,19) are the same manifold
  EXPECT_TRUE(lens_homeo_eq({31, 12}, {31, 19}));
}

TEST(Lens, HomeoEqIsEquivalence) {
  for (Int p = 3; p <= 40; ++p) {
    std::vector<Int> units;
    for (Int q = 1; q < p; ++q)
      if (std::gcd(p, q) == 1) units.push_back(q);
    for (Int a : units) {
      EXPECT_TRUE(lens_homeo_eq({p, a}, {p, a}));
      for (Int b : units) {
        EXPECT_EQ(lens_homeo_eq({p, a}, {p, b}), lens_homeo_eq({p, b}, {p, a}));
        for (Int c : units)
          if (lens_homeo_eq({p, a}, {p, b}) && lens_homeo_eq({p, b}, {p, c})) EXPECT_TRUE(lens_homeo_eq({p, a}, {p, c}));
      }
    }
  }
}

TEST(Rewrite, MergeTrivialFiber) {
  auto g = std::get<GraphDDForm>(parse_form("D(1,-1)(3,1) U[[0,1],[1,0]] D(2,1)(5,2)"));
  EXPECT_EQ(merge_trivial_fiber(g), (SeifS2Form{{{2, 1}, {5, 2}, {-2, -3}}, 0}));
  auto g0 = std::get<GraphDDForm>(parse_form("D(1,0)(4,3) U[[0,1],[1,0]] D(5,2)(7,3)"));
  EXPECT_EQ(merge_trivial_fiber(g0), (SeifS2Form{{{5, 2}, {7, 3}, {3, -4}}, 0}));
  // symbolic instance with (b,c,d) = (2,3,5)
  auto gs = std::get<GraphDDForm>(parse_form("D(1,b)(c,d) U[[0,1],[1,0]] D(7,2)(9,4)", {{'b', 2}, {'c', 3}, {'d', 5}}));
  EXPECT_EQ(merge_trivial_fiber(gs), (SeifS2Form{{{7, 2}, {9, 4}, {11, -3}}, 0}));
}

TEST(Rewrite, ConnectedSum) {
  EXPECT_EQ(N("(S2,(5,2),(7,3),(0,1))"), N("L(5,2) # L(7,3)"));
  EXPECT_EQ(N("(S2,(1,0),(7,3),(0,1))"), ClosedManifoldForm(LensForm{7, 3}));
  auto rp = N("(S2,(2,1),(2,1),(0,1))");
  ASSERT_TRUE(std::holds_alternative<ConnSumForm>(rp));
  EXPECT_EQ(std::get<ConnSumForm>(rp).summands.size(), 2u);
  EXPECT_EQ(form_h1_order(rp), 4);
}

TEST(Rewrite, SeifertToLens) {
  EXPECT_EQ(N("(S2,(2,1),(3,1),(1,-1))"), ClosedManifoldForm(S3Form{}));
  EXPECT_EQ(N("(S2,(2,1),(3,2),(1,-1))"), ClosedManifoldForm(S3Form{}));
  // e = 0: L(ad + bc, *)
  auto l = N("(S2,(5,2),(7,3),(1,0))");
  EXPECT_EQ(form_h1_order(l), 5 * 3 + 2 * 7);
}

TEST(Rewrite, NormalizeExamples) {
  // D(1,n)(k,1) u D(c,d)(g-h,h) -> (S2,(c,d),(g-h,h),(1+nk,-k)), at n=2, k=3
  auto raw = parse_form("D(1,2)(3,1) U[[0,1],[1,0]] D(5,2)(4,3)");
  auto expected = normalize_closed(SeifS2Form{{{5, 2}, {4, 3}, {7, -3}}, 0});
  EXPECT_EQ(compare_forms(normalize_closed(raw), expected), Match::Equal);
  EXPECT_EQ(N("L(5,2)"), ClosedManifoldForm(LensForm{5, 2}));
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(N("L(32,23)")).type, ExceptionalType::TH);
  EXPECT_EQ(classify(N("(S2,(2,1),(3,2),(9,-5))")).type, ExceptionalType::Z);
  EXPECT_EQ(classify(N("D(2,1)(3,1) U[[0,1],[1,0]] D(2,1)(4,-5)")).type, ExceptionalType::T);
  EXPECT_EQ(classify(N("S3")).type, ExceptionalType::SH);
  EXPECT_EQ(classify(N("L(2,1) # L(3,1)")).type, ExceptionalType::S);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_form("(S2,(2,1)"), Error);
  EXPECT_THROW(parse_form("Q(3,1)"), Error);
}

TEST(RewriteProperty, PreservesH1AndIdempotent) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    auto e = random_expression(rng);
    Int h = form_h1_order(e);
    for (auto& r : rewrites(e))
      if (!std::holds_alternative<UnrecognizedForm>(r)) EXPECT_EQ(form_h1_order(r), h) << to_string(e);
    auto n = normalize_closed(e);
    EXPECT_EQ(normalize_closed(n), n);
    if (!std::holds_alternative<UnrecognizedForm>(n)) EXPECT_EQ(form_h1_order(n), h) << to_string(e);
  }
}

TEST(RewriteProperty, ConfluentOverRewriteOrder) {
  Rng rng(32);
  for (int i = 0; i < 500; ++i) {
    auto e = random_expression(rng);
    auto first = normalize_closed(e);
    for (auto& r : rewrites(e)) {
      auto other = normalize_closed(r);
      if (std::holds_alternative<UnrecognizedForm>(other) || std::holds_alternative<UnrecognizedForm>(first)) continue;
      EXPECT_EQ(compare_forms(first, other), Match::Equal) << to_string(e);
    }
  }
}

TEST(ClassifyProperty, LensOnlyFromLowMultiplicity) {
  Rng rng(33);
  for (int i = 0; i < 500; ++i) {
    auto e = random_expression(rng);
    auto t = classify(normalize_closed(e)).type;
    if (t != ExceptionalType::SH && t != ExceptionalType::TH) continue;
    bool low = std::visit(
        [](auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, SeifS2Form>)
            return std::any_of(f.fibers.begin(), f.fibers.end(), [](const Fiber& x) { return abs_int(x.a) <= 1; });
          else if constexpr (std::is_same_v<T, GraphDDForm>)
            return std::any_of(f.left.begin(), f.left.end(), [](const Fiber& x) { return abs_int(x.a) <= 1; }) ||
                   std::any_of(f.right.begin(), f.right.end(), [](const Fiber& x) { return abs_int(x.a) <= 1; });
          else
            return true;  // already a lens space
        },
        e);
    EXPECT_TRUE(low) << to_string(e);
  }
}
