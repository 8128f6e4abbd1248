#pragma once

// Deterministic random slopes and instructions for property checks.

#include <random>
#include <vector>

#include "chainfill/instruction.hpp"
#include "chainfill/seifert.hpp"

namespace chainfill {

using Rng = std::mt19937_64;

/// Reduced p/q with |p| <= height, 1 <= q <= height; infinity with probability about 1/16.
inline Slope random_slope(Rng& rng, Int height) {
  std::uniform_int_distribution<Int> num(-height, height), den(1, height), coin(0, 15);
  if (coin(rng) == 0) return infinity();
  for (;;) {
    Int p = num(rng), q = den(rng);
    if (std::gcd(p, q) == 1) return make_slope(p, q);
  }
}

inline Instruction random_full(Rng& rng, Link link, Int height) {
  std::vector<Slope> s;
  for (int i = 0; i < arity(link); ++i) s.push_back(random_slope(rng, height));
  return make_full(link, s);
}

/// A full instruction with one slot drawn from `values` at a random position.
inline Instruction random_with(Rng& rng, Link link, Int height, const std::vector<Slope>& values) {
  auto f = random_full(rng, link, height);
  std::uniform_int_distribution<size_t> pos(0, f.slots.size() - 1), pick(0, values.size() - 1);
  f.slots[pos(rng)] = values[pick(rng)];
  return f;
}

/// A full instruction whose distinguished last slot holds one of `values`.
inline Instruction random_with_last(Rng& rng, Link link, Int height, const std::vector<Slope>& values) {
  auto f = random_full(rng, link, height);
  std::uniform_int_distribution<size_t> pick(0, values.size() - 1);
  f.slots.back() = values[pick(rng)];
  return f;
}

/// Primitive (a, b) with |a| <= height; a = 0 only as (0, 1).
inline Fiber random_fiber(Rng& rng, Int height, bool allow_degenerate) {
  std::uniform_int_distribution<Int> v(-height, height);
  for (;;) {
    Int a = v(rng), b = v(rng);
    if (std::gcd(a, b) != 1) continue;
    if (!allow_degenerate && abs_int(a) <= 1) continue;
    if (a == 0) return {0, 1};
    return {a, b};
  }
}

/// Unnormalized expressions of the shapes the evaluators emit, each with a rewrite available.
inline ClosedManifoldForm random_expression(Rng& rng, Int height = 9) {
  std::uniform_int_distribution<int> shape(0, 3), pick(0, 1);
  std::uniform_int_distribution<Int> v(-height, height);
  auto fib = [&] { return random_fiber(rng, height, false); };
  switch (shape(rng)) {
    case 0: {
      Fiber triv = pick(rng) ? Fiber{1, v(rng)} : Fiber{-1, v(rng)};
      std::vector<Fiber> left{triv, fib()}, right{fib(), fib()};
      if (pick(rng)) std::swap(left[0], left[1]);
      if (pick(rng)) std::swap(left, right);
      return GraphDDForm{left, Gluing::swap(), right};
    }
    case 1: return SeifS2Form{{fib(), fib(), Fiber{1, v(rng)}}, 0};
    case 2: return SeifS2Form{{fib(), fib(), Fiber{0, 1}}, 0};
    default: {
      for (;;) {
        Int p = v(rng) * 3 + 1, q = v(rng) * 7 - 50;
        if (p != 0 && std::gcd(p, q) == 1) return LensForm{p, q, QStatus::Exact};
      }
    }
  }
}

}  // namespace chainfill
