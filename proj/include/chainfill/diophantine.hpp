#pragma once

// Integer equations from the case analysis: alpha*s - n = beta*n*s, the quadratic
// (1 - m(n+4))n = m +- 1, and linear a*t + b*u = c. Each solver carries a
// certificate that replays against an exhaustive scan.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chainfill/slope.hpp"

namespace chainfill {

using IntPair = std::pair<Int, Int>;

struct Certificate {
  std::vector<std::string> steps;
  Int bound = 0;  // every solution has both coordinates within [-bound, bound]
};

struct SolutionSet {
  std::set<IntPair> solutions;
  Certificate certificate;
};

inline constexpr Int kMaxBruteBound = 20000;

/// All (x, y) with |x|, |y| <= bound satisfying pred, in lexicographic order.
template <class Pred>
std::vector<IntPair> brute_force(Pred&& pred, Int bound) {
  if (bound < 0 || bound > kMaxBruteBound)
    throw Error("brute-force bound must lie in 0.." + std::to_string(kMaxBruteBound));
  std::vector<IntPair> out;
  for (Int x = -bound; x <= bound; ++x)
    for (Int y = -bound; y <= bound; ++y)
      if (pred(x, y)) out.emplace_back(x, y);
  return out;
}

// ---------------------------------------------------------------- alpha*s - n = beta*n*s

inline constexpr Int kMaxCoefficient = 1000000;

// exact in int64 while |alpha|, |beta| <= kMaxCoefficient and |n|, |s| <= kMaxBruteBound
inline bool bilinear_holds(Int alpha, Int beta, Int n, Int s) { return alpha * s - n == beta * n * s; }

inline std::vector<Int> prime_divisors(Int v) {
  std::vector<Int> out;
  v = abs_int(v);
  for (Int p = 2; p * p <= v; ++p)
    if (v % p == 0) {
      out.push_back(p);
      while (v % p == 0) v /= p;
    }
  if (v > 1) out.push_back(v);
  return out;
}

namespace detail {

inline std::set<IntPair> bilinear_rec(Int alpha, Int beta, int depth, std::vector<std::string>& steps) {
  const std::string pad(2 * depth, ' ');
  const std::string eq = std::to_string(alpha) + "s - n = " + std::to_string(beta) + "ns";
  std::set<IntPair> out{{0, 0}};
  // n | s together with s | n: s = n or s = -n
  if ((alpha - 1) % beta == 0 && alpha != 1) out.insert({(alpha - 1) / beta, (alpha - 1) / beta});
  if ((alpha + 1) % beta == 0 && alpha != -1) out.insert({(alpha + 1) / beta, -(alpha + 1) / beta});
  std::string base = pad + eq + ": s = +-n gives";
  for (auto& [n, s] : out) base += " (" + std::to_string(n) + "," + std::to_string(s) + ")";
  steps.push_back(base);
  // otherwise n = k n' with k a prime divisor of alpha
  for (Int k : prime_divisors(alpha)) {
    steps.push_back(pad + "n = " + std::to_string(k) + "n', recurse on " + std::to_string(alpha / k) + "s - n' = " +
                    std::to_string(beta) + "n's");
    for (auto& [n1, s] : bilinear_rec(alpha / k, beta, depth + 1, steps)) out.insert({k * n1, s});
  }
  return out;
}

}  // namespace detail

/// Complete solution set of alpha*s - n = beta*n*s by recursion on the prime divisors of alpha.
inline SolutionSet solve_bilinear(Int alpha, Int beta) {
  if (alpha == 0 || beta == 0) throw Error("solve_bilinear needs nonzero alpha and beta");
  if (abs_int(alpha) > kMaxCoefficient || abs_int(beta) > kMaxCoefficient) throw Error("coefficients out of range");
  SolutionSet r;
  r.certificate.steps.push_back("s | n and n | alpha*s");
  r.solutions = detail::bilinear_rec(alpha, beta, 0, r.certificate.steps);
  // n = js gives j(1 + beta*s) = alpha, so |j| <= |alpha| and |s| <= |alpha| + 1
  r.certificate.bound = abs_int(alpha) * (abs_int(alpha) + 1);
  r.certificate.steps.push_back("n = js with j | alpha and |1 + beta*s| <= |alpha|: |n|, |s| <= " +
                                std::to_string(r.certificate.bound));
  for (auto& [n, s] : r.solutions)
    if (!bilinear_holds(alpha, beta, n, s)) throw Error("bilinear recursion produced a non-solution");
  return r;
}

// ---------------------------------------------------------------- (1 - m(n+4))n = m +- 1

inline bool quad_holds(Int n, Int m) {
  Int lhs = (1 - m * (n + 4)) * n;
  return lhs == m + 1 || lhs == m - 1;
}

/// Solutions (n, m) following the split m = 0 or (1 + n(n+4)) | n -+ 1.
inline SolutionSet solve_quad() {
  SolutionSet r;
  auto& steps = r.certificate.steps;
  steps.push_back("m(1 + n(n+4)) = n -+ 1");
  r.solutions.insert({1, 0});
  r.solutions.insert({-1, 0});
  steps.push_back("m = 0: n = +-1");
  // m != 0 forces |1 + n(n+4)| <= |n -+ 1| <= |n| + 1, hence n^2 <= 5|n|
  steps.push_back("m != 0: |1 + n(n+4)| <= |n| + 1, so |n| <= 5");
  for (Int n = -5; n <= 5; ++n) {
    Int d = 1 + n * (n + 4);
    for (Int rhs : {n - 1, n + 1}) {
      if (rhs == 0 || rhs % d != 0) continue;
      r.solutions.insert({n, rhs / d});
      steps.push_back("n = " + std::to_string(n) + ": " + std::to_string(d) + " | " + std::to_string(rhs) +
                      ", m = " + std::to_string(rhs / d));
    }
  }
  r.certificate.bound = 6;
  for (auto& [n, m] : r.solutions)
    if (!quad_holds(n, m)) throw Error("quadratic split produced a non-solution");
  return r;
}

/// Replays a certificate: brute force over its bound box must equal the solution set.
template <class Pred>
bool replay(const SolutionSet& s, Pred&& pred) {
  auto scan = brute_force(pred, s.certificate.bound);
  return std::set<IntPair>(scan.begin(), scan.end()) == s.solutions;
}

// ---------------------------------------------------------------- a t + b u = c

/// (t, u) = (t0 + k*dt, u0 + k*du).
struct LinearFamily {
  Int a = 0, b = 0, c = 0;
  Int t0 = 0, u0 = 0, dt = 0, du = 0;

  IntPair at(Int k) const { return {t0 + k * dt, u0 + k * du}; }
};

/// k -> sign*k + shift carrying one parameterization of a family onto another.
struct Reindex {
  Int sign = 1;
  Int shift = 0;
};

/// Base point with 0 <= t0 < |b|/g and step (b/g, -a/g).
inline LinearFamily solve_linear(Int a, Int b, Int c) {
  if (a == 0 && b == 0) throw Error("solve_linear needs a nonzero coefficient");
  Int x, y;
  Int g = ext_gcd(a, b, x, y);
  if (c % g != 0) throw Error("unsolvable: gcd(" + std::to_string(a) + "," + std::to_string(b) + ") = " + std::to_string(g) +
                              " does not divide " + std::to_string(c));
  LinearFamily f{a, b, c, 0, 0, b / g, -a / g};
  Wide t = static_cast<Wide>(x) * (c / g), u = static_cast<Wide>(y) * (c / g);
  if (f.dt != 0) {
    Wide adt = f.dt < 0 ? -f.dt : f.dt;
    Wide k = (t % adt + adt) % adt;
    Wide steps = (k - t) / f.dt;
    t = k;
    u += steps * f.du;
  } else {
    // b = 0: t is fixed, u free; start at u = 0
    Wide steps = -u / f.du;
    u += steps * f.du;
  }
  f.t0 = narrow(t);
  f.u0 = narrow(u);
  return f;
}

/// Affine reindex with f.at(sign*k + shift) == (t0 + k dt, u0 + k du) for all k, if one exists.
inline std::optional<Reindex> reindex_to(const LinearFamily& f, Int t0, Int u0, Int dt, Int du) {
  for (Int sign : {1, -1}) {
    if (sign * f.dt != dt || sign * f.du != du) continue;
    // f.at(shift) == (t0, u0)
    Int dt0 = t0 - f.t0, du0 = u0 - f.u0;
    Int shift = f.dt != 0 ? dt0 / f.dt : du0 / f.du;
    if (f.at(shift) == IntPair{t0, u0}) return Reindex{sign, shift};
  }
  return std::nullopt;
}

inline bool linear_holds(const LinearFamily& f, Int k) {
  auto [t, u] = f.at(k);
  return static_cast<Wide>(f.a) * t + static_cast<Wide>(f.b) * u == f.c;
}

/// Symbolic check: a(t0 + k dt) + b(u0 + k du) = c identically in k.
inline bool linear_identity(const LinearFamily& f) {
  return static_cast<Wide>(f.a) * f.t0 + static_cast<Wide>(f.b) * f.u0 == f.c &&
         static_cast<Wide>(f.a) * f.dt + static_cast<Wide>(f.b) * f.du == 0;
}

}  // namespace chainfill
