#pragma once

// Closed manifold normal forms: lens spaces, small Seifert spaces over S^2,
// two-piece graph manifolds D u_B D, and connected sums of lens spaces.
//
// Fiber (a,b) on a piece means a*mu_i + b*lambda = 0, with sum of mu_i = 0 over
// the fibers and (for a D piece) the boundary section mu_0. A gluing matrix B
// sends coordinates (mu_0, lambda) of the left piece to the right piece by
// columns: mu_0^X -> B00 mu_0^Y + B10 lambda^Y, lambda^X -> B01 mu_0^Y + B11 lambda^Y.

#include <algorithm>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "chainfill/expr.hpp"
#include "chainfill/linalg.hpp"
#include "chainfill/slope.hpp"

namespace chainfill {

struct Fiber {
  Int a = 1;
  Int b = 0;
  friend bool operator==(const Fiber&, const Fiber&) = default;
  friend auto operator<=>(const Fiber&, const Fiber&) = default;
};

enum class Base { D, S2 };

struct SeifertPiece {
  Base base = Base::D;
  std::vector<Fiber> fibers;
  friend bool operator==(const SeifertPiece&, const SeifertPiece&) = default;
};

/// [[a,b],[c,d]]
struct Gluing {
  Int a = 0, b = 1, c = 1, d = 0;

  Int det() const { return a * d - b * c; }
  static Gluing swap() { return {0, 1, 1, 0}; }
  static Gluing identity() { return {1, 0, 0, 1}; }

  friend bool operator==(const Gluing&, const Gluing&) = default;
  friend auto operator<=>(const Gluing&, const Gluing&) = default;
};

inline Gluing operator*(const Gluing& x, const Gluing& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Gluing inverse(const Gluing& g) {
  Int dt = g.det();
  if (abs_int(dt) != 1) throw Error("gluing matrix is not in GL2(Z)");
  return {g.d * dt, -g.b * dt, -g.c * dt, g.a * dt};
}

inline Gluing operator-(const Gluing& g) { return {-g.a, -g.b, -g.c, -g.d}; }

// ---------------------------------------------------------------- forms

struct S3Form {
  friend bool operator==(const S3Form&, const S3Form&) = default;
};
struct S2xS1Form {
  friend bool operator==(const S2xS1Form&, const S2xS1Form&) = default;
};

/// How the q-parameter of a lens space is known.
enum class QStatus { Exact, Derived, Unknown };

struct LensForm {
  Int p = 2;
  Int q = 1;
  QStatus q_status = QStatus::Exact;
  friend bool operator==(const LensForm& x, const LensForm& y) { return x.p == y.p && x.q == y.q; }
};

struct SeifS2Form {
  std::vector<Fiber> fibers;
  Int euler = 0;
  friend bool operator==(const SeifS2Form&, const SeifS2Form&) = default;
};

struct GraphDDForm {
  std::vector<Fiber> left;
  Gluing B;
  std::vector<Fiber> right;
  friend bool operator==(const GraphDDForm&, const GraphDDForm&) = default;
};

/// Summands are lens spaces; p = 0 encodes S2xS1.
struct ConnSumForm {
  std::vector<LensForm> summands;
  friend bool operator==(const ConnSumForm&, const ConnSumForm&) = default;
};

struct UnrecognizedForm {
  std::string raw;
  friend bool operator==(const UnrecognizedForm&, const UnrecognizedForm&) = default;
};

using ClosedManifoldForm =
    std::variant<S3Form, S2xS1Form, LensForm, SeifS2Form, GraphDDForm, ConnSumForm, UnrecognizedForm>;

enum class ExceptionalType { SH, TH, S, T, Z, Unknown };

inline std::string_view type_name(ExceptionalType t) {
  switch (t) {
    case ExceptionalType::SH: return "SH";
    case ExceptionalType::TH: return "TH";
    case ExceptionalType::S: return "S";
    case ExceptionalType::T: return "T";
    case ExceptionalType::Z: return "Z";
    default: return "unknown";
  }
}

inline ExceptionalType parse_type(std::string_view s) {
  for (auto t : {ExceptionalType::SH, ExceptionalType::TH, ExceptionalType::S, ExceptionalType::T,
                 ExceptionalType::Z, ExceptionalType::Unknown})
    if (type_name(t) == s) return t;
  throw Error("unknown exceptional type '" + std::string(s) + "'");
}

struct Classification {
  ExceptionalType type = ExceptionalType::Unknown;
  std::string annotation;
};

// ---------------------------------------------------------------- printing

inline std::string fiber_str(const Fiber& f) {
  return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + ")";
}

inline std::string gluing_str(const Gluing& g) {
  return "[[" + std::to_string(g.a) + "," + std::to_string(g.b) + "],[" + std::to_string(g.c) + "," +
         std::to_string(g.d) + "]]";
}

inline std::string lens_str(const LensForm& l) {
  if (l.p == 0) return "S2xS1";
  if (l.p == 1) return "S3";
  return "L(" + std::to_string(l.p) + "," + (l.q_status == QStatus::Unknown ? std::string("*") : std::to_string(l.q)) + ")";
}

inline std::string to_string(const ClosedManifoldForm& form) {
  struct V {
    std::string operator()(const S3Form&) const { return "S3"; }
    std::string operator()(const S2xS1Form&) const { return "S2xS1"; }
    std::string operator()(const LensForm& l) const { return lens_str(l); }
    std::string operator()(const SeifS2Form& s) const {
      std::string out = "(S2";
      for (auto& f : s.fibers) out += "," + fiber_str(f);
      if (s.euler != 0) out += "," + fiber_str({1, s.euler});
      return out + ")";
    }
    std::string operator()(const GraphDDForm& g) const {
      std::string out = "D";
      for (auto& f : g.left) out += fiber_str(f);
      out += " U" + gluing_str(g.B) + " D";
      for (auto& f : g.right) out += fiber_str(f);
      return out;
    }
    std::string operator()(const ConnSumForm& c) const {
      std::string out;
      for (auto& l : c.summands) out += (out.empty() ? "" : " # ") + lens_str(l);
      return out;
    }
    std::string operator()(const UnrecognizedForm& u) const { return "?" + u.raw; }
  };
  return std::visit(V{}, form);
}

// ---------------------------------------------------------------- lens spaces

inline ClosedManifoldForm lens_normalize(Int p, Int q, QStatus status = QStatus::Exact) {
  if (p == 0) return S2xS1Form{};
  if (std::gcd(p, q) != 1) throw Error("lens parameters " + std::to_string(p) + "," + std::to_string(q) + " are not coprime");
  Int ap = abs_int(p);
  if (ap == 1) return S3Form{};
  if (ap == 2) return LensForm{2, 1, status};
  return LensForm{ap, floor_mod(q, ap), status};
}

/// L(p,q1) = L(p,q2) iff q2 = +-q1^(+-1) mod p.
inline bool lens_homeo_eq(const LensForm& x, const LensForm& y) {
  if (x.p != y.p) return false;
  if (x.p <= 2) return true;
  Int p = x.p;
  Int q = floor_mod(x.q, p), r = floor_mod(y.q, p);
  Int qi = mod_inverse(q, p);
  return r == q || r == floor_mod(-q, p) || r == qi || r == floor_mod(-qi, p);
}

/// S^2 with the two fibers (a,b), (c,d): order a*d + b*c.
inline ClosedManifoldForm lens_from_fibers(const Fiber& f1, const Fiber& f2) {
  Int p = narrow(static_cast<Wide>(f1.a) * f2.b + static_cast<Wide>(f1.b) * f2.a);
  if (p == 0) return S2xS1Form{};
  Int x, y;
  // a*y - b*x = 1
  Int g = ext_gcd(f1.a, -f1.b, y, x);
  if (g != 1) throw Error("fiber " + fiber_str(f1) + " is not primitive");
  Int ap = abs_int(p);
  if (ap == 1) return S3Form{};
  Int q = floor_mod(-narrow(static_cast<Wide>(f2.a) * y + static_cast<Wide>(f2.b) * x), ap);
  return lens_normalize(p, q, QStatus::Derived);
}

inline LensForm as_lens_summand(const ClosedManifoldForm& f) {
  if (std::holds_alternative<S3Form>(f)) return {1, 0, QStatus::Exact};
  if (std::holds_alternative<S2xS1Form>(f)) return {0, 1, QStatus::Exact};
  if (auto* l = std::get_if<LensForm>(&f)) return *l;
  throw Error("connected-sum summand is not a lens space: " + to_string(f));
}

// ---------------------------------------------------------------- homology of forms

/// |H1| of a form computed from its own presentation (0 when infinite).
inline Int form_h1_order(const ClosedManifoldForm& form);

namespace detail {

inline Int seifert_s2_order(const std::vector<Fiber>& fibers, Int euler) {
  Wide total = euler;
  for (auto& f : fibers) total *= f.a;
  for (size_t i = 0; i < fibers.size(); ++i) {
    Wide term = fibers[i].b;
    for (size_t j = 0; j < fibers.size(); ++j)
      if (j != i) term *= fibers[j].a;
    total += term;
  }
  return narrow(total < 0 ? -total : total);
}

inline Int graph_order(const GraphDDForm& g) {
  const size_t k = g.left.size(), l = g.right.size(), n = k + l + 2;
  IntMatrix m(n, std::vector<Int>(n, 0));
  const size_t lamL = k, lamR = k + 1 + l;
  size_t row = 0;
  for (size_t i = 0; i < k; ++i, ++row) {
    m[row][i] = g.left[i].a;
    m[row][lamL] = g.left[i].b;
  }
  for (size_t j = 0; j < l; ++j, ++row) {
    m[row][k + 1 + j] = g.right[j].a;
    m[row][lamR] = g.right[j].b;
  }
  for (size_t i = 0; i < k; ++i) m[row][i] = -1;
  for (size_t j = 0; j < l; ++j) m[row][k + 1 + j] = g.B.a;
  m[row][lamR] = -g.B.c;
  ++row;
  m[row][lamL] = 1;
  for (size_t j = 0; j < l; ++j) m[row][k + 1 + j] = g.B.b;
  m[row][lamR] = -g.B.d;
  return abs_int(determinant(m));
}

}  // namespace detail

inline Int form_h1_order(const ClosedManifoldForm& form) {
  struct V {
    Int operator()(const S3Form&) const { return 1; }
    Int operator()(const S2xS1Form&) const { return 0; }
    Int operator()(const LensForm& l) const { return abs_int(l.p); }
    Int operator()(const SeifS2Form& s) const { return detail::seifert_s2_order(s.fibers, s.euler); }
    Int operator()(const GraphDDForm& g) const { return detail::graph_order(g); }
    Int operator()(const ConnSumForm& c) const {
      Wide r = 1;
      for (auto& l : c.summands) r *= abs_int(l.p);
      return narrow(r);
    }
    Int operator()(const UnrecognizedForm& u) const { throw Error("no homology for unrecognized form " + u.raw); }
  };
  return std::visit(V{}, form);
}

// ---------------------------------------------------------------- rewrites

inline Fiber sign_normalize(Fiber f) {
  if (f.a < 0 || (f.a == 0 && f.b < 0)) return {-f.a, -f.b};
  return f;
}

/// Merging a trivial fiber: D(1,b)(c,d) u_swap D(e,f)(g,h) = (S2,(e,f),(g,h),(d+bc,-c)).
inline SeifS2Form merge_trivial_fiber(const GraphDDForm& g) {
  if (!(g.B == Gluing::swap())) throw Error("merge_trivial_fiber: gluing must be [[0,1],[1,0]]");
  auto try_side = [](const std::vector<Fiber>& x, const std::vector<Fiber>& y, SeifS2Form& out) {
    if (x.size() != 2) return false;
    for (int t = 0; t < 2; ++t) {
      Fiber triv = sign_normalize(x[t]);
      if (triv.a != 1) continue;
      Fiber other = x[1 - t];
      out.fibers = y;
      out.fibers.push_back({narrow(other.b + static_cast<Wide>(triv.b) * other.a), -other.a});
      out.euler = 0;
      return true;
    }
    return false;
  };
  SeifS2Form out;
  if (try_side(g.left, g.right, out) || try_side(g.right, g.left, out)) return out;
  throw Error("merge_trivial_fiber: no fiber of multiplicity 1");
}

inline ClosedManifoldForm finish_connsum(std::vector<LensForm> parts) {
  std::vector<LensForm> kept;
  for (auto& l : parts)
    if (l.p != 1) kept.push_back(l);
  if (kept.empty()) return S3Form{};
  if (kept.size() == 1) {
    if (kept[0].p == 0) return S2xS1Form{};
    return kept[0];
  }
  std::sort(kept.begin(), kept.end(), [](const LensForm& x, const LensForm& y) {
    return std::tie(x.p, x.q) < std::tie(y.p, y.q);
  });
  return ConnSumForm{kept};
}

/// A (0,1) fiber splits: (S2,(a,b),(c,d),(0,1)) = L(a,b) # L(c,d).
inline ClosedManifoldForm connsum_reduce(const SeifS2Form& s) {
  auto it = std::find_if(s.fibers.begin(), s.fibers.end(), [](const Fiber& f) { return f.a == 0; });
  if (it == s.fibers.end()) throw Error("connsum_reduce: no (0,1) fiber");
  std::vector<LensForm> parts;
  for (auto jt = s.fibers.begin(); jt != s.fibers.end(); ++jt) {
    if (jt == it) continue;
    if (jt->a == 0) return UnrecognizedForm{to_string(ClosedManifoldForm{s})};
    parts.push_back(as_lens_summand(lens_normalize(jt->a, jt->b)));
  }
  return finish_connsum(parts);
}

/// Canonical oriented Seifert form: a_i >= 2, 0 < b_i < a_i, sorted, Euler summand.
inline SeifS2Form canonical_seifert(const SeifS2Form& s) {
  SeifS2Form out;
  Wide euler = s.euler;
  for (auto f : s.fibers) {
    f = sign_normalize(f);
    if (f.a == 0) throw Error("canonical_seifert: degenerate fiber");
    Int r = floor_mod(f.b, f.a);
    euler += (f.b - r) / f.a;
    if (f.a == 1) continue;
    out.fibers.push_back({f.a, r});
  }
  out.euler = narrow(euler);
  std::sort(out.fibers.begin(), out.fibers.end());
  return out;
}

inline SeifS2Form reverse_orientation(const SeifS2Form& s) {
  SeifS2Form out = s;
  for (auto& f : out.fibers) f.b = -f.b;
  out.euler = -out.euler;
  return canonical_seifert(out);
}

/// Orientation-free representative (lexicographic minimum of both orientations).
inline SeifS2Form unoriented_seifert(const SeifS2Form& s) {
  SeifS2Form x = canonical_seifert(s), y = reverse_orientation(x);
  return std::tie(y.fibers, y.euler) < std::tie(x.fibers, x.euler) ? y : x;
}

inline bool amphichiral(const SeifS2Form& s) {
  auto x = canonical_seifert(s);
  return x == reverse_orientation(x);
}

/// S2 with at most two exceptional fibers is a lens space.
inline ClosedManifoldForm seifert_to_lens(const SeifS2Form& s) {
  bool has_trivial = std::any_of(s.fibers.begin(), s.fibers.end(), [](const Fiber& f) { return abs_int(f.a) == 1; });
  if (!has_trivial && s.fibers.size() > 2) throw Error("seifert_to_lens: no fiber of multiplicity 1");
  auto c = canonical_seifert(s);
  if (c.fibers.size() > 2) return c;
  if (c.fibers.empty()) return lens_normalize(c.euler, 1, QStatus::Derived);
  Fiber first = c.fibers[0];
  Fiber second = c.fibers.size() == 2 ? Fiber{c.fibers[1].a, narrow(c.fibers[1].b + static_cast<Wide>(c.euler) * c.fibers[1].a)}
                                      : Fiber{1, c.euler};
  return lens_from_fibers(first, second);
}

/// All single-step rewrites of a form (empty when it is in normal form).
inline std::vector<ClosedManifoldForm> rewrites(const ClosedManifoldForm& form);

inline ClosedManifoldForm normalize_closed(const ClosedManifoldForm& form);

namespace detail {

inline bool canonical_lens(const LensForm& l) { return l.p >= 3 ? (l.q > 0 && l.q < l.p) : l.p == 2 && l.q == 1; }

/// D(0,1)(c,d) u_swap Y = L(c,d) # (S2, Y, (1,0)).
inline ClosedManifoldForm zero_fiber_split(const std::vector<Fiber>& x, const std::vector<Fiber>& y, size_t zero) {
  Fiber other = x[1 - zero];
  SeifS2Form rest{y, 0};
  rest.fibers.push_back({1, 0});
  auto lens = lens_normalize(other.a, other.b);
  auto tail = normalize_closed(rest);
  std::vector<LensForm> parts{as_lens_summand(lens)};
  if (auto* cs = std::get_if<ConnSumForm>(&tail))
    parts.insert(parts.end(), cs->summands.begin(), cs->summands.end());
  else if (std::holds_alternative<LensForm>(tail) || std::holds_alternative<S3Form>(tail) ||
           std::holds_alternative<S2xS1Form>(tail))
    parts.push_back(as_lens_summand(tail));
  else
    return UnrecognizedForm{"connected sum with " + to_string(tail)};
  return finish_connsum(parts);
}

}  // namespace detail

inline std::vector<ClosedManifoldForm> rewrites(const ClosedManifoldForm& form) {
  std::vector<ClosedManifoldForm> out;
  if (auto* l = std::get_if<LensForm>(&form)) {
    if (!detail::canonical_lens(*l)) out.push_back(lens_normalize(l->p, l->q, l->q_status));
  } else if (auto* s = std::get_if<SeifS2Form>(&form)) {
    int zeros = 0;
    for (auto& f : s->fibers) zeros += f.a == 0;
    if (zeros == 1) out.push_back(connsum_reduce(*s));
    else if (zeros > 1) out.push_back(UnrecognizedForm{to_string(form)});
    else {
      // fold each trivial fiber into the Euler summand separately
      for (size_t i = 0; i < s->fibers.size(); ++i) {
        Fiber f = sign_normalize(s->fibers[i]);
        if (f.a != 1) continue;
        SeifS2Form t = *s;
        t.fibers.erase(t.fibers.begin() + static_cast<long>(i));
        t.euler += f.b;
        out.push_back(t);
      }
      if (out.empty() && s->fibers.size() <= 2) out.push_back(seifert_to_lens(*s));
      if (out.empty() && !(canonical_seifert(*s) == *s)) out.push_back(canonical_seifert(*s));
    }
  } else if (auto* g = std::get_if<GraphDDForm>(&form)) {
    bool degenerate = false;
    for (auto* side : {&g->left, &g->right})
      for (auto& f : *side) degenerate |= abs_int(f.a) <= 1;
    if (degenerate && g->B == Gluing::swap() && g->left.size() == 2 && g->right.size() == 2) {
      for (int side = 0; side < 2; ++side) {
        auto& x = side == 0 ? g->left : g->right;
        auto& y = side == 0 ? g->right : g->left;
        for (size_t i = 0; i < 2; ++i) {
          Fiber f = sign_normalize(x[i]);
          if (f.a == 0) out.push_back(detail::zero_fiber_split(x, y, i));
          if (f.a == 1) {
            Fiber other = x[1 - i];
            SeifS2Form merged{y, 0};
            merged.fibers.push_back({narrow(other.b + static_cast<Wide>(f.b) * other.a), -other.a});
            out.push_back(merged);
          }
        }
      }
    } else if (degenerate) {
      out.push_back(UnrecognizedForm{to_string(form)});
    }
  } else if (auto* c = std::get_if<ConnSumForm>(&form)) {
    auto fixed = finish_connsum(c->summands);
    if (!(fixed == form)) out.push_back(fixed);
  }
  return out;
}

inline ClosedManifoldForm normalize_closed(const ClosedManifoldForm& form) {
  ClosedManifoldForm cur = form;
  for (int guard = 0; guard < 64; ++guard) {
    auto next = rewrites(cur);
    if (next.empty()) return cur;
    cur = next.front();
  }
  throw Error("normalize_closed did not terminate on " + to_string(form));
}

// ---------------------------------------------------------------- graph canonical form

namespace detail {

inline Int shear_side(std::vector<Fiber>& fibers) {
  Wide k = 0;
  for (auto& f : fibers) {
    f = sign_normalize(f);
    if (f.a == 0) throw Error("canonical_graph: degenerate fiber");
    Int r = floor_mod(f.b, f.a);
    k += (f.b - r) / f.a;
    f.b = r;
  }
  std::sort(fibers.begin(), fibers.end());
  return narrow(k);
}

inline Gluing shear(Int k) { return {1, 0, k, 1}; }

}  // namespace detail

/// Lexicographically least presentation over side swap, per-side orientation and
/// sign changes, and section shears reducing each b_i into [0, a_i).
inline GraphDDForm canonical_graph(const GraphDDForm& g) {
  const Gluing J{1, 0, 0, -1};
  bool have = false;
  GraphDDForm best;
  for (int swap = 0; swap < 2; ++swap) {
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<Fiber> x = swap ? g.right : g.left;
      std::vector<Fiber> y = swap ? g.left : g.right;
      Gluing B = swap ? inverse(g.B) : g.B;
      if (mask & 1) { for (auto& f : x) f.b = -f.b; B = B * J; }
      if (mask & 2) { for (auto& f : y) f.b = -f.b; B = J * B; }
      if (mask & 4) B = -B;
      Int kx = detail::shear_side(x);
      Int ky = detail::shear_side(y);
      B = detail::shear(ky) * B * detail::shear(-kx);
      GraphDDForm cand{x, B, y};
      if (!have || std::tie(cand.left, cand.right, cand.B) < std::tie(best.left, best.right, best.B)) {
        best = cand;
        have = true;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------- comparison and classification

enum class Match { Distinct, OrderOnly, Equal };

inline std::string_view match_name(Match m) {
  return m == Match::Equal ? "equal" : m == Match::OrderOnly ? "order-only" : "distinct";
}

/// Compare two normalized forms up to (unoriented) homeomorphism of the recognized kind.
inline Match compare_forms(const ClosedManifoldForm& x0, const ClosedManifoldForm& y0) {
  auto x = normalize_closed(x0), y = normalize_closed(y0);
  if (x.index() != y.index()) return Match::Distinct;
  if (auto* lx = std::get_if<LensForm>(&x)) {
    auto& ly = std::get<LensForm>(y);
    if (lx->p != ly.p) return Match::Distinct;
    if (lx->q_status == QStatus::Unknown || ly.q_status == QStatus::Unknown) return Match::OrderOnly;
    return lens_homeo_eq(*lx, ly) ? Match::Equal : Match::Distinct;
  }
  if (auto* sx = std::get_if<SeifS2Form>(&x))
    return unoriented_seifert(*sx) == unoriented_seifert(std::get<SeifS2Form>(y)) ? Match::Equal : Match::Distinct;
  if (auto* gx = std::get_if<GraphDDForm>(&x))
    return canonical_graph(*gx) == canonical_graph(std::get<GraphDDForm>(y)) ? Match::Equal : Match::Distinct;
  if (auto* cx = std::get_if<ConnSumForm>(&x)) {
    auto a = cx->summands, b = std::get<ConnSumForm>(y).summands;
    if (a.size() != b.size()) return Match::Distinct;
    std::vector<bool> used(b.size(), false);
    for (auto& s : a) {
      bool found = false;
      for (size_t j = 0; j < b.size() && !found; ++j)
        if (!used[j] && lens_homeo_eq(s, b[j])) used[j] = found = true;
      if (!found) return Match::Distinct;
    }
    return Match::Equal;
  }
  if (std::holds_alternative<UnrecognizedForm>(x)) return Match::Distinct;
  return Match::Equal;
}

inline Classification classify(const ClosedManifoldForm& form) {
  struct V {
    Classification operator()(const S3Form&) const { return {ExceptionalType::SH, ""}; }
    Classification operator()(const S2xS1Form&) const { return {ExceptionalType::TH, ""}; }
    Classification operator()(const LensForm&) const { return {ExceptionalType::TH, ""}; }
    Classification operator()(const SeifS2Form& s) const {
      bool small = s.fibers.size() == 3 &&
                   std::all_of(s.fibers.begin(), s.fibers.end(), [](const Fiber& f) { return abs_int(f.a) >= 2; });
      if (!small) return {ExceptionalType::Unknown, "not a small Seifert space"};
      std::vector<Int> a;
      for (auto& f : s.fibers) a.push_back(abs_int(f.a));
      std::sort(a.begin(), a.end());
      if (a[0] == 2 && a[1] == 2) return {ExceptionalType::Z, "prism/ambiguous"};
      return {ExceptionalType::Z, ""};
    }
    Classification operator()(const GraphDDForm& g) const {
      for (auto* side : {&g.left, &g.right})
        for (auto& f : *side)
          if (abs_int(f.a) < 2) return {ExceptionalType::Unknown, "graph piece with multiplicity <= 1"};
      return {ExceptionalType::T, ""};
    }
    Classification operator()(const ConnSumForm&) const { return {ExceptionalType::S, ""}; }
    Classification operator()(const UnrecognizedForm&) const { return {ExceptionalType::Unknown, "unrecognized"}; }
  };
  return std::visit(V{}, form);
}

// ---------------------------------------------------------------- notation parsing

namespace detail {

class FormParser {
 public:
  FormParser(std::string_view s, const Bindings& vars) : s_(s), vars_(vars) {}

  ClosedManifoldForm parse() {
    std::vector<std::string_view> parts = split_top(s_, '#');
    if (parts.size() > 1) {
      std::vector<LensForm> summands;
      for (auto p : parts) summands.push_back(as_lens_summand(FormParser(p, vars_).single()));
      return finish_connsum(summands);
    }
    return single();
  }

 private:
  static std::vector<std::string_view> split_top(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      if (c == '(' || c == '[') ++depth;
      else if (c == ')' || c == ']') --depth;
      else if (c == sep && depth == 0) {
        out.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    out.push_back(s.substr(start));
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("cannot parse manifold '" + std::string(s_) + "': " + what);
  }

  void skip() { while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_; }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) { pos_ += tok.size(); return true; }
    return false;
  }

  /// Reads a parenthesised group and splits it at top-level commas.
  std::vector<std::string_view> group(char open, char close) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != open) fail(std::string("expected '") + open + "'");
    int depth = 0;
    size_t start = pos_ + 1;
    for (size_t i = pos_; i < s_.size(); ++i) {
      if (s_[i] == '(' || s_[i] == '[') ++depth;
      if (s_[i] == ')' || s_[i] == ']') --depth;
      if (depth == 0) {
        if (s_[i] != close) fail("unbalanced brackets");
        pos_ = i + 1;
        return split_top(s_.substr(start, i - start), ',');
      }
    }
    fail("unterminated group");
  }

  Int num(std::string_view e) { return eval_expr(e, vars_); }

  Fiber fiber() {
    auto g = group('(', ')');
    if (g.size() != 2) fail("fiber needs two entries");
    return {num(g[0]), num(g[1])};
  }

  std::vector<Fiber> fibers() {
    std::vector<Fiber> out;
    for (skip(); pos_ < s_.size() && s_[pos_] == '('; skip()) out.push_back(fiber());
    return out;
  }

  ClosedManifoldForm single() {
    pos_ = 0;
    skip();
    ClosedManifoldForm out;
    if (eat("S2xS1") || eat("S^2xS^1")) out = S2xS1Form{};
    else if (eat("S3") || eat("S^3")) out = S3Form{};
    else if (eat("L")) {
      auto g = group('(', ')');
      if (g.size() != 2) fail("lens space needs two entries");
      auto q = trim(g[1]);
      if (q == "*" || q == "⋆" || q == "?") out = lens_normalize(num(g[0]), 1, QStatus::Unknown);
      else out = lens_normalize(num(g[0]), num(q));
    } else if (eat("(")) {
      if (!(eat("S2") || eat("S^2"))) fail("expected S2 base");
      SeifS2Form s;
      while (eat(",")) s.fibers.push_back(fiber());
      if (!eat(")")) fail("expected ')'");
      out = s;
    } else if (eat("D")) {
      GraphDDForm g;
      g.left = fibers();
      if (!(eat("U") || eat("∪"))) fail("expected gluing 'U'");
      auto rows = group('[', ']');
      if (rows.size() != 2) fail("gluing needs two rows");
      std::vector<Int> e;
      for (auto r : rows) {
        FormParser sub(r, vars_);
        auto entries = sub.group('[', ']');
        if (entries.size() != 2) fail("gluing row needs two entries");
        for (auto x : entries) e.push_back(num(x));
      }
      g.B = {e[0], e[1], e[2], e[3]};
      if (abs_int(g.B.det()) != 1) fail("gluing matrix not in GL2(Z)");
      if (!eat("D")) fail("expected right piece 'D'");
      g.right = fibers();
      out = g;
    } else {
      fail("unknown form");
    }
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return out;
  }

  std::string_view s_;
  const Bindings& vars_;
  size_t pos_ = 0;
};

}  // namespace detail

/// Parses "S3", "L(31,19)", "L(5,*)", "(S2,(2,1),(3,2),(9,-5))",
/// "D(2,1)(3,-2) U[[0,1],[1,0]] D(2,1)(3n-1,5n-2)", "L(2,1) # L(3,1)".
/// Entries may be integer polynomial expressions in bound variables.
inline ClosedManifoldForm parse_form(std::string_view text, const Bindings& vars = {}) {
  return detail::FormParser(text, vars).parse();
}

}  // namespace chainfill
