#pragma once

// Evaluators turning full filling instructions into closed manifold expressions.
//
// Slot conventions (the error-prone part):
//   F(s1,s2,s3,s4)         = D(s1)(s3) u_swap D(s2)(s4)
//   M5(a/b,c/d,e/f,g/h)(inf) = F(-a/b, f/e, d/c, -g/h)
//   M5(a/b,c/d,e/f,g/h)(1)   = F((a-b)/b, c/d, e/f, (g-h)/h)
//   M5(a/b,c/d,e/f,g/h)(0)   = F(b/(b-a), (c-d)/c, -h/g, (e-f)/f)
//   M4(a/b,c/d,e/f)(inf) = (S2,(a,b),(d,-c),(e,f))
//   M4(a/b,c/d,e/f)(0)   = D(f,-e)(b,2b-a) u_swap D(2,1)(c-2d,d)
//   M4(a/b,c/d,e/f)(1)   = (S2,(a-2b,b),(c-d,c),(e-2f,f))
//   M4(a/b,c/d,e/f)(2)   = D(a-b,b)(e-f,f) u_swap D(c,d)(2,-1)

#include <optional>
#include <string>

#include "chainfill/instruction.hpp"
#include "chainfill/seifert.hpp"

namespace chainfill {

class NotEvaluable : public Error {
 public:
  using Error::Error;
};

inline Fiber fiber_of(const Slope& s) { return {s.num, s.den}; }

/// Raw graph expression with slots 1,3 on the left piece and 2,4 on the right.
inline GraphDDForm fill_F(const Slope& s1, const Slope& s2, const Slope& s3, const Slope& s4) {
  return {{fiber_of(s1), fiber_of(s3)}, Gluing::swap(), {fiber_of(s2), fiber_of(s4)}};
}

inline GraphDDForm fill_F(const Instruction& f) {
  if (f.link != Link::F || !f.full()) throw Error("fill_F needs a full F instruction");
  return fill_F(f.at(0), f.at(1), f.at(2), f.at(3));
}

inline bool m5_last_supported(const Slope& s) {
  return s.is_infinite() || (s.den == 1 && (s.num == 0 || s.num == 1));
}

inline bool m4_last_supported(const Slope& s) {
  return s.is_infinite() || (s.den == 1 && s.num >= 0 && s.num <= 2);
}

/// The F instruction presenting M5(a/b,c/d,e/f,g/h)(last).
inline Instruction m5_to_f(const Slope& s1, const Slope& s2, const Slope& s3, const Slope& s4, const Slope& last) {
  const Int a = s1.num, b = s1.den, c = s2.num, d = s2.den, e = s3.num, f = s3.den, g = s4.num, h = s4.den;
  if (last.is_infinite())
    return make_full(Link::F, {make_slope(-a, b), make_slope(f, e), make_slope(d, c), make_slope(-g, h)});
  if (last == integer_slope(1))
    return make_full(Link::F, {make_slope(a - b, b), s2, s3, make_slope(g - h, h)});
  if (last == integer_slope(0))
    return make_full(Link::F, {make_slope(b, b - a), make_slope(c - d, c), make_slope(-h, g), make_slope(e - f, f)});
  throw NotEvaluable("M5 filling at slope " + to_string(last) +
                     " is not covered; move an exceptional slope into {inf,1,0} by symmetry first");
}

inline ClosedManifoldForm m5_fill_raw(const Slope& s1, const Slope& s2, const Slope& s3, const Slope& s4, const Slope& last) {
  return fill_F(m5_to_f(s1, s2, s3, s4, last));
}

inline ClosedManifoldForm m5_fill(const Slope& s1, const Slope& s2, const Slope& s3, const Slope& s4, const Slope& last) {
  return normalize_closed(m5_fill_raw(s1, s2, s3, s4, last));
}

/// Full M5 instruction whose fifth slot is the filled one.
inline ClosedManifoldForm m5_fill(const Instruction& f) {
  if (f.link != Link::M5 || !f.full()) throw Error("m5_fill needs a full M5 instruction");
  return m5_fill(f.at(0), f.at(1), f.at(2), f.at(3), f.at(4));
}

inline ClosedManifoldForm m4_fill_raw(const Slope& s1, const Slope& s2, const Slope& s3, const Slope& last) {
  const Int a = s1.num, b = s1.den, c = s2.num, d = s2.den, e = s3.num, f = s3.den;
  if (last.is_infinite()) return SeifS2Form{{{a, b}, {d, -c}, {e, f}}, 0};
  if (last == integer_slope(0)) return GraphDDForm{{{f, -e}, {b, 2 * b - a}}, Gluing::swap(), {{2, 1}, {c - 2 * d, d}}};
  if (last == integer_slope(1)) return SeifS2Form{{{a - 2 * b, b}, {c - d, c}, {e - 2 * f, f}}, 0};
  if (last == integer_slope(2)) return GraphDDForm{{{a - b, b}, {e - f, f}}, Gluing::swap(), {{c, d}, {2, -1}}};
  throw NotEvaluable("M4 filling at slope " + to_string(last) + " is not covered; use the D4 orbit first");
}

inline ClosedManifoldForm m4_fill(const Slope& s1, const Slope& s2, const Slope& s3, const Slope& last) {
  return normalize_closed(m4_fill_raw(s1, s2, s3, last));
}

inline ClosedManifoldForm m4_fill(const Instruction& f) {
  if (f.link != Link::M4 || !f.full()) throw Error("m4_fill needs a full M4 instruction");
  return m4_fill(f.at(0), f.at(1), f.at(2), f.at(3));
}

enum class FTarget { Infinity, One, Zero };

/// F(a/b,c/d,e/f,g/h) as an M5 instruction whose fifth slot carries the filling.
inline Instruction f_to_m5(const Instruction& f, FTarget target) {
  if (f.link != Link::F || !f.full()) throw Error("f_to_m5 needs a full F instruction");
  const Int a = f.at(0).num, b = f.at(0).den, c = f.at(1).num, d = f.at(1).den;
  const Int e = f.at(2).num, ff = f.at(2).den, g = f.at(3).num, h = f.at(3).den;
  switch (target) {
    case FTarget::Infinity:
      return make_full(Link::M5, {make_slope(-a, b), make_slope(ff, e), make_slope(d, c), make_slope(-g, h), infinity()});
    case FTarget::One:
      return make_full(Link::M5, {make_slope(a + b, b), f.at(1), f.at(2), make_slope(g + h, h), integer_slope(1)});
    default:
      // inverse of the M5 -> F map at 0; the roles of e/f and g/h are not interchangeable here
      return make_full(Link::M5, {make_slope(a - b, a), make_slope(d, d - c), make_slope(g + h, h), make_slope(-ff, e), integer_slope(0)});
  }
}

// ---------------------------------------------------------------- general evaluation

struct Evaluation {
  ClosedManifoldForm raw;
  ClosedManifoldForm form;
  std::string route;
};

namespace detail {

inline std::optional<Evaluation> eval_m4(const Instruction& f) {
  for (auto& g : orbit(f))
    if (m4_last_supported(g.at(3))) {
      auto raw = m4_fill_raw(g.at(0), g.at(1), g.at(2), g.at(3));
      return Evaluation{raw, normalize_closed(raw), to_string(g)};
    }
  return std::nullopt;
}

inline std::optional<Evaluation> eval_m5(const Instruction& f) {
  for (auto& g : orbit(f))
    if (m5_last_supported(g.at(4))) {
      auto raw = m5_fill_raw(g.at(0), g.at(1), g.at(2), g.at(3), g.at(4));
      return Evaluation{raw, normalize_closed(raw), to_string(g)};
    }
  return std::nullopt;
}

inline std::optional<Evaluation> eval_m3(const Instruction& f) {
  for (auto& g : orbit(f)) {
    auto lifted = m3_to_m4_lift(g);
    if (auto e = eval_m4(lifted)) {
      e->route = to_string(g) + " -> " + e->route;
      return e;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Evaluate any full instruction by moving a supported slope into the evaluated slot.
inline Evaluation evaluate(const Instruction& f) {
  if (!f.full()) throw Error("evaluate needs a full instruction: " + to_string(f));
  std::optional<Evaluation> e;
  switch (f.link) {
    case Link::F: {
      auto raw = fill_F(f);
      e = Evaluation{raw, normalize_closed(raw), to_string(f)};
      break;
    }
    case Link::M5:
      e = detail::eval_m5(f);
      if (!e)
        if (auto m4 = factors_to_m4(f)) {
          e = detail::eval_m4(*m4);
          if (e) e->route = to_string(*m4) + " -> " + e->route;
        }
      break;
    case Link::M4:
      e = detail::eval_m4(f);
      if (!e) e = detail::eval_m5(m4_to_m5_lift(f));
      break;
    case Link::M3:
      e = detail::eval_m3(f);
      break;
    case Link::N:
      e = detail::eval_m3(n_to_m3(f));
      break;
  }
  if (!e) throw NotEvaluable("no evaluator route for " + to_string(f));
  return *e;
}

inline bool evaluable(const Instruction& f) {
  try {
    evaluate(f);
    return true;
  } catch (const NotEvaluable&) {
    return false;
  }
}

/// N(r/s, t/u)(slope), evaluated through M3 and M4.
inline Evaluation fill_N(const Slope& x, const Slope& y, const Slope& slope) {
  return evaluate(make_full(Link::N, {x, y, slope}));
}

}  // namespace chainfill
