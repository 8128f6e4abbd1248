#pragma once

// Filling instructions on the chain-link exteriors M5, M4, F, M3 and N, their
// symmetry actions, and the reductions M5 -> M4 -> M3 -> N.

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chainfill/slope.hpp"

namespace chainfill {

enum class Link { M5, M4, M3, N, F };

inline int arity(Link l) {
  switch (l) {
    case Link::M5: return 5;
    case Link::M4: return 4;
    case Link::F: return 4;
    default: return 3;
  }
}

inline std::string_view link_name(Link l) {
  switch (l) {
    case Link::M5: return "M5";
    case Link::M4: return "M4";
    case Link::M3: return "M3";
    case Link::N: return "N";
    default: return "F";
  }
}

inline Link parse_link(std::string_view s) {
  for (auto l : {Link::M5, Link::M4, Link::M3, Link::N, Link::F})
    if (link_name(l) == s) return l;
  throw Error("unknown link '" + std::string(s) + "'");
}

inline constexpr Link all_links[] = {Link::M5, Link::M4, Link::M3, Link::N, Link::F};

struct Instruction {
  Link link = Link::N;
  std::vector<std::optional<Slope>> slots;

  int filled() const {
    return static_cast<int>(std::count_if(slots.begin(), slots.end(), [](auto& s) { return s.has_value(); }));
  }
  bool full() const { return filled() == static_cast<int>(slots.size()); }
  const Slope& at(size_t i) const {
    if (!slots.at(i)) throw Error("slot " + std::to_string(i + 1) + " is empty");
    return *slots[i];
  }

  friend bool operator==(const Instruction&, const Instruction&) = default;
  friend auto operator<=>(const Instruction&, const Instruction&) = default;
};

class OrbitBudgetExceeded : public Error {
 public:
  using Error::Error;
};

inline Instruction make_instruction(Link link, std::vector<std::optional<Slope>> slots) {
  if (static_cast<int>(slots.size()) != arity(link))
    throw Error(std::string(link_name(link)) + " takes " + std::to_string(arity(link)) + " slots, got " +
                std::to_string(slots.size()));
  return {link, std::move(slots)};
}

inline Instruction make_full(Link link, const std::vector<Slope>& slopes) {
  std::vector<std::optional<Slope>> s(slopes.begin(), slopes.end());
  return make_instruction(link, std::move(s));
}

inline std::string to_string(const Instruction& f) {
  std::string out(link_name(f.link));
  out += "(";
  for (size_t i = 0; i < f.slots.size(); ++i) {
    if (i) out += ",";
    out += f.slots[i] ? to_string(*f.slots[i]) : "_";
  }
  return out + ")";
}

/// Comma separated slopes; "_" or an empty field marks an empty slot. Short lists are padded with empty slots.
inline Instruction parse_instruction(Link link, std::string_view csv) {
  std::vector<std::optional<Slope>> slots;
  size_t start = 0;
  for (;;) {
    size_t comma = csv.find(',', start);
    auto field = detail::trim(csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (field.empty() || field == "_" || field == "null") slots.emplace_back();
    else slots.emplace_back(parse_slope(field));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  while (static_cast<int>(slots.size()) < arity(link)) slots.emplace_back();
  return make_instruction(link, std::move(slots));
}

// ---------------------------------------------------------------- generators

/// Output slot i receives input slot `source`, transformed by `map`.
struct SlotAction {
  int source = 0;
  MoebiusMap map = maps::identity;
};

struct SymmetryGenerator {
  std::string id;
  Link link = Link::M5;
  std::vector<SlotAction> slots;
};

namespace detail {

inline SymmetryGenerator gen(std::string id, Link link, std::vector<SlotAction> slots) {
  return {std::move(id), link, std::move(slots)};
}

inline std::vector<SymmetryGenerator> build_m5_generators() {
  using namespace maps;
  // slot letters: a/b=0, c/d=1, e/f=2, g/h=3, i/j=4
  const auto& I = identity;
  const auto& R = inv;               // b/a
  const auto& O = one_minus;         // (b-a)/b
  const auto& X = x_over_x_minus_1;  // a/(a-b)
  const auto& Q = inv_one_minus;     // b/(b-a)
  const auto& P = x_minus_1_over_x;  // (a-b)/a
  return {
      gen("rot", Link::M5, {{4, I}, {0, I}, {1, I}, {2, I}, {3, I}}),
      gen("refl", Link::M5, {{4, I}, {3, I}, {2, I}, {1, I}, {0, I}}),
      gen("s1", Link::M5, {{2, R}, {4, O}, {0, X}, {1, O}, {3, R}}),
      gen("s2", Link::M5, {{0, Q}, {4, P}, {2, P}, {1, Q}, {3, I}}),
      gen("s3", Link::M5, {{4, X}, {0, O}, {2, R}, {1, R}, {3, O}}),
      gen("s4", Link::M5, {{4, Q}, {2, I}, {0, Q}, {1, P}, {3, P}}),
      gen("s5", Link::M5, {{0, X}, {2, X}, {4, X}, {1, X}, {3, X}}),
      gen("s6", Link::M5, {{3, R}, {4, R}, {2, O}, {1, X}, {0, O}}),
      gen("s7", Link::M5, {{3, Q}, {0, I}, {2, Q}, {1, P}, {4, P}}),
      gen("s8", Link::M5, {{3, X}, {2, O}, {0, R}, {1, R}, {4, O}}),
      gen("s9", Link::M5, {{3, P}, {2, Q}, {4, I}, {1, Q}, {0, P}}),
      gen("s10", Link::M5, {{3, O}, {0, R}, {4, R}, {1, O}, {2, X}}),
      gen("s11", Link::M5, {{0, P}, {2, P}, {3, Q}, {1, I}, {4, Q}}),
  };
}

inline std::vector<SymmetryGenerator> build_d4(Link link) {
  using maps::identity;
  return {gen("d4-rot", link, {{3, identity}, {0, identity}, {1, identity}, {2, identity}}),
          gen("d4-refl", link, {{3, identity}, {2, identity}, {1, identity}, {0, identity}})};
}

inline std::vector<SymmetryGenerator> build_s3(Link link) {
  using maps::identity;
  return {gen("s3-perm", link, {{1, identity}, {0, identity}, {2, identity}}),
          gen("s3-cycle", link, {{2, identity}, {0, identity}, {1, identity}})};
}

}  // namespace detail

inline const std::vector<SymmetryGenerator>& generators(Link link) {
  static const std::vector<SymmetryGenerator> m5 = detail::build_m5_generators();
  static const std::vector<SymmetryGenerator> m4 = detail::build_d4(Link::M4);
  static const std::vector<SymmetryGenerator> f = detail::build_d4(Link::F);
  static const std::vector<SymmetryGenerator> n = detail::build_s3(Link::N);
  static const std::vector<SymmetryGenerator> m3 = detail::build_s3(Link::M3);
  switch (link) {
    case Link::M5: return m5;
    case Link::M4: return m4;
    case Link::F: return f;
    case Link::N: return n;
    default: return m3;
  }
}

inline const SymmetryGenerator& find_generator(Link link, std::string_view id) {
  for (auto& g : generators(link))
    if (g.id == id) return g;
  throw Error("no generator '" + std::string(id) + "' for " + std::string(link_name(link)));
}

inline Instruction apply_generator(const SymmetryGenerator& g, const Instruction& f) {
  if (g.link != f.link)
    throw Error("generator " + g.id + " acts on " + std::string(link_name(g.link)) + ", not " +
                std::string(link_name(f.link)));
  Instruction out{f.link, std::vector<std::optional<Slope>>(f.slots.size())};
  for (size_t i = 0; i < g.slots.size(); ++i) {
    const auto& src = f.slots[static_cast<size_t>(g.slots[i].source)];
    if (src) out.slots[i] = apply_moebius(g.slots[i].map, *src);
  }
  return out;
}

/// g after h.
inline SymmetryGenerator compose(const SymmetryGenerator& g, const SymmetryGenerator& h) {
  if (g.link != h.link) throw Error("cannot compose generators of different links");
  SymmetryGenerator out{g.id + "*" + h.id, g.link, {}};
  for (auto& act : g.slots) {
    const auto& inner = h.slots[static_cast<size_t>(act.source)];
    out.slots.push_back({inner.source, act.map * inner.map});
  }
  return out;
}

inline bool is_identity(const SymmetryGenerator& g) {
  for (size_t i = 0; i < g.slots.size(); ++i)
    if (g.slots[i].source != static_cast<int>(i) || !g.slots[i].map.same_action(maps::identity)) return false;
  return true;
}

/// Inverse found inside the finite cyclic group generated by g.
inline SymmetryGenerator inverse_generator(const SymmetryGenerator& g, int max_order = 1000) {
  SymmetryGenerator power = g;  // g^1
  SymmetryGenerator prev = g;
  for (int k = 1; k <= max_order; ++k) {
    if (is_identity(power)) {
      SymmetryGenerator inv = k == 1 ? power : prev;  // g^(k-1)
      inv.id = g.id + "^-1";
      return inv;
    }
    prev = power;
    power = compose(g, power);
  }
  throw Error("generator " + g.id + " has no finite order below bound");
}

/// Closure of {f} under the generators of its link, sorted.
inline std::vector<Instruction> orbit(const Instruction& f, size_t budget = 10000) {
  std::set<Instruction> seen{f};
  std::deque<Instruction> queue{f};
  const auto& gens = generators(f.link);
  while (!queue.empty()) {
    Instruction cur = queue.front();
    queue.pop_front();
    for (auto& g : gens) {
      Instruction next = apply_generator(g, cur);
      if (seen.insert(next).second) {
        if (seen.size() > budget)
          throw OrbitBudgetExceeded("orbit of " + to_string(f) + " exceeds " + std::to_string(budget) + " states");
        queue.push_back(std::move(next));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------- flags

/// Slopes whose filling of the link (one slot) is non-hyperbolic.
inline bool flagged_slope(Link link, const Slope& s) {
  if (s.is_infinite()) return true;
  switch (link) {
    case Link::M5: return s.den == 1 && (s.num == 0 || s.num == 1);
    case Link::M4: return s.den == 1 && s.num >= 0 && s.num <= 2;
    case Link::M3: return s.den == 1 && s.num >= 0 && s.num <= 3;
    case Link::N: return s.den == 1 && s.num <= 0 && s.num >= -3;
    case Link::F: return abs_int(s.num) <= 1;
  }
  return false;
}

/// Slopes through which a single slot factors to the next smaller link.
inline bool factoring_slope(Link link, const Slope& s) {
  auto is = [&](Int p, Int q) { return s.num == p && s.den == q; };
  switch (link) {
    case Link::M5: return is(-1, 1) || is(1, 2) || is(2, 1);
    case Link::M4: return is(-1, 1) || is(1, 2) || is(3, 2) || is(3, 1);
    default: return false;
  }
}

inline bool nonhyperbolic_flag(const Instruction& f) {
  return std::any_of(f.slots.begin(), f.slots.end(), [&](auto& s) { return s && flagged_slope(f.link, *s); });
}

// ---------------------------------------------------------------- reductions

namespace detail {
inline std::optional<Slope> shift(const std::optional<Slope>& s, Int k) {
  if (!s) return s;
  return add_integer(*s, k);
}
}  // namespace detail

/// M5(a,c,-1,e,g) = M4(a, c+1, e+1, g), applied to an instruction already carrying -1 in slot 3.
inline Instruction m5_to_m4_direct(const Instruction& f) {
  if (f.link != Link::M5 || !f.slots[2] || *f.slots[2] != integer_slope(-1))
    throw Error("m5_to_m4_direct needs an M5 instruction with -1 in slot 3");
  return make_instruction(Link::M4, {f.slots[0], detail::shift(f.slots[1], 1), detail::shift(f.slots[3], 1), f.slots[4]});
}

/// Inverse of m5_to_m4_direct: M4(a,b,c,d) = M5(a, b-1, -1, c-1, d).
inline Instruction m4_to_m5_lift(const Instruction& f) {
  if (f.link != Link::M4) throw Error("m4_to_m5_lift needs an M4 instruction");
  return make_instruction(Link::M5, {f.slots[0], detail::shift(f.slots[1], -1), integer_slope(-1),
                                     detail::shift(f.slots[2], -1), f.slots[3]});
}

/// M4(a,-1,c,d) = M3(a+1, c+1, d).
inline Instruction m4_to_m3_direct(const Instruction& f) {
  if (f.link != Link::M4 || !f.slots[1] || *f.slots[1] != integer_slope(-1))
    throw Error("m4_to_m3_direct needs an M4 instruction with -1 in slot 2");
  return make_instruction(Link::M3, {detail::shift(f.slots[0], 1), detail::shift(f.slots[2], 1), f.slots[3]});
}

/// Inverse of m4_to_m3_direct: M3(a,b,c) = M4(a-1, -1, b-1, c).
inline Instruction m3_to_m4_lift(const Instruction& f) {
  if (f.link != Link::M3) throw Error("m3_to_m4_lift needs an M3 instruction");
  return make_instruction(Link::M4, {detail::shift(f.slots[0], -1), integer_slope(-1), detail::shift(f.slots[1], -1), f.slots[2]});
}

inline std::optional<Instruction> factors_to_m4(const Instruction& f) {
  if (f.link != Link::M5) throw Error("factors_to_m4 needs an M5 instruction");
  if (f.filled() < 4) throw Error("factors_to_m4 needs at least four filled slots");
  auto has_minus_one = [](const Instruction& g) { return g.slots[2] && *g.slots[2] == integer_slope(-1); };
  if (has_minus_one(f)) return m5_to_m4_direct(f);
  for (auto& g : orbit(f))
    if (has_minus_one(g)) return m5_to_m4_direct(g);
  return std::nullopt;
}

struct M3Reduction {
  enum class Status { Reduced, RouteNotFound, NoFactoringSlope } status = Status::NoFactoringSlope;
  std::optional<Instruction> result;
  std::string route;
};

inline std::string_view status_name(M3Reduction::Status s) {
  switch (s) {
    case M3Reduction::Status::Reduced: return "reduced";
    case M3Reduction::Status::RouteNotFound: return "reducible, route not found";
    default: return "no factoring slope";
  }
}

inline M3Reduction factors_to_m3(const Instruction& f) {
  if (f.link != Link::M4) throw Error("factors_to_m3 needs an M4 instruction");
  if (f.filled() < 3) throw Error("factors_to_m3 needs at least three filled slots");
  auto minus_one_slot2 = [](const Instruction& g) { return g.slots[1] && *g.slots[1] == integer_slope(-1); };
  auto d4 = orbit(f);
  if (minus_one_slot2(f)) return {M3Reduction::Status::Reduced, m4_to_m3_direct(f), "direct"};
  for (auto& g : d4)
    if (minus_one_slot2(g)) return {M3Reduction::Status::Reduced, m4_to_m3_direct(g), "D4"};
  bool factoring = std::any_of(f.slots.begin(), f.slots.end(), [](auto& s) { return s && factoring_slope(Link::M4, *s); });
  if (!factoring) return {M3Reduction::Status::NoFactoringSlope, std::nullopt, ""};
  // lift each D4 representative to M5, move a -1 into slot 3 by symmetry and come back down
  for (auto& g : d4) {
    Instruction lifted = m4_to_m5_lift(g);
    for (auto& h : orbit(lifted)) {
      if (!(h.slots[2] && *h.slots[2] == integer_slope(-1))) continue;
      Instruction down = m5_to_m4_direct(h);
      for (auto& k : orbit(down))
        if (minus_one_slot2(k)) return {M3Reduction::Status::Reduced, m4_to_m3_direct(k), "M5 lift"};
    }
  }
  return {M3Reduction::Status::RouteNotFound, std::nullopt, ""};
}

inline Instruction m3_to_n(const Instruction& f) {
  if (f.link != Link::M3) throw Error("m3_to_n needs an M3 instruction");
  Instruction out{Link::N, f.slots};
  for (auto& s : out.slots)
    if (s) s = negate(*s);
  return out;
}

inline Instruction n_to_m3(const Instruction& f) {
  if (f.link != Link::N) throw Error("n_to_m3 needs an N instruction");
  Instruction out{Link::M3, f.slots};
  for (auto& s : out.slots)
    if (s) s = negate(*s);
  return out;
}

}  // namespace chainfill
