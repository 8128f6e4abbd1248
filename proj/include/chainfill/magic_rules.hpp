#pragma once

// Encoded exceptional-filling rules for N(r/s, t/u) and the family tables.
// The rule table is partial: a missing match means "not covered", never "hyperbolic".

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/data.hpp"
#include "chainfill/expr.hpp"
#include "chainfill/instruction.hpp"
#include "chainfill/seifert.hpp"

namespace chainfill {

// ---------------------------------------------------------------- rule table

struct SlotPattern {
  enum class Kind { Free, Integer, Recip } kind = Kind::Free;
  std::string offset;  // Recip: slope = offset + 1/var
  char var = 0;        // Integer, Recip
  char den_var = 0;    // Free: num -> var, den -> den_var
};

struct LensRule {
  std::string id;
  Slope slope;
  std::array<SlotPattern, 2> slots;
  std::string order;
  std::optional<std::string> q;
  std::map<char, std::vector<Int>> exclude;
  std::string provenance;
};

struct NecessaryRule {
  enum class Condition { SlopeIn, NoSlotRecip, SomeSlotRecip, SomeSlotInt };
  std::string id;
  ExceptionalType type = ExceptionalType::Unknown;
  std::optional<Slope> slope;
  Condition condition = Condition::SlopeIn;
  std::vector<Slope> slopes;
  Int offset = 0;
  std::string provenance;
};

struct GuardSpec {
  std::vector<Slope> large_family;
  std::map<Slope, Slope> sixth_slope;
  std::vector<std::pair<Slope, Slope>> finite_table;
  std::vector<std::pair<Slope, Slope>> quoted_nonhyperbolic;
};

struct RuleTable {
  std::vector<LensRule> lens;
  std::vector<NecessaryRule> necessary;
  GuardSpec guard;
};

namespace detail {

inline SlotPattern parse_pattern(const Json& j) {
  SlotPattern p;
  auto form = j.at("form").get<std::string>();
  if (form == "free") {
    auto v = j.at("vars").get<std::string>();
    if (v.size() != 2) throw Error("free slot needs two variable letters");
    p.var = v[0];
    p.den_var = v[1];
  } else if (form == "int") {
    p.kind = SlotPattern::Kind::Integer;
    p.var = j.at("var").get<std::string>().at(0);
  } else if (form == "recip") {
    p.kind = SlotPattern::Kind::Recip;
    p.offset = j.at("offset").get<std::string>();
    p.var = j.at("var").get<std::string>().at(0);
  } else {
    throw Error("unknown slot pattern '" + form + "'");
  }
  return p;
}

inline std::pair<Slope, Slope> slope_pair(const Json& j) { return {slope_from_json(j.at(0)), slope_from_json(j.at(1))}; }

inline RuleTable parse_rules(const Json& root) {
  RuleTable t;
  for (auto& r : root.at("rules")) {
    auto kind = r.at("kind").get<std::string>();
    if (kind == "lens") {
      LensRule l;
      l.id = r.at("id");
      l.slope = slope_from_json(r.at("slope"));
      l.slots = {parse_pattern(r.at("slots").at(0)), parse_pattern(r.at("slots").at(1))};
      l.order = r.at("order");
      if (!r.at("q").is_null()) l.q = r.at("q").get<std::string>();
      if (r.contains("exclude"))
        for (auto& [k, v] : r["exclude"].items()) l.exclude[k.at(0)] = v.get<std::vector<Int>>();
      l.provenance = r.at("provenance");
      t.lens.push_back(std::move(l));
    } else if (kind == "necessary") {
      NecessaryRule n;
      n.id = r.at("id");
      n.type = parse_type(r.at("type").get<std::string>());
      if (r.contains("slope")) n.slope = slope_from_json(r["slope"]);
      auto c = r.at("condition").get<std::string>();
      if (c == "slope_in") {
        n.condition = NecessaryRule::Condition::SlopeIn;
        for (auto& s : r.at("slopes")) n.slopes.push_back(slope_from_json(s));
      } else if (c == "no_slot_recip" || c == "some_slot_recip") {
        n.condition = c == "no_slot_recip" ? NecessaryRule::Condition::NoSlotRecip : NecessaryRule::Condition::SomeSlotRecip;
        n.offset = eval_expr(r.at("offset").get<std::string>());
      } else if (c == "some_slot_int") {
        n.condition = NecessaryRule::Condition::SomeSlotInt;
      } else {
        throw Error("unknown rule condition '" + c + "'");
      }
      n.provenance = r.at("provenance");
      t.necessary.push_back(std::move(n));
    } else {
      throw Error("unknown rule kind '" + kind + "'");
    }
  }
  auto& g = root.at("guard");
  for (auto& s : g.at("large_family_slopes")) t.guard.large_family.push_back(slope_from_json(s));
  for (auto& [k, v] : g.at("large_family_sixth_slope").items()) t.guard.sixth_slope[parse_slope(k)] = slope_from_json(v);
  for (auto& p : g.at("finite_table_instructions")) t.guard.finite_table.push_back(slope_pair(p));
  for (auto& p : g.at("quoted_nonhyperbolic")) t.guard.quoted_nonhyperbolic.push_back(slope_pair(p));
  return t;
}

}  // namespace detail

inline const RuleTable& rule_table() {
  static const RuleTable t = detail::parse_rules(data());
  return t;
}

// ---------------------------------------------------------------- guard

enum class GuardStatus { Clear, NonHyperbolicFlag, QuotedNonHyperbolic, LargeFamily, FiniteTable };

inline std::string_view guard_name(GuardStatus g) {
  switch (g) {
    case GuardStatus::Clear: return "clear";
    case GuardStatus::NonHyperbolicFlag: return "non-hyperbolic flag";
    case GuardStatus::QuotedNonHyperbolic: return "quoted non-hyperbolic";
    case GuardStatus::LargeFamily: return "large exceptional family";
    default: return "finite table";
  }
}

inline GuardStatus guard(const Slope& x, const Slope& y) {
  auto& g = rule_table().guard;
  if (flagged_slope(Link::N, x) || flagged_slope(Link::N, y)) return GuardStatus::NonHyperbolicFlag;
  auto same = [&](const std::pair<Slope, Slope>& p) {
    return (p.first == x && p.second == y) || (p.first == y && p.second == x);
  };
  if (std::any_of(g.quoted_nonhyperbolic.begin(), g.quoted_nonhyperbolic.end(), same)) return GuardStatus::QuotedNonHyperbolic;
  for (auto& s : g.large_family)
    if (s == x || s == y) return GuardStatus::LargeFamily;
  if (std::any_of(g.finite_table.begin(), g.finite_table.end(), same)) return GuardStatus::FiniteTable;
  return GuardStatus::Clear;
}

/// Extra exceptional slopes of a guarded large-family instruction.
inline std::vector<Slope> sixth_slopes(const Slope& x, const Slope& y) {
  std::vector<Slope> out;
  for (auto& [k, v] : rule_table().guard.sixth_slope)
    if (k == x || k == y) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------- rule evaluation

inline ClosedManifoldForm n_fill_infty(const Slope& x, const Slope& y) {
  Wide o = static_cast<Wide>(y.num) * x.num - static_cast<Wide>(y.den) * x.den;
  return lens_normalize(narrow(o), 1, QStatus::Unknown);
}

namespace detail {

inline std::optional<Bindings> match_slot(const SlotPattern& p, const Slope& s, Bindings b) {
  switch (p.kind) {
    case SlotPattern::Kind::Free:
      b[p.var] = s.num;
      b[p.den_var] = s.den;
      return b;
    case SlotPattern::Kind::Integer:
      if (s.den != 1) return std::nullopt;
      b[p.var] = s.num;
      return b;
    case SlotPattern::Kind::Recip: {
      if (s.is_infinite()) return std::nullopt;
      Int off = eval_expr(p.offset, b);
      Int rest = narrow(static_cast<Wide>(s.num) - static_cast<Wide>(off) * s.den);
      if (abs_int(rest) != 1) return std::nullopt;
      b[p.var] = s.den * rest;
      return b;
    }
  }
  return std::nullopt;
}

}  // namespace detail

struct RuleHit {
  const LensRule* rule = nullptr;
  bool swapped = false;
  Bindings binding;
  Int order = 0;
  ExceptionalType type = ExceptionalType::Unknown;
  ClosedManifoldForm form;
};

inline std::optional<RuleHit> apply_rule(const LensRule& r, const Slope& x, const Slope& y) {
  for (int swapped = 0; swapped < 2; ++swapped) {
    const Slope& first = swapped ? y : x;
    const Slope& second = swapped ? x : y;
    auto b = detail::match_slot(r.slots[0], first, {});
    if (b) b = detail::match_slot(r.slots[1], second, *b);
    if (!b) continue;
    bool excluded = false;
    for (auto& [var, values] : r.exclude)
      excluded |= b->count(var) && std::find(values.begin(), values.end(), b->at(var)) != values.end();
    if (excluded) continue;
    RuleHit h{&r, swapped != 0, *b, abs_int(eval_expr(r.order, *b)), ExceptionalType::Unknown, S3Form{}};
    if (r.q) {
      Int q = eval_expr(*r.q, *b);
      h.form = std::gcd(h.order, q) == 1 ? lens_normalize(h.order, q, QStatus::Exact)
                                         : lens_normalize(h.order, 1, QStatus::Unknown);
    } else {
      h.form = lens_normalize(h.order, 1, QStatus::Unknown);
    }
    h.type = h.order == 1 ? ExceptionalType::SH : ExceptionalType::TH;
    return h;
  }
  return std::nullopt;
}

struct RuleLookup {
  enum class Status { Matched, NoRule, Guarded } status = Status::NoRule;
  GuardStatus guard = GuardStatus::Clear;
  std::optional<RuleHit> hit;  // also filled for guarded instructions when a pattern matches
};

inline std::string_view lookup_name(RuleLookup::Status s) {
  return s == RuleLookup::Status::Matched ? "matched" : s == RuleLookup::Status::Guarded ? "guarded" : "not covered";
}

/// First quoted rule at `slope` matching (x, y) in either order.
inline RuleLookup n_fill_rule(const Slope& slope, const Slope& x, const Slope& y) {
  RuleLookup out;
  out.guard = guard(x, y);
  for (auto& r : rule_table().lens) {
    if (r.slope != slope) continue;
    if ((out.hit = apply_rule(r, x, y))) break;
  }
  if (out.guard != GuardStatus::Clear) out.status = RuleLookup::Status::Guarded;
  else out.status = out.hit ? RuleLookup::Status::Matched : RuleLookup::Status::NoRule;
  return out;
}

namespace detail {

inline bool condition_holds(const NecessaryRule& r, const Slope& slope, const Slope& x, const Slope& y) {
  auto recip = [&](const Slope& s) {
    return !s.is_infinite() && abs_int(narrow(static_cast<Wide>(s.num) - static_cast<Wide>(r.offset) * s.den)) == 1;
  };
  switch (r.condition) {
    case NecessaryRule::Condition::SlopeIn: return std::find(r.slopes.begin(), r.slopes.end(), slope) != r.slopes.end();
    case NecessaryRule::Condition::NoSlotRecip: return !recip(x) && !recip(y);
    case NecessaryRule::Condition::SomeSlotRecip: return recip(x) || recip(y);
    case NecessaryRule::Condition::SomeSlotInt: return x.den == 1 || y.den == 1;
  }
  return true;
}

}  // namespace detail

/// Ids of the quoted necessary conditions rejecting `type` at `slope` on N(x, y).
inline std::vector<std::string> necessary_violations(ExceptionalType type, const Slope& slope, const Slope& x, const Slope& y) {
  std::vector<std::string> out;
  for (auto& r : rule_table().necessary)
    if (r.type == type && (!r.slope || *r.slope == slope) && !detail::condition_holds(r, slope, x, y)) out.push_back(r.id);
  return out;
}

inline bool necessary_ok(ExceptionalType type, const Slope& slope, const Slope& x, const Slope& y) {
  return necessary_violations(type, slope, x, y).empty();
}

// ---------------------------------------------------------------- symbolic rule orders

struct PolySlope {
  Poly num, den;
};

/// Lens order of `r` as a polynomial in n when the pattern matches identically in n.
inline std::optional<Poly> symbolic_order(const LensRule& r, const PolySlope& x, const PolySlope& y) {
  for (int swapped = 0; swapped < 2; ++swapped) {
    const PolySlope& s0 = swapped ? y : x;
    const PolySlope& s1 = swapped ? x : y;
    std::map<char, Poly> b;
    bool ok = true;
    for (int i = 0; i < 2 && ok; ++i) {
      const SlotPattern& p = r.slots[i];
      const PolySlope& s = i == 0 ? s0 : s1;
      switch (p.kind) {
        case SlotPattern::Kind::Free:
          b[p.var] = s.num;
          b[p.den_var] = s.den;
          break;
        case SlotPattern::Kind::Integer:
          if (!(s.den.is_constant() && abs_int(s.den.constant()) == 1)) ok = false;
          else b[p.var] = s.num * Poly(s.den.constant());
          break;
        case SlotPattern::Kind::Recip: {
          Poly rest = s.num - eval_poly(p.offset, b) * s.den;
          if (!(rest.is_constant() && abs_int(rest.constant()) == 1)) ok = false;
          else b[p.var] = s.den * Poly(rest.constant());
          break;
        }
      }
    }
    if (ok) return eval_poly(r.order, b);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- families and tables

class OutOfRange : public Error {
 public:
  using Error::Error;
};

struct FamilyRow {
  Slope slope;
  std::string expr;
  std::string provenance;
};

struct Family {
  std::string id;
  std::string base;  // table owner (itself unless a primed family)
  std::array<std::array<std::string, 2>, 2> slots;
  std::optional<Int> min;
  std::vector<Int> exclude;
  bool fixed = false;
  std::pair<Int, Int> check{0, 0};  // shipped verification range
  std::map<Int, std::string> invalid;
  std::vector<Slope> exceptional;
  std::array<Slope, 3> triple_slopes;
  std::array<ExceptionalType, 3> triple_types{};
  std::vector<FamilyRow> rows;
};

struct Erratum {
  std::string family;
  Slope slope;
  std::string printed, corrected, reason;
};

namespace detail {

inline std::map<std::string, Family> parse_families(const Json& root) {
  std::map<std::string, Family> out;
  for (auto& [id, j] : root.at("families").items()) {
    Family f;
    f.id = id;
    f.base = j.value("base", id);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) f.slots[i][k] = j.at("slots").at(i).at(k).get<std::string>();
    auto& range = j.at("range");
    if (range.contains("min")) f.min = range["min"].get<Int>();
    if (range.contains("exclude")) f.exclude = range["exclude"].get<std::vector<Int>>();
    f.fixed = range.value("fixed", false);
    if (range.contains("check")) f.check = {range["check"].at(0).get<Int>(), range["check"].at(1).get<Int>()};
    if (j.contains("invalid"))
      for (auto& [k, v] : j["invalid"].items()) f.invalid[parse_int(k)] = v.get<std::string>();
    for (auto& s : j.at("exceptional")) f.exceptional.push_back(slope_from_json(s));
    for (int i = 0; i < 3; ++i) {
      f.triple_slopes[i] = slope_from_json(j.at("triple").at("slopes").at(i));
      f.triple_types[i] = parse_type(j.at("triple").at("types").at(i).get<std::string>());
    }
    if (j.contains("rows"))
      for (auto& r : j["rows"]) f.rows.push_back({slope_from_json(r.at("slope")), r.at("form"), r.at("provenance")});
    out[id] = std::move(f);
  }
  return out;
}

inline std::vector<Erratum> parse_errata(const Json& root) {
  std::vector<Erratum> out;
  for (auto& e : root.at("errata"))
    out.push_back({e.at("family"), slope_from_json(e.at("slope")), e.at("printed"), e.at("corrected"), e.at("reason")});
  return out;
}

}  // namespace detail

inline const std::map<std::string, Family>& families() {
  static const auto f = detail::parse_families(data());
  return f;
}

inline const Family& family(const std::string& id) {
  auto it = families().find(id);
  if (it == families().end()) throw Error("unknown family '" + id + "'");
  return it->second;
}

inline const std::vector<Erratum>& errata() {
  static const auto e = detail::parse_errata(data());
  return e;
}

inline const Erratum* find_erratum(const std::string& fam, const Slope& slope) {
  for (auto& e : errata())
    if (e.family == fam && e.slope == slope) return &e;
  return nullptr;
}

inline bool in_range(const Family& f, Int n) {
  if (f.fixed) return true;
  if (f.min && n < *f.min) return false;
  return std::find(f.exclude.begin(), f.exclude.end(), n) == f.exclude.end();
}

inline std::pair<Int, Int> shipped_range(const Family& f) { return f.check; }

inline void require_range(const Family& f, Int n) {
  if (in_range(f, n)) return;
  std::string msg = "n = " + std::to_string(n) + " is outside the range of family " + f.id;
  if (auto it = f.invalid.find(n); it != f.invalid.end()) msg += ": " + it->second;
  throw OutOfRange(msg);
}

inline Instruction family_instruction(const Family& f, Int n) {
  require_range(f, n);
  Bindings b{{'n', n}};
  auto slot = [&](int i) { return make_slope(eval_expr(f.slots[i][0], b), eval_expr(f.slots[i][1], b)); };
  return make_instruction(Link::N, {slot(0), slot(1), std::nullopt});
}

inline PolySlope family_slot_poly(const Family& f, int i) {
  return {eval_poly(f.slots[i][0]), eval_poly(f.slots[i][1])};
}

/// The table row at `slope` (primed families share the table of their base).
inline const FamilyRow& table_row(const Family& f, const Slope& slope) {
  const Family& owner = family(f.base);
  for (auto& r : owner.rows)
    if (r.slope == slope) return r;
  throw Error("family " + f.id + " has no table row at " + to_string(slope));
}

/// Table entry instantiated at n and normalized; throws on malformed entries.
inline ClosedManifoldForm ground_truth(const Family& f, Int n, const Slope& slope) {
  require_range(f, n);
  return normalize_closed(parse_form(table_row(f, slope).expr, {{'n', n}}));
}

inline ClosedManifoldForm ground_truth(const std::string& fam, Int n, const Slope& slope) {
  return ground_truth(family(fam), n, slope);
}

/// The corrected entry where an erratum is recorded, else the printed one.
inline ClosedManifoldForm corrected_truth(const Family& f, Int n, const Slope& slope) {
  require_range(f, n);
  auto* e = find_erratum(f.base, slope);
  return normalize_closed(parse_form(e ? e->corrected : table_row(f, slope).expr, {{'n', n}}));
}

/// Lens order of a table row as a polynomial in n (none for non-lens rows).
inline std::optional<Poly> table_order_poly(const std::string& expr) {
  std::string_view s = detail::trim(expr);
  if (s == "S3") return Poly(1);
  if (s.size() < 4 || s.substr(0, 2) != "L(" || s.back() != ')') return std::nullopt;
  s = s.substr(2, s.size() - 3);
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == ',' && depth == 0) return eval_poly(s.substr(0, i));
  }
  return std::nullopt;
}

}  // namespace chainfill
