#pragma once

// Family verification, distinctness checks, bounded triple search on N, and the
// M4 necessary-condition predicates with their incompatibilities.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chainfill/closed_fill.hpp"
#include "chainfill/homology.hpp"
#include "chainfill/magic_rules.hpp"

namespace chainfill {

// ---------------------------------------------------------------- family verification

enum class RowStatus { Match, OrderOnly, Mismatch, NotCovered };

inline std::string_view row_status_name(RowStatus s) {
  switch (s) {
    case RowStatus::Match: return "match";
    case RowStatus::OrderOnly: return "order-match-only";
    case RowStatus::Mismatch: return "mismatch";
    default: return "not-covered";
  }
}

struct RowReport {
  Int n = 0;
  Slope slope;
  RowStatus status = RowStatus::NotCovered;
  std::string expected;  // table entry instantiated at n (or the raw entry when malformed)
  std::string computed;  // evaluator output, empty when no route exists
  Int h1 = 0;            // linking-matrix oracle
  std::optional<Int> expected_h1;
  std::optional<Int> rule_order;
  std::string route;
  std::string note;
  std::optional<RowStatus> corrected;  // status against the recorded erratum, if any
};

struct CheckReport {
  std::string name;
  bool ok = true;
  std::string detail;
  std::optional<bool> corrected_ok;  // outcome against the recorded errata, when one applies
};

struct FamilyReport {
  std::string family;
  Int lo = 0, hi = 0;
  std::vector<RowReport> rows;
  std::vector<CheckReport> checks;
  std::vector<std::string> errors;  // parameters outside the family range

  size_t count(RowStatus s) const {
    return static_cast<size_t>(std::count_if(rows.begin(), rows.end(), [&](const RowReport& r) { return r.status == s; }));
  }
  bool checks_ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.ok; });
  }
  /// Every row an exact match and every side check passed.
  bool all_match() const { return !rows.empty() && count(RowStatus::Match) == rows.size() && checks_ok(); }
  bool has_mismatch() const { return count(RowStatus::Mismatch) > 0 || !checks_ok(); }
};

namespace detail {

inline RowStatus compare_row(const std::optional<ClosedManifoldForm>& computed, const ClosedManifoldForm& expected, Int h1,
                             std::string& note) {
  Int eh1 = form_h1_order(expected);
  if (eh1 != h1) {
    note = "H1 order " + std::to_string(h1) + " but entry has " + std::to_string(eh1);
    return RowStatus::Mismatch;
  }
  if (!computed) {
    note = "no evaluator route; order checked by the linking-matrix oracle only";
    return RowStatus::OrderOnly;
  }
  switch (compare_forms(*computed, expected)) {
    case Match::Equal: return RowStatus::Match;
    case Match::OrderOnly:
      note = "lens q unknown on one side";
      return RowStatus::OrderOnly;
    default:
      note = "forms differ";
      return RowStatus::Mismatch;
  }
}

/// Slopes compared for a family: the whole table, or the triple for primed families.
inline std::vector<Slope> verified_slopes(const Family& f) {
  if (f.base != f.id) return {f.triple_slopes.begin(), f.triple_slopes.end()};
  return f.exceptional;
}

}  // namespace detail

inline RowReport verify_row(const Family& f, Int n, const Slope& slope) {
  RowReport r;
  r.n = n;
  r.slope = slope;
  Instruction knot = family_instruction(f, n);
  const Slope x = knot.at(0), y = knot.at(1);
  Instruction full = make_full(Link::N, {x, y, slope});
  r.h1 = h1_order(full);

  std::optional<ClosedManifoldForm> computed;
  try {
    auto e = evaluate(full);
    computed = e.form;
    r.computed = to_string(e.form);
    r.route = e.route;
  } catch (const NotEvaluable&) {
  }
  auto lookup = n_fill_rule(slope, x, y);
  if (lookup.hit) r.rule_order = lookup.hit->order;

  try {
    auto expected = ground_truth(f, n, slope);
    r.expected = to_string(expected);
    r.expected_h1 = form_h1_order(expected);
    r.status = detail::compare_row(computed, expected, r.h1, r.note);
    if (r.rule_order && *r.rule_order != *r.expected_h1) {
      r.status = RowStatus::Mismatch;
      r.note += (r.note.empty() ? "" : "; ") + std::string("rule order ") + std::to_string(*r.rule_order);
    }
  } catch (const OutOfRange&) {
    throw;
  } catch (const Error& e) {
    r.expected = table_row(f, slope).expr;
    r.status = RowStatus::Mismatch;
    r.note = std::string("table entry malformed: ") + e.what();
  }

  if (find_erratum(f.base, slope)) {
    std::string note;
    try {
      r.corrected = detail::compare_row(computed, corrected_truth(f, n, slope), r.h1, note);
    } catch (const Error&) {
      r.corrected = RowStatus::Mismatch;
    }
  }
  return r;
}

inline ExceptionalType row_type(const Family& f, Int n, const Slope& slope) {
  Instruction knot = family_instruction(f, n);
  try {
    return classify(evaluate(make_full(Link::N, {knot.at(0), knot.at(1), slope})).form).type;
  } catch (const NotEvaluable&) {
    return classify(ground_truth(f, n, slope)).type;
  }
}

inline FamilyReport verify_family(const std::string& id, Int lo, Int hi) {
  const Family& f = family(id);
  FamilyReport rep;
  rep.family = id;
  rep.lo = lo;
  rep.hi = hi;
  std::vector<Int> ns;
  if (f.fixed) ns = {0};
  else
    for (Int n = lo; n <= hi; ++n) ns.push_back(n);

  CheckReport types{"triple types", true, "", {}}, dist{"distances", true, "", {}}, sym{"rule/table coherence", true, "", {}};
  for (Int n : ns) {
    if (!in_range(f, n)) {
      try {
        require_range(f, n);
      } catch (const OutOfRange& e) {
        rep.errors.push_back(e.what());
      }
      continue;
    }
    for (auto& s : detail::verified_slopes(f)) rep.rows.push_back(verify_row(f, n, s));
    for (int i = 0; i < 3; ++i) {
      auto t = row_type(f, n, f.triple_slopes[i]);
      if (t != f.triple_types[i]) {
        types.ok = false;
        types.detail += "n=" + std::to_string(n) + " slope " + to_string(f.triple_slopes[i]) + " is " +
                        std::string(type_name(t)) + "; ";
      }
    }
  }

  // distance facts of the triple
  auto d = [](const Slope& a, const Slope& b) { return distance(a, b); };
  const auto& ts = f.triple_slopes;
  if (f.base == "A" || f.base == "isolated") {
    dist.ok = d(ts[0], ts[1]) == 1 && d(ts[0], ts[2]) == 1;
    dist.detail = "delta(alpha,beta)=" + std::to_string(d(ts[0], ts[1])) + " delta(alpha,gamma)=" + std::to_string(d(ts[0], ts[2]));
  } else {
    Int d30 = d(integer_slope(-3), integer_slope(0)), d31 = d(integer_slope(-3), integer_slope(-1));
    dist.ok = d30 == 3 && d31 == 2 && d(ts[1], ts[2]) == (f.base == f.id ? 3 : 2);
    dist.detail = "delta(-3,0)=" + std::to_string(d30) + " delta(-3,-1)=" + std::to_string(d31) +
                  " delta(beta,gamma)=" + std::to_string(d(ts[1], ts[2]));
  }

  // symbolic coherence of quoted lens rules with lens rows
  if (!f.fixed && f.base == f.id) {
    for (auto& row : f.rows) {
      auto table = table_order_poly(row.expr);
      if (!table) continue;
      for (auto& rule : rule_table().lens) {
        if (rule.slope != row.slope) continue;
        auto p = symbolic_order(rule, family_slot_poly(f, 0), family_slot_poly(f, 1));
        if (!p) continue;
        bool ok = *p == *table || *p == -*table;
        sym.detail += to_string(row.slope) + ": " + rule.id + " gives " + p->str() + ", entry " + table->str() +
                      (ok ? " (ok); " : " (differs); ");
        sym.ok &= ok;
        bool fixed = ok;
        if (auto* e = find_erratum(f.id, row.slope))
          if (auto c = table_order_poly(e->corrected)) {
            fixed = *p == *c || *p == -*c;
            sym.detail += "erratum " + c->str() + (fixed ? " (ok); " : " (differs); ");
          }
        sym.corrected_ok = sym.corrected_ok.value_or(true) && fixed;
      }
    }
  }
  rep.checks = {types, dist, sym};
  return rep;
}

// ---------------------------------------------------------------- distinctness

struct DistinctnessReport {
  std::vector<CheckReport> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.ok; });
  }
};

inline int toroidal_count(const Family& f, Int n) {
  int count = 0;
  for (auto& s : f.exceptional) count += row_type(f, n, s) == ExceptionalType::T;
  return count;
}

/// x^2 - y^2 is never 2 mod 4: the parity certificate, replayed over all residues.
inline bool parity_certificate() {
  for (Int x = 0; x < 4; ++x)
    for (Int y = 0; y < 4; ++y)
      if (floor_mod(x * x - y * y, 4) == 2) return false;
  return true;
}

inline DistinctnessReport distinctness(Int a_lo, Int a_hi, Int bc_hi, Int disjoint_bound = 1000) {
  DistinctnessReport rep;
  const Family &A = family("A"), &iso = family("isolated"), &B = family("B"), &C = family("C");

  CheckReport tor{"toroidal counts", true, "", {}};
  std::set<int> counts;
  for (Int n = a_lo; n <= a_hi; ++n)
    if (in_range(A, n)) counts.insert(toroidal_count(A, n));
  int ci = toroidal_count(iso, 0);
  tor.ok = counts == std::set<int>{3} && ci == 2;
  tor.detail = "A_n: " + (counts.size() == 1 ? std::to_string(*counts.begin()) : std::string("varies")) +
               ", isolated: " + std::to_string(ci);
  rep.checks.push_back(tor);

  // 4n^2+3 = 4k^2+8k-1  <=>  (k+1)^2 - n^2 = 2, and likewise for 4k^2-8k-1 with k-1
  CheckReport sym{"symbolic parity certificate", true, "", {}};
  Poly k = Poly::variable();
  bool shift_plus = eval_poly("4k^2+8k-1", 'k') - Poly(4) * (k + Poly(1)) * (k + Poly(1)) == Poly(-5);
  bool shift_minus = eval_poly("4k^2-8k-1", 'k') - Poly(4) * (k - Poly(1)) * (k - Poly(1)) == Poly(-5);
  sym.ok = shift_plus && shift_minus && parity_certificate();
  sym.detail = "4n^2+3 = 4(k+-1)^2-5 reduces to (k+-1)^2-n^2 = 2; squares mod 4 never differ by 2";
  rep.checks.push_back(sym);

  CheckReport brute{"4n^2+3 vs 4k^2+8k-1 disjoint", true, "", {}};
  std::set<Int> bvals;
  for (Int n = -disjoint_bound; n <= disjoint_bound; ++n) bvals.insert(4 * n * n + 3);
  for (Int kk = -disjoint_bound; kk <= disjoint_bound && brute.ok; ++kk)
    for (Int v : {4 * kk * kk + 8 * kk - 1, 4 * kk * kk - 8 * kk - 1})
      if (bvals.count(v)) {
        brute.ok = false;
        brute.detail = "common value " + std::to_string(v);
      }
  if (brute.ok) brute.detail = "|n|,|k| <= " + std::to_string(disjoint_bound);
  rep.checks.push_back(brute);

  CheckReport pair{"B/C lens orders at -3 disjoint", true, "", {}};
  std::map<Int, Int> border;
  for (Int n = 3; n <= bc_hi; ++n) {
    auto ins = family_instruction(B, n);
    border[h1_order(make_full(Link::N, {ins.at(0), ins.at(1), integer_slope(-3)}))] = n;
  }
  for (Int n = 4; n <= bc_hi; ++n) {
    auto ins = family_instruction(C, n);
    Int o = h1_order(make_full(Link::N, {ins.at(0), ins.at(1), integer_slope(-3)}));
    if (auto it = border.find(o); it != border.end()) {
      pair.ok = false;
      pair.detail += "B_" + std::to_string(it->second) + " and C_" + std::to_string(n) + " share " + std::to_string(o) + "; ";
    }
  }
  if (pair.ok) pair.detail = "B_3..B_" + std::to_string(bc_hi) + ", C_4..C_" + std::to_string(bc_hi);
  rep.checks.push_back(pair);
  return rep;
}

// ---------------------------------------------------------------- exterior profiles

struct FillingInfo {
  Slope slope;
  Int h1 = 0;
  ExceptionalType type = ExceptionalType::Unknown;
  std::string form;
};

/// The five standard slopes plus any guarded sixth slope.
inline std::vector<Slope> profile_slopes(const Slope& x, const Slope& y) {
  std::vector<Slope> slopes{infinity(), integer_slope(0), integer_slope(-1), integer_slope(-2), integer_slope(-3)};
  for (auto& s : sixth_slopes(x, y))
    if (std::find(slopes.begin(), slopes.end(), s) == slopes.end()) slopes.push_back(s);
  return slopes;
}

/// Exceptional fillings of N(x, y) over profile_slopes.
inline std::vector<FillingInfo> exterior_profile(const Slope& x, const Slope& y) {
  std::vector<FillingInfo> out;
  for (auto& s : profile_slopes(x, y)) {
    FillingInfo fi{s, h1_order(make_full(Link::N, {x, y, s})), ExceptionalType::Unknown, ""};
    try {
      auto e = evaluate(make_full(Link::N, {x, y, s}));
      fi.type = classify(e.form).type;
      fi.form = to_string(e.form);
    } catch (const NotEvaluable&) {
    }
    out.push_back(fi);
  }
  return out;
}

inline std::vector<Int> order_multiset(const std::vector<FillingInfo>& p) {
  std::vector<Int> v;
  for (auto& f : p) v.push_back(f.h1);
  std::sort(v.begin(), v.end());
  return v;
}

// ---------------------------------------------------------------- identification

struct Identification {
  std::string label;   // e.g. "A_3", "isolated", "unidentified"
  std::string method;  // "symmetry" | "invariant" | ""
};

struct FamilyIndex {
  std::map<std::pair<Slope, Slope>, std::pair<std::string, Int>> by_slots;
  std::map<std::vector<Int>, std::pair<std::string, Int>> by_orders;
};

inline std::string member_label(const std::string& fam, Int n) {
  return family(fam).fixed ? fam : fam + "_" + std::to_string(n);
}

/// Members of the listed families for |n| <= bound, first listed family and lowest |n| winning ties.
inline FamilyIndex build_index(const std::vector<std::string>& fams, Int bound) {
  FamilyIndex idx;
  for (Int a = 0; a <= bound; ++a)
    for (auto& id : fams) {
      const Family& f = family(id);
      std::vector<Int> ns = a == 0 ? std::vector<Int>{0} : std::vector<Int>{a, -a};
      for (Int n : ns) {
        if (!in_range(f, n) || (f.fixed && a != 0)) continue;
        auto ins = family_instruction(f, n);
        Slope x = ins.at(0), y = ins.at(1);
        auto key = value_less(y, x) ? std::pair{y, x} : std::pair{x, y};
        idx.by_slots.emplace(key, std::pair{id, n});
        std::vector<Int> orders;
        for (auto& s : profile_slopes(x, y)) orders.push_back(h1_order(make_full(Link::N, {x, y, s})));
        std::sort(orders.begin(), orders.end());
        idx.by_orders.emplace(orders, std::pair{id, n});
      }
    }
  return idx;
}

inline Identification identify(const FamilyIndex& idx, const Slope& x, const Slope& y, const std::vector<Int>& orders) {
  auto key = value_less(y, x) ? std::pair{y, x} : std::pair{x, y};
  if (auto it = idx.by_slots.find(key); it != idx.by_slots.end())
    return {member_label(it->second.first, it->second.second), "symmetry"};
  if (auto it = idx.by_orders.find(orders); it != idx.by_orders.end())
    return {member_label(it->second.first, it->second.second), "invariant"};
  return {"unidentified", ""};
}

// ---------------------------------------------------------------- triple search

enum class Pattern { LensLens, LensToroidal, LensSeifert };

inline std::string_view pattern_name(Pattern p) {
  switch (p) {
    case Pattern::LensLens: return "lens-lens";
    case Pattern::LensToroidal: return "lens-toroidal";
    default: return "lens-seifert";
  }
}

inline Pattern parse_pattern(std::string_view s) {
  for (auto p : {Pattern::LensLens, Pattern::LensToroidal, Pattern::LensSeifert})
    if (pattern_name(p) == s) return p;
  throw Error("unknown pattern '" + std::string(s) + "'");
}

inline ExceptionalType third_type(Pattern p) {
  return p == Pattern::LensLens ? ExceptionalType::TH : p == Pattern::LensToroidal ? ExceptionalType::T : ExceptionalType::Z;
}

inline std::vector<std::string> pattern_families(Pattern p) {
  switch (p) {
    case Pattern::LensLens: return {"A", "isolated"};
    case Pattern::LensToroidal: return {"B", "C"};
    default: return {"Bprime", "Cprime"};
  }
}

/// Distance between the second and third slopes in the families of each pattern.
inline std::optional<Int> default_distance(Pattern p) {
  if (p == Pattern::LensToroidal) return 3;
  if (p == Pattern::LensSeifert) return 2;
  return std::nullopt;
}

struct ExceptionalTriple {
  Instruction instruction;
  std::array<Slope, 3> slopes;
  std::array<ExceptionalType, 3> types{};
  std::array<Int, 3> distances{};  // (alpha,beta), (alpha,gamma), (beta,gamma)
  Identification id;
  bool verified = true;  // evaluator and oracle re-verification
};

struct BucketEntry {
  Instruction instruction;
  std::string reason;
  Identification id;
};

struct SearchOptions {
  Int height = 20;
  std::optional<Int> distance;  // required delta(beta, gamma)
  Int identify_bound = 400;
};

inline constexpr Int kMaxSearchHeight = 60;

struct SearchReport {
  Pattern pattern = Pattern::LensLens;
  SearchOptions options;
  std::vector<ExceptionalTriple> triples;
  std::vector<BucketEntry> not_covered;
  std::vector<std::string> conflicts;  // rule/evaluator/oracle disagreements
  size_t scanned = 0, skipped_flagged = 0, guarded = 0;

  size_t unidentified() const {
    return static_cast<size_t>(std::count_if(triples.begin(), triples.end(),
                                             [](const ExceptionalTriple& t) { return t.id.label == "unidentified"; }));
  }
  size_t unidentified_in_bucket() const {
    return static_cast<size_t>(std::count_if(not_covered.begin(), not_covered.end(),
                                             [](const BucketEntry& b) { return b.id.label == "unidentified"; }));
  }
};

inline std::vector<Slope> slopes_up_to(Int height) {
  std::vector<Slope> out{infinity()};
  for (Int q = 1; q <= height; ++q)
    for (Int p = -height; p <= height; ++p)
      if (std::gcd(p, q) == 1) out.push_back(make_slope(p, q));
  std::sort(out.begin(), out.end(), value_less);
  return out;
}

namespace detail {

struct SlopeTypes {
  std::vector<Slope> slopes;
  std::vector<std::optional<ExceptionalType>> types;
  std::vector<Int> orders;
};

/// All (alpha, beta, gamma) assignments matching the pattern over known types.
inline std::vector<std::array<size_t, 3>> assignments(const SlopeTypes& st, Pattern p, const std::optional<Int>& dist,
                                                      bool allow_unknown) {
  std::vector<std::array<size_t, 3>> out;
  // an untyped slope may stand for S3 only at order 1 and for a lens space only at order > 1
  auto is = [&](size_t i, ExceptionalType t) {
    if (st.types[i]) return *st.types[i] == t;
    if (!allow_unknown) return false;
    if (t == ExceptionalType::SH) return st.orders[i] == 1;
    if (t == ExceptionalType::TH) return st.orders[i] > 1;
    return true;
  };
  const size_t k = st.slopes.size();
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b)
      for (size_t c = 0; c < k; ++c) {
        if (a == b || a == c || b == c) continue;
        if (p == Pattern::LensLens && c < b) continue;
        if (!is(a, ExceptionalType::SH) || !is(b, ExceptionalType::TH) || !is(c, third_type(p))) continue;
        if (dist && distance(st.slopes[b], st.slopes[c]) != *dist) continue;
        out.push_back({a, b, c});
      }
  return out;
}

inline ExceptionalTriple make_triple(const Slope& x, const Slope& y, const SlopeTypes& st, const std::array<size_t, 3>& idx) {
  ExceptionalTriple t;
  t.instruction = make_instruction(Link::N, {x, y, std::nullopt});
  for (int i = 0; i < 3; ++i) {
    t.slopes[i] = st.slopes[idx[i]];
    t.types[i] = *st.types[idx[i]];
  }
  t.distances = {distance(t.slopes[0], t.slopes[1]), distance(t.slopes[0], t.slopes[2]), distance(t.slopes[1], t.slopes[2])};
  return t;
}

}  // namespace detail

/// Height-bounded search for exceptional triples on N(x, y) with max(|r|,|s|,|t|,|u|) <= height.
inline SearchReport search_triples(Pattern pattern, const SearchOptions& opt) {
  if (opt.height < 1 || opt.height > kMaxSearchHeight)
    throw Error("height must lie in 1.." + std::to_string(kMaxSearchHeight));
  SearchReport rep;
  rep.pattern = pattern;
  rep.options = opt;
  const FamilyIndex idx = build_index(pattern_families(pattern), opt.identify_bound);
  const auto slopes = slopes_up_to(opt.height);
  const std::vector<Slope> five{infinity(), integer_slope(0), integer_slope(-1), integer_slope(-2), integer_slope(-3)};

  for (size_t i = 0; i < slopes.size(); ++i)
    for (size_t j = i; j < slopes.size(); ++j) {
      const Slope &x = slopes[i], &y = slopes[j];
      ++rep.scanned;
      GuardStatus g = guard(x, y);
      if (g == GuardStatus::NonHyperbolicFlag || g == GuardStatus::QuotedNonHyperbolic) {
        ++rep.skipped_flagged;
        continue;
      }
      if (g != GuardStatus::Clear) {
        // manual review: evaluator types, unknown where no route exists
        ++rep.guarded;
        auto prof = exterior_profile(x, y);
        detail::SlopeTypes st;
        for (auto& f : prof) {
          st.slopes.push_back(f.slope);
          st.types.push_back(f.type == ExceptionalType::Unknown ? std::nullopt : std::optional(f.type));
          st.orders.push_back(f.h1);
        }
        if (detail::assignments(st, pattern, opt.distance, true).empty()) continue;
        rep.not_covered.push_back({make_instruction(Link::N, {x, y, std::nullopt}),
                                   "guard: " + std::string(guard_name(g)), identify(idx, x, y, order_multiset(prof))});
        continue;
      }

      // rule route: lens types at the five slopes
      detail::SlopeTypes st;
      bool has_sh = false, has_th = false;
      for (auto& s : five) {
        auto look = n_fill_rule(s, x, y);
        st.slopes.push_back(s);
        st.types.push_back(look.hit ? std::optional(look.hit->type) : std::nullopt);
        st.orders.push_back(look.hit ? look.hit->order : -1);
        has_sh |= look.hit && look.hit->type == ExceptionalType::SH;
        has_th |= look.hit && look.hit->type == ExceptionalType::TH;
      }
      if (!has_sh || !has_th) continue;

      // remaining slopes: type from the evaluator, checked against the quoted necessary conditions
      bool undetermined = false;
      for (size_t k = 0; k < five.size(); ++k) {
        Instruction full = make_full(Link::N, {x, y, five[k]});
        Int h = h1_order(full);
        if (st.types[k]) {
          if (h != st.orders[k])
            rep.conflicts.push_back(to_string(full) + ": rule order " + std::to_string(st.orders[k]) + " vs oracle " + std::to_string(h));
          continue;
        }
        st.orders[k] = h;
        try {
          auto e = evaluate(full);
          auto t = classify(e.form).type;
          if (t == ExceptionalType::SH || t == ExceptionalType::TH)
            rep.conflicts.push_back(to_string(full) + ": evaluator finds a lens space not covered by the lens rules");
          if (t == ExceptionalType::Unknown) undetermined = true;
          else {
            st.types[k] = t;
            for (auto& v : necessary_violations(t, five[k], x, y))
              rep.conflicts.push_back(to_string(full) + ": type " + std::string(type_name(t)) + " violates " + v);
          }
        } catch (const NotEvaluable&) {
          undetermined = true;
        }
      }
      auto found = detail::assignments(st, pattern, opt.distance, false);
      Identification id;
      if (!found.empty() || (undetermined && !detail::assignments(st, pattern, opt.distance, true).empty())) {
        std::vector<Int> orders = st.orders;
        std::sort(orders.begin(), orders.end());
        id = identify(idx, x, y, orders);
      }
      if (found.empty()) {
        if (undetermined && !detail::assignments(st, pattern, opt.distance, true).empty())
          rep.not_covered.push_back({make_instruction(Link::N, {x, y, std::nullopt}), "type undetermined at a candidate slope", id});
        continue;
      }
      for (auto& a : found) {
        auto t = detail::make_triple(x, y, st, a);
        t.id = id;
        // soundness: the lens slopes re-verify under the evaluator
        for (int q = 0; q < 3; ++q) {
          if (t.types[q] != ExceptionalType::SH && t.types[q] != ExceptionalType::TH) continue;
          try {
            auto e = evaluate(make_full(Link::N, {x, y, t.slopes[q]}));
            if (classify(e.form).type != t.types[q]) t.verified = false;
          } catch (const NotEvaluable&) {
            t.verified = false;
          }
        }
        if (!t.verified) rep.conflicts.push_back(to_string(t.instruction) + ": triple fails evaluator re-verification");
        rep.triples.push_back(t);
      }
    }
  return rep;
}

// ---------------------------------------------------------------- equivalence probe

enum class Equivalence { BySymmetry, InvariantEqual, Distinguished };

inline std::string_view equivalence_name(Equivalence e) {
  return e == Equivalence::BySymmetry ? "equivalent-by-symmetry"
         : e == Equivalence::InvariantEqual ? "invariant-equal"
                                            : "distinguished";
}

struct ProbeResult {
  Equivalence verdict = Equivalence::InvariantEqual;
  std::string reason;
};

namespace detail {

/// Toroidal count from the evaluator, falling back to the table of a matching family member.
inline std::optional<int> toroidal_count_of(const Slope& x, const Slope& y, const std::vector<FillingInfo>& prof) {
  int count = 0;
  bool unknown = false;
  for (auto& f : prof) {
    if (f.type == ExceptionalType::Unknown) unknown = true;
    count += f.type == ExceptionalType::T;
  }
  if (!unknown) return count;
  auto idx = build_index({"A", "isolated", "B", "C"}, 60);
  auto key = value_less(y, x) ? std::pair{y, x} : std::pair{x, y};
  if (auto it = idx.by_slots.find(key); it != idx.by_slots.end())
    return toroidal_count(family(it->second.first), it->second.second);
  return std::nullopt;
}

}  // namespace detail

inline ProbeResult equivalence_probe(const ExceptionalTriple& t1, const ExceptionalTriple& t2) {
  const Slope &x1 = t1.instruction.at(0), &y1 = t1.instruction.at(1);
  const Slope &x2 = t2.instruction.at(0), &y2 = t2.instruction.at(1);
  bool same_exterior = (x1 == x2 && y1 == y2) || (x1 == y2 && y1 == x2);
  if (same_exterior && t1.slopes == t2.slopes) return {Equivalence::BySymmetry, "slot permutation"};
  auto p1 = exterior_profile(x1, y1), p2 = exterior_profile(x2, y2);
  auto c1 = detail::toroidal_count_of(x1, y1, p1), c2 = detail::toroidal_count_of(x2, y2, p2);
  if (c1 && c2 && *c1 != *c2)
    return {Equivalence::Distinguished, "toroidal counts " + std::to_string(*c1) + " vs " + std::to_string(*c2)};
  auto o1 = order_multiset(p1), o2 = order_multiset(p2);
  if (o1 != o2) {
    std::string a, b;
    for (auto v : o1) a += (a.empty() ? "" : ",") + std::to_string(v);
    for (auto v : o2) b += (b.empty() ? "" : ",") + std::to_string(v);
    return {Equivalence::Distinguished, "H1 orders {" + a + "} vs {" + b + "}"};
  }
  return {Equivalence::InvariantEqual, "exceptional H1 orders and toroidal counts agree"};
}

inline ExceptionalTriple family_triple(const std::string& fam, Int n) {
  const Family& f = family(fam);
  ExceptionalTriple t;
  t.instruction = family_instruction(f, n);
  t.slopes = f.triple_slopes;
  t.types = f.triple_types;
  t.distances = {distance(t.slopes[0], t.slopes[1]), distance(t.slopes[0], t.slopes[2]), distance(t.slopes[1], t.slopes[2])};
  t.id = {member_label(fam, n), "symmetry"};
  return t;
}

// ---------------------------------------------------------------- M4 necessary conditions

/// Conditions on M4(a/b, c/d, e/f) from 2, 1 and infinity being S^H or T^H slopes.
/// Each predicate holds up to simultaneous sign changes of a numerator/denominator pair.
namespace m4cond {

inline bool c2_0(const Slope& ab) { return abs_int(ab.num - ab.den) == 1; }
inline bool c2_prime(const Slope& cd) { return abs_int(cd.num) == 1; }

/// b(f-e) = 1+f with (a,b) signed so that a-b = 1 and either sign of (e,f).
inline bool c2_dprime(const Slope& ab, const Slope& ef) {
  if (!c2_0(ab)) return false;
  Int b = ab.num - ab.den == 1 ? ab.den : -ab.den;
  for (Int s : {1, -1}) {
    Int e = s * ef.num, f = s * ef.den;
    if (b * (f - e) == 1 + f) return true;
  }
  return false;
}

inline bool c2_1(const Slope& ab, const Slope& cd) { return c2_0(ab) && c2_prime(cd); }
inline bool c2_2(const Slope& ab, const Slope& ef) { return c2_dprime(ab, ef); }
inline bool c1_1(const Slope& ab) { return abs_int(ab.num - 2 * ab.den) == 1; }
inline bool c1_2(const Slope& cd) { return abs_int(cd.num - cd.den) == 1; }
inline bool c1_3(const Slope& ef) { return abs_int(ef.num - 2 * ef.den) == 1; }
inline bool cinf_1(const Slope& ab) { return abs_int(ab.num) == 1; }
inline bool cinf_2(const Slope& cd) { return abs_int(cd.den) == 1; }
inline bool cinf_3(const Slope& ef) { return abs_int(ef.num) == 1; }

/// A slot value excluded for hyperbolic, non-factoring M4 instructions.
inline bool excluded(const Slope& s) { return flagged_slope(Link::M4, s) || factoring_slope(Link::M4, s); }

/// One of C2^1/C2^2, one of C1^1..3 and one of Cinf^1..3 holds.
inline bool all_stages(const Slope& ab, const Slope& cd, const Slope& ef) {
  return (c2_1(ab, cd) || c2_2(ab, ef)) && (c1_1(ab) || c1_2(cd) || c1_3(ef)) &&
         (cinf_1(ab) || cinf_2(cd) || cinf_3(ef));
}

struct Incompatibility {
  std::string name;
  bool replayed = false;  // every solution in the box has an excluded slot
  size_t solutions = 0;   // solutions found in the box
};

/// Replays each listed incompatibility by exhausting slot values with |num|,|den| <= bound.
inline std::vector<Incompatibility> replay_incompatibilities(Int bound = 40) {
  std::vector<Slope> slopes = slopes_up_to(bound);
  std::vector<Incompatibility> out;
  auto one = [&](const std::string& name, auto pred, auto bad) {
    Incompatibility inc{name, true, 0};
    for (auto& s : slopes)
      if (pred(s)) {
        ++inc.solutions;
        if (!bad(s)) inc.replayed = false;
      }
    out.push_back(inc);
  };
  one("C2^0 + C1^1", [](const Slope& s) { return c2_0(s) && c1_1(s); }, excluded);
  one("C2^0 + Cinf^1", [](const Slope& s) { return c2_0(s) && cinf_1(s); }, excluded);
  one("C2' + C1^2", [](const Slope& s) { return c2_prime(s) && c1_2(s); }, excluded);
  one("C2' + Cinf^2", [](const Slope& s) { return c2_prime(s) && cinf_2(s); }, excluded);
  one("C1^2 + Cinf^2", [](const Slope& s) { return c1_2(s) && cinf_2(s); }, excluded);
  one("C1^3 + Cinf^3", [](const Slope& s) { return c1_3(s) && cinf_3(s); }, excluded);
  // two-slot incompatibilities: C2^2 with C1^3 or Cinf^3 forces a/b or e/f into the excluded set
  for (auto [name, pred] : {std::pair{std::string("C2^2 + C1^3"), +[](const Slope& e) { return c1_3(e); }},
                            std::pair{std::string("C2^2 + Cinf^3"), +[](const Slope& e) { return cinf_3(e); }}}) {
    Incompatibility inc{name, true, 0};
    for (auto& ab : slopes)
      for (auto& ef : slopes)
        if (c2_2(ab, ef) && pred(ef)) {
          ++inc.solutions;
          if (!excluded(ab) && !excluded(ef)) inc.replayed = false;
        }
    out.push_back(inc);
  }
  return out;
}

/// Non-excluded M4 instructions in the box satisfying all three stages (expected: none).
inline std::vector<std::array<Slope, 3>> stage_survivors(Int bound) {
  std::vector<Slope> ok;
  for (auto& s : slopes_up_to(bound))
    if (!excluded(s)) ok.push_back(s);
  std::vector<std::array<Slope, 3>> out;
  for (auto& ab : ok) {
    if (!c2_0(ab)) continue;
    for (auto& cd : ok)
      for (auto& ef : ok)
        if (all_stages(ab, cd, ef)) out.push_back({ab, cd, ef});
  }
  return out;
}

}  // namespace m4cond

}  // namespace chainfill
