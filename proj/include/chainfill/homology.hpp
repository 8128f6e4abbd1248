#pragma once

// |H1| of a surgered chain link from its linking matrix.
// M(i,i) = p_i, M(i,j) = q_i * lk(i,j); |H1| = |det M| (0 when infinite).

#include <map>
#include <string>
#include <vector>

#include "chainfill/closed_fill.hpp"
#include "chainfill/data.hpp"
#include "chainfill/linalg.hpp"
#include "chainfill/sampling.hpp"

namespace chainfill {

struct LinkingData {
  Link link = Link::N;
  IntMatrix lk;
  std::vector<Int> edge_signs;  // lk(i, i+1 mod k)
};

inline LinkingData linking_from_signs(Link link, const std::vector<Int>& signs) {
  const size_t k = static_cast<size_t>(arity(link));
  if (signs.size() != k) throw Error("need one sign per edge of " + std::string(link_name(link)));
  LinkingData d{link, IntMatrix(k, std::vector<Int>(k, 0)), signs};
  for (size_t i = 0; i < k; ++i) {
    if (abs_int(signs[i]) != 1) throw Error("edge signs must be +-1");
    d.lk[i][(i + 1) % k] = d.lk[(i + 1) % k][i] = signs[i];
  }
  return d;
}

/// Calibrated linking data from the shipped data file.
inline LinkingData linking(Link link) {
  auto& entry = data().at("linking").at(std::string(link_name(link)));
  return linking_from_signs(link, entry.at("edge_signs").get<std::vector<Int>>());
}

inline Int h1_order(const LinkingData& d, const Instruction& f) {
  if (f.link != d.link) throw Error("linking data is for " + std::string(link_name(d.link)));
  if (!f.full()) throw Error("h1_order needs a full instruction: " + to_string(f));
  const size_t k = f.slots.size();
  IntMatrix m(k, std::vector<Int>(k, 0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) m[i][j] = i == j ? f.at(i).num : f.at(i).den * d.lk[i][j];
  return abs_int(determinant(m));
}

inline Int h1_order(const Instruction& f) { return h1_order(linking(f.link), f); }

// ---------------------------------------------------------------- calibration

struct CalibrationTarget {
  Instruction instruction;
  Int order;
  std::string source;
};

struct CalibrationResult {
  Link link = Link::N;
  bool ok = false;
  std::vector<std::vector<Int>> survivors;  // every surviving sign assignment
  std::map<Int, int> survivor_classes;      // product of signs -> count
  LinkingData data;                         // representative of the surviving class
  size_t targets = 0;
  std::string message;
};

/// Orders to calibrate against: evaluator outputs, and for N also |tr-us| at infinity.
inline std::vector<CalibrationTarget> calibration_targets(Link link, size_t count, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<CalibrationTarget> out;
  std::vector<Slope> last;
  switch (link) {
    case Link::M5: last = {infinity(), integer_slope(1), integer_slope(0)}; break;
    case Link::M4: last = {infinity(), integer_slope(0), integer_slope(1), integer_slope(2)}; break;
    case Link::M3: last = {infinity(), integer_slope(0), integer_slope(1), integer_slope(2), integer_slope(3)}; break;
    case Link::N: last = {infinity(), integer_slope(0), integer_slope(-1), integer_slope(-2), integer_slope(-3)}; break;
    case Link::F: break;
  }
  for (size_t tries = 0; out.size() < count && tries < 50 * count; ++tries) {
    Instruction f = link == Link::F ? random_full(rng, link, 9) : random_with_last(rng, link, 9, last);
    if (link == Link::N && f.at(2).is_infinite()) {
      const Slope &x = f.at(0), &y = f.at(1);
      Wide tr = static_cast<Wide>(y.num) * x.num - static_cast<Wide>(y.den) * x.den;
      out.push_back({f, narrow(tr < 0 ? -tr : tr), "|tr-us|"});
      continue;
    }
    try {
      auto e = evaluate(f);
      if (std::holds_alternative<UnrecognizedForm>(e.form)) continue;
      out.push_back({f, form_h1_order(e.form), "evaluator"});
    } catch (const Error&) {
    }
  }
  return out;
}

/// Search all 2^k edge-sign assignments; success iff exactly one sign-product class survives.
inline CalibrationResult calibrate(Link link, size_t count = 120, std::uint64_t seed = 1) {
  CalibrationResult r;
  r.link = link;
  auto targets = calibration_targets(link, count, seed);
  r.targets = targets.size();
  const int k = arity(link);
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<Int> signs(k);
    Int product = 1;
    for (int i = 0; i < k; ++i) product *= signs[i] = (mask >> i & 1) ? -1 : 1;
    auto d = linking_from_signs(link, signs);
    bool good = std::all_of(targets.begin(), targets.end(),
                            [&](const CalibrationTarget& t) { return h1_order(d, t.instruction) == t.order; });
    if (!good) continue;
    if (r.survivor_classes[product]++ == 0 && r.survivors.empty()) r.data = d;
    r.survivors.push_back(signs);
  }
  if (targets.size() < count) r.message = "only " + std::to_string(targets.size()) + " calibration targets";
  else if (r.survivor_classes.empty()) r.message = "no sign assignment survives";
  else if (r.survivor_classes.size() > 1) r.message = "both sign classes survive";
  else {
    r.ok = true;
    r.message = "unique sign class, product " + std::to_string(r.survivor_classes.begin()->first);
  }
  return r;
}

}  // namespace chainfill
