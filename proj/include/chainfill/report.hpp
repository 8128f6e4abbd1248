#pragma once

// JSON encodings of pipeline reports, shared by the CLI and the tests.

#include "chainfill/data.hpp"
#include "chainfill/diophantine.hpp"
#include "chainfill/enumerate.hpp"
#include "chainfill/homology.hpp"

namespace chainfill {

inline Json report_header() {
  return {{"schema_version", kSchemaVersion}, {"data_version", data().value("data_version", std::string())}};
}

inline Json to_json(const Evaluation& e) {
  return {{"form", to_json(e.form)}, {"raw", to_string(e.raw)}, {"route", e.route}};
}

inline Json pairs_json(const std::set<IntPair>& s) {
  Json out = Json::array();
  for (auto& [a, b] : s) out.push_back({a, b});
  return out;
}

inline Json to_json(const SolutionSet& s) {
  return {{"solutions", pairs_json(s.solutions)},
          {"certificate", {{"steps", s.certificate.steps}, {"bound", s.certificate.bound}}}};
}

inline Json to_json(const LinearFamily& f) {
  return {{"equation", {f.a, f.b, f.c}},
          {"base", {f.t0, f.u0}},
          {"step", {f.dt, f.du}},
          {"family", "t = " + std::to_string(f.t0) + " + " + std::to_string(f.dt) + "k, u = " + std::to_string(f.u0) +
                         " + " + std::to_string(f.du) + "k"}};
}

inline Json to_json(const CheckReport& c) {
  Json j{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}};
  if (c.corrected_ok) j["corrected_ok"] = *c.corrected_ok;
  return j;
}

inline Json to_json(const RowReport& r) {
  Json j{{"n", r.n},
         {"slope", to_json(r.slope)},
         {"status", std::string(row_status_name(r.status))},
         {"expected", r.expected},
         {"computed", r.computed},
         {"h1", r.h1},
         {"route", r.route}};
  if (r.expected_h1) j["expected_h1"] = *r.expected_h1;
  if (r.rule_order) j["rule_order"] = *r.rule_order;
  if (!r.note.empty()) j["note"] = r.note;
  if (r.corrected) j["corrected_status"] = std::string(row_status_name(*r.corrected));
  return j;
}

inline Json to_json(const FamilyReport& rep) {
  Json rows = Json::array(), checks = Json::array();
  for (auto& r : rep.rows) rows.push_back(to_json(r));
  for (auto& c : rep.checks) checks.push_back(to_json(c));
  Json summary;
  for (auto s : {RowStatus::Match, RowStatus::OrderOnly, RowStatus::Mismatch, RowStatus::NotCovered})
    summary[std::string(row_status_name(s))] = rep.count(s);
  return {{"family", rep.family}, {"range", {rep.lo, rep.hi}}, {"summary", summary},
          {"rows", rows},         {"checks", checks},           {"errors", rep.errors}};
}

inline Json to_json(const Identification& id) { return {{"label", id.label}, {"method", id.method}}; }

inline Json to_json(const ExceptionalTriple& t) {
  Json types = Json::array();
  for (auto ty : t.types) types.push_back(std::string(type_name(ty)));
  return {{"instruction", to_json(t.instruction)},
          {"slopes", {to_json(t.slopes[0]), to_json(t.slopes[1]), to_json(t.slopes[2])}},
          {"types", types},
          {"distances", t.distances},
          {"id", to_json(t.id)},
          {"verified", t.verified}};
}

inline Json to_json(const SearchReport& r) {
  Json triples = Json::array(), bucket = Json::array();
  for (auto& t : r.triples) triples.push_back(to_json(t));
  for (auto& b : r.not_covered)
    bucket.push_back({{"instruction", to_json(b.instruction)}, {"reason", b.reason}, {"id", to_json(b.id)}});
  Json j = report_header();
  j["pattern"] = std::string(pattern_name(r.pattern));
  j["height"] = r.options.height;
  j["distance"] = r.options.distance ? Json(*r.options.distance) : Json(nullptr);
  j["scanned"] = r.scanned;
  j["skipped_flagged"] = r.skipped_flagged;
  j["guarded"] = r.guarded;
  j["triples"] = triples;
  j["not_covered"] = bucket;
  j["conflicts"] = r.conflicts;
  j["unidentified"] = r.unidentified();
  return j;
}

inline Json to_json(const CalibrationResult& c) {
  Json classes = Json::object();
  for (auto& [p, n] : c.survivor_classes) classes[std::to_string(p)] = n;
  return {{"link", std::string(link_name(c.link))}, {"ok", c.ok},          {"targets", c.targets},
          {"survivors", c.survivors},               {"classes", classes}, {"edge_signs", c.data.edge_signs},
          {"message", c.message}};
}

}  // namespace chainfill
