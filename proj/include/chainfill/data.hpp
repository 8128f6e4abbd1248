#pragma once

// Shipped data file (linking signs, rule table, family tables) and the JSON
// encodings shared by the library and the CLI.

#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

#include "chainfill/instruction.hpp"
#include "chainfill/seifert.hpp"

#ifndef CHAINFILL_DEFAULT_DATA
#define CHAINFILL_DEFAULT_DATA "data/chainfill_data.json"
#endif

namespace chainfill {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::string data_path() {
  if (const char* env = std::getenv("CHAINFILL_DATA"); env && *env) return env;
  return CHAINFILL_DEFAULT_DATA;
}

inline Json load_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open data file " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error("data file " + path + ": " + e.what());
  }
  if (j.value("schema_version", 0) != kSchemaVersion) throw Error("data file " + path + ": unsupported schema version");
  return j;
}

/// The data file, loaded once per process.
inline const Json& data() {
  static const Json j = load_data(data_path());
  return j;
}

// ---------------------------------------------------------------- slopes and instructions

inline Json to_json(const Slope& s) { return to_string(s); }

inline Slope slope_from_json(const Json& j) {
  if (j.is_number_integer()) return integer_slope(j.get<Int>());
  if (j.is_string()) return parse_slope(j.get<std::string>());
  throw Error("slope must be a string or an integer");
}

inline Json to_json(const Instruction& f) {
  Json slots = Json::array();
  for (auto& s : f.slots) slots.push_back(s ? to_json(*s) : Json(nullptr));
  return {{"link", std::string(link_name(f.link))}, {"slots", slots}};
}

inline Instruction instruction_from_json(const Json& j) {
  Link link = parse_link(j.at("link").get<std::string>());
  std::vector<std::optional<Slope>> slots;
  for (auto& s : j.at("slots")) slots.push_back(s.is_null() ? std::nullopt : std::optional(slope_from_json(s)));
  return make_instruction(link, slots);
}

// ---------------------------------------------------------------- closed forms

namespace detail {

inline std::string_view qstatus_name(QStatus s) {
  return s == QStatus::Exact ? "exact" : s == QStatus::Derived ? "derived" : "unknown";
}

inline QStatus parse_qstatus(std::string_view s) {
  if (s == "exact") return QStatus::Exact;
  if (s == "derived") return QStatus::Derived;
  if (s == "unknown") return QStatus::Unknown;
  throw Error("unknown q status '" + std::string(s) + "'");
}

inline Json fibers_json(const std::vector<Fiber>& fs) {
  Json out = Json::array();
  for (auto& f : fs) out.push_back({f.a, f.b});
  return out;
}

inline std::vector<Fiber> fibers_from(const Json& j) {
  std::vector<Fiber> out;
  for (auto& f : j) out.push_back({f.at(0).get<Int>(), f.at(1).get<Int>()});
  return out;
}

inline Json lens_json(const LensForm& l) {
  return {{"p", l.p}, {"q", l.q}, {"q_status", std::string(qstatus_name(l.q_status))}};
}

inline LensForm lens_from(const Json& j) {
  return {j.at("p").get<Int>(), j.at("q").get<Int>(), parse_qstatus(j.value("q_status", "exact"))};
}

}  // namespace detail

inline Json to_json(const ClosedManifoldForm& form) {
  struct V {
    Json operator()(const S3Form&) const { return {{"lens", "S3"}}; }
    Json operator()(const S2xS1Form&) const { return {{"lens", "S2xS1"}}; }
    Json operator()(const LensForm& l) const {
      return {{"lens", {l.p, l.q}}, {"q_status", std::string(detail::qstatus_name(l.q_status))}};
    }
    Json operator()(const SeifS2Form& s) const {
      return {{"seifert", {{"fibers", detail::fibers_json(s.fibers)}, {"euler", s.euler}}}};
    }
    Json operator()(const GraphDDForm& g) const {
      return {{"graph",
               {{"left", detail::fibers_json(g.left)},
                {"B", {{g.B.a, g.B.b}, {g.B.c, g.B.d}}},
                {"right", detail::fibers_json(g.right)}}}};
    }
    Json operator()(const ConnSumForm& c) const {
      Json parts = Json::array();
      for (auto& l : c.summands) parts.push_back(detail::lens_json(l));
      return {{"connsum", parts}};
    }
    Json operator()(const UnrecognizedForm& u) const { return {{"unrecognized", u.raw}}; }
  };
  Json j = std::visit(V{}, form);
  j["text"] = to_string(form);
  return j;
}

inline ClosedManifoldForm form_from_json(const Json& j) {
  if (j.contains("lens")) {
    auto& l = j["lens"];
    if (l.is_string()) {
      if (l == "S3") return S3Form{};
      if (l == "S2xS1") return S2xS1Form{};
      throw Error("unknown lens tag " + l.dump());
    }
    return LensForm{l.at(0).get<Int>(), l.at(1).get<Int>(),
                    detail::parse_qstatus(j.value("q_status", "exact"))};
  }
  if (j.contains("seifert"))
    return SeifS2Form{detail::fibers_from(j["seifert"].at("fibers")), j["seifert"].value("euler", Int{0})};
  if (j.contains("graph")) {
    auto& g = j["graph"];
    auto& b = g.at("B");
    return GraphDDForm{detail::fibers_from(g.at("left")),
                       Gluing{b[0][0].get<Int>(), b[0][1].get<Int>(), b[1][0].get<Int>(), b[1][1].get<Int>()},
                       detail::fibers_from(g.at("right"))};
  }
  if (j.contains("connsum")) {
    ConnSumForm c;
    for (auto& l : j["connsum"]) c.summands.push_back(detail::lens_from(l));
    return c;
  }
  if (j.contains("unrecognized")) return UnrecognizedForm{j["unrecognized"].get<std::string>()};
  throw Error("unrecognized form JSON " + j.dump());
}

}  // namespace chainfill
