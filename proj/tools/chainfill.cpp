// chainfill command-line interface. Exit 0 on success or a clean "no result",
// 1 on a verification mismatch, 2 on usage errors.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chainfill/report.hpp"

using namespace chainfill;

namespace {

struct Output {
  std::string format = "json";

  void emit(const Json& j) const {
    if (format == "json") {
      std::cout << j.dump(2) << "\n";
      return;
    }
    flatten(j, "");
  }

 private:
  static void flatten(const Json& j, const std::string& path) {
    if (j.is_object() && !j.empty()) {
      for (auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k);
    } else if (j.is_array() && !j.empty() && !std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); })) {
      for (size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]");
    } else {
      std::cout << path << "\t" << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

Int parse_int(const std::string& s) {
  Int v = 0;
  auto t = std::string_view(s);
  while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
  while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw Error("malformed integer '" + s + "'");
  return v;
}

std::vector<Int> parse_ints(const std::string& s, size_t count) {
  auto parts = split(s, ',');
  if (parts.size() != count) throw Error("expected " + std::to_string(count) + " comma-separated integers, got '" + s + "'");
  std::vector<Int> out;
  for (auto& p : parts) out.push_back(parse_int(p));
  return out;
}

std::pair<Int, Int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw Error("range must look like lo..hi, got '" + s + "'");
  Int lo = parse_int(s.substr(0, dots)), hi = parse_int(s.substr(dots + 2));
  if (lo > hi) throw Error("empty range '" + s + "'");
  if (hi - lo > 10000) throw Error("range wider than 10000");
  return {lo, hi};
}

Instruction read_instruction(const std::string& link, const std::string& slots, const std::string& last) {
  Link l = parse_link(link);
  std::string csv = slots;
  if (!last.empty()) csv += "," + last;
  auto f = parse_instruction(l, csv);
  return f;
}

struct Verdict {
  int code = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dehn fillings of chain links: closed forms, H1 orders, rule tables and searches"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  Verdict verdict;

  std::string link, slots, last, form_text;

  auto* fill = app.add_subcommand("fill", "Evaluate a full filling instruction");
  fill->add_option("--link", link, "M5, M4, M3, N or F")->required();
  fill->add_option("--slots", slots, "Comma-separated slopes")->required();
  fill->add_option("--last", last, "Slope appended as the last slot");
  fill->callback([&] {
    auto f = read_instruction(link, slots, last);
    if (!f.full()) throw Error("fill needs every slot filled: " + to_string(f));
    Json j{{"instruction", to_json(f)}, {"h1", h1_order(f)}};
    try {
      auto e = evaluate(f);
      auto c = classify(e.form);
      j["form"] = to_json(e.form);
      j["raw"] = to_string(e.raw);
      j["route"] = e.route;
      j["type"] = std::string(type_name(c.type));
      if (!c.annotation.empty()) j["annotation"] = c.annotation;
      if (!std::holds_alternative<UnrecognizedForm>(e.form)) j["form_h1"] = form_h1_order(e.form);
    } catch (const NotEvaluable& e) {
      j["form"] = nullptr;
      j["status"] = e.what();
    }
    if (f.link == Link::N) {
      auto look = n_fill_rule(f.at(2), f.at(0), f.at(1));
      j["rule"] = {{"status", std::string(lookup_name(look.status))}, {"guard", std::string(guard_name(look.guard))}};
      if (look.hit) j["rule"]["id"] = look.hit->rule->id, j["rule"]["order"] = look.hit->order;
    }
    out.emit(j);
  });

  auto* cls = app.add_subcommand("classify", "Normalize and classify a closed-manifold expression");
  cls->add_option("--form", form_text, "e.g. \"(S2,(2,1),(3,1),(5,-4))\" or \"L(7,2)\"")->required();
  cls->callback([&] {
    auto raw = parse_form(form_text);
    auto norm = normalize_closed(raw);
    auto c = classify(norm);
    Json j{{"input", form_text}, {"form", to_json(norm)}, {"type", std::string(type_name(c.type))}};
    if (!c.annotation.empty()) j["annotation"] = c.annotation;
    if (!std::holds_alternative<UnrecognizedForm>(norm)) j["h1"] = form_h1_order(norm);
    out.emit(j);
  });

  size_t budget = 10000;
  auto* orb = app.add_subcommand("orbit", "Orbit of an instruction under its link's symmetry generators");
  orb->add_option("--link", link)->required();
  orb->add_option("--slots", slots)->required();
  orb->add_option("--budget", budget, "Maximum orbit size")->check(CLI::Range(size_t{1}, size_t{1000000}));
  orb->callback([&] {
    auto f = read_instruction(link, slots, "");
    auto o = orbit(f, budget);
    Json members = Json::array();
    for (auto& g : o) members.push_back(to_string(g));
    out.emit({{"instruction", to_json(f)}, {"size", o.size()}, {"orbit", members}});
  });

  auto* red = app.add_subcommand("reduce", "Move an instruction to the next smaller link where it factors");
  red->add_option("--link", link)->required();
  red->add_option("--slots", slots)->required();
  red->callback([&] {
    auto f = read_instruction(link, slots, "");
    Json j{{"instruction", to_json(f)}};
    switch (f.link) {
      case Link::M5:
        if (auto g = factors_to_m4(f)) j["result"] = to_json(*g), j["status"] = "reduced";
        else j["result"] = nullptr, j["status"] = "no -1 slot in the orbit";
        break;
      case Link::M4: {
        auto r = factors_to_m3(f);
        j["status"] = std::string(status_name(r.status));
        j["result"] = r.result ? to_json(*r.result) : Json(nullptr);
        j["route"] = r.route;
        break;
      }
      case Link::M3: j["result"] = to_json(m3_to_n(f)), j["status"] = "mirror"; break;
      case Link::N: j["result"] = to_json(n_to_m3(f)), j["status"] = "mirror"; break;
      case Link::F: throw Error("F has no smaller link");
    }
    out.emit(j);
  });

  auto* h1 = app.add_subcommand("h1", "Order of H1 from the calibrated linking matrix (0 when infinite)");
  h1->add_option("--link", link)->required();
  h1->add_option("--slots", slots)->required();
  h1->add_option("--last", last);
  h1->callback([&] {
    auto f = read_instruction(link, slots, last);
    out.emit({{"instruction", to_json(f)}, {"h1", h1_order(f)}});
  });

  std::string bilinear, linear;
  bool quad = false;
  auto* solve = app.add_subcommand("solve", "Certified integer equation solvers");
  auto* o_bil = solve->add_option("--bilinear", bilinear, "alpha,beta for alpha*s - n = beta*n*s");
  auto* o_lin = solve->add_option("--linear", linear, "a,b,c for a*t + b*u = c");
  auto* o_quad = solve->add_flag("--quad", quad, "(1 - m(n+4))n = m +- 1");
  o_bil->excludes(o_lin)->excludes(o_quad);
  o_lin->excludes(o_quad);
  solve->callback([&] {
    if (!bilinear.empty()) {
      auto ab = parse_ints(bilinear, 2);
      Json j = to_json(solve_bilinear(ab[0], ab[1]));
      j["equation"] = {{"alpha", ab[0]}, {"beta", ab[1]}};
      out.emit(j);
    } else if (!linear.empty()) {
      auto abc = parse_ints(linear, 3);
      try {
        Json j = to_json(solve_linear(abc[0], abc[1], abc[2]));
        j["solvable"] = true;
        out.emit(j);
      } catch (const Error& e) {
        if (abc[0] == 0 && abc[1] == 0) throw;
        out.emit({{"equation", abc}, {"solvable", false}, {"reason", e.what()}});
      }
    } else if (quad) {
      out.emit(to_json(solve_quad()));
    } else {
      throw CLI::RequiredError("one of --bilinear, --linear, --quad");
    }
  });

  std::string fam, range;
  bool all = false, use_errata = false;
  auto* ver = app.add_subcommand("verify-tables", "Compare evaluator output with the family tables");
  auto* o_fam = ver->add_option("--family", fam, "A, isolated, B, C, Bprime or Cprime");
  ver->add_option("--range", range, "lo..hi (defaults to the shipped range)");
  ver->add_flag("--all", all, "Every family over its shipped range")->excludes(o_fam);
  ver->add_flag("--errata", use_errata, "Judge rows against the recorded errata instead of the printed entries");
  ver->callback([&] {
    if (!all && fam.empty()) throw CLI::RequiredError("--family or --all");
    std::vector<std::string> ids;
    if (all)
      for (auto& [id, f] : families()) ids.push_back(id);
    else
      ids.push_back(fam);
    Json reports = Json::array();
    bool bad = false;
    for (auto& id : ids) {
      const Family& f = family(id);
      auto [lo, hi] = range.empty() || all ? shipped_range(f) : parse_range(range);
      auto rep = verify_family(id, lo, hi);
      bool rows_bad = std::any_of(rep.rows.begin(), rep.rows.end(), [&](const RowReport& r) {
        RowStatus s = use_errata && r.corrected ? *r.corrected : r.status;
        return s == RowStatus::Mismatch;
      });
      bool checks_bad = std::any_of(rep.checks.begin(), rep.checks.end(), [&](const CheckReport& c) {
        return !(use_errata && c.corrected_ok ? *c.corrected_ok : c.ok);
      });
      bad |= rows_bad || checks_bad;
      reports.push_back(to_json(rep));
    }
    Json j = report_header();
    j["errata_applied"] = use_errata;
    j["families"] = reports;
    j["ok"] = !bad;
    out.emit(j);
    if (bad) verdict.code = 1;
  });

  std::string pattern, json_path;
  Int height = 20, distance = 0;
  auto* search = app.add_subcommand("search", "Bounded search for exceptional triples on N");
  search->add_option("--pattern", pattern, "lens-lens, lens-toroidal or lens-seifert")->required();
  search->add_option("--height", height, "Bound on |r|,|s|,|t|,|u|")
      ->check(CLI::Range(Int{1}, kMaxSearchHeight));
  auto* o_dist = search->add_option("--distance", distance, "Required distance between the second and third slopes");
  search->add_option("--json", json_path, "Also write the report to this file");
  search->callback([&] {
    Pattern p = parse_pattern(pattern);
    SearchOptions opt;
    opt.height = height;
    if (o_dist->count()) opt.distance = distance;
    else opt.distance = default_distance(p);
    auto rep = search_triples(p, opt);
    Json j = to_json(rep);
    if (!json_path.empty()) {
      std::ofstream f(json_path);
      if (!f) throw Error("cannot write " + json_path);
      f << j.dump(2) << "\n";
    }
    out.emit(j);
    if (!rep.conflicts.empty()) verdict.code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return verdict.code;
}
