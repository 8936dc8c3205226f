#pragma once

// JSON and CSV forms of functions, results and reports, and the builtin
// function-spec vocabulary of the command line.

#include <gmpxx.h>

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "germlab/errors.hpp"
#include "germlab/germ.hpp"
#include "germlab/lcfunction.hpp"
#include "germlab/orbital.hpp"
#include "germlab/qutil.hpp"
#include "germlab/sl2.hpp"
#include "germlab/tree.hpp"

namespace germlab {

using json = nlohmann::ordered_json;

struct RunConfig {
  long p = 5;
  long digits = 12;
  long support = 2;
  long r = 0;
  std::string torus = "all";
  unsigned long seed = 1;
  std::string format = "json";
  bool depth_strict = false;
  std::string output;

  json to_json() const {
    return json{{"p", p},           {"digits", digits}, {"M", support},
                {"r", r},           {"torus", torus},   {"seed", seed},
                {"format", format}, {"depth_strict", depth_strict}, {"output", output}};
  }

  bool in_range(const mpq_class& depth, long level) const { return depth_strict ? depth > level : depth >= level; }
};

inline json to_json(const LCFunction& f) {
  json terms = json::array();
  for (const auto& t : f.terms())
    terms.push_back(json{{"coeff", to_string(t.coeff)},
                         {"center", format_matrix(t.cell.center)},
                         {"vertex", t.cell.lattice.vertex.to_string()},
                         {"level", t.cell.lattice.level}});
  return json{{"p", f.prime()}, {"terms", terms}};
}

inline LCFunction lcfunction_from_json(const json& j, long p) {
  try {
    const json* terms = &j;
    if (j.is_object()) {
      if (j.contains("p") && j.at("p").get<long>() != p)
        throw ParseError("function was written for p=" + std::to_string(j.at("p").get<long>()));
      terms = &j.at("terms");
    }
    if (!terms->is_array()) throw ParseError("function JSON needs a list of terms");
    LCFunction f(p);
    for (const auto& t : *terms) {
      mpq_class coeff = t.contains("coeff") ? parse_rational(t.at("coeff").get<std::string>()) : mpq_class(1);
      QSl2 center = t.contains("center") ? parse_matrix(t.at("center").get<std::string>()) : QSl2{};
      TreeVertex v = t.contains("vertex") ? parse_vertex(t.at("vertex").get<std::string>(), p) : TreeVertex::base();
      long level = t.at("level").get<long>();
      f.add_term(coeff, CosetCell{center, mp_lattice(v, level)});
    }
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad function JSON: ") + e.what());
  }
}

inline long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError(what + ": trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(what + ": not an integer: '" + s + "'");
  }
}

/// unit-ball | zero | mp:(m,x):n | nil:<class>:k | JSON text | @file.json
inline LCFunction parse_function_spec(const std::string& spec, long p) {
  if (spec == "unit-ball") return LCFunction::ball(0, p);
  if (spec == "zero") return LCFunction(p);
  if (spec.rfind("mp:", 0) == 0) {
    auto last = spec.rfind(':');
    if (last <= 3) throw ParseError("mp spec needs the form mp:(m,x):n");
    TreeVertex v = parse_vertex(spec.substr(3, last - 3), p);
    long n = parse_long(spec.substr(last + 1), "mp level");
    return LCFunction::indicator(QSl2{}, mp_lattice(v, n), p);
  }
  if (spec.rfind("nil:", 0) == 0) {
    auto last = spec.rfind(':');
    if (last <= 4) throw ParseError("nil spec needs the form nil:<class>:k");
    SquareClass cls = square_class_from_name(spec.substr(4, last - 4));
    long k = parse_long(spec.substr(last + 1), "nil level");
    return LCFunction::indicator(nilpotent_rep(cls, p), mp_lattice(TreeVertex::base(), k), p);
  }
  std::string text = spec;
  if (!spec.empty() && spec.front() == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw ParseError("cannot read " + spec.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw ParseError("unrecognized function spec '" + spec + "'");
  }
  return lcfunction_from_json(j, p);
}

inline json to_json(const IntegralResult& r) {
  return json{{"value", to_string(r.value)},
              {"v0", r.v0},
              {"tail", r.tail()},
              {"certificate", r.certificate},
              {"normalization", Normalization::fingerprint()}};
}

inline json to_json(const GermTable& t) {
  json j = json::object(), hc = json::object();
  auto h = t.hc();
  for (const auto& label : all_orbit_labels()) {
    auto i = static_cast<std::size_t>(label.index());
    j[label.to_string()] = to_string(t.j[i]);
    hc[label.to_string()] = to_string(h[i]);
  }
  return json{{"X", format_matrix(t.x)}, {"j", j}, {"j_hc", hc}, {"deepened", t.deepened}, {"provenance", t.provenance}};
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string expansion_csv_header() { return "f_id,X_id,torus,depth,r,lhs,rhs,residual,pass,contrast"; }

inline std::string to_csv(const ExpansionRow& row) {
  std::ostringstream s;
  s << csv_field(row.f_id) << ',' << csv_field(row.x_id) << ',' << row.torus << ',' << to_string(row.depth) << ','
    << row.r << ',' << to_string(row.lhs) << ',' << to_string(row.rhs) << ',' << to_string(row.residual) << ','
    << (row.pass ? "true" : "false") << ',' << (row.contrast ? "true" : "false");
  return s.str();
}

inline json to_json(const ExpansionRow& row) {
  return json{{"f_id", row.f_id},         {"X_id", row.x_id},        {"torus", row.torus},
              {"depth", to_string(row.depth)}, {"r", row.r},          {"lhs", to_string(row.lhs)},
              {"rhs", to_string(row.rhs)}, {"residual", to_string(row.residual)}, {"pass", row.pass},
              {"contrast", row.contrast}};
}

inline std::string claim_csv_header() { return "h_id,X_id,value,nilpotent_zero,pass"; }

inline std::string to_csv(const ClaimRow& row) {
  return csv_field(row.h_id) + ',' + csv_field(row.x_id) + ',' + to_string(row.value) + ',' +
         (row.nilpotent_zero ? "true" : "false") + ',' + (row.pass ? "true" : "false");
}

inline json to_json(const ClaimRow& row) {
  return json{{"h_id", row.h_id}, {"X_id", row.x_id}, {"value", to_string(row.value)},
              {"nilpotent_zero", row.nilpotent_zero}, {"pass", row.pass}};
}

}  // namespace germlab
