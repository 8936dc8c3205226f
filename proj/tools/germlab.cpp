// Command line front end: orbital integrals, germs and verification suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "germlab/germ.hpp"
#include "germlab/io.hpp"
#include "germlab/oracle.hpp"
#include "germlab/orbital.hpp"
#include "germlab/suites.hpp"

using namespace germlab;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kCompute = 3 };

struct Output {
  const RunConfig& cfg;
  std::ostringstream body;

  int flush(int code) {
    if (cfg.output.empty()) {
      std::cout << body.str();
    } else {
      std::ofstream out(cfg.output);
      out << body.str();
    }
    return code;
  }
};

json envelope(const RunConfig& cfg, const std::string& command) {
  return json{{"command", command}, {"config", cfg.to_json()}, {"normalization", Normalization::fingerprint()}};
}

// CSV outputs carry the run configuration as comment lines.
void csv_preamble(std::ostream& os, const RunConfig& cfg, const std::string& command) {
  os << "# command: " << command << "\n# config: " << cfg.to_json().dump() << "\n# normalization: "
     << Normalization::fingerprint() << "\n";
}

int cmd_nilpotent(const RunConfig& cfg, const std::string& fspec) {
  LCFunction f = parse_function_spec(fspec, cfg.p);
  LCFunction fz = dilate(f, qpow(cfg.p, 2));
  Output out{cfg, {}};
  json rows = json::array();
  bool ok = true;
  for (const auto& label : all_orbit_labels()) {
    mpq_class v = nilpotent_orbital(label, f).value;
    mpq_class vz = nilpotent_orbital(label, fz).value;
    mpq_class expected = qpow(cfg.p, label.dim()) * v;
    ok = ok && vz == expected;
    rows.push_back(json{{"orbit", label.to_string()},
                        {"value", to_string(v)},
                        {"dilated", to_string(vz)},
                        {"q^d", to_string(qpow(cfg.p, label.dim()))},
                        {"scaling_ok", vz == expected}});
  }
  if (cfg.format == "csv") {
    csv_preamble(out.body, cfg, "nilpotent");
    out.body << "orbit,value,dilated,q^d,scaling_ok\n";
    for (const auto& r : rows)
      out.body << r["orbit"].get<std::string>() << ',' << r["value"].get<std::string>() << ','
               << r["dilated"].get<std::string>() << ',' << r["q^d"].get<std::string>() << ','
               << (r["scaling_ok"].get<bool>() ? "true" : "false") << "\n";
  } else {
    json j = envelope(cfg, "nilpotent");
    j["f"] = to_json(f);
    j["orbits"] = rows;
    out.body << j.dump(2) << "\n";
  }
  return out.flush(ok ? kPass : kFail);
}

int cmd_orbital(const RunConfig& cfg, const std::string& xspec, const std::string& fspec, bool oracle) {
  QSl2 x = parse_matrix(xspec);
  LCFunction f = parse_function_spec(fspec, cfg.p);
  IntegralResult r = ss_orbital(x, f);
  Output out{cfg, {}};
  json j = envelope(cfg, "orbital");
  j["X"] = format_matrix(x);
  j["torus"] = torus_name(x, cfg.p);
  j["depth"] = to_string(element_depth(x, cfg.p));
  j["result"] = to_json(r);
  int code = kPass;
  if (oracle) {
    mpq_class b = brute_force_cell_oracle(x, f, 0);
    j["oracle"] = to_string(b);
    if (b != r.value) code = kFail;
  }
  if (cfg.format == "csv") {
    csv_preamble(out.body, cfg, "orbital");
    out.body << "X,value,v0,tail,certificate\n"
             << csv_field(format_matrix(x)) << ',' << to_string(r.value) << ',' << r.v0 << ',' << r.tail() << ','
             << (r.certificate ? "true" : "false") << "\n";
  } else {
    out.body << j.dump(2) << "\n";
  }
  return out.flush(code);
}

int cmd_germs(const RunConfig& cfg, const std::string& xspec) {
  QSl2 x = parse_matrix(xspec);
  GermTable t = extract_germs(x, default_basis(cfg.p));
  Output out{cfg, {}};
  json j = envelope(cfg, "germs");
  j["table"] = to_json(t);
  out.body << j.dump(2) << "\n";
  return out.flush(kPass);
}

template <class Row>
int emit_rows(const RunConfig& cfg, const std::string& command, const std::string& header, const std::vector<Row>& rows,
              bool ok, json extra = json::object()) {
  Output out{cfg, {}};
  if (cfg.format == "csv") {
    csv_preamble(out.body, cfg, command);
    out.body << header << "\n";
    for (const auto& r : rows) out.body << to_csv(r) << "\n";
  } else {
    json j = envelope(cfg, command);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    j["rows"] = arr;
    j["pass"] = ok;
    out.body << j.dump(2) << "\n";
  }
  return out.flush(ok ? kPass : kFail);
}

int verify_theorem_suite(const RunConfig& cfg) {
  auto family = suites::proxy_family(cfg.r, cfg.p);
  auto grid = suites::filter_depth(suites::regular_grid(cfg.r, cfg.p), cfg.r, cfg.p, cfg.depth_strict);
  // Shallow points for the contrast rows.
  for (const auto& x : suites::regular_grid(0, cfg.p))
    if (element_depth(x, cfg.p) < cfg.r) grid.push_back(x);
  auto report = verify_theorem(family, grid, default_basis(cfg.p));
  bool ok = true;
  for (const auto& row : report)
    if (!row.contrast && !row.pass) ok = false;
  return emit_rows(cfg, "verify theorem", expansion_csv_header(), report, ok);
}

int verify_claim_suite(const RunConfig& cfg) {
  auto grid = suites::filter_depth(suites::regular_grid(cfg.r, cfg.p), cfg.r, cfg.p, cfg.depth_strict);
  auto rows = verify_claim(suites::proxy_pool(cfg.r, cfg.p), grid);
  bool ok = true;
  for (const auto& row : rows) ok = ok && row.pass;
  return emit_rows(cfg, "verify claim", claim_csv_header(), rows, ok);
}

struct ScalingRow {
  std::string f_id, x_id;
  bool pass;
};
std::string to_csv(const ScalingRow& r) { return csv_field(r.f_id) + ',' + csv_field(r.x_id) + ',' + (r.pass ? "true" : "false"); }
json to_json(const ScalingRow& r) { return json{{"f_id", r.f_id}, {"X_id", r.x_id}, {"pass", r.pass}}; }

int verify_scaling_suite(const RunConfig& cfg) {
  auto hr = construct_Hr(suites::proxy_pool(cfg.r, cfg.p));
  auto grid = suites::filter_depth(suites::regular_grid(cfg.r, cfg.p), cfg.r, cfg.p, cfg.depth_strict);
  std::vector<ScalingRow> rows;
  bool ok = true;
  for (std::size_t i = 0; i < hr.members.size(); ++i) {
    const auto label = all_orbit_labels()[i];
    for (const auto& x : grid) {
      bool pass = verify_scaling(label, hr.members[i].f, x);
      ok = ok && pass;
      rows.push_back({hr.members[i].id, format_matrix(x), pass});
    }
  }
  return emit_rows(cfg, "verify scaling", "f_id,X_id,pass", rows, ok);
}

struct HomogeneityRow {
  std::string x_id;
  long k;
  bool independent, pass;
};
std::string to_csv(const HomogeneityRow& r) {
  return csv_field(r.x_id) + ',' + std::to_string(r.k) + ',' + (r.independent ? "true" : "false") + ',' +
         (r.pass ? "true" : "false");
}
json to_json(const HomogeneityRow& r) {
  return json{{"X_id", r.x_id}, {"k", r.k}, {"independent", r.independent}, {"pass", r.pass}};
}

int verify_homogeneity_suite(const RunConfig& cfg) {
  auto basis = default_basis(cfg.p);
  std::vector<HomogeneityRow> rows;
  bool ok = true;
  for (const auto& x0 : suites::regular_grid(2, cfg.p)) {
    GermTable base = extract_germs(x0, basis);
    QSl2 x1 = qpow(cfg.p, 2) * x0;
    GermTable direct = extract_germs(x1, basis);
    GermTable extended = homogeneity_extend(base, 1);
    bool pass = direct.j == extended.j;
    // Regular entries of the Harish-Chandra normalized table do not move.
    auto h0 = base.hc(), h1 = direct.hc();
    for (std::size_t i = 1; i < 5; ++i) pass = pass && h0[i] == h1[i];
    pass = pass && h1[0] == h0[0] / (cfg.p * cfg.p);
    bool independent = base.deepened == 0 && direct.deepened == 0;
    ok = ok && pass && independent;
    rows.push_back({format_matrix(x0), 1, independent, pass});
  }
  return emit_rows(cfg, "verify homogeneity", "X_id,k,independent,pass", rows, ok);
}

struct OracleRow {
  std::string id;
  std::string engine, oracle;
  bool pass;
};
std::string to_csv(const OracleRow& r) {
  return csv_field(r.id) + ',' + r.engine + ',' + r.oracle + ',' + (r.pass ? "true" : "false");
}
json to_json(const OracleRow& r) {
  return json{{"id", r.id}, {"engine", r.engine}, {"oracle", r.oracle}, {"pass", r.pass}};
}

int verify_oracles_suite(const RunConfig& cfg) {
  const long p = cfg.p;
  std::vector<OracleRow> rows;
  bool ok = true;
  auto add = [&](const std::string& id, const mpq_class& e, const mpq_class& o) {
    rows.push_back({id, to_string(e), to_string(o), e == o});
    ok = ok && e == o;
  };
  std::vector<NamedFunction> fs = {{"ball0", LCFunction::ball(0, p), 0},
                                   {"ball-1", LCFunction::ball(-1, p), 0},
                                   {"nilOne:1", LCFunction::indicator({0, 1, 0}, mp_lattice(TreeVertex::base(), 1), p), 0}};
  for (const auto& x : suites::regular_grid(0, p)) {
    if (element_depth(x, p) > 1) continue;
    for (const auto& f : fs) {
      try {
        add(format_matrix(x) + " " + f.id, ss_orbital(x, f.f).value, brute_force_cell_oracle(x, f.f, 0));
      } catch (const GridTooLarge&) {
      }
    }
  }
  for (const auto& label : all_orbit_labels())
    for (const auto& f : fs) add(label.to_string() + " " + f.id, nilpotent_orbital(label, f.f).value,
                                 brute_force_cell_oracle(label, f.f, 0));
  for (const auto& x : suites::regular_grid(0, p)) {
    TorusKind kind = torus_kind_of(square_class_of(x.neg_det(), p));
    mpq_class calib = tree_calibration_constant(kind, p);
    for (long n : {-1L, 0L, 1L}) {
      try {
        auto count = tree_count_oracle(x, n, 6, p);
        auto lattice_f = LCFunction::indicator(QSl2{}, mp_lattice(TreeVertex::base(), n), p);
        add(format_matrix(x) + " tree n=" + std::to_string(n), ss_orbital(x, lattice_f).value, calib * count.value);
      } catch (const BallTooSmall&) {
      }
    }
  }
  return emit_rows(cfg, "verify oracles", "id,engine,oracle,pass", rows, ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"germlab: exact orbital integrals and Shalika germs for sl2 over Q_p"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("GERMLAB_PRECISION")) {
    try {
      cfg.digits = std::stol(env);
    } catch (const std::exception&) {
      std::cerr << "error: GERMLAB_PRECISION must be an integer\n";
      return kUsage;
    }
  }
  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "odd prime")->capture_default_str();
    sub->add_option("--digits", cfg.digits, "working precision in base-p digits")->capture_default_str();
    sub->add_option("--M", cfg.support, "support bound")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output,-o", cfg.output, "write the report here instead of stdout");
  };

  std::string fspec = "unit-ball", xspec;
  bool oracle = false;
  auto* nil = app.add_subcommand("nilpotent", "nilpotent orbital integrals of f and the q^d scaling check");
  common(nil);
  nil->add_option("--f", fspec, "function spec")->capture_default_str();

  auto* orb = app.add_subcommand("orbital", "orbital integral of f over the orbit of a regular semisimple X");
  common(orb);
  orb->add_option("--X", xspec, "matrix: diag(u,-u) or [[a,b],[c,-a]]")->required();
  orb->add_option("--f", fspec, "function spec")->capture_default_str();
  orb->add_flag("--oracle", oracle, "cross-check with the grid oracle");

  auto* germs = app.add_subcommand("germs", "Shalika germ table at a regular semisimple X");
  common(germs);
  germs->add_option("--X", xspec, "matrix")->required();

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  common(ver);
  ver->add_option("suite", suite, "claim | scaling | theorem | homogeneity | oracles")
      ->required()
      ->check(CLI::IsMember({"claim", "scaling", "theorem", "homogeneity", "oracles"}));
  ver->add_option("--r", cfg.r, "depth r")->capture_default_str();
  ver->add_option("--torus", cfg.torus, "torus selection (all)")->capture_default_str();
  ver->add_flag("--depth-strict", cfg.depth_strict, "use depth(X) > r instead of depth(X) >= r");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    FieldConfig{cfg.p, cfg.digits}.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (cfg.p == 3) std::cerr << "warning: p=3 is far from the large residue characteristic regime of the theory\n";

  try {
    if (*nil) return cmd_nilpotent(cfg, fspec);
    if (*orb) return cmd_orbital(cfg, xspec, fspec, oracle);
    if (*germs) return cmd_germs(cfg, xspec);
    if (suite == "theorem") return verify_theorem_suite(cfg);
    if (suite == "claim") return verify_claim_suite(cfg);
    if (suite == "scaling") return verify_scaling_suite(cfg);
    if (suite == "homogeneity") return verify_homogeneity_suite(cfg);
    return verify_oracles_suite(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCompute;
  }
}
