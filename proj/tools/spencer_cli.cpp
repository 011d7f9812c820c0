#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "spencer/catalog.hpp"
#include "spencer/covariants.hpp"
#include "spencer/jetcalc.hpp"
#include "spencer/symbolic.hpp"

using json = nlohmann::ordered_json;
using namespace spencer;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string group;
  std::string flag;
  std::string l = "1..3";
  std::string s;
  std::string h_file;
  std::string complex = "spencer";
  std::string poly_file;
  std::string point_file;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::size_t cap = 0;
  bool allow_r1 = false;

  json to_json() const {
    json j;
    j["command"] = command;
    j["group"] = group;
    j["flag"] = flag;
    j["l"] = l;
    j["s"] = s;
    j["h_file"] = h_file;
    if (command == "cohomology") j["complex"] = complex;
    if (command == "tresse") {
      j["poly_file"] = poly_file;
      j["point_file"] = point_file;
    }
    j["seed"] = seed;
    j["format"] = format;
    j["cap"] = cap;
    j["allow_r1_point_lift"] = allow_r1;
    return j;
  }
};

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& text, const char* what) {
  Range r;
  try {
    auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      r.lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      r.hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw UsageError(std::string("bad range for ") + what + ": '" + text + "' (expected N or A..B)");
  }
  if (r.lo > r.hi) throw UsageError(std::string("empty range for ") + what);
  return r;
}

Rational parse_rational(const std::string& text) {
  try {
    Rational q(text);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw UsageError("not a rational number: '" + text + "'");
  }
}

Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw UsageError("rational entries must be integers or strings like \"3/2\"");
}

std::string str(const Rational& q) { return q.get_str(); }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("invalid JSON in " + path + ": " + e.what());
  }
}

catalog::PseudogroupSpec group(const RunConfig& cfg) {
  if (cfg.group.empty()) throw UsageError("--group is required");
  return catalog::PseudogroupSpec::parse(cfg.group);
}

cov::FlagContext flag_from_string(const catalog::PseudogroupSpec& spec, const std::string& text) {
  std::string f = text.empty() ? "coordinate" : text;
  auto colon = f.find(':');
  std::string head = f.substr(0, colon), rest = colon == std::string::npos ? "" : f.substr(colon + 1);
  if (head == "basis") {
    VectorList tau;
    std::stringstream rows(rest);
    std::string row;
    while (std::getline(rows, row, ';')) {
      std::vector<Rational> v;
      std::stringstream cells(row);
      std::string c;
      while (std::getline(cells, c, ',')) v.push_back(parse_rational(c));
      tau.push_back(std::move(v));
    }
    return cov::FlagContext(spec.ambient_dim(), tau);
  }
  int dim = -1;
  if (!rest.empty()) {
    if (rest.rfind("dim=", 0) != 0) throw UsageError("flag options must be dim=<d>");
    dim = parse_range(rest.substr(4), "flag dim").lo;
  }
  return cov::named_flag(spec, head, dim);
}

struct Flagged {
  cov::FlagContext ctx;
  SymbolicSystem h;
};

Flagged flag_and_equation(const RunConfig& cfg, const catalog::PseudogroupSpec& spec) {
  if (cfg.h_file.empty()) {
    cov::FlagContext ctx = flag_from_string(spec, cfg.flag);
    return {ctx, cov::full_equation(ctx)};
  }
  json doc = read_json(cfg.h_file);
  try {
    int m = doc.at("ambient").at("m").get<int>();
    int n = doc.at("ambient").at("n").get<int>();
    if (m != spec.ambient_dim()) throw UsageError("h-file ambient m does not match the group");
    VectorList tau;
    for (const auto& row : doc.at("tau_basis")) {
      std::vector<Rational> v;
      for (const auto& x : row) v.push_back(json_rational(x));
      tau.push_back(std::move(v));
    }
    if (static_cast<int>(tau.size()) != n) throw UsageError("h-file tau_basis must have n rows");
    cov::FlagContext ctx(m, tau);
    std::map<int, Subspace> grades;
    if (doc.contains("h")) {
      for (const auto& [key, rows] : doc.at("h").items()) {
        int l = parse_range(key, "h grade").lo;
        TensorShape shape(n, l, 0, m - n);
        std::vector<SparseVec> gens;
        for (const auto& row : rows) {
          std::vector<Rational> v;
          for (const auto& x : row) v.push_back(json_rational(x));
          if (v.size() != shape.dim()) throw UsageError("h vector at grade " + key + " has the wrong length");
          gens.push_back(from_dense(v));
        }
        grades.emplace(l, Subspace::span(shape, gens));
      }
    }
    return {ctx, SymbolicSystem(n, m - n, std::move(grades))};
  } catch (const json::exception& e) {
    throw UsageError("malformed h-file: " + std::string(e.what()));
  }
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string b(bool v) { return v ? "true" : "false"; }

// ---- commands ----------------------------------------------------------

json cmd_symbols(const RunConfig& cfg, Table& t) {
  auto spec = group(cfg);
  Range l = parse_range(cfg.l, "--l");
  if (l.lo < 1) throw UsageError("symbols start at l = 1");
  json rows = json::array();
  if (spec.kind == catalog::GroupKind::PointLie) {
    t.header = {"l", "dim", "horizontal", "vertical"};
    for (int d = l.lo; d <= l.hi; ++d) {
      auto pd = catalog::point_lie_dim(spec.param("n"), spec.param("r"), spec.param("k"), d, cfg.allow_r1);
      rows.push_back({{"l", d}, {"dim", pd.total()}, {"horizontal", pd.horizontal}, {"vertical", pd.vertical}});
      t.rows.push_back({std::to_string(d), std::to_string(pd.total()), std::to_string(pd.horizontal), std::to_string(pd.vertical)});
    }
  } else if (spec.kind == catalog::GroupKind::ContactLie) {
    t.header = {"l", "dim"};
    for (int d = l.lo; d <= l.hi; ++d) {
      auto dim = catalog::contact_lie_dim(spec.param("n"), spec.param("k"), d);
      rows.push_back({{"l", d}, {"dim", dim}});
      t.rows.push_back({std::to_string(d), std::to_string(dim)});
    }
  } else {
    t.header = {"l", "dim", "formula_dim"};
    for (int d = l.lo; d <= l.hi; ++d) {
      auto dim = catalog::symbol(spec, d, cfg.cap).dim();
      auto formula = catalog::symbol_dim(spec, d);
      rows.push_back({{"l", d}, {"dim", dim}, {"formula_dim", formula}});
      t.rows.push_back({std::to_string(d), std::to_string(dim), std::to_string(formula)});
    }
  }
  return {{"group", spec.to_string()}, {"rows", rows}};
}

json cmd_cohomology(const RunConfig& cfg, Table& t) {
  auto spec = group(cfg);
  if (!spec.materializable()) throw UsageError("cohomology needs a materializable group");
  Range l = parse_range(cfg.l, "--l");
  if (l.lo < 0) throw UsageError("degrees must be >= 0");
  SymbolicSystem g = catalog::system(spec, std::max(l.hi + 1, 1), cfg.cap);
  const int m = spec.ambient_dim();
  json cells = json::array();
  t.header = {"i", "j", "dim"};
  auto push = [&](int i, int j, std::size_t d) {
    cells.push_back({{"i", i}, {"j", j}, {"dim", d}});
    t.rows.push_back({std::to_string(i), std::to_string(j), std::to_string(d)});
  };
  json extra;
  if (cfg.complex == "spencer") {
    Range s = cfg.s.empty() ? Range{0, m} : parse_range(cfg.s, "--s");
    for (int i = l.lo; i <= l.hi; ++i)
      for (int j = s.lo; j <= s.hi; ++j) push(i, j, spencer_H(g, i, j));
  } else {
    Flagged f = flag_and_equation(cfg, spec);
    const int n = f.ctx.n();
    extra["tau_dim"] = n;
    if (cfg.complex == "delta-prime") {
      Range s = cfg.s.empty() ? Range{0, n} : parse_range(cfg.s, "--s");
      for (int i = l.lo; i <= l.hi; ++i)
        for (int j = s.lo; j <= s.hi; ++j) push(i, j, delta_prime_H(g, f.ctx.tau_basis(), i, j));
    } else if (cfg.complex == "h-row" || cfg.complex == "O-row") {
      Range s = cfg.s.empty() ? Range{0, cfg.complex == "h-row" ? m : n} : parse_range(cfg.s, "--s");
      for (int tot = l.lo; tot <= l.hi; ++tot) {
        for (int j = s.lo; j <= s.hi && j <= tot; ++j) {
          std::size_t d = cfg.complex == "h-row" ? cov::h_g_cohomology(f.ctx, g, tot, j)
                                                 : cov::O_cohomology(f.ctx, g, f.h, tot, j);
          push(tot - j, j, d);
        }
      }
    } else {
      throw UsageError("--complex must be spencer, delta-prime, h-row or O-row");
    }
  }
  json res{{"group", spec.to_string()}, {"complex", cfg.complex}};
  if (!extra.is_null()) res.update(extra);
  res["cells"] = cells;
  return res;
}

json report_json(const cov::CovariantReport& r) {
  return {{"l", r.l},
          {"dim_g", r.dim_g},
          {"dim_h", r.dim_h},
          {"dim_stationary", r.dim_stationary},
          {"dim_lambda_image", r.dim_lambda_image},
          {"dim_O", r.dim_O},
          {"transversal", r.transversal},
          {"dim_necessary_ok", r.dim_necessary_ok},
          {"caveat", r.caveat}};
}

void report_row(Table& t, const cov::CovariantReport& r) {
  t.rows.push_back({std::to_string(r.l), std::to_string(r.dim_g), std::to_string(r.dim_h), std::to_string(r.dim_stationary),
                    std::to_string(r.dim_lambda_image), std::to_string(r.dim_O), b(r.transversal), b(r.dim_necessary_ok)});
}

const std::vector<std::string> kReportHeader = {"l", "dim_g", "dim_h", "dim_stationary", "dim_lambda_image", "dim_O",
                                                "transversal", "dim_necessary_ok"};

json cmd_covariants(const RunConfig& cfg, Table& t) {
  auto spec = group(cfg);
  if (!spec.materializable()) throw UsageError("covariants need a materializable group");
  Range l = parse_range(cfg.l, "--l");
  if (l.lo < 1) throw UsageError("covariants start at l = 1");
  Flagged f = flag_and_equation(cfg, spec);
  SymbolicSystem g = catalog::system(spec, l.hi, cfg.cap);
  json reports = json::array();
  t.header = kReportHeader;
  for (int d = l.lo; d <= l.hi; ++d) {
    auto r = cov::covariants(f.ctx, g.grade(d), f.h.grade(d));
    reports.push_back(report_json(r));
    report_row(t, r);
  }
  return {{"group", spec.to_string()}, {"tau_dim", f.ctx.n()}, {"reports", reports}};
}

json cmd_transversality(const RunConfig& cfg, Table& t) {
  auto spec = group(cfg);
  if (!spec.materializable()) throw UsageError("transversality needs a materializable group");
  Range l = parse_range(cfg.l, "--l");
  Flagged f = flag_and_equation(cfg, spec);
  SymbolicSystem g = catalog::system(spec, l.hi + 1, cfg.cap);
  auto scan = cov::transversality_scan(f.ctx, g, f.h, l.hi);
  json reports = json::array();
  t.header = kReportHeader;
  t.header.insert(t.header.end(), {"h_tau_H2_zero", "g_delta_prime_H1_zero"});
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    if (scan.reports[i].l < l.lo) continue;
    json r = report_json(scan.reports[i]);
    r["h_tau_H2_zero"] = scan.vanishing_flags[i].first;
    r["g_delta_prime_H1_zero"] = scan.vanishing_flags[i].second;
    reports.push_back(r);
    report_row(t, scan.reports[i]);
    t.rows.back().push_back(b(scan.vanishing_flags[i].first));
    t.rows.back().push_back(b(scan.vanishing_flags[i].second));
  }
  json res{{"group", spec.to_string()}, {"tau_dim", f.ctx.n()}, {"reports", reports}};
  res["l0"] = scan.l0 ? json(*scan.l0) : json(nullptr);
  res["consequence_holds"] = scan.consequence_holds;
  return res;
}

json cmd_oracle(const RunConfig& cfg, Table& t) {
  auto spec = group(cfg);
  Range l = parse_range(cfg.l, "--l");
  if (l.lo < 1) throw UsageError("symbols start at l = 1");
  json rows = json::array();
  if (spec.kind == catalog::GroupKind::Volume) {
    t.header = {"l", "claimed", "prolonged", "mismatch"};
    Subspace gl = catalog::symbol(spec, 1, cfg.cap);
    for (int d = 1; d <= l.hi; ++d) {
      if (d > 1) {
        if (TensorShape(gl.ambient().base_dim, d, 0, gl.ambient().value_dim).dim() > cfg.cap)
          throw Error(ErrorCode::CapExceeded, "prolongation exceeds the cap");
        gl = prolong(gl);
      }
      if (d < l.lo) continue;
      std::size_t claimed = catalog::claimed_symbol_dim(spec, d);
      rows.push_back({{"l", d}, {"claimed", claimed}, {"prolonged", gl.dim()}, {"mismatch", claimed != gl.dim()}});
      t.rows.push_back({std::to_string(d), std::to_string(claimed), std::to_string(gl.dim()), b(claimed != gl.dim())});
    }
  } else if (spec.kind == catalog::GroupKind::PointLie || spec.kind == catalog::GroupKind::ContactLie) {
    t.header = {"l", "formula", "oracle", "cutoff", "match"};
    const bool point = spec.kind == catalog::GroupKind::PointLie;
    const int n = spec.param("n"), k = spec.param("k"), r = point ? spec.param("r") : 1;
    jet::JetSpace space(n, r);
    for (int d = l.lo; d <= l.hi; ++d) {
      const int N = static_cast<int>(space.dim(k));
      if (TensorShape(N, d, 0, N).dim() > cfg.cap) throw Error(ErrorCode::CapExceeded, "oracle ambient exceeds the cap");
      std::size_t formula = point ? catalog::point_lie_dim(n, r, k, d, cfg.allow_r1).total() : catalog::contact_lie_dim(n, k, d);
      auto o = jet::symbol_oracle(point ? jet::LiftKind::Point : jet::LiftKind::Contact, n, r, k, d, cfg.allow_r1);
      rows.push_back({{"l", d}, {"formula", formula}, {"oracle", o.dim}, {"cutoff", o.cutoff}, {"match", formula == o.dim}});
      t.rows.push_back({std::to_string(d), std::to_string(formula), std::to_string(o.dim), std::to_string(o.cutoff), b(formula == o.dim)});
    }
  } else {
    throw UsageError("oracle compares point_lie, contact_lie or volume");
  }
  return {{"group", spec.to_string()}, {"rows", rows}};
}

json cmd_tresse(const RunConfig& cfg, Table& t) {
  if (cfg.poly_file.empty()) throw UsageError("tresse needs --poly-file");
  json doc = read_json(cfg.poly_file);
  std::vector<std::string> inv_text, fun_text;
  int n = 0, r = 0;
  try {
    n = doc.at("n").get<int>();
    r = doc.value("r", 1);
    inv_text = doc.at("invariants").get<std::vector<std::string>>();
    fun_text = doc.value("functions", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw UsageError("malformed poly-file: " + std::string(e.what()));
  }
  jet::JetSpace space(n, r);
  std::vector<jet::JetPolynomial> fs, gs;
  int order = 0;
  for (const auto& s : inv_text) fs.push_back(jet::parse_polynomial(space, s));
  for (const auto& s : fun_text) gs.push_back(jet::parse_polynomial(space, s));
  for (const auto& f : fs) order = std::max(order, f.max_order() + 1);
  for (const auto& f : gs) order = std::max(order, f.max_order() + 1);

  jet::JetPoint pt;
  std::string point_source;
  if (cfg.point_file.empty()) {
    pt = jet::JetPoint::random(space, order, cfg.seed);
    point_source = "random";
  } else {
    json pj = read_json(cfg.point_file);
    pt.space = space;
    try {
      pt.order = pj.at("order").get<int>();
      for (const auto& [name, v] : pj.at("values").items()) pt.values[jet::parse_variable(space, name)] = json_rational(v);
    } catch (const json::exception& e) {
      throw UsageError("malformed point-file: " + std::string(e.what()));
    }
    for (jet::VarId v = 0; v < space.dim(pt.order); ++v)
      if (!pt.values.count(v)) throw UsageError("point-file lacks " + space.name(v));
    if (pt.order < order) throw UsageError("point order must be at least " + std::to_string(order));
    point_source = cfg.point_file;
  }

  jet::TresseFrame frame(fs, pt);
  json point = json::object();
  for (const auto& [v, x] : pt.values) point[space.name(v)] = str(x);
  json jac = json::array();
  for (const auto& row : frame.jacobian()) {
    json jr = json::array();
    for (const auto& x : row) jr.push_back(str(x));
    jac.push_back(jr);
  }
  t.header = {"function", "i", "value"};
  auto values = [&](const std::vector<jet::JetPolynomial>& list, const std::vector<std::string>& names) {
    json out = json::array();
    for (std::size_t a = 0; a < list.size(); ++a) {
      auto c = jet::tresse(list[a], frame);
      json vals = json::array();
      for (std::size_t i = 0; i < c.size(); ++i) {
        vals.push_back(str(c[i]));
        t.rows.push_back({names[a], std::to_string(i + 1), str(c[i])});
      }
      json entry{{"function", names[a]}, {"values", vals}};
      if (n == 1) {
        auto [num, den] = jet::tresse_symbolic(list[a], fs[0]);
        entry["symbolic"] = {{"numerator", jet::to_string(num)}, {"denominator", jet::to_string(den)}};
      }
      out.push_back(entry);
    }
    return out;
  };
  json res;
  res["n"] = n;
  res["r"] = r;
  res["point_source"] = point_source;
  res["point_order"] = pt.order;
  res["point"] = point;
  res["jacobian"] = jac;
  res["invariants"] = values(fs, inv_text);
  res["functions"] = values(gs, fun_text);
  return res;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void emit(const RunConfig& cfg, const json& result, const Table& t) {
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "# spencer " << kVersion << "\n# seed " << cfg.seed << "\n# config " << cfg.to_json().dump() << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_escape(t.header[i]);
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
      os << "\n";
    }
  } else {
    json doc;
    doc["artifact"] = "spencer";
    doc["version"] = kVersion;
    doc["seed"] = cfg.seed;
    doc["config"] = cfg.to_json();
    doc["result"] = result;
    os << doc.dump(2) << "\n";
  }
  if (cfg.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + cfg.out);
    f << os.str();
  }
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::CapExceeded:
    case ErrorCode::UnsupportedDegree:
      return 4;
    case ErrorCode::SingularJacobian:
    case ErrorCode::EquationNotInvariant:
    case ErrorCode::NotASubcomplex:
    case ErrorCode::CancellationFailure:
    case ErrorCode::MissingGrade:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spencer cohomology, symbols and covariants of pseudogroup actions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "pseudogroup, e.g. symplectic:2n=4 or point_lie:n=1,r=2,k=1");
    sub->add_option("--flag", cfg.flag, "tau: <stratum>[:dim=d] or basis:<row>;<row>");
    sub->add_option("--l", cfg.l, "degree range A..B");
    sub->add_option("--s", cfg.s, "form-degree range A..B");
    sub->add_option("--h-file", cfg.h_file, "equation symbol JSON");
    sub->add_option("--seed", cfg.seed, "seed for random jet points");
    sub->add_option("--out", cfg.out, "output path (stdout if omitted)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--cap", cfg.cap, "materialization cap (default SPENCER_CAP or 5000)");
    sub->add_flag("--allow-r1-point-lift", cfg.allow_r1, "allow point lifts with r = 1");
  };

  std::map<CLI::App*, json (*)(const RunConfig&, Table&)> handlers;
  auto add = [&](const char* name, const char* help, json (*fn)(const RunConfig&, Table&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    handlers[sub] = fn;
    return sub;
  };
  add("symbols", "dim g^l per degree", cmd_symbols);
  add("cohomology", "Spencer, delta', h-row or O-row cohomology table", cmd_cohomology)
      ->add_option("--complex", cfg.complex, "spencer | delta-prime | h-row | O-row");
  add("covariants", "covariant reports per degree", cmd_covariants);
  add("transversality", "transversality scan with per-degree flags", cmd_transversality);
  add("oracle", "closed formulas against the jet-space oracle", cmd_oracle);
  auto* tr = add("tresse", "Tresse derivatives at a jet point", cmd_tresse);
  tr->add_option("--poly-file", cfg.poly_file, "JSON with n, r, invariants, functions");
  tr->add_option("--point-file", cfg.point_file, "JSON with order and values (random point if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cfg.cap == 0) cfg.cap = catalog::default_cap();
    for (auto& [sub, fn] : handlers) {
      if (!sub->parsed()) continue;
      cfg.command = sub->get_name();
      Table t;
      json result = fn(cfg, t);
      emit(cfg, result, t);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularJacobian)
      std::cerr << "precondition failed: non-degeneracy condition of the Tresse frame (det D_a(f_i) != 0) is violated\n";
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  }
  return 0;
}
