#include "stabwc/acceptance.hpp"
#include "stabwc/curvechains.hpp"
#include "stabwc/lifts.hpp"
#include "stabwc/walls.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

using namespace stabwc;
using J = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
  ConfigError(std::string f, const std::string& msg) : std::runtime_error(msg), field(std::move(f)) {}
  std::string field;
};

// A computation that ran but did not succeed; the report is still written.
struct Failure {
  std::string message;
};

struct Options {
  std::string command;
  std::string scenario;
  std::string target;
  std::string range;
  int order = 0;
  int window_margin = -1;
  std::string format = "text";
  std::string out;
  std::string pair;
  std::string beta;
  std::string eta_squared = "1";
  std::string beta_eta = "0";
  std::string config_file;
  bool quiet = false;
};

struct Context {
  Options opt;
  ScenarioSpec sc;
  IntersectionDatum datum;
  J config;
  std::string hash;
  std::vector<std::string> argv;
  std::vector<Failure> failures;
  bool skip_hull = false;  // report on a scenario without a wall-point model

  void progress(const std::string& s) const {
    if (!opt.quiet) std::cerr << "[" << opt.command << "] " << s << "\n";
  }
};

struct Section {
  J data;
  std::string text;
};

std::string fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// "field 'order' (run.toml:4)" when the value came from the config file.
std::string locate(const Context& c, const std::string& field) {
  std::string flag = "--" + field;
  std::replace(flag.begin(), flag.end(), '_', '-');
  for (const auto& a : c.argv)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return "field '" + field + "' (command line)";
  if (!c.opt.config_file.empty()) {
    std::ifstream in(c.opt.config_file);
    std::string dashed = field, line;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    std::regex key("^\\s*(" + field + "|" + dashed + ")\\s*=");
    for (int no = 1; std::getline(in, line); ++no)
      if (std::regex_search(line, key)) return "field '" + field + "' (" + c.opt.config_file + ":" + std::to_string(no) + ")";
  }
  return "field '" + field + "'";
}

Rat parse_rat(const std::string& field, std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }), s.end());
  static const std::regex re("^[-+]?[0-9]+(/[0-9]+)?$");
  if (!std::regex_match(s, re)) throw ConfigError(field, "'" + s + "' is not a rational number");
  if (s[0] == '+') s = s.substr(1);
  Rat x;
  if (x.set_str(s, 10) != 0 || x.get_den() == 0) throw ConfigError(field, "'" + s + "' is not a rational number");
  x.canonicalize();
  return x;
}

std::pair<int, int> parse_range(const std::string& s) {
  static const std::regex re("^\\s*(-?[0-9]+)\\s*\\.\\.\\s*(-?[0-9]+)\\s*$");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("range", "'" + s + "' is not of the form a..b");
  int a = std::stoi(m[1]), b = std::stoi(m[2]);
  if (a > b) throw ConfigError("range", "empty range " + s);
  if (b - a > 40) throw ConfigError("range", "range " + s + " is wider than 41 values");
  return {a, b};
}

// Splits "A,B" at the comma outside parentheses.
std::pair<std::string, std::string> split_pair(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) return {s.substr(0, i), s.substr(i + 1)};
  }
  throw ConfigError("pair", "'" + s + "' is not of the form A,B");
}

std::vector<std::string> strs(const std::vector<Rat>& v) {
  std::vector<std::string> r;
  for (const auto& x : v) r.push_back(x.get_str());
  return r;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string tuple(const std::vector<std::string>& v) { return "(" + join(v, ", ") + ")"; }

J class_json(const NumClass& v) { return J{{"ch0", v.ch0}, {"ch1", strs(v.ch1)}, {"ch2", v.ch2.get_str()}}; }

std::string indent(const std::string& s, const std::string& pad) {
  std::string out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out += pad + line + "\n";
  return out;
}

std::string weight_str(const Weight& w) { return "(" + std::to_string(w[0]) + "," + std::to_string(w[1]) + ")"; }

std::string dims_str(const std::map<int, int>& d) {
  std::vector<std::string> v;
  for (const auto& [k, x] : d) v.push_back("Ext^" + std::to_string(k) + " = " + std::to_string(x));
  return v.empty() ? "all zero" : join(v, ", ");
}

J dims_json(const std::map<int, int>& d) {
  J j = J::object();
  for (const auto& [k, x] : d) j[std::to_string(k)] = x;
  return j;
}

// ---------------------------------------------------------------- config

void resolve(Context& c) {
  auto& o = c.opt;
  if (o.format != "text" && o.format != "json") throw ConfigError("format", "expected text or json, got '" + o.format + "'");
  if (o.window_margin < -1) throw ConfigError("window_margin", "must be >= 0 (or -1 for the default)");
  if (o.command == "selftest") {
    c.config = J{{"command", o.command}, {"window_margin", o.window_margin}};
    c.hash = fnv1a64(c.config.dump());
    return;
  }
  if (o.scenario.empty()) throw ConfigError("scenario", "required (kind:n1,.. with kind single, disjoint or chain)");
  try {
    c.sc = ScenarioSpec::parse(o.scenario);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario", e.what());
  }
  c.datum = IntersectionDatum::for_scenario(c.sc);
  if (!o.beta.empty()) {
    std::vector<Rat> b;
    std::stringstream ss(o.beta);
    for (std::string tok; std::getline(ss, tok, ',');) b.push_back(parse_rat("beta", tok));
    if (b.size() != c.sc.r())
      throw ConfigError("beta", "expected " + std::to_string(c.sc.r()) + " pairings beta.C_i, got " + std::to_string(b.size()));
    c.datum.beta_c = b;
  }
  c.datum.eta_sq = parse_rat("eta_squared", o.eta_squared);
  c.datum.beta_eta = parse_rat("beta_eta", o.beta_eta);
  try {
    c.datum.validate();
  } catch (const std::exception& e) {
    throw ConfigError(o.beta.empty() ? "eta_squared" : "beta", e.what());
  }

  const auto& k = c.sc.kind;
  if (o.command == "report" && o.target.empty() && k != "chain")
    for (int n : c.sc.n) c.skip_hull = c.skip_hull || n < 2;
  if (o.command == "ext" || (o.command == "report" && k != "disjoint")) {
    if (k == "disjoint") throw ConfigError("scenario", "ext supports single and chain scenarios");
    if (k == "chain" && (c.sc.n[0] < 2 || c.sc.n[1] < 2)) throw ConfigError("scenario", "the chain model needs n1, n2 >= 2");
    if (!o.range.empty() && !o.pair.empty()) throw ConfigError("pair", "give either --pair or --range");
    if (!o.range.empty()) parse_range(o.range);
    if (!o.pair.empty()) split_pair(o.pair);
    if (o.range.empty() && o.pair.empty()) {
      if (k == "chain") o.range = "-3..3";
      else o.pair = "E,E";
    }
  }
  if (o.command == "hull" || (o.command == "report" && !c.skip_hull)) {
    if (o.target.empty()) o.target = k == "chain" ? "triple_point" : "wall_point";
    static const std::regex chamber("^chamber_point:(generic|[0-9]+)$");
    std::smatch m;
    if (o.target == "wall_point") {
      if (k == "chain") throw ConfigError("target", "wall_point needs a single or disjoint scenario; use triple_point");
      for (int n : c.sc.n)
        if (n < 2) throw ConfigError("target", "wall_point needs n_i >= 2");
    } else if (o.target == "triple_point") {
      if (k != "chain") throw ConfigError("target", "triple_point needs a chain scenario");
      if (c.sc.n[0] < 3 || c.sc.n[1] < 3) throw ConfigError("target", "triple_point needs n1, n2 >= 3");
    } else if (std::regex_match(o.target, m, chamber)) {
      if (k != "single") throw ConfigError("target", "chamber_point needs a single scenario");
      int n = c.sc.n[0];
      if (m[1] == "generic") {
        if (n < 3) throw ConfigError("target", "chamber_point:generic needs n >= 3");
      } else {
        int e = std::stoi(m[1]);
        if (e < 1 || e > n) throw ConfigError("target", "chamber_point:k needs 1 <= k <= n");
      }
    } else {
      throw ConfigError("target", "unknown target '" + o.target + "' (wall_point, triple_point, chamber_point:generic, chamber_point:k)");
    }
    if (o.order == 0) o.order = o.target == "wall_point" ? 2 : 3;
    if (o.order < 2 || o.order > 8) throw ConfigError("order", "must lie in 2..8");
  } else if (o.command != "ext" && o.order != 0) {
    throw ConfigError("order", "only used by hull and report");
  }
  if (o.command == "invariants") {
    if (k == "chain") throw ConfigError("scenario", "invariants needs a single or disjoint scenario");
    for (int n : c.sc.n)
      if (n < 2) throw ConfigError("scenario", "invariants needs n_i >= 2");
  }

  J cfg;
  cfg["command"] = o.command;
  cfg["scenario"] = c.sc.to_string();
  cfg["beta_pairings"] = strs(c.datum.beta_c);
  cfg["eta_squared"] = c.datum.eta_sq.get_str();
  cfg["beta_eta"] = c.datum.beta_eta.get_str();
  cfg["window_margin"] = o.window_margin;
  if (!o.target.empty()) cfg["target"] = o.target;
  if (o.order) cfg["order"] = o.order;
  if (!o.range.empty()) cfg["range"] = o.range;
  if (!o.pair.empty()) cfg["pair"] = o.pair;
  c.config = cfg;
  c.hash = fnv1a64(cfg.dump());
}

// ---------------------------------------------------------------- walls

J report_json(const ComponentReport& r) {
  J comps = J::array(), glue = J::array(), walls = J::array();
  for (const auto& x : r.components) comps.push_back({{"name", x.name}, {"kind", x.kind}, {"dim", x.dim}});
  for (const auto& g : r.gluings)
    glue.push_back({{"left", g.left}, {"left_sub", g.left_sub}, {"right", g.right}, {"right_sub", g.right_sub}});
  for (const auto& w : r.walls) {
    J x{{"wall", w.wall}, {"equation", w.equation}, {"destabilizer", w.destabilizer}, {"polystable", w.polystable}};
    x["singularity"] = w.singularity ? J("1/" + std::to_string(w.singularity) + "(1,1)") : J(nullptr);
    walls.push_back(x);
  }
  return J{{"components", comps}, {"gluings", glue}, {"further_identifications", r.further_identifications},
           {"adjacent_walls", walls}, {"origin", r.origin}};
}

Section walls_section(Context& c) {
  c.progress("wall arrangement of " + c.sc.to_string());
  auto a = wall_arrangement(c.sc, c.datum);
  const auto& d = a.datum;
  Section s;
  J& j = s.data;
  std::ostringstream t;
  auto vars = eps_names(a.r());
  j["variables"] = vars;
  j["beta_pairings"] = strs(d.beta_c);
  j["twist_offsets"] = a.k;
  J ample = J::array();
  for (const auto& f : ample_forms(d)) ample.push_back(f.to_string() + " > 0");
  j["geometric_chamber"] = ample;
  t << "scenario " << c.sc.to_string() << ", slice variables " << join(vars, ", ") << "\n";
  t << "beta.C_i = " << tuple(strs(d.beta_c)) << ", twist offsets k = ";
  std::vector<std::string> ks;
  for (int x : a.k) ks.push_back(std::to_string(x));
  t << tuple(ks) << "\n";
  t << "geometric chamber: " << join(ample.get<std::vector<std::string>>(), ", ") << "\n";

  J walls = J::array();
  t << "walls (" << a.walls.size() << "):\n";
  for (const auto& w : a.walls) {
    J x;
    x["name"] = w.name;
    x["equation"] = w.form.to_string() + " = 0";
    x["coefficients"] = strs(w.form.c);
    x["destabilizer"] = w.destabilizer.name();
    x["destabilizer_class"] = class_json(w.destabilizer_class(d));
    std::vector<std::string> comp;
    for (const auto& o : w.complement) comp.push_back(o.name());
    x["complement"] = comp;
    x["complement_class"] = class_json(w.complement_class(d));
    x["sum_is_point"] = w.destabilizer_class(d) + w.complement_class(d) == NumClass::point(d.r());
    x["singularity"] = w.singularity ? J("1/" + std::to_string(w.singularity) + "(1,1)") : J(nullptr);
    walls.push_back(x);
    t << "  " << w.name << ": " << w.form.to_string() << " = 0; destabilizer " << w.destabilizer.name() << " "
      << w.destabilizer_class(d).to_string() << ", complement " << join(comp, " + ");
    if (w.singularity) t << ", singularity 1/" << w.singularity << "(1,1)";
    t << "\n";
  }
  j["walls"] = walls;
  j["transversality"] = transversality(a);
  t << "transversality: " << transversality(a) << "\n";

  auto chambers = enumerate_chambers(a);
  J cj = J::array();
  std::string reports;
  t << "chambers (" << chambers.size() << "):\n";
  for (const auto& ch : chambers) {
    J x;
    x["label"] = ch.label;
    x["signs"] = ch.signs;
    x["point"] = strs(ch.point);
    std::vector<std::string> adj, sg;
    for (auto i : ch.adjacent) adj.push_back(a.walls[i].name);
    for (int v : ch.signs) sg.push_back(v > 0 ? "+" : "-");
    x["adjacent"] = adj;
    t << "  " << ch.label << ": signs (" << join(sg, "") << "), point " << tuple(strs(ch.point)) << ", walls "
      << join(adj, ", ") << "\n";
    try {
      auto r = component_report(a, ch.label);
      x["report"] = report_json(r);
      reports += r.to_text() + "\n";
    } catch (const std::exception& e) {
      x["report"] = J{{"unavailable", e.what()}};
      reports += "chamber " + ch.label + ": no report (" + e.what() + ")\n\n";
    }
    cj.push_back(x);
  }
  j["chamber_count"] = chambers.size();
  j["chambers"] = cj;
  auto origin = origin_description(c.sc);
  if (origin.empty()) {
    std::vector<std::string> ps;
    for (const auto& o : a.origin_polystable) ps.push_back(o.name());
    origin = "polystable " + join(ps, " + ");
  }
  j["origin"] = origin;
  t << "origin: " << origin << "\n\ncomponent reports:\n" << indent(reports, "  ");
  s.text = t.str();
  return s;
}

// ---------------------------------------------------------------- ext

std::shared_ptr<const ToricModel> model_of(const ScenarioSpec& sc) { return make_model(sc.kind, sc.n); }

struct Shape {
  std::string type;  // OC, OC12, E or other
  std::vector<int> twist;
  int shift = 0;
};

Shape shape_of(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == '_' || ch == ' '; }), s.end());
  Shape r;
  if (s.size() >= 3 && s.substr(s.size() - 3) == "[1]") {
    r.shift = 1;
    s.resize(s.size() - 3);
  }
  std::smatch m;
  static const std::regex oc12("^OC12(\\((-?[0-9]+),(-?[0-9]+)\\))?$"), oc("^OC(\\((-?[0-9]+)\\))?$");
  if (std::regex_match(s, m, oc12)) {
    r.type = "OC12";
    r.twist = m[1].matched ? std::vector<int>{std::stoi(m[2]), std::stoi(m[3])} : std::vector<int>{0, 0};
  } else if (std::regex_match(s, m, oc)) {
    r.type = "OC";
    r.twist = {m[1].matched ? std::stoi(m[2]) : 0};
  } else {
    r.type = s == "E" ? "E" : "other";
  }
  return r;
}

// Degrees where a closed form is available: Hom between twists of the curve
// sheaves, and RHom(E, E) on the single curve for n >= 3.
std::optional<std::map<int, int>> closed_form(const ScenarioSpec& sc, const Shape& a, const Shape& b) {
  if (sc.kind == "single" && a.type == "E" && b.type == "E" && a.shift == b.shift && sc.n[0] >= 3) {
    int n = sc.n[0];
    return std::map<int, int>{{0, 2}, {1, n + 2}, {2, 2 * n - 2}, {3, n - 2}};
  }
  if (sc.kind == "single" && a.type == "OC" && b.type == "OC")
    return std::map<int, int>{{a.shift - b.shift, std::max(b.twist[0] - a.twist[0] + 1, 0)}};
  if (sc.kind == "chain" && a.type == "OC12" && b.type == "OC12")
    return std::map<int, int>{{a.shift - b.shift, hom_dimension(b.twist[0] - a.twist[0], b.twist[1] - a.twist[1])}};
  return std::nullopt;
}

int dim_at(const std::map<int, int>& d, int k) { return d.count(k) ? d.at(k) : 0; }

HomCohomology::Progress weight_progress(const Context& c) {
  return [&c](const std::string& s) { c.progress(s); };
}

Section ext_pair(Context& c) {
  auto m = model_of(c.sc);
  auto [sa, sb] = split_pair(c.opt.pair);
  BundleComplex A, B;
  try {
    A = resolve_sheaf(sa, m);
    B = resolve_sheaf(sb, m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("pair", e.what());
  }
  c.progress("Ext(" + A.name + ", " + B.name + ")");
  HomCohomology h(A, B, c.opt.window_margin, weight_progress(c));
  auto r = h.dims();
  Section s;
  J& j = s.data;
  std::ostringstream t;
  j["mode"] = "pair";
  j["source"] = A.name;
  j["target"] = B.name;
  j["dims"] = dims_json(r.dims);
  t << "Ext^*(" << A.name << ", " << B.name << ") on " << c.sc.to_string() << ": " << dims_str(r.dims) << "\n";
  auto sha = shape_of(sa), shb = shape_of(sb);
  if (sha.shift != shb.shift) {
    std::map<int, int> u;
    for (const auto& [k, x] : r.dims) u[k + shb.shift - sha.shift] = x;
    j["dims_unshifted"] = dims_json(u);
    t << "with the shifts removed (Ext^k(A[s], B[t]) = Ext^(k+t-s)(A, B)): " << dims_str(u) << "\n";
  }
  J bw = J::array();
  for (const auto& [w, dd] : r.by_weight) bw.push_back({{"weight", {w[0], w[1]}}, {"dims", dims_json(dd)}});
  j["by_weight"] = bw;
  t << "by torus weight:\n";
  for (const auto& [w, dd] : r.by_weight) t << "  " << weight_str(w) << ": " << dims_str(dd) << "\n";
  j["window"] = {{"box", r.window.to_string()}, {"margin", h.margin()}, {"enlargements", r.enlargements},
                 {"patterns", r.patterns}};
  t << "window " << r.window.to_string() << ", margin " << h.margin() << ", enlargements " << r.enlargements
    << ", slot patterns " << r.patterns << "\n";
  auto cf = closed_form(c.sc, sha, shb);
  if (cf) {
    bool agree = true;
    for (const auto& [k, x] : *cf) agree = agree && dim_at(r.dims, k) == x;
    j["closed_form"] = dims_json(*cf);
    j["agree"] = agree;
    t << "closed form: " << dims_str(*cf) << " -> " << (agree ? "agrees" : "DISAGREES") << "\n";
    if (!agree) c.failures.push_back({"Cech dimensions disagree with the closed form"});
  } else {
    j["closed_form"] = nullptr;
    j["agree"] = nullptr;
    t << "closed form: none for this pair\n";
  }
  s.text = t.str();
  return s;
}

std::string single_basis_name(int i, int k) {
  auto pw = [](const std::string& v, int e) -> std::string { return e == 0 ? "" : e == 1 ? v : v + "^" + std::to_string(e); };
  std::string x = pw("e0", i) + pw("e1", k - i);
  return x.empty() ? "1" : x;
}

Section ext_range(Context& c) {
  auto [lo, hi] = parse_range(c.opt.range);
  auto m = model_of(c.sc);
  Section s;
  J& j = s.data;
  std::ostringstream t;
  j["mode"] = "range";
  j["range"] = {lo, hi};
  bool all = true;
  J cells = J::array();
  if (c.sc.kind == "chain") {
    auto src = chain_sheaf(m, 0, 0);
    std::vector<std::vector<std::pair<int, int>>> grid;
    for (int a = lo; a <= hi; ++a) {
      grid.emplace_back();
      for (int b = lo; b <= hi; ++b) {
        c.progress("Hom(O_C12, O_C12(" + std::to_string(a) + "," + std::to_string(b) + "))");
        HomCohomology h(src, chain_sheaf(m, a, b), c.opt.window_margin, weight_progress(c));
        int got = dim_at(h.dims().dims, 0), want = hom_dimension(a, b);
        std::vector<std::string> basis;
        for (const auto& e : chain_hom_basis(a, b)) basis.push_back(e.name());
        cells.push_back({{"a", a}, {"b", b}, {"cech", got}, {"closed_form", want}, {"basis", basis}});
        grid.back().push_back({got, want});
        all = all && got == want;
      }
    }
    t << "dim Hom(O_C12, O_C12(a,b)) on " << c.sc.to_string() << ", Cech (rows a, columns b):\n     ";
    for (int b = lo; b <= hi; ++b) t << std::setw(4) << b;
    t << "\n";
    for (int a = lo; a <= hi; ++a) {
      t << std::setw(4) << a << " ";
      for (int b = lo; b <= hi; ++b) {
        auto [got, want] = grid[std::size_t(a - lo)][std::size_t(b - lo)];
        t << (got == want ? " " : "*") << std::setw(3) << got;
      }
      t << "\n";
    }
    t << "bases:\n";
    for (const auto& x : cells)
      if (!x["basis"].empty())
        t << "  (" << x["a"].get<int>() << "," << x["b"].get<int>() << "): "
          << join(x["basis"].get<std::vector<std::string>>(), ", ") << "\n";
  } else {
    auto src = curve_sheaf(m, 0);
    t << "dim Hom(O_C, O_C(k)) on " << c.sc.to_string() << ":\n";
    for (int k = lo; k <= hi; ++k) {
      c.progress("Hom(O_C, O_C(" + std::to_string(k) + "))");
      HomCohomology h(src, curve_sheaf(m, k), c.opt.window_margin, weight_progress(c));
      int got = dim_at(h.dims().dims, 0), want = std::max(k + 1, 0);
      std::vector<std::string> basis;
      for (int i = 0; i <= k; ++i) basis.push_back(single_basis_name(i, k));
      cells.push_back({{"k", k}, {"cech", got}, {"closed_form", want}, {"basis", basis}});
      all = all && got == want;
      t << "  k = " << std::setw(3) << k << ": " << got << (got == want ? "" : " (closed form " + std::to_string(want) + ")");
      if (!basis.empty()) t << "  [" << join(basis, ", ") << "]";
      t << "\n";
    }
  }
  j["cells"] = cells;
  j["agree"] = all;
  t << "closed form: " << (all ? "agrees everywhere" : "DISAGREES (marked *)") << "\n";
  if (!all) c.failures.push_back({"Cech Hom dimensions disagree with the closed form"});
  s.text = t.str();
  return s;
}

Section ext_section(Context& c) { return c.opt.pair.empty() ? ext_range(c) : ext_pair(c); }

// ---------------------------------------------------------------- hull

Poly product(std::size_t r, std::initializer_list<std::size_t> vars, const Rat& coef = 1) {
  Mon m(r, 0);
  for (auto v : vars) ++m[v];
  return poly_of(m, coef);
}

std::vector<Poly> wall_candidate(const DeformationProblem& P, int n) {
  std::vector<Poly> I;
  std::size_t r = P.nvars();
  for (int i = 1; i < n; ++i)
    I.push_back(poly_axpy(product(r, {std::size_t(i - 1), std::size_t(n)}), 1, product(r, {std::size_t(i), std::size_t(n + 1)})));
  return I;
}

std::vector<Poly> triple_candidate(const DeformationProblem& P, int n1, int n2) {
  std::vector<Poly> I;
  std::size_t r = P.nvars(), q1 = std::size_t(n1 - 2), rr = r - 1;
  for (int i = 1; i <= n1 - 2; ++i) I.push_back(product(r, {std::size_t(i - 1), q1, rr}));
  for (int j = 2; j <= n2 - 1; ++j) I.push_back(product(r, {std::size_t(n1 - 3 + j), rr}));
  return I;
}

std::string ideal_str(const std::vector<Poly>& g, const std::vector<std::string>& names) {
  std::vector<std::string> v;
  for (const auto& p : g) v.push_back(poly_to_string(p, names));
  return "(" + join(v, ", ") + ")";
}

struct InvariantCheck {
  J data;
  std::string text;
};

InvariantCheck invariants_of(const DeformationProblem& P, const HullState& s, int n) {
  std::size_t r = P.nvars();
  const int bound = 4;
  TruncatedIdeal J4(P.names, s.gens, bound);
  auto sub = invariant_subring(J4, P.weights, bound);
  std::vector<Poly> im{product(r, {0, std::size_t(n + 1)}, -1)};
  std::vector<std::string> nm{"s0"};
  std::vector<std::string> map{"s0 = -p1 q1"};
  for (int k = 1; k <= n; ++k) {
    im.push_back(product(r, {std::size_t(k - 1), std::size_t(n)}));
    nm.push_back("s" + std::to_string(k));
    map.push_back("s" + std::to_string(k) + " = p" + std::to_string(k) + " q0");
  }
  auto pres = present_invariants(J4, P.weights, nm, im, bound);
  auto match = compare_presentation(pres, hankel_rank_ideal(n));
  InvariantCheck out;
  std::vector<std::string> rel;
  for (const auto& p : pres.relations) rel.push_back(poly_to_string(p, nm));
  out.data = J{{"degree_bound", bound},
               {"generators", sub.gen_names},
               {"comparison_map", map},
               {"relations", rel},
               {"invariant_dims", pres.invariant_dims},
               {"surjective", match.surjective},
               {"relations_equal_hankel", match.relations_equal},
               {"singularity", match.ok() ? J("1/" + std::to_string(n) + "(1,1)") : J(nullptr)}};
  std::ostringstream t;
  t << "invariant ring up to degree " << bound << ": generators " << join(sub.gen_names, ", ") << "\n";
  t << "comparison map " << join(map, ", ") << "\n";
  t << "relations: " << (rel.empty() ? "none" : join(rel, ", ")) << "\n";
  t << "against the 2x2 minors of the 2 x " << n << " Hankel matrix: "
    << (match.ok() ? "equal, germ of a 1/" + std::to_string(n) + "(1,1) singularity"
                   : std::string(match.surjective ? "" : "not surjective; ") +
                         (match.relations_equal ? "" : "relations differ"))
    << "\n";
  out.text = t.str();
  return out;
}

struct HullRun {
  J data;
  std::string text;
  bool ok = true;
  std::optional<InvariantCheck> inv;
};

HullRun run_hull(Context& c, const std::string& title, const DeformationProblem& P, const std::vector<Poly>& cand,
                 int order) {
  HullRun out;
  std::ostringstream t;
  J& j = out.data;
  j["point"] = title;
  j["coordinates"] = P.names;
  std::vector<std::string> wt;
  for (const auto& w : P.weights) {
    std::vector<std::string> x;
    for (int v : w) x.push_back(std::to_string(v));
    wt.push_back(tuple(x));
  }
  j["torus_weights"] = wt;
  t << title << ": coordinates " << join(P.names, ", ") << "\n";
  auto s = start_hull(P);
  for (int q = 1; q < order && s.lifted; ++q) {
    c.progress(title + ": order " + std::to_string(q + 1));
    ExtendOptions eo;
    eo.lift = q + 1 < order;
    extend_order(P, s, eo);
  }
  J steps = J::array();
  for (const auto& st : s.steps) {
    std::string Jq = st.J.gens().empty() ? "m^" + std::to_string(st.order + 1)
                                         : ideal_str(st.J.gens(), P.names) + " + m^" + std::to_string(st.order + 1);
    steps.push_back({{"order", st.order},
                     {"J", Jq},
                     {"added", ideal_str(st.added, P.names)},
                     {"lifted_with_hints", st.lifted_with_hints},
                     {"lifted_by_search", st.lifted_by_search}});
    t << "  J_" << st.order << " = " << Jq;
    if (!st.added.empty()) t << "   new: " << ideal_str(st.added, P.names);
    if (st.lifted_with_hints || st.lifted_by_search)
      t << "   (lifts: " << st.lifted_with_hints << " displayed, " << st.lifted_by_search << " searched)";
    t << "\n";
  }
  j["steps"] = steps;
  bool failed = !s.diagnostic.empty() && s.diagnostic.rfind("order", 0) != 0;
  if (failed) {
    j["lift_failure"] = s.diagnostic;
    t << "  lift failure: " << s.diagnostic << "\n";
    out.ok = false;
    c.failures.push_back({title + ": " + s.diagnostic});
    out.text = t.str();
    return out;
  }
  int d = order + 1;
  auto v = stopping_check(s, cand, d, coordinate_weights(P));
  std::vector<std::string> cc;
  for (const auto& [a, p] : v.coordinate_change) cc.push_back(P.names[a] + " -> " + P.names[a] + " + " + poly_to_string(p, P.names));
  j["candidate"] = ideal_str(cand, P.names);
  j["stopping_check"] = {{"d", d},
                         {"intersection_ok", v.intersection_ok},
                         {"truncation_equal", v.truncation_equal},
                         {"coordinate_change", cc},
                         {"verdict", v.verdict()}};
  t << "  candidate " << (cand.empty() ? "(0)" : ideal_str(cand, P.names)) << ", stopping check at d = " << d << ": "
    << v.verdict();
  if (!cc.empty()) t << " after " << join(cc, ", ");
  t << "\n";
  out.text = t.str();
  return out;
}

Section hull_section(Context& c) {
  const auto& tg = c.opt.target;
  int order = c.opt.order, margin = c.opt.window_margin;
  Section s;
  J& j = s.data;
  std::ostringstream t;
  j["target"] = tg;
  j["order"] = order;
  J points = J::array();
  if (tg == "wall_point") {
    for (std::size_t i = 0; i < c.sc.r(); ++i) {
      int n = c.sc.n[i];
      std::string title = c.sc.r() == 1 ? "wall point of single(" + std::to_string(n) + ")"
                                        : "wall point of C" + std::to_string(i + 1) + " (n = " + std::to_string(n) + ")";
      c.progress(title + ": building the Thom-Whitney model");
      auto P = single_wall_problem(n, margin);
      auto run = run_hull(c, title, P, wall_candidate(P, n), order);
      if (run.ok) {
        auto s2 = start_hull(P);
        extend_order(P, s2);
        auto inv = invariants_of(P, s2, n);
        run.data["invariant_ring"] = inv.data;
        run.text += indent(inv.text, "  ");
      }
      points.push_back(run.data);
      t << run.text;
    }
  } else if (tg == "triple_point") {
    int n1 = c.sc.n[0], n2 = c.sc.n[1];
    c.progress("triple point: building the Thom-Whitney model");
    auto P = chain_triple_problem(n1, n2, margin);
    auto run = run_hull(c, "triple point of " + c.sc.to_string(), P, triple_candidate(P, n1, n2), order);
    points.push_back(run.data);
    t << run.text;
  } else {
    int n = c.sc.n[0];
    std::string which = tg.substr(tg.find(':') + 1);
    int k = which == "generic" ? 2 : std::stoi(which);
    std::vector<Rat> a(std::size_t(n), Rat(0));
    a[std::size_t(k - 1)] = 1;
    auto st = rank_stratify(XiClass::single(n, a));
    c.progress("chamber point: building the Thom-Whitney model");
    auto P = single_chamber_problem(n, k, margin);
    auto run = run_hull(c, "chamber point of single(" + std::to_string(n) + "), class y^" + std::to_string(k), P, {}, order);
    run.data["xi_stratum"] = st.to_string();
    run.data["tangent_dimension"] = P.nvars();
    bool smooth = run.ok && run.data["stopping_check"]["verdict"] == "hull-equals-candidate";
    run.data["smooth"] = smooth;
    points.push_back(run.data);
    t << run.text << "  xi stratum: " << st.to_string() << "; tangent dimension " << P.nvars() << "; "
      << (smooth ? "hull smooth of dimension " + std::to_string(P.nvars()) : std::string("smoothness not certified"))
      << "\n";
  }
  j["points"] = points;
  s.text = t.str();
  return s;
}

// ---------------------------------------------------------------- invariants

Section invariants_section(Context& c) {
  Section s;
  std::ostringstream t;
  J points = J::array();
  for (std::size_t i = 0; i < c.sc.r(); ++i) {
    int n = c.sc.n[i];
    c.progress("invariants at the wall point of C" + std::to_string(i + 1));
    auto P = single_wall_problem(n, c.opt.window_margin);
    auto h = start_hull(P);
    extend_order(P, h);
    auto inv = invariants_of(P, h, n);
    J x{{"curve", "C" + std::to_string(i + 1)}, {"n", n}};
    x.update(inv.data);
    points.push_back(x);
    t << "C" << i + 1 << " (n = " << n << "):\n" << indent(inv.text, "  ");
    if (!inv.data["singularity"].is_string()) c.failures.push_back({"invariant ring differs from the Hankel ideal"});
  }
  s.data["points"] = points;
  s.text = t.str();
  return s;
}

// ---------------------------------------------------------------- selftest

Section selftest_section(Context& c) {
  AcceptanceOptions o;
  o.margin = c.opt.window_margin;
  o.progress = [&c](const std::string& s) { c.progress(s); };
  Section s;
  std::ostringstream t;
  J crit = J::array();
  bool env = false, fail = false;
  for (const auto& r : run_acceptance(o)) {
    c.progress("criterion " + std::to_string(r.id) + ": " + r.status + " in " + std::to_string(r.seconds) + " s");
    crit.push_back({{"id", r.id}, {"title", r.title}, {"status", r.status}, {"detail", r.detail}});
    t << "[" << r.status << "] " << r.id << ". " << r.title;
    if (!r.detail.empty()) t << " -- " << r.detail;
    t << "\n";
    env = env || r.status == "environment-limited";
    fail = fail || r.status == "fail";
  }
  std::string overall = fail ? "fail" : env ? "environment-limited" : "pass";
  s.data["criteria"] = crit;
  s.data["status"] = overall;
  t << "overall: " << overall << "\n";
  if (overall != "pass") c.failures.push_back({"self-test " + overall});
  s.text = t.str();
  return s;
}

// ---------------------------------------------------------------- driver

int run(Context& c) {
  try {
    resolve(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << locate(c, e.field) << ": " << e.what() << "\n";
    return 2;
  }
  std::vector<std::pair<std::string, Section>> sections;
  try {
    const auto& cmd = c.opt.command;
    if (cmd == "walls" || cmd == "report") sections.emplace_back("walls", walls_section(c));
    if (cmd == "ext" || (cmd == "report" && c.sc.kind != "disjoint")) sections.emplace_back("ext", ext_section(c));
    if (cmd == "hull" || (cmd == "report" && !c.skip_hull)) sections.emplace_back("hull", hull_section(c));
    if (cmd == "invariants") sections.emplace_back("invariants", invariants_section(c));
    if (cmd == "selftest") sections.emplace_back("selftest", selftest_section(c));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << locate(c, e.field) << ": " << e.what() << "\n";
    return 2;
  } catch (const WindowTooSmall& e) {
    std::cerr << "computation failed: weight window too small at weight " << weight_str(e.weight) << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  }

  std::string body;
  if (c.opt.format == "json") {
    J doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = c.config;
    doc["config_hash"] = c.hash;
    J arr = J::array();
    for (auto& [kind, s] : sections) {
      J x{{"kind", kind}, {"config_hash", c.hash}};
      x.update(s.data);
      arr.push_back(x);
    }
    doc["sections"] = arr;
    body = doc.dump(2) + "\n";
  } else {
    body = "stabwc " + c.opt.command + " (schema " + std::to_string(kSchemaVersion) + ", config " + c.hash + ")\n";
    body += "config: " + c.config.dump() + "\n";
    for (auto& [kind, s] : sections) body += "\n== " + kind + " [config " + c.hash + "] ==\n" + s.text;
  }
  if (c.opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(c.opt.out, std::ios::binary);
    if (!f) {
      std::cerr << "config error: " << locate(c, "out") << ": cannot write " << c.opt.out << "\n";
      return 2;
    }
    f << body;
  }
  for (const auto& f : c.failures) std::cerr << "computation failed: " << f.message << "\n";
  return c.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Context c;
  for (int i = 0; i < argc; ++i) c.argv.emplace_back(argv[i]);
  auto& o = c.opt;
  CLI::App app{"exact wall-crossing computations near surface contractions"};
  app.set_config("--config", "", "config file (TOML or INI key = value); flags override it")->check(CLI::ExistingFile);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--scenario", o.scenario, "single:n, disjoint:n1,..,nr or chain:n1,n2");
  app.add_option("--target", o.target, "hull target: wall_point, triple_point, chamber_point:generic, chamber_point:k");
  app.add_option("--range", o.range, "ext range a..b");
  app.add_option("--pair", o.pair, "ext pair A,B (O_X, OC(k), OC12(a,b), E, point; [1] shifts)");
  app.add_option("--order", o.order, "hull truncation order");
  app.add_option("--window-margin", o.window_margin, "weight-window margin (-1: default, 0: fixed window)");
  app.add_option("--format", o.format, "text or json");
  app.add_option("--out", o.out, "write the report to this path");
  app.add_option("--beta", o.beta, "beta.C_i pairings, comma separated rationals");
  app.add_option("--eta-squared", o.eta_squared, "eta^2 (positive rational)");
  app.add_option("--beta-eta", o.beta_eta, "beta.eta (rational)");
  app.add_flag("--quiet", o.quiet, "no progress on stderr");
  for (const char* name : {"walls", "ext", "hull", "invariants", "report", "selftest"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&o, name] { o.command = name; });
  }
  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
    if (auto* cfg = app.get_option("--config"); cfg->count()) o.config_file = cfg->as<std::string>();
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return run(c);
}
