#pragma once

#include "stabwc/algebra.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stabwc {

// Charts are affine toric charts whose two coordinates are characters of a
// fixed rank-2 torus.  Every monomial is stored by its global character, so
// transport between charts is a change of basis in Z^2.

struct Mono {
  Rat c = 1;
  Weight e{0, 0};
};

struct MEntry {
  int row = 0, col = 0;
  Rat c = 1;
  Weight e{0, 0};
};

using MonoMatrix = std::vector<MEntry>;

inline int popcount(int m) { return __builtin_popcount(unsigned(m)); }

inline std::vector<int> mask_charts(int m) {
  std::vector<int> r;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) r.push_back(i);
  return r;
}

inline int first_chart(int m) { return __builtin_ctz(unsigned(m)); }

struct ToricModel {
  std::string tag;
  std::vector<int> n;
  int nchart = 0;
  std::vector<std::array<std::string, 2>> coord_names;
  std::vector<std::array<Weight, 2>> coord_chars;
  // For a chart mask I, which coordinates of chart first(I) are inverted on U_I.
  std::map<int, std::array<bool, 2>> inverted;
  // Local equation (character) of each divisor on each chart; {0,0} where it misses.
  std::map<std::string, std::vector<Weight>> divisors;

  std::string label() const {
    std::string s = tag + ":";
    for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
    return s;
  }

  std::vector<int> masks_of_size(int k) const {
    std::vector<int> r;
    for (int m = 1; m < (1 << nchart); ++m)
      if (popcount(m) == k) r.push_back(m);
    return r;
  }

  std::array<int, 2> local_exps(int chart, Weight g) const {
    const auto& c = coord_chars.at(chart);
    int det = c[0][0] * c[1][1] - c[1][0] * c[0][1];
    int e1 = (g[0] * c[1][1] - g[1] * c[1][0]) * det;
    int e2 = (c[0][0] * g[1] - c[0][1] * g[0]) * det;
    return {e1, e2};
  }

  Weight global(int chart, std::array<int, 2> e) const {
    const auto& c = coord_chars.at(chart);
    return e[0] * c[0] + e[1] * c[1];
  }

  bool regular(int mask, Weight g) const {
    int i0 = first_chart(mask);
    auto e = local_exps(i0, g);
    const auto& inv = inverted.at(mask);
    return (inv[0] || e[0] >= 0) && (inv[1] || e[1] >= 0);
  }

  bool unit_on(int mask, Weight g) const { return regular(mask, g) && regular(mask, -g); }

  // Exponents of a chart-i monomial written in chart-j coordinates.
  std::array<int, 2> transport(int i, int j, std::array<int, 2> e) const {
    return local_exps(j, global(i, e));
  }

  Mono parse_mono(const std::string& text) const;
  std::string format(int chart, Weight g) const;
  std::string format(int chart, const Mono& m) const;
};

inline ToricModel build_model(const std::string& tag, const std::vector<int>& n) {
  ToricModel m;
  m.tag = tag;
  m.n = n;
  if (tag == "single") {
    if (n.size() != 1 || n[0] < 1) throw std::invalid_argument("single model needs n >= 1");
    int k = n[0];
    m.nchart = 2;
    m.coord_names = {{{"x", "u"}}, {{"y", "v"}}};
    m.coord_chars = {{{Weight{1, 0}, Weight{0, 1}}}, {{Weight{-1, 0}, Weight{k, 1}}}};
    m.inverted = {{1, {false, false}}, {2, {false, false}}, {3, {true, false}}};
    m.divisors["C"] = {Weight{0, 1}, Weight{k, 1}};
    m.divisors["L"] = {Weight{1, 0}, Weight{0, 0}};
  } else if (tag == "chain") {
    if (n.size() != 2 || n[0] < 2 || n[1] < 2) throw std::invalid_argument("chain model needs n1, n2 >= 2");
    int a = n[0], b = n[1];
    m.nchart = 3;
    m.coord_names = {{{"x", "u"}}, {{"y", "v"}}, {{"z", "w"}}};
    m.coord_chars = {{{Weight{1, 0}, Weight{0, 1}}},
                     {{Weight{-1, 0}, Weight{a, 1}}},
                     {{Weight{a * b - 1, b}, Weight{-a, -1}}}};
    m.inverted = {{1, {false, false}}, {2, {false, false}}, {4, {false, false}},
                  {3, {true, false}},  {5, {true, true}},   {6, {false, true}},
                  {7, {true, true}}};
    m.divisors["C1"] = {Weight{0, 1}, Weight{a, 1}, Weight{0, 0}};
    m.divisors["C2"] = {Weight{0, 0}, Weight{-1, 0}, Weight{a * b - 1, b}};
    m.divisors["L"] = {Weight{0, 0}, Weight{0, 0}, Weight{-a, -1}};
    m.divisors["L1"] = {Weight{1, 0}, Weight{0, 0}, Weight{0, 0}};
  } else {
    throw std::invalid_argument("unknown model tag: " + tag);
  }
  for (int c = 0; c < m.nchart; ++c) {
    const auto& ch = m.coord_chars[c];
    int det = ch[0][0] * ch[1][1] - ch[1][0] * ch[0][1];
    if (det != 1 && det != -1) throw std::logic_error("chart basis is not unimodular");
  }
  return m;
}

inline Mono ToricModel::parse_mono(const std::string& text) const {
  Mono r;
  r.c = 1;
  r.e = {0, 0};
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
  };
  auto read_int = [&]() {
    int sign = 1;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) sign = text[i++] == '-' ? -1 : 1;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      throw std::invalid_argument("bad integer in monomial: " + text);
    long v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = 10 * v + (text[i++] - '0');
    return sign * v;
  };
  skip();
  if (i < text.size() && text[i] == '-') {
    r.c = -1;
    ++i;
  }
  skip();
  if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    long num = read_int();
    long den = 1;
    if (i < text.size() && text[i] == '/') {
      ++i;
      den = read_int();
    }
    r.c *= rat(num, den);
  }
  for (;;) {
    skip();
    if (i >= text.size()) break;
    std::string name;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) name += text[i++];
    if (name.empty()) throw std::invalid_argument("bad monomial: " + text);
    int p = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      p = int(read_int());
    }
    bool found = false;
    for (int c = 0; c < nchart && !found; ++c)
      for (int k = 0; k < 2; ++k)
        if (coord_names[c][k] == name) {
          r.e = r.e + p * coord_chars[c][k];
          found = true;
        }
    if (!found) throw std::invalid_argument("unknown coordinate '" + name + "' in " + text);
  }
  return r;
}

inline std::string ToricModel::format(int chart, Weight g) const {
  auto e = local_exps(chart, g);
  std::string s;
  for (int k = 0; k < 2; ++k) {
    if (e[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += coord_names[chart][k];
    if (e[k] != 1) s += "^" + std::to_string(e[k]);
  }
  return s.empty() ? "1" : s;
}

inline std::string ToricModel::format(int chart, const Mono& m) const {
  std::string body = format(chart, m.e);
  if (m.c == 1) return body;
  if (m.c == -1) return "-" + body;
  return m.c.get_str() + (body == "1" ? "" : "*" + body);
}

// Line bundles O(sum a_D D): local frame on chart i is the character
// m_i = -sum a_D eq_i(D); transition g_j = f_ij g_i with f_ij = m_i / m_j.

struct LineBundle {
  std::string name;
  std::vector<Weight> frame;
  std::map<std::pair<int, int>, Mono> transitions;
};

inline LineBundle line_bundle(const ToricModel& m, const std::vector<std::pair<std::string, int>>& divisor,
                              std::string name = {}) {
  LineBundle lb;
  lb.frame.assign(m.nchart, Weight{0, 0});
  if (name.empty()) {
    name = "O(";
    bool first = true;
    for (const auto& [d, a] : divisor) {
      if (a == 0) continue;
      if (a > 0 && !first) name += "+";
      if (a == -1)
        name += "-";
      else if (a != 1)
        name += std::to_string(a);
      name += d;
      first = false;
    }
    if (first) name += "0";
    name += ")";
  }
  lb.name = name;
  for (const auto& [d, a] : divisor) {
    const auto& eq = m.divisors.at(d);
    for (int i = 0; i < m.nchart; ++i) lb.frame[i] = lb.frame[i] - a * eq[i];
  }
  for (int i = 0; i < m.nchart; ++i)
    for (int j = i + 1; j < m.nchart; ++j) lb.transitions[{i, j}] = Mono{1, lb.frame[i] - lb.frame[j]};
  return lb;
}

inline bool check_cocycle(const ToricModel& m, const LineBundle& b) {
  for (const auto& [ij, f] : b.transitions) {
    if (f.c == 0 || !m.unit_on((1 << ij.first) | (1 << ij.second), f.e)) return false;
  }
  for (int i = 0; i < m.nchart; ++i)
    for (int j = i + 1; j < m.nchart; ++j)
      for (int k = j + 1; k < m.nchart; ++k) {
        const Mono& a = b.transitions.at({i, j});
        const Mono& c = b.transitions.at({j, k});
        const Mono& d = b.transitions.at({i, k});
        if (a.c * c.c != d.c || a.e + c.e != d.e) return false;
      }
  return true;
}

// Products of monomial matrices (entries are single monomials or absent).
inline MonoMatrix mono_mul(const MonoMatrix& a, const MonoMatrix& b) {
  std::map<std::pair<int, int>, std::map<Weight, Rat>> acc;
  for (const auto& x : a)
    for (const auto& y : b)
      if (x.col == y.row) {
        auto& slot = acc[{x.row, y.col}][x.e + y.e];
        slot += x.c * y.c;
      }
  MonoMatrix r;
  for (const auto& [rc, terms] : acc) {
    int nz = 0;
    for (const auto& [e, c] : terms)
      if (c != 0) {
        r.push_back({rc.first, rc.second, c, e});
        ++nz;
      }
    if (nz > 1) throw std::logic_error("matrix product entry is not a monomial");
  }
  return r;
}

inline bool mono_equal(MonoMatrix a, MonoMatrix b) {
  auto key = [](const MEntry& x) { return std::make_tuple(x.row, x.col, x.e[0], x.e[1]); };
  auto cmp = [&](const MEntry& x, const MEntry& y) { return key(x) < key(y); };
  a.erase(std::remove_if(a.begin(), a.end(), [](const MEntry& x) { return x.c == 0; }), a.end());
  b.erase(std::remove_if(b.begin(), b.end(), [](const MEntry& x) { return x.c == 0; }), b.end());
  std::sort(a.begin(), a.end(), cmp);
  std::sort(b.begin(), b.end(), cmp);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (key(a[i]) != key(b[i]) || a[i].c != b[i].c) return false;
  return true;
}

// A locally free term of a complex: rank, trivializing frames and transitions
// T_ij (both orders) with g_j = T_ij g_i on U_ij.
struct Term {
  int deg = 0;
  int rank = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<Weight>> natural;  // [chart][k] frame characters of the summands
  std::map<std::pair<int, int>, MonoMatrix> trans;
  std::vector<std::vector<Weight>> frame;  // [chart][k] torus weights of frames
};

struct BundleComplex {
  std::string name;
  std::shared_ptr<const ToricModel> model;
  std::vector<Term> terms;  // ascending, consecutive degrees
  std::map<int, std::vector<MonoMatrix>> diff;  // diff[deg][chart]: E^deg -> E^{deg+1}

  int min_deg() const { return terms.front().deg; }
  int max_deg() const { return terms.back().deg; }
  bool has(int d) const { return !terms.empty() && d >= min_deg() && d <= max_deg(); }
  const Term& term(int d) const { return terms.at(std::size_t(d - min_deg())); }
  int rank(int d) const { return has(d) ? term(d).rank : 0; }
  const MonoMatrix& d_at(int deg, int chart) const {
    static const MonoMatrix empty;
    auto it = diff.find(deg);
    if (it == diff.end()) return empty;
    return it->second.at(std::size_t(chart));
  }
  const MonoMatrix& T(int d, int i, int j) const { return term(d).trans.at({i, j}); }
};

inline Term sum_term(const ToricModel& m, int deg, const std::vector<LineBundle>& parts) {
  Term t;
  t.deg = deg;
  t.rank = int(parts.size());
  t.natural.assign(m.nchart, {});
  for (const auto& p : parts) {
    t.labels.push_back(p.name);
    for (int i = 0; i < m.nchart; ++i) t.natural[i].push_back(p.frame[i]);
  }
  for (int i = 0; i < m.nchart; ++i)
    for (int j = 0; j < m.nchart; ++j) {
      if (i == j) continue;
      MonoMatrix mm;
      for (int k = 0; k < t.rank; ++k) mm.push_back({k, k, 1, parts[k].frame[i] - parts[k].frame[j]});
      t.trans[{i, j}] = mm;
    }
  return t;
}

// Rank-2 extension 0 -> sub -> V -> quot -> 0 with T_ij = [[A, A*lambda_ij], [0, D]],
// lambda a Cech 1-cochain of Hom(quot, sub) written in chart-i frames.
inline Term extension_term(const ToricModel& m, int deg, const LineBundle& sub, const LineBundle& quot,
                           const std::map<std::pair<int, int>, Mono>& lambda) {
  Term t = sum_term(m, deg, {sub, quot});
  t.labels = {sub.name, quot.name};
  for (int i = 0; i < m.nchart; ++i)
    for (int j = i + 1; j < m.nchart; ++j) {
      auto it = lambda.find({i, j});
      if (it == lambda.end() || it->second.c == 0) continue;
      Weight A = sub.frame[i] - sub.frame[j];
      Weight D = quot.frame[i] - quot.frame[j];
      t.trans[{i, j}].push_back({0, 1, it->second.c, A + it->second.e});
      t.trans[{j, i}].push_back({0, 1, -it->second.c, it->second.e - D});
    }
  return t;
}

inline bool check_cocycle(const ToricModel& m, const Term& t) {
  for (int i = 0; i < m.nchart; ++i)
    for (int j = 0; j < m.nchart; ++j) {
      if (i == j) continue;
      int mask = (1 << i) | (1 << j);
      for (const auto& x : t.trans.at({i, j}))
        if (!m.regular(mask, x.e)) return false;
      MonoMatrix id;
      for (int k = 0; k < t.rank; ++k) id.push_back({k, k, 1, {0, 0}});
      if (!mono_equal(mono_mul(t.trans.at({j, i}), t.trans.at({i, j})), id)) return false;
    }
  for (int i = 0; i < m.nchart; ++i)
    for (int j = i + 1; j < m.nchart; ++j)
      for (int k = j + 1; k < m.nchart; ++k)
        if (!mono_equal(mono_mul(t.trans.at({j, k}), t.trans.at({i, j})), t.trans.at({i, k}))) return false;
  return true;
}

// Assign torus weights to all frames so that every transition and differential
// entry is homogeneous; entry weight = weight(source frame) - weight(target frame).
inline void assign_frames(BundleComplex& c) {
  const ToricModel& m = *c.model;
  using Node = std::tuple<int, int, int>;  // deg, k, chart
  std::map<Node, Weight> w;
  std::map<Node, std::vector<std::pair<Node, Weight>>> adj;  // neighbour, w(nb) = w(node) + delta
  auto link = [&](Node src, Node tgt, Weight e) {
    adj[src].push_back({tgt, -e});
    adj[tgt].push_back({src, e});
  };
  for (const auto& t : c.terms)
    for (const auto& [ij, mm] : t.trans)
      for (const auto& x : mm) link({t.deg, x.col, ij.first}, {t.deg, x.row, ij.second}, x.e);
  for (const auto& [deg, per_chart] : c.diff)
    for (int i = 0; i < m.nchart; ++i)
      for (const auto& x : per_chart[i]) link({deg, x.col, i}, {deg + 1, x.row, i}, x.e);
  for (auto it = c.terms.rbegin(); it != c.terms.rend(); ++it)
    for (int k = 0; k < it->rank; ++k)
      for (int i = 0; i < m.nchart; ++i) {
        Node seed{it->deg, k, i};
        if (w.count(seed)) continue;
        w[seed] = it->natural[i][k];
        std::deque<Node> q{seed};
        while (!q.empty()) {
          Node a = q.front();
          q.pop_front();
          for (const auto& [b, delta] : adj[a]) {
            Weight wb = w[a] + delta;
            auto f = w.find(b);
            if (f == w.end()) {
              w[b] = wb;
              q.push_back(b);
            } else if (f->second != wb) {
              throw std::logic_error("complex " + c.name + " is not torus-homogeneous");
            }
          }
        }
      }
  for (auto& t : c.terms) {
    t.frame.assign(m.nchart, std::vector<Weight>(t.rank));
    for (int k = 0; k < t.rank; ++k)
      for (int i = 0; i < m.nchart; ++i) t.frame[i][k] = w.at({t.deg, k, i});
  }
}

inline bool check_d_squared(const BundleComplex& c) {
  for (int i = 0; i < c.model->nchart; ++i)
    for (const auto& [deg, per] : c.diff) {
      auto next = c.diff.find(deg + 1);
      if (next == c.diff.end()) continue;
      if (!mono_mul(next->second[i], per[i]).empty()) return false;
    }
  return true;
}

// Differentials commute with transitions: T^{d+1}_ij d_i = d_j T^d_ij.
inline bool check_transition_compat(const BundleComplex& c) {
  int N = c.model->nchart;
  for (const auto& [deg, per] : c.diff)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        auto lhs = mono_mul(c.T(deg + 1, i, j), per[i]);
        auto rhs = mono_mul(per[j], c.T(deg, i, j));
        if (!mono_equal(lhs, rhs)) return false;
      }
  return true;
}

inline bool check_complex(const BundleComplex& c) {
  for (const auto& t : c.terms)
    if (!check_cocycle(*c.model, t)) return false;
  for (const auto& [deg, per] : c.diff)
    for (int i = 0; i < c.model->nchart; ++i)
      for (const auto& x : per[i])
        if (!c.model->regular(1 << i, x.e)) return false;
  return check_d_squared(c) && check_transition_compat(c);
}

inline BundleComplex finish_complex(BundleComplex c) {
  assign_frames(c);
  if (!check_complex(c)) throw std::logic_error("ill-formed complex " + c.name);
  return c;
}

inline BundleComplex shift(const BundleComplex& c, int k, const std::string& name) {
  BundleComplex r = c;
  r.name = name;
  for (auto& t : r.terms) t.deg -= k;
  r.diff.clear();
  Rat sign = (k % 2 == 0) ? 1 : -1;
  for (const auto& [deg, per] : c.diff) {
    auto p = per;
    for (auto& mm : p)
      for (auto& x : mm) x.c *= sign;
    r.diff[deg - k] = p;
  }
  return finish_complex(r);
}

using Divisor = std::vector<std::pair<std::string, int>>;

inline Divisor operator+(Divisor a, const Divisor& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// [O(-D) (x) M -> M] resolving O_D (x) M.
inline BundleComplex two_term(std::shared_ptr<const ToricModel> m, const Divisor& D, const Divisor& twist,
                              const std::string& name) {
  Divisor neg;
  for (const auto& [d, a] : D) neg.push_back({d, -a});
  BundleComplex c;
  c.name = name;
  c.model = m;
  c.terms = {sum_term(*m, -1, {line_bundle(*m, neg + twist)}), sum_term(*m, 0, {line_bundle(*m, twist)})};
  std::vector<MonoMatrix> d(m->nchart);
  auto src = line_bundle(*m, neg + twist), tgt = line_bundle(*m, twist);
  for (int i = 0; i < m->nchart; ++i) d[i] = {{0, 0, 1, src.frame[i] - tgt.frame[i]}};
  c.diff[-1] = d;
  return finish_complex(c);
}

inline std::string twist_suffix(const std::vector<int>& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + ")";
}

inline BundleComplex structure_sheaf(std::shared_ptr<const ToricModel> m) {
  BundleComplex c;
  c.name = "O_X";
  c.model = m;
  c.terms = {sum_term(*m, 0, {line_bundle(*m, {}, "O")})};
  return finish_complex(c);
}

inline BundleComplex curve_sheaf(std::shared_ptr<const ToricModel> m, int k) {
  if (m->tag != "single") throw std::invalid_argument("O_C(k) needs the single model");
  return two_term(m, {{"C", 1}}, {{"L", k}}, k == 0 ? "O_C" : "O_C" + twist_suffix({k}));
}

inline BundleComplex chain_sheaf(std::shared_ptr<const ToricModel> m, int a, int b) {
  if (m->tag != "chain") throw std::invalid_argument("O_C12(a,b) needs the chain model");
  return two_term(m, {{"C1", 1}, {"C2", 1}}, {{"L1", a}, {"L", b}}, "O_C12" + twist_suffix({a, b}));
}

// Koszul resolution of the torus-fixed point where L meets the curve.
inline BundleComplex point_sheaf(std::shared_ptr<const ToricModel> m) {
  std::string C = m->tag == "single" ? "C" : "C2";
  auto lb = [&](const Divisor& d) { return line_bundle(*m, d); };
  BundleComplex c;
  c.name = "O_pt";
  c.model = m;
  auto top = lb({{C, -1}, {"L", -1}});
  auto sL = lb({{"L", -1}}), sC = lb({{C, -1}});
  auto o = lb({});
  c.terms = {sum_term(*m, -2, {top}), sum_term(*m, -1, {sL, sC}), sum_term(*m, 0, {o})};
  std::vector<MonoMatrix> d2(m->nchart), d1(m->nchart);
  for (int i = 0; i < m->nchart; ++i) {
    d2[i] = {{0, 0, 1, top.frame[i] - sL.frame[i]}, {1, 0, -1, top.frame[i] - sC.frame[i]}};
    d1[i] = {{0, 0, 1, sL.frame[i] - o.frame[i]}, {0, 1, 1, sC.frame[i] - o.frame[i]}};
  }
  c.diff[-2] = d2;
  c.diff[-1] = d1;
  return finish_complex(c);
}

// [O(-L-D) -> V -> O] where V extends O(-D) by O(-L) with class lambda and D is
// the whole curve configuration, d^{-2} = (sign * eq_D, 0)^t and d^{-1} = (0, eq_D).
// lambda = 0 gives O_D + O_D(0,-1)[1]; the two signs give isomorphic complexes
// (negate the frame of O(-L), which also negates lambda).
inline BundleComplex extension_complex(std::shared_ptr<const ToricModel> m,
                                       const std::map<std::pair<int, int>, Mono>& lambda,
                                       const std::string& name, int sign = -1) {
  Divisor D = m->tag == "single" ? Divisor{{"C", 1}} : Divisor{{"C1", 1}, {"C2", 1}};
  Divisor negD;
  for (const auto& [d, a] : D) negD.push_back({d, -a});
  auto top = line_bundle(*m, negD + Divisor{{"L", -1}});
  auto sub = line_bundle(*m, {{"L", -1}});
  auto quot = line_bundle(*m, negD);
  auto o = line_bundle(*m, {}, "O");
  BundleComplex c;
  c.name = name;
  c.model = m;
  c.terms = {sum_term(*m, -2, {top}), extension_term(*m, -1, sub, quot, lambda), sum_term(*m, 0, {o})};
  std::vector<MonoMatrix> d2(m->nchart), d1(m->nchart);
  for (int i = 0; i < m->nchart; ++i) {
    d2[i] = {{0, 0, sign, top.frame[i] - sub.frame[i]}};
    d1[i] = {{0, 1, 1, quot.frame[i] - o.frame[i]}};
  }
  c.diff[-2] = d2;
  c.diff[-1] = d1;
  return finish_complex(c);
}

inline BundleComplex split_E(std::shared_ptr<const ToricModel> m) {
  std::string nm = m->tag == "single" ? "O_C+O_C(-1)[1]" : "O_C12+O_C12(0,-1)[1]";
  return extension_complex(m, {}, nm);
}

// Names accepted: O_X, OC, OC(k), OC(k)[1], OC12(a,b), OC12(a,b)[1], point, E.
inline BundleComplex resolve_sheaf(const std::string& spec, std::shared_ptr<const ToricModel> m) {
  std::string s;
  for (char ch : spec)
    if (ch != '_' && ch != ' ') s += ch;
  int sh = 0;
  if (s.size() >= 3 && s.substr(s.size() - 3) == "[1]") {
    sh = 1;
    s = s.substr(0, s.size() - 3);
  }
  auto ints = [&](const std::string& body) {
    std::vector<int> r;
    std::string cur;
    for (char ch : body) {
      if (ch == ',') {
        r.push_back(std::stoi(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) r.push_back(std::stoi(cur));
    return r;
  };
  BundleComplex c;
  if (s == "OX" || s == "O") {
    c = structure_sheaf(m);
  } else if (s == "point" || s == "Opt") {
    c = point_sheaf(m);
  } else if (s == "E") {
    c = split_E(m);
  } else if (s.rfind("OC12", 0) == 0) {
    std::vector<int> k{0, 0};
    if (s.size() > 4) {
      if (s[4] != '(' || s.back() != ')') throw std::invalid_argument("bad sheaf spec: " + spec);
      k = ints(s.substr(5, s.size() - 6));
      if (k.size() != 2) throw std::invalid_argument("O_C12 needs two twists: " + spec);
    }
    c = chain_sheaf(m, k[0], k[1]);
  } else if (s.rfind("OC", 0) == 0) {
    int k = 0;
    if (s.size() > 2) {
      if (s[2] != '(' || s.back() != ')') throw std::invalid_argument("bad sheaf spec: " + spec);
      auto v = ints(s.substr(3, s.size() - 4));
      if (v.size() != 1) throw std::invalid_argument("O_C needs one twist: " + spec);
      k = v[0];
    }
    c = curve_sheaf(m, k);
  } else {
    throw std::invalid_argument("unknown sheaf: " + spec);
  }
  if (sh) c = shift(c, 1, c.name + "[1]");
  return c;
}

inline std::shared_ptr<const ToricModel> make_model(const std::string& tag, const std::vector<int>& n) {
  return std::make_shared<const ToricModel>(build_model(tag, n));
}

}  // namespace stabwc
