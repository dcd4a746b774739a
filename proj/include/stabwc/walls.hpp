#pragma once

#include "stabwc/mchull.hpp"

#include <sstream>

namespace stabwc {

// single:n, disjoint:n1,..,nr or chain:n1,n2.
struct ScenarioSpec {
  std::string kind;
  std::vector<int> n;

  static ScenarioSpec parse(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("scenario '" + s + "': expected kind:n1,..");
    ScenarioSpec sc;
    sc.kind = s.substr(0, colon);
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok.empty()) throw std::invalid_argument("scenario '" + s + "': bad integer '" + tok + "'");
      sc.n.push_back(v);
    }
    sc.validate();
    return sc;
  }

  void validate() const {
    if (kind != "single" && kind != "disjoint" && kind != "chain")
      throw std::invalid_argument("scenario kind '" + kind + "' is not single, disjoint or chain");
    if (n.empty()) throw std::invalid_argument("scenario needs at least one curve");
    if (kind == "single" && n.size() != 1) throw std::invalid_argument("single takes one n");
    if (kind == "chain" && n.size() != 2) throw std::invalid_argument("chain takes two n");
    for (int x : n)
      if (x < 1) throw std::invalid_argument("n_i must be >= 1");
  }

  std::size_t r() const { return n.size(); }

  std::string to_string() const {
    std::string s = kind + ":";
    for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
    return s;
  }
};

// Leading principal minors of a rational square matrix.
inline std::vector<Rat> leading_minors(std::vector<std::vector<Rat>> m) {
  std::size_t n = m.size();
  std::vector<Rat> out;
  for (std::size_t k = 1; k <= n; ++k) {
    auto a = m;
    Rat det = 1;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t p = c;
      while (p < k && a[p][c] == 0) ++p;
      if (p == k) {
        det = 0;
        break;
      }
      if (p != c) {
        std::swap(a[p], a[c]);
        det = -det;
      }
      det *= a[c][c];
      for (std::size_t r = c + 1; r < k; ++r) {
        Rat f = a[r][c] / a[c][c];
        for (std::size_t j = c; j < k; ++j) a[r][j] -= f * a[c][j];
      }
    }
    out.push_back(det);
  }
  return out;
}

// Intersection data on span{C_1, .., C_r, f*eta}; f*eta.C_i = 0.
struct IntersectionDatum {
  std::vector<std::vector<int>> gram;
  std::vector<Rat> beta_c;
  Rat eta_sq = 1;
  Rat beta_eta = 0;

  std::size_t r() const { return gram.size(); }

  void validate() const {
    std::size_t n = r();
    if (n == 0) throw std::invalid_argument("intersection datum: no curves");
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (gram[i].size() != n) throw std::invalid_argument("intersection datum: Gram matrix not square");
      for (std::size_t j = 0; j < n; ++j) {
        if (gram[i][j] != gram[j][i]) throw std::invalid_argument("intersection datum: Gram matrix not symmetric");
        g[i][j] = gram[i][j];
      }
    }
    auto mins = leading_minors(g);
    for (std::size_t k = 0; k < n; ++k)
      if ((k % 2 == 0 && mins[k] >= 0) || (k % 2 == 1 && mins[k] <= 0))
        throw std::invalid_argument("intersection datum: Gram matrix not negative definite");
    if (beta_c.size() != n) throw std::invalid_argument("intersection datum: need one beta pairing per curve");
    if (eta_sq <= 0) throw std::invalid_argument("intersection datum: (f*eta)^2 must be positive");
  }

  QMatrix gram_matrix() const {
    QMatrix m(r(), r());
    for (std::size_t i = 0; i < r(); ++i)
      for (std::size_t j = 0; j < r(); ++j) m.set(i, j, gram[i][j]);
    return m;
  }

  // Pairing of two classes written on C_1, .., C_r, f*eta.
  Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
    Rat s = a[r()] * b[r()] * eta_sq;
    for (std::size_t i = 0; i < r(); ++i)
      for (std::size_t j = 0; j < r(); ++j) s += a[i] * b[j] * gram[i][j];
    return s;
  }

  // The class in span{C_i, f*eta} with the given pairings.
  std::vector<Rat> beta_class() const {
    auto x = solve_linear(gram_matrix(), beta_c);
    if (!x) throw std::invalid_argument("intersection datum: singular Gram matrix");
    x->push_back(beta_eta / eta_sq);
    return *x;
  }

  static IntersectionDatum for_scenario(const ScenarioSpec& sc) {
    IntersectionDatum d;
    std::size_t r = sc.r();
    d.gram.assign(r, std::vector<int>(r, 0));
    for (std::size_t i = 0; i < r; ++i) d.gram[i][i] = -sc.n[i];
    if (sc.kind == "chain") d.gram[0][1] = d.gram[1][0] = 1;
    // beta = sum (1/2 + 1/(2 n_i)) C_i
    d.beta_c.assign(r, Rat(0));
    for (std::size_t i = 0; i < r; ++i) {
      Rat c = Rat(1) / 2 + Rat(1) / (2 * sc.n[i]);
      for (std::size_t j = 0; j < r; ++j) d.beta_c[j] += c * d.gram[i][j];
    }
    d.validate();
    return d;
  }
};

// Numerical class (ch0, ch1, ch2), ch1 written on C_1, .., C_r, f*eta.
struct NumClass {
  int ch0 = 0;
  std::vector<Rat> ch1;
  Rat ch2 = 0;

  static NumClass zero(std::size_t r) { return {0, std::vector<Rat>(r + 1, Rat(0)), 0}; }
  static NumClass point(std::size_t r) { return {0, std::vector<Rat>(r + 1, Rat(0)), 1}; }

  NumClass operator+(const NumClass& o) const {
    NumClass s = *this;
    s.ch0 += o.ch0;
    for (std::size_t i = 0; i < ch1.size(); ++i) s.ch1[i] += o.ch1[i];
    s.ch2 += o.ch2;
    return s;
  }
  NumClass operator-() const {
    NumClass s = *this;
    s.ch0 = -s.ch0;
    for (auto& x : s.ch1) x = -x;
    s.ch2 = -s.ch2;
    return s;
  }
  NumClass operator-(const NumClass& o) const { return *this + (-o); }
  bool operator==(const NumClass& o) const { return ch0 == o.ch0 && ch1 == o.ch1 && ch2 == o.ch2; }

  std::string to_string() const {
    std::string s = "(" + std::to_string(ch0) + ", [";
    for (std::size_t i = 0; i < ch1.size(); ++i) s += (i ? ", " : "") + ch1[i].get_str();
    return s + "], " + ch2.get_str() + ")";
  }
};

// ch . exp(-b).
inline NumClass twist(const NumClass& v, const std::vector<Rat>& b, const IntersectionDatum& d) {
  NumClass w = v;
  for (std::size_t i = 0; i < w.ch1.size(); ++i) w.ch1[i] -= v.ch0 * b[i];
  w.ch2 = v.ch2 - d.dot(b, v.ch1) + d.dot(b, b) / 2 * v.ch0;
  return w;
}

inline NumClass ch_beta(const NumClass& v, const IntersectionDatum& d) { return twist(v, d.beta_class(), d); }

// O_D(d_1, .., d_m)[shift] for D = C_{i_1} + .. + C_{i_m} a connected chain.
struct CurveObject {
  std::vector<std::size_t> support;
  std::vector<int> degrees;
  bool shifted = false;

  std::string name() const {
    std::string s = "O_{C";
    for (auto i : support) s += std::to_string(i + 1);
    s += "}";
    bool trivial = std::all_of(degrees.begin(), degrees.end(), [](int x) { return x == 0; });
    if (!trivial) {
      s += "(";
      for (std::size_t j = 0; j < degrees.size(); ++j) s += (j ? "," : "") + std::to_string(degrees[j]);
      s += ")";
    }
    return s + (shifted ? "[1]" : "");
  }
};

// ch(O_D(d)) = (0, D, sum d - D^2/2); the shift negates.
inline NumClass ch_of_curve_object(const CurveObject& o, const IntersectionDatum& d) {
  if (o.support.empty() || o.degrees.size() != o.support.size())
    throw std::invalid_argument("curve object: support and degrees must match");
  for (std::size_t j = 0; j < o.support.size(); ++j) {
    if (o.support[j] >= d.r()) throw std::invalid_argument("curve object: curve index out of range");
    if (j && d.gram[o.support[j - 1]][o.support[j]] != 1)
      throw std::invalid_argument("curve object: support is not a chain");
  }
  NumClass v = NumClass::zero(d.r());
  for (auto i : o.support) v.ch1[i] += 1;
  Rat deg = 0;
  for (int x : o.degrees) deg += x;
  v.ch2 = deg - d.dot(v.ch1, v.ch1) / 2;
  return o.shifted ? -v : v;
}

// Polynomials in eps_1, .., eps_r.
inline std::vector<std::string> eps_names(std::size_t r) {
  if (r == 1) return {"eps"};
  std::vector<std::string> v;
  for (std::size_t i = 0; i < r; ++i) v.push_back("eps" + std::to_string(i + 1));
  return v;
}

inline Rat poly_eval(const Poly& p, const std::vector<Rat>& x) {
  Rat s = 0;
  for (const auto& [m, c] : p) {
    Rat t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) t *= x[i];
    s += t;
  }
  return s;
}

struct CentralCharge {
  Poly re, im;
};

// Z = -ch2^beta + (omega^2/2) ch0 + i omega.ch1^beta with omega = f*eta + sum eps_i C_i.
inline CentralCharge central_charge(const NumClass& v, const IntersectionDatum& d) {
  std::size_t r = d.r();
  NumClass w = ch_beta(v, d);
  Mon one(r, 0);
  CentralCharge z;
  poly_add(z.re, one, -w.ch2 + d.eta_sq / 2 * w.ch0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      poly_add(z.re, mon_mul(var_mon(r, i), var_mon(r, j)), Rat(w.ch0) / 2 * d.gram[i][j]);
  poly_add(z.im, one, d.eta_sq * w.ch1[r]);
  for (std::size_t i = 0; i < r; ++i) {
    Rat c = 0;
    for (std::size_t j = 0; j < r; ++j) c += d.gram[i][j] * w.ch1[j];
    poly_add(z.im, var_mon(r, i), c);
  }
  return z;
}

// Linear form sum c_i eps_i.
struct LinearForm {
  std::vector<Rat> c;

  Rat eval(const std::vector<Rat>& x) const {
    Rat s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * x[i];
    return s;
  }
  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x == 0; });
  }
  std::string to_string() const {
    Poly p;
    for (std::size_t i = 0; i < c.size(); ++i) poly_add(p, var_mon(c.size(), i), c[i]);
    return poly_to_string(p, eps_names(c.size()));
  }
  bool operator==(const LinearForm& o) const { return c == o.c; }
};

// omega.C_i: omega is ample for small eps iff all are positive.
inline std::vector<LinearForm> ample_forms(const IntersectionDatum& d) {
  std::vector<LinearForm> out;
  for (std::size_t i = 0; i < d.r(); ++i) {
    LinearForm f;
    for (std::size_t j = 0; j < d.r(); ++j) f.c.push_back(d.gram[i][j]);
    out.push_back(f);
  }
  return out;
}

// The point of the geometric chamber with omega.C_i = 1 for all i.
inline std::vector<Rat> geometric_point(const IntersectionDatum& d) {
  return *solve_linear(d.gram_matrix(), std::vector<Rat>(d.r(), Rat(1)));
}

inline LinearForm primitive_integer(LinearForm f) {
  mpz_class l = 1, g = 0;
  for (const auto& x : f.c) l = lcm(l, mpz_class(x.get_den()));
  for (auto& x : f.c) {
    x *= Rat(l);
    g = gcd(g, mpz_class(x.get_num()));
  }
  if (g != 0)
    for (auto& x : f.c) x /= Rat(g);
  return f;
}

struct WallLocus {
  bool degenerate = false;
  LinearForm form;
};

// Re Z(u) Im Z(v) - Re Z(v) Im Z(u) on the slice, as a primitive integer form
// that is positive on the geometric chamber.
inline WallLocus wall_locus(const NumClass& u, const NumClass& v, const IntersectionDatum& d) {
  auto zu = central_charge(u, d), zv = central_charge(v, d);
  Poly p = poly_axpy(poly_mul(zu.re, zv.im), -1, poly_mul(zv.re, zu.im));
  WallLocus w;
  w.form.c.assign(d.r(), Rat(0));
  if (p.empty()) {
    w.degenerate = true;
    return w;
  }
  for (const auto& [m, c] : p) {
    if (mon_degree(m) != 1) throw std::domain_error("wall is not a hyperplane through the origin of the slice");
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) w.form.c[i] = c;
  }
  w.form = primitive_integer(w.form);
  Rat s = w.form.eval(geometric_point(d));
  if (s == 0) throw std::domain_error("wall meets the geometric chamber");
  if (s < 0)
    for (auto& x : w.form.c) x = -x;
  return w;
}

// k with k - 1 < beta.C + C^2/2 < k.
inline int twist_offset(const CurveObject& o, const IntersectionDatum& d) {
  std::vector<Rat> c(d.r() + 1, Rat(0));
  for (auto i : o.support) c[i] += 1;
  Rat x = d.dot(d.beta_class(), c) + d.dot(c, c) / 2;
  mpz_class f = x.get_num() / x.get_den();
  if (Rat(f) > x) f -= 1;
  if (Rat(f) == x) throw std::domain_error("beta lies on a boundary: beta.C + C^2/2 = " + x.get_str() + " is an integer");
  return int(f.get_si()) + 1;
}

inline CurveObject curve(std::size_t i, int k, bool shifted = false) { return {{i}, {k}, shifted}; }

struct Wall {
  std::string name;
  CurveObject destabilizer;
  std::vector<CurveObject> complement;
  LinearForm form;
  int singularity = 0;  // n of a 1/n(1,1) good moduli germ, 0 if none

  NumClass destabilizer_class(const IntersectionDatum& d) const { return ch_of_curve_object(destabilizer, d); }
  NumClass complement_class(const IntersectionDatum& d) const {
    NumClass s = NumClass::zero(d.r());
    for (const auto& o : complement) s = s + ch_of_curve_object(o, d);
    return s;
  }
};

struct WallArrangement {
  ScenarioSpec scenario;
  IntersectionDatum datum;
  std::vector<int> k;
  std::vector<Wall> walls;
  std::vector<CurveObject> origin_polystable;

  std::size_t r() const { return datum.r(); }
};

inline Wall make_wall(std::string name, CurveObject u, std::vector<CurveObject> rest, const IntersectionDatum& d) {
  auto w = wall_locus(ch_of_curve_object(u, d), NumClass::point(d.r()), d);
  if (w.degenerate) throw std::domain_error("wall " + name + " is degenerate");
  return {std::move(name), std::move(u), std::move(rest), w.form, 0};
}

// Walls for [pt] through the origin of the eps-slice.
inline WallArrangement wall_arrangement(const ScenarioSpec& sc, const IntersectionDatum& d) {
  sc.validate();
  d.validate();
  if (d.r() != sc.r()) throw std::invalid_argument("intersection datum does not match the scenario");
  WallArrangement a{sc, d, {}, {}, {}};
  for (std::size_t i = 0; i < d.r(); ++i) a.k.push_back(twist_offset(curve(i, 0), d));
  if (sc.kind == "chain") {
    int k1 = a.k[0], k2 = a.k[1];
    CurveObject o12{{0, 1}, {k1, k2}, false}, s1 = curve(0, k1 - 1, true), s2 = curve(1, k2 - 1, true);
    a.walls.push_back(make_wall("W1", s1, {o12, s2}, d));
    a.walls.push_back(make_wall("W2", s2, {o12, s1}, d));
    a.walls.push_back(make_wall("W12", o12, {s1, s2}, d));
    a.origin_polystable = {o12, s1, s2};
  } else {
    for (std::size_t i = 0; i < d.r(); ++i) {
      std::string nm = sc.kind == "single" ? "W" : "W" + std::to_string(i + 1);
      auto w = make_wall(nm, curve(i, a.k[i]), {curve(i, a.k[i] - 1, true)}, d);
      w.singularity = sc.n[i];
      a.walls.push_back(w);
    }
  }
  return a;
}

inline WallArrangement wall_arrangement(const ScenarioSpec& sc) {
  return wall_arrangement(sc, IntersectionDatum::for_scenario(sc));
}

struct Chamber {
  std::string label;
  std::vector<int> signs;
  std::vector<Rat> point;
  std::vector<std::size_t> adjacent;
  std::vector<std::size_t> subset;  // disjoint labels
};

inline int sign_of_rat(const Rat& x) { return sgn(x); }

inline std::string subset_label(const std::vector<std::size_t>& I) {
  std::string s = "{";
  for (std::size_t j = 0; j < I.size(); ++j) s += (j ? "," : "") + std::to_string(I[j] + 1);
  return s + "}";
}

inline bool parallel(const LinearForm& a, const LinearForm& b) {
  return rank(QMatrix::from_rows({a.c, b.c})) < 2;
}

// "transversal" when the normals are independent, otherwise
// "concurrent" when they are pairwise independent.
inline std::string transversality(const WallArrangement& a) {
  std::vector<std::vector<Rat>> rows;
  for (const auto& w : a.walls) rows.push_back(w.form.c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (a.walls[i].form.is_zero()) return "degenerate";
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (parallel(a.walls[i].form, a.walls[j].form)) return "degenerate";
  }
  if (rank(QMatrix::from_rows(rows)) == rows.size()) return "transversal";
  return "concurrent";
}

inline std::vector<Chamber> enumerate_chambers(const WallArrangement& a) {
  std::size_t r = a.r(), m = a.walls.size();
  if (transversality(a) == "degenerate") throw std::domain_error("degenerate wall arrangement");
  std::vector<Chamber> out;
  auto signs_at = [&](const std::vector<Rat>& x) {
    std::vector<int> s;
    for (const auto& w : a.walls) s.push_back(sign_of_rat(w.form.eval(x)));
    return s;
  };

  // r coordinate walls in an r-plane: cells are orthants
  bool coordinate = m == r;
  std::vector<std::size_t> axis(m);
  for (std::size_t i = 0; i < m && coordinate; ++i) {
    std::size_t nz = 0;
    for (std::size_t j = 0; j < r; ++j)
      if (a.walls[i].form.c[j] != 0) {
        ++nz;
        axis[i] = j;
      }
    coordinate = nz == 1;
  }
  if (coordinate) {
    std::vector<std::vector<std::size_t>> subsets;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<std::size_t> I;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1u) I.push_back(i);
      subsets.push_back(I);
    }
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](const auto& x, const auto& y) { return x.size() != y.size() ? x.size() < y.size() : x < y; });
    for (const auto& I : subsets) {
      Chamber c;
      c.point.assign(r, Rat(0));
      for (std::size_t i = 0; i < m; ++i) {
        bool flip = std::find(I.begin(), I.end(), i) != I.end();
        const Rat& coef = a.walls[i].form.c[axis[i]];
        c.point[axis[i]] = Rat(flip ? -1 : 1) / coef;
        c.adjacent.push_back(i);
      }
      c.signs = signs_at(c.point);
      c.subset = I;
      c.label = subset_label(I);
      out.push_back(c);
    }
    return out;
  }

  if (r != 2) throw std::domain_error("chamber enumeration needs coordinate walls or a plane");
  // rays of the lines in angular order
  struct Ray {
    Rat x, y;
    std::size_t wall;
  };
  std::vector<Ray> rays;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = a.walls[i].form.c;
    rays.push_back({-c[1], c[0], i});
    rays.push_back({c[1], -c[0], i});
  }
  auto half = [](const Ray& p) { return (p.y > 0 || (p.y == 0 && p.x > 0)) ? 0 : 1; };
  std::sort(rays.begin(), rays.end(), [&](const Ray& p, const Ray& q) {
    if (half(p) != half(q)) return half(p) < half(q);
    return p.x * q.y - p.y * q.x > 0;
  });
  std::size_t R = rays.size();
  std::vector<Chamber> cells;
  for (std::size_t s = 0; s < R; ++s) {
    const Ray &p = rays[s], &q = rays[(s + 1) % R];
    Chamber c;
    if (m == 1) {
      Rat sg = s == 0 ? 1 : -1;
      c.point = {sg * a.walls[0].form.c[0], sg * a.walls[0].form.c[1]};
    } else {
      c.point = {p.x + q.x, p.y + q.y};
    }
    c.signs = signs_at(c.point);
    c.adjacent = {p.wall, q.wall};
    if (c.adjacent[0] == c.adjacent[1]) c.adjacent.pop_back();
    std::sort(c.adjacent.begin(), c.adjacent.end());
    cells.push_back(c);
  }
  // C1 is geometric, C2 lies across the first wall
  std::size_t g = R;
  for (std::size_t s = 0; s < R; ++s)
    if (std::all_of(cells[s].signs.begin(), cells[s].signs.end(), [](int x) { return x > 0; })) g = s;
  if (g == R) throw std::domain_error("no geometric chamber");
  bool forward = rays[(g + 1) % R].wall == 0;
  for (std::size_t t = 0; t < R; ++t) {
    std::size_t s = forward ? (g + t) % R : (g + R - t) % R;
    cells[s].label = "C" + std::to_string(t + 1);
    out.push_back(cells[s]);
  }
  return out;
}

// Component descriptions.
struct Component {
  std::string name;
  std::string kind;
  int dim = 2;
};

struct Gluing {
  std::string left, left_sub, right, right_sub;

  std::string to_string() const { return left_sub + " in " + left + " = " + right_sub + " in " + right; }
};

struct WallReport {
  std::string wall;
  std::string equation;
  std::string destabilizer;
  std::vector<std::string> polystable;
  int singularity = 0;

  std::string to_string() const {
    std::string s = wall + " (" + equation + " = 0): ";
    if (!polystable.empty()) {
      for (std::size_t i = 0; i < polystable.size(); ++i) s += (i ? " + " : "") + polystable[i];
      s += ", strictly semistable";
    } else {
      s += "destabilizer " + destabilizer;
    }
    if (singularity) s += ", good moduli germ 1/" + std::to_string(singularity) + "(1,1)";
    return s;
  }
};

struct ComponentReport {
  std::string scenario;
  std::string chamber;
  std::vector<Component> components;
  std::vector<Gluing> gluings;
  bool further_identifications = false;
  std::vector<WallReport> walls;
  std::string origin;

  std::string to_text() const {
    std::string s = "chamber " + chamber + " of " + scenario + "\n";
    s += "components:\n";
    for (const auto& c : components) s += "  " + c.name + ": " + c.kind + ", dim " + std::to_string(c.dim) + "\n";
    s += "gluings:\n";
    for (const auto& g : gluings) s += "  " + g.to_string() + "\n";
    if (!further_identifications) s += "  no further identifications\n";
    s += "adjacent walls:\n";
    for (const auto& w : walls) s += "  " + w.to_string() + "\n";
    if (!origin.empty()) s += "polystable at the origin: " + origin + "\n";
    return s;
  }
};

inline std::string proj(int n) { return "P^" + std::to_string(n); }

inline std::string curve_name(std::size_t i) { return "C" + std::to_string(i + 1); }

inline ComponentReport component_report(const WallArrangement& a, const std::string& label) {
  const auto& sc = a.scenario;
  auto chambers = enumerate_chambers(a);
  auto it = std::find_if(chambers.begin(), chambers.end(), [&](const Chamber& c) { return c.label == label; });
  if (it == chambers.end()) throw std::invalid_argument("unsupported chamber '" + label + "' for " + sc.to_string());
  const Chamber& ch = *it;
  ComponentReport rep;
  rep.scenario = sc.to_string();
  rep.chamber = label;
  rep.components.push_back({"S", "surface"});
  if (sc.kind == "single") {
    int n = sc.n[0];
    if (!ch.subset.empty()) {
      if (n == 1) {
        rep.components[0] = {"T", "contracted surface"};
      } else if (n >= 3) {
        rep.components.push_back({proj(n - 1), "projective space", n - 1});
        rep.gluings.push_back({"S", "C", proj(n - 1), "rational normal curve"});
      }
    }
  } else if (sc.kind == "disjoint") {
    for (int x : sc.n)
      if (x < 3) throw std::invalid_argument("component report for disjoint curves needs n_i >= 3");
    for (auto i : ch.subset) {
      std::string P = proj(sc.n[i] - 1) + "[" + curve_name(i) + "]";
      rep.components.push_back({P, "projective space", sc.n[i] - 1});
      rep.gluings.push_back({"S", curve_name(i), P, "rational normal curve"});
    }
  } else {
    int n1 = sc.n[0], n2 = sc.n[1];
    if (n1 < 3 || n2 < 3) throw std::invalid_argument("component report for a chain needs n_1, n_2 >= 3");
    std::size_t c = std::stoul(label.substr(1));
    if (c == 4) throw std::invalid_argument("chamber C4 is not described; refusing to report it");
    // C5, C6 mirror C3, C2 with the curves exchanged
    std::size_t a1 = c <= 3 ? 0 : 1, a2 = 1 - a1;
    int m1 = sc.n[a1];
    if (c == 2 || c == 6) {
      rep.components.push_back({proj(m1 - 1), "projective space", m1 - 1});
      rep.gluings.push_back({"S", curve_name(a1), proj(m1 - 1), "rational normal curve"});
    } else if (c == 3 || c == 5) {
      std::string B = "Bl_pt " + proj(m1 - 1), P = proj(n1 + n2 - 3);
      rep.components.push_back({B, "blow-up of a projective space at a point", m1 - 1});
      rep.components.push_back({P, "projective space", n1 + n2 - 3});
      rep.gluings.push_back({B, "exceptional divisor", P, "linear " + proj(m1 - 2)});
      rep.gluings.push_back(
          {"S", curve_name(a2), P,
           "rational normal curve in a complementary " + proj(sc.n[a2] - 1) + " through the intersection point"});
      rep.gluings.push_back(
          {"S", curve_name(a1), B, "strict transform of a rational normal curve in " + proj(m1 - 1) + " through the blown-up point"});
    }
    std::string o;
    for (std::size_t i = 0; i < a.origin_polystable.size(); ++i) o += (i ? " + " : "") + a.origin_polystable[i].name();
    rep.origin = o;
  }

  for (auto i : ch.adjacent) {
    const Wall& w = a.walls[i];
    WallReport wr{w.name, w.form.to_string(), w.destabilizer.name(), {}, w.singularity};
    if (sc.kind != "chain") {
      wr.polystable.push_back(w.destabilizer.name());
      for (const auto& o : w.complement) wr.polystable.push_back(o.name());
    }
    rep.walls.push_back(wr);
  }
  return rep;
}

// What the moduli space is at the origin for single and disjoint scenarios.
inline std::string origin_description(const ScenarioSpec& sc) {
  if (sc.kind == "chain") return "";
  std::string s = "T, contracting";
  for (std::size_t i = 0; i < sc.r(); ++i)
    s += std::string(i ? "," : "") + " " + curve_name(i) + " to a 1/" + std::to_string(sc.n[i]) + "(1,1) point";
  return s;
}

}  // namespace stabwc
