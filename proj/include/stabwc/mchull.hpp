#pragma once

#include "stabwc/tw.hpp"

#include <memory>
#include <numeric>

namespace stabwc {

// Power series in r variables, truncated by total degree where needed.
using Mon = std::vector<int>;
using Poly = std::map<Mon, Rat>;

inline int mon_degree(const Mon& m) { return std::accumulate(m.begin(), m.end(), 0); }

inline Mon mon_mul(const Mon& a, const Mon& b) {
  Mon r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Mon var_mon(std::size_t nvars, std::size_t i, int e = 1) {
  Mon m(nvars, 0);
  m[i] = e;
  return m;
}

inline void poly_add(Poly& p, const Mon& m, const Rat& c) {
  if (c == 0) return;
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

inline Poly poly_axpy(Poly y, const Rat& a, const Poly& x) {
  for (const auto& [m, c] : x) poly_add(y, m, a * c);
  return y;
}

// Product, dropping terms of degree > trunc (trunc < 0: no truncation).
inline Poly poly_mul(const Poly& a, const Poly& b, int trunc = -1) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mon m = mon_mul(ma, mb);
      if (trunc >= 0 && mon_degree(m) > trunc) continue;
      poly_add(r, m, ca * cb);
    }
  return r;
}

inline Poly poly_of(const Mon& m, const Rat& c = 1) { return c == 0 ? Poly{} : Poly{{m, c}}; }

inline int poly_order(const Poly& p) {
  int o = -1;
  for (const auto& [m, c] : p) o = o < 0 ? mon_degree(m) : std::min(o, mon_degree(m));
  return o;
}

inline std::string mon_to_string(const Mon& m, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += " ";
    s += names[i];
    if (m[i] != 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

inline std::vector<int> mon_weight(const Mon& m, const std::vector<std::vector<int>>& w) {
  std::size_t k = w.empty() ? 0 : w[0].size();
  std::vector<int> r(k, 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) r[j] += m[i] * w[i][j];
  return r;
}

inline bool is_invariant(const Mon& m, const std::vector<std::vector<int>>& w) {
  for (int x : mon_weight(m, w))
    if (x) return false;
  return true;
}

// Terms listed by increasing degree, then by variable order.
inline std::string poly_to_string(const Poly& p, const std::vector<std::string>& names) {
  if (p.empty()) return "0";
  std::vector<std::pair<Mon, Rat>> terms(p.begin(), p.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int da = mon_degree(a.first), db = mon_degree(b.first);
    if (da != db) return da < db;
    return a.first > b.first;
  });
  std::string s;
  for (const auto& [m, c] : terms) {
    Rat a = abs(c);
    bool neg = c < 0;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    std::string mono = mon_to_string(m, names);
    if (a != 1 || mono == "1") s += a.get_str() + (mono == "1" ? "" : " ");
    if (mono != "1") s += mono;
  }
  return s;
}

// All monomials of degree <= D in n variables, by degree, then descending
// lexicographic order (so x0^2 comes before x0 x1).
class MonomialSpace {
 public:
  MonomialSpace(std::size_t nvars, int D) : n_(nvars), D_(D) {
    for (int d = 0; d <= D; ++d) {
      std::vector<Mon> deg;
      Mon m(nvars, 0);
      build(deg, m, 0, d);
      std::sort(deg.begin(), deg.end(), std::greater<>());
      for (auto& x : deg) {
        index_.emplace(x, int(mons_.size()));
        mons_.push_back(std::move(x));
      }
    }
  }

  std::size_t nvars() const { return n_; }
  int degree() const { return D_; }
  const std::vector<Mon>& monomials() const { return mons_; }
  int index(const Mon& m) const { return index_.at(m); }

  SparseVec vec(const Poly& p) const {
    SparseVec v;
    for (const auto& [m, c] : p)
      if (mon_degree(m) <= D_) v[index_.at(m)] = c;
    return v;
  }

  Poly poly(const SparseVec& v) const {
    Poly p;
    for (const auto& [i, c] : v) p.emplace(mons_[std::size_t(i)], c);
    return p;
  }

 private:
  void build(std::vector<Mon>& out, Mon& m, std::size_t i, int left) const {
    if (i + 1 == n_ || n_ == 0) {
      if (n_ == 0) {
        if (left == 0) out.push_back(m);
        return;
      }
      m[i] = left;
      out.push_back(m);
      m[i] = 0;
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[i] = e;
      build(out, m, i + 1, left - e);
    }
    m[i] = 0;
  }

  std::size_t n_;
  int D_;
  std::vector<Mon> mons_;
  std::map<Mon, int> index_;
};

// The ideal (gens) + m^mpower in S = Q[[vars]], handled in S/m^{D+1}.
// mpower <= 0 means no power of the maximal ideal is added.
class TruncatedIdeal {
 public:
  TruncatedIdeal() = default;
  TruncatedIdeal(std::vector<std::string> vars, std::vector<Poly> gens, int D, int mpower = 0)
      : vars_(std::move(vars)), gens_(std::move(gens)), D_(D), mpower_(mpower) {
    if (D < 0) throw std::invalid_argument("TruncatedIdeal: negative truncation");
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Poly>& gens() const { return gens_; }
  int truncation() const { return D_; }
  int mpower() const { return mpower_; }

  TruncatedIdeal truncated(int D) const { return {vars_, gens_, D, mpower_}; }

  // Echelon form of the degree <= D part.
  Echelon span(const MonomialSpace& ms) const {
    Echelon e;
    for (const auto& g : gens_) {
      int o = poly_order(g);
      if (o < 0 || o > D_) continue;
      for (const auto& m : ms.monomials()) {
        if (mon_degree(m) + o > D_) break;
        e.insert(ms.vec(poly_mul(poly_of(m), g, D_)));
      }
    }
    if (mpower_ > 0)
      for (const auto& m : ms.monomials())
        if (mon_degree(m) >= mpower_) e.insert(ms.vec(poly_of(m)));
    return e;
  }

  MonomialSpace space() const { return MonomialSpace(vars_.size(), D_); }

  bool contains(const Poly& p) const {
    auto ms = space();
    return span(ms).contains(ms.vec(p));
  }

  bool contains(const TruncatedIdeal& o) const {
    int D = std::min(D_, o.D_);
    MonomialSpace ms(vars_.size(), D);
    Echelon a = truncated(D).span(ms), b = o.truncated(D).span(ms);
    for (const auto& [p, row] : b.rows())
      if (!a.contains(row)) return false;
    return true;
  }

  bool equals(const TruncatedIdeal& o) const { return contains(o) && o.contains(*this); }

  // dim of (I + m^{d+1}) / m^{d+1} in each degree d <= D (Hilbert function of the ideal).
  std::vector<int> dims_by_degree() const {
    auto ms = space();
    Echelon e = span(ms);
    std::vector<int> out(std::size_t(D_ + 1), 0);
    for (const auto& [p, row] : e.rows()) ++out[std::size_t(mon_degree(ms.monomials()[std::size_t(p)]))];
    return out;
  }

  std::string to_string() const {
    std::string s;
    if (mpower_ > 0) s = "m^" + std::to_string(mpower_);
    std::string g;
    for (const auto& p : gens_) g += (g.empty() ? "" : ", ") + poly_to_string(p, vars_);
    if (!g.empty()) s += (s.empty() ? "(" : " + (") + g + ")";
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<Poly> gens_;
  int D_ = 0;
  int mpower_ = 0;
};

// Echelon form that remembers how each row was built from the inserted
// generators; reduce() returns the coefficients of a vector in their span.
class TrackedEchelon {
 public:
  explicit TrackedEchelon(int tag_base) : base_(tag_base) {}

  void insert(SparseVec v, int id) {
    v[base_ + id] = 1;
    e_.insert(std::move(v));
  }

  // Coefficients (by generator id) expressing v, or nullopt if v is outside the span.
  std::optional<std::map<int, Rat>> coordinates(SparseVec v) const {
    e_.reduce(v);
    std::map<int, Rat> out;
    for (const auto& [k, c] : v) {
      if (k < base_) return std::nullopt;
      out[k - base_] = -c;
    }
    return out;
  }

 private:
  int base_;
  Echelon e_;
};

// A deformation problem: H^1 lifts dual to the coordinates of S, with the
// torus weight of every coordinate and optional preferred corrections.
struct DeformationProblem {
  std::shared_ptr<TotTW> tw;
  std::vector<std::string> names;
  std::vector<Vec> lifts;
  std::vector<std::vector<int>> weights;
  std::map<Mon, Vec> hints;
  std::vector<std::string> notes;

  std::size_t nvars() const { return names.size(); }
};

inline void validate(const DeformationProblem& P) {
  auto& T = *P.tw;
  if (P.lifts.size() != P.names.size() || P.weights.size() != P.names.size())
    throw std::invalid_argument("deformation problem: coordinate count mismatch");
  std::size_t h1 = std::size_t(T.cohomology().dim(1));
  if (P.lifts.size() != h1)
    throw std::invalid_argument("deformation problem: " + std::to_string(P.lifts.size()) + " lifts for dim H^1 = " +
                                std::to_string(h1));
  std::vector<std::vector<Rat>> cls;
  for (std::size_t a = 0; a < P.lifts.size(); ++a) {
    if (!T.compatible(P.lifts[a])) throw std::invalid_argument("lift " + P.names[a] + " is not compatible");
    auto c = T.class_of(P.lifts[a], 1);
    if (!c) throw std::invalid_argument("lift " + P.names[a] + " is not closed");
    cls.push_back(*c);
  }
  if (!cls.empty() && rank(QMatrix::from_rows(cls)) != cls.size())
    throw std::invalid_argument("deformation problem: lift classes are dependent");
}

// Declared weights followed by the torus weight of the cochains of each lift.
inline std::vector<std::vector<int>> coordinate_weights(const DeformationProblem& P) {
  std::vector<std::vector<int>> out;
  for (std::size_t a = 0; a < P.nvars(); ++a) {
    std::vector<int> w = P.weights[a];
    auto ws = weights_of(P.lifts[a]);
    if (ws.size() != 1) throw std::invalid_argument("lift " + P.names[a] + " is not weight-homogeneous");
    w.push_back((*ws.begin())[0]);
    w.push_back((*ws.begin())[1]);
    out.push_back(w);
  }
  return out;
}

// Tot-valued power series: coefficient of each monomial.
using Series = std::map<Mon, Vec>;

inline void series_add(Series& s, const Mon& m, const Rat& a, const Vec& x) {
  if (a == 0 || x.empty()) return;
  Vec& v = s[m];
  axpy(v, a, x);
  if (v.empty()) s.erase(m);
}

// d xi + 1/2 [xi, xi], dropping monomials of degree > trunc.
inline Series mc_residue(const DeformationProblem& P, const Series& xi, int trunc) {
  Series r;
  for (const auto& [m, x] : xi)
    if (mon_degree(m) <= trunc) series_add(r, m, 1, P.tw->d(x));
  std::vector<std::pair<Mon, const Vec*>> terms;
  for (const auto& [m, x] : xi) terms.emplace_back(m, &x);
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i; j < terms.size(); ++j) {
      Mon m = mon_mul(terms[i].first, terms[j].first);
      if (mon_degree(m) > trunc) continue;
      Vec b = P.tw->bracket(*terms[i].second, *terms[j].second);
      series_add(r, m, i == j ? rat(1, 2) : Rat(1), b);
    }
  return r;
}

// kappa[a][b] = class of [x_a, x_b] in H^2.
inline std::vector<std::vector<std::vector<Rat>>> primary_obstruction(const DeformationProblem& P) {
  std::size_t r = P.nvars();
  std::vector<std::vector<std::vector<Rat>>> k(r, std::vector<std::vector<Rat>>(r));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a; b < r; ++b) {
      auto c = P.tw->class_of(P.tw->bracket(P.lifts[a], P.lifts[b]), 2);
      if (!c) throw std::logic_error("primary_obstruction: bracket of lifts is not closed");
      k[a][b] = k[b][a] = *c;
    }
  return k;
}

// Quadrics cut out by kappa_2: one per H^2 coordinate, sum_{a<=b} c_ab kappa_ab s_a s_b.
inline std::vector<Poly> kappa_quadrics(const std::vector<std::vector<std::vector<Rat>>>& k) {
  std::size_t r = k.size();
  std::size_t h2 = r ? k[0][0].size() : 0;
  std::vector<Poly> out;
  for (std::size_t c = 0; c < h2; ++c) {
    Poly p;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = a; b < r; ++b) {
        Mon m(r, 0);
        ++m[a];
        ++m[b];
        poly_add(p, m, (a == b ? rat(1, 2) : Rat(1)) * k[a][b][c]);
      }
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

struct HullStep {
  int order = 0;            // q: J_q and xi_q are known
  std::vector<Poly> added;  // generators of J_q beyond m J_{q-1}
  TruncatedIdeal J;         // J_q, truncated at degree q
  int lifted_with_hints = 0;
  int lifted_by_search = 0;
};

struct HullState {
  std::vector<std::string> names;
  int order = 1;
  std::vector<Poly> gens;  // J_q = (gens) + m^{q+1}
  Series xi;
  std::vector<HullStep> steps;
  bool lifted = true;       // xi is a solution modulo J_q
  std::string diagnostic;   // primitive-search failure, if any

  TruncatedIdeal J(int D) const { return TruncatedIdeal(names, gens, D, order + 1); }
};

inline HullState start_hull(const DeformationProblem& P) {
  validate(P);
  HullState s;
  s.names = P.names;
  for (std::size_t a = 0; a < P.nvars(); ++a) series_add(s.xi, var_mon(P.nvars(), a), 1, P.lifts[a]);
  HullStep st;
  st.order = 1;
  st.J = s.J(1);
  s.steps.push_back(st);
  return s;
}

// Does d xi + 1/2[xi, xi] vanish modulo J_q?
inline bool mc_holds(const DeformationProblem& P, const HullState& s) {
  int D = s.order;
  Series r = mc_residue(P, s.xi, D);
  MonomialSpace ms(P.nvars(), D);
  Echelon J = s.J(D).span(ms);
  std::map<Key, Poly> by_key;
  for (const auto& [m, x] : r)
    for (const auto& [k, c] : x) poly_add(by_key[k], m, c);
  for (const auto& [k, p] : by_key)
    if (!J.contains(ms.vec(p))) return false;
  return true;
}

struct ExtendOptions {
  bool lift = true;
  PrimitiveOptions primitive;
};

// One step of the hull construction: J_{q+1} = m J_q + (span of the H^2
// coefficients of the obstruction), then xi_{q+1} by solving for primitives.
inline void extend_order(const DeformationProblem& P, HullState& s, const ExtendOptions& opt = {}) {
  if (!s.lifted) throw std::logic_error("extend_order: previous order was not lifted");
  auto& T = *P.tw;
  const std::size_t r = P.nvars();
  const int q = s.order, D = q + 1;
  MonomialSpace ms(r, D);
  const int nm = int(ms.monomials().size());

  // m J_q + m^{q+2} inside S/m^{q+2}
  std::vector<Poly> mJ;
  for (const auto& g : s.gens)
    for (std::size_t i = 0; i < r; ++i) mJ.push_back(poly_mul(poly_of(var_mon(r, i)), g, D));
  TruncatedIdeal mJq(s.names, mJ, D, q + 2);
  Echelon E1 = mJq.span(ms);

  // basis b_l of J_q / m J_q, preferring the given generators
  std::vector<Poly> b;
  {
    Echelon e = E1;
    std::vector<Poly> cand = s.gens;
    for (const auto& m : ms.monomials())
      if (mon_degree(m) == q + 1) cand.push_back(poly_of(m));
    for (const auto& c : cand)
      if (e.insert(ms.vec(c))) b.push_back(c);
  }
  // complement monomials of J_q in S/m^{q+2}
  std::vector<Poly> comp;
  {
    Echelon e = s.J(D).span(ms);
    for (const auto& m : ms.monomials())
      if (e.insert(ms.vec(poly_of(m)))) comp.push_back(poly_of(m));
  }
  TrackedEchelon te(nm);
  int id = 0;
  for (const auto& p : b) te.insert(ms.vec(p), id++);
  for (const auto& p : comp) te.insert(ms.vec(p), id++);
  for (const auto& [piv, row] : E1.rows()) te.insert(row, id++);

  // o_l = sum_m x_{m,l} R_m
  Series R = mc_residue(P, s.xi, D);
  std::vector<Vec> o(b.size()), rest(comp.size());
  for (const auto& [m, x] : R) {
    auto c = te.coordinates(ms.vec(poly_of(m)));
    if (!c) throw std::logic_error("extend_order: monomial outside S/m^{q+2}");
    for (const auto& [l, v] : *c) {
      if (l < int(b.size()))
        axpy(o[std::size_t(l)], v, x);
      else if (l < int(b.size() + comp.size()))
        axpy(rest[std::size_t(l) - b.size()], v, x);
    }
  }
  for (const auto& x : rest)
    if (!x.empty()) throw std::logic_error("extend_order: Maurer-Cartan equation fails modulo J_q");

  // obstruction classes and the new generators
  std::size_t h2 = std::size_t(T.cohomology().dim(2));
  std::vector<std::vector<Rat>> v(b.size());
  for (std::size_t l = 0; l < b.size(); ++l) {
    auto c = T.class_of(o[l], 2);
    if (!c) throw std::logic_error("extend_order: obstruction cochain is not closed");
    v[l] = *c;
  }
  Echelon rel;  // in b-coordinates
  for (std::size_t k = 0; k < h2; ++k) {
    SparseVec g;
    for (std::size_t l = 0; l < b.size(); ++l)
      if (v[l][k] != 0) g[int(l)] = v[l][k];
    rel.insert(g);
  }
  std::vector<Poly> added;
  for (const auto& [piv, row] : rel.rows()) {
    Poly p;
    for (const auto& [l, c] : row) p = poly_axpy(p, c, b[std::size_t(l)]);
    added.push_back(p);
  }

  HullState next;
  next.names = s.names;
  next.order = q + 1;
  next.gens = mJ;
  next.gens.insert(next.gens.end(), added.begin(), added.end());
  next.steps = s.steps;
  next.xi = s.xi;

  HullStep st;
  st.order = q + 1;
  st.added = added;
  st.J = next.J(q + 1);

  if (opt.lift) {
    // reduce o onto the complement of the relations; pivots b_p = -sum a_pc b_c
    std::vector<Vec> ot = o;
    for (const auto& [piv, row] : rel.rows())
      for (const auto& [l, a] : row)
        if (l != piv) axpy(ot[std::size_t(l)], -a, o[std::size_t(piv)]);
    for (std::size_t c = 0; c < b.size(); ++c) {
      if (rel.is_pivot(int(c)) || ot[c].empty()) continue;
      Vec target = scaled(-1, ot[c]);
      std::optional<Vec> theta;
      if (b[c].size() == 1 && b[c].begin()->second == 1) {
        auto h = P.hints.find(b[c].begin()->first);
        if (h != P.hints.end() && T.compatible(h->second) && T.d(h->second) == target) theta = h->second;
      }
      if (theta) {
        ++st.lifted_with_hints;
      } else {
        auto res = T.solve_primitive(target, opt.primitive);
        if (!res.primitive) {
          next.lifted = false;
          next.diagnostic = "no primitive for the obstruction at " + poly_to_string(b[c], s.names) + ": " +
                            res.diagnostic;
          break;
        }
        theta = *res.primitive;
        ++st.lifted_by_search;
      }
      for (const auto& [m, a] : b[c]) series_add(next.xi, m, a, *theta);
    }
  } else {
    next.lifted = false;
    next.diagnostic = "order " + std::to_string(q + 1) + " not lifted";
  }
  next.steps.push_back(st);
  s = std::move(next);
}

inline Poly poly_diff(const Poly& p, std::size_t a) {
  Poly r;
  for (const auto& [m, c] : p) {
    if (!m[a]) continue;
    Mon o = m;
    --o[a];
    poly_add(r, o, c * m[a]);
  }
  return r;
}

// p(images[0], ..., images[r-1]) truncated at degree trunc.
inline Poly poly_substitute(const Poly& p, const std::vector<Poly>& images, int trunc) {
  Poly r;
  for (const auto& [m, c] : p) {
    Poly t = poly_of(Mon(images.size(), 0), c);
    for (std::size_t a = 0; a < m.size(); ++a)
      for (int e = 0; e < m[a]; ++e) t = poly_mul(t, images[a], trunc);
    r = poly_axpy(r, 1, t);
  }
  return r;
}

struct StopVerdict {
  int d = 0;
  int truncation = 0;
  bool intersection_ok = false;  // m^d cap I subset m I
  bool truncation_equal = false; // J + m^d = psi(I) + m^d
  std::vector<std::pair<std::size_t, Poly>> coordinate_change;  // s_a -> s_a + delta_a, nonzero delta only
  bool hull_equals_candidate() const { return intersection_ok && truncation_equal; }
  std::string verdict() const { return hull_equals_candidate() ? "hull-equals-candidate" : "inconclusive"; }
};

// Searches for s_a -> s_a + delta_a, delta_a of order >= 2 and of the weight of
// s_a, with psi(I) + m^d = J_{d-1}.  The conditions psi(g) in J are solved to
// first order in delta and the resulting substitution is then checked exactly.
inline void match_by_substitution(const HullState& s, const std::vector<Poly>& I, int d,
                                  const std::vector<std::vector<int>>& weights, StopVerdict& v) {
  const std::size_t r = s.names.size();
  const int D = d - 1;
  MonomialSpace ms(r, D);
  TruncatedIdeal J = s.J(D);
  Echelon EJ = J.span(ms);
  struct Unknown {
    std::size_t a;
    Mon m;
  };
  std::vector<Unknown> unk;
  for (std::size_t a = 0; a < r; ++a)
    for (const auto& m : ms.monomials()) {
      if (mon_degree(m) < 2) continue;
      if (!weights.empty() && mon_weight(m, weights) != weights[a]) continue;
      unk.push_back({a, m});
    }
  std::map<std::pair<std::size_t, int>, std::size_t> rows;
  std::vector<std::vector<std::pair<std::pair<std::size_t, int>, Rat>>> cols(unk.size());
  std::vector<std::pair<std::pair<std::size_t, int>, Rat>> rhs;
  for (std::size_t i = 0; i < I.size(); ++i) {
    SparseVec b = ms.vec(I[i]);
    EJ.reduce(b);
    for (const auto& [k, c] : b) rhs.push_back({{i, k}, -c});
    for (std::size_t u = 0; u < unk.size(); ++u) {
      SparseVec c = ms.vec(poly_mul(poly_diff(I[i], unk[u].a), poly_of(unk[u].m), D));
      EJ.reduce(c);
      for (const auto& [k, x] : c) cols[u].push_back({{i, k}, x});
    }
  }
  for (const auto& [key, c] : rhs) rows.emplace(key, 0);
  for (const auto& col : cols)
    for (const auto& [key, c] : col) rows.emplace(key, 0);
  std::size_t n = 0;
  for (auto& [key, idx] : rows) idx = n++;
  QMatrix A(rows.size(), unk.size());
  for (std::size_t u = 0; u < unk.size(); ++u)
    for (const auto& [key, c] : cols[u]) A.add(rows[key], u, c);
  std::vector<Rat> b(rows.size(), Rat(0));
  for (const auto& [key, c] : rhs) b[rows[key]] += c;
  auto sol = solve_linear(A, b);
  if (!sol) return;
  std::vector<Poly> images(r), delta(r);
  for (std::size_t a = 0; a < r; ++a) images[a] = poly_of(var_mon(r, a));
  for (std::size_t u = 0; u < unk.size(); ++u)
    if ((*sol)[u] != 0) poly_add(delta[unk[u].a], unk[u].m, (*sol)[u]);
  for (std::size_t a = 0; a < r; ++a) images[a] = poly_axpy(images[a], 1, delta[a]);
  std::vector<Poly> psiI;
  for (const auto& g : I) psiI.push_back(poly_substitute(g, images, D));
  TruncatedIdeal Ipsi(s.names, psiI, D, d);
  if (!J.equals(Ipsi)) return;
  v.truncation_equal = true;
  for (std::size_t a = 0; a < r; ++a)
    if (!delta[a].empty()) v.coordinate_change.push_back({a, delta[a]});
}

// Checks the two hypotheses of the stopping criterion for a candidate ideal I,
// given J_{d-1} = J + m^d from the hull iteration.  The intersection condition
// is verified modulo m^{D+1} with D = d + 1.
inline StopVerdict stopping_check(const HullState& s, const std::vector<Poly>& I, int d,
                                  const std::vector<std::vector<int>>& weights = {}) {
  if (d < 2) throw std::invalid_argument("stopping_check: d must be >= 2");
  if (s.order < d - 1) throw std::invalid_argument("stopping_check: hull computed to order " + std::to_string(s.order) +
                                                   ", need " + std::to_string(d - 1));
  StopVerdict v;
  v.d = d;
  int D = d + 1;
  v.truncation = D;
  const std::size_t r = s.names.size();
  MonomialSpace ms(r, D);
  TruncatedIdeal Iid(s.names, I, D);
  Echelon EI = Iid.span(ms);
  std::vector<Poly> mI;
  for (const auto& g : I)
    for (std::size_t i = 0; i < r; ++i) mI.push_back(poly_mul(poly_of(var_mon(r, i)), g, D));
  Echelon EmI = TruncatedIdeal(s.names, mI, D).span(ms);
  // I cap m^d: kernel of the projection of I onto monomials of degree < d
  {
    std::vector<const SparseVec*> rows;
    for (const auto& [p, row] : EI.rows()) rows.push_back(&row);
    std::map<int, std::size_t> low;
    for (const auto* row : rows)
      for (const auto& [k, c] : *row)
        if (mon_degree(ms.monomials()[std::size_t(k)]) < d) low.emplace(k, 0);
    std::size_t n = 0;
    for (auto& [k, i] : low) i = n++;
    QMatrix a(low.size(), rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j)
      for (const auto& [k, c] : *rows[j]) {
        auto it = low.find(k);
        if (it != low.end()) a.set(it->second, j, c);
      }
    v.intersection_ok = true;
    for (const auto& kv : kernel_basis(a)) {
      SparseVec x;
      for (std::size_t j = 0; j < kv.size(); ++j) axpy(x, kv[j], *rows[j]);
      if (!EmI.contains(x)) v.intersection_ok = false;
    }
  }
  TruncatedIdeal J = s.J(d - 1), Id(s.names, I, d - 1, d);
  v.truncation_equal = J.equals(Id);
  if (!v.truncation_equal) match_by_substitution(s, I, d, weights, v);
  return v;
}

// ---- invariant rings ----

// Invariant monomials of degree 1..bound that are not products of two
// nonconstant invariant monomials.
inline std::vector<Mon> invariant_generators(std::size_t nvars, const std::vector<std::vector<int>>& w, int bound) {
  MonomialSpace ms(nvars, bound);
  std::vector<Mon> inv, gens;
  for (const auto& m : ms.monomials())
    if (mon_degree(m) > 0 && is_invariant(m, w)) inv.push_back(m);
  std::set<Mon> invset(inv.begin(), inv.end());
  for (const auto& m : inv) {
    bool decomposable = false;
    for (const auto& a : inv) {
      if (a == m || mon_degree(a) >= mon_degree(m)) continue;
      Mon rest(m.size());
      bool ok = true;
      for (std::size_t i = 0; i < m.size(); ++i) {
        rest[i] = m[i] - a[i];
        if (rest[i] < 0) ok = false;
      }
      if (ok && invset.count(rest)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) gens.push_back(m);
  }
  return gens;
}

// A presentation Q[z_1..z_k]/K -> (S/J)^T with z_g mapped to images[g];
// relations are the kernel in S-degree <= bound.
struct InvariantPresentation {
  std::vector<std::string> gen_names;
  std::vector<Poly> images;
  std::vector<int> gen_degree;
  std::vector<Poly> relations;
  int bound = 0;
  std::vector<int> invariant_dims;  // dim of the invariant part of S/J in each degree <= bound
  std::vector<int> image_dims;      // dim spanned by images of generator monomials
};

namespace detail {

// Monomials in k generators whose weighted degree (by gen_degree) is <= bound.
inline void gen_monomials(const std::vector<int>& gdeg, int bound, std::vector<Mon>& out) {
  Mon m(gdeg.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == gdeg.size()) {
      out.push_back(m);
      return;
    }
    for (int e = 0; e * gdeg[i] <= left; ++e) {
      m[i] = e;
      rec(i + 1, left - e * gdeg[i]);
    }
    m[i] = 0;
  };
  rec(0, bound);
}

inline Poly eval(const Mon& gm, const std::vector<Poly>& images, std::size_t nvars, int trunc) {
  Poly p = poly_of(Mon(nvars, 0));
  for (std::size_t g = 0; g < gm.size(); ++g)
    for (int e = 0; e < gm[g]; ++e) p = poly_mul(p, images[g], trunc);
  return p;
}

}  // namespace detail

// images must be homogeneous invariant polynomials of positive degree.
inline InvariantPresentation present_invariants(const TruncatedIdeal& J, const std::vector<std::vector<int>>& w,
                                                std::vector<std::string> gen_names, std::vector<Poly> images,
                                                int bound) {
  InvariantPresentation P;
  P.gen_names = std::move(gen_names);
  P.images = std::move(images);
  P.bound = bound;
  const std::size_t n = J.vars().size();
  for (const auto& im : P.images) {
    int o = poly_order(im);
    if (o <= 0) throw std::invalid_argument("present_invariants: generator image must have positive degree");
    for (const auto& [m, c] : im)
      if (mon_degree(m) != o || !is_invariant(m, w))
        throw std::invalid_argument("present_invariants: generator image not homogeneous and invariant");
    P.gen_degree.push_back(o);
  }
  MonomialSpace ms(n, bound);
  Echelon EJ = J.truncated(bound).span(ms);
  // invariant part of S/J by degree
  P.invariant_dims.assign(std::size_t(bound + 1), 0);
  P.image_dims.assign(std::size_t(bound + 1), 0);
  for (int deg = 0; deg <= bound; ++deg) {
    Echelon e = EJ;
    int before = int(e.rank());
    for (const auto& m : ms.monomials())
      if (mon_degree(m) == deg && is_invariant(m, w)) e.insert(ms.vec(poly_of(m)));
    P.invariant_dims[std::size_t(deg)] = int(e.rank()) - before;
  }
  std::vector<Mon> gms;
  detail::gen_monomials(P.gen_degree, bound, gms);
  std::vector<SparseVec> img;
  for (const auto& gm : gms) {
    SparseVec v = ms.vec(detail::eval(gm, P.images, n, bound));
    EJ.reduce(v);
    img.push_back(v);
  }
  for (int deg = 0; deg <= bound; ++deg) {
    Echelon e;
    for (std::size_t j = 0; j < gms.size(); ++j) {
      int gd = 0;
      for (std::size_t g = 0; g < gms[j].size(); ++g) gd += gms[j][g] * P.gen_degree[g];
      if (gd == deg) e.insert(img[j]);
    }
    P.image_dims[std::size_t(deg)] = int(e.rank());
  }
  // kernel: relations among generator monomials
  std::map<int, std::size_t> rows;
  for (const auto& v : img)
    for (const auto& [k, c] : v) rows.emplace(k, 0);
  std::size_t nr = 0;
  for (auto& [k, i] : rows) i = nr++;
  QMatrix a(rows.size(), gms.size());
  for (std::size_t j = 0; j < gms.size(); ++j)
    for (const auto& [k, c] : img[j]) a.set(rows[k], j, c);
  MonomialSpace gs(P.gen_degree.size(), bound);
  Echelon rel;
  for (const auto& kv : kernel_basis(a)) {
    Poly p;
    for (std::size_t j = 0; j < kv.size(); ++j) poly_add(p, gms[j], kv[j]);
    rel.insert(gs.vec(p));
  }
  for (const auto& [piv, row] : rel.rows()) P.relations.push_back(gs.poly(row));
  return P;
}

// Minimal invariant monomials as generators.
inline InvariantPresentation invariant_subring(const TruncatedIdeal& J, const std::vector<std::vector<int>>& w,
                                               int bound) {
  auto gens = invariant_generators(J.vars().size(), w, bound);
  std::vector<std::string> names;
  std::vector<Poly> images;
  for (const auto& g : gens) {
    names.push_back("[" + mon_to_string(g, J.vars()) + "]");
    images.push_back(poly_of(g));
  }
  return present_invariants(J, w, names, images, bound);
}

// 2x2 minors s_i s_{j+1} - s_{i+1} s_j (i < j) of the 2 x n Hankel matrix in s_0..s_n.
inline TruncatedIdeal hankel_rank_ideal(int n, int D = 2) {
  if (n < 2) throw std::invalid_argument("hankel_rank_ideal: n >= 2 required");
  std::vector<std::string> vars;
  for (int i = 0; i <= n; ++i) vars.push_back("s" + std::to_string(i));
  std::size_t r = vars.size();
  std::vector<Poly> gens;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Poly p;
      poly_add(p, mon_mul(var_mon(r, std::size_t(i)), var_mon(r, std::size_t(j + 1))), 1);
      poly_add(p, mon_mul(var_mon(r, std::size_t(i + 1)), var_mon(r, std::size_t(j))), -1);
      gens.push_back(p);
    }
  return TruncatedIdeal(vars, gens, D);
}

struct PresentationMatch {
  bool surjective = false;     // images span the invariants in every degree <= bound
  bool relations_equal = false;  // kernel equals the target ideal in that range
  bool ok() const { return surjective && relations_equal; }
};

// Compares a presentation with target variables (gen_names) against a target
// ideal in those variables, degree by degree up to the presentation bound.
inline PresentationMatch compare_presentation(const InvariantPresentation& P, const TruncatedIdeal& target) {
  PresentationMatch m;
  m.surjective = P.invariant_dims == P.image_dims;
  std::vector<int> gd = P.gen_degree;
  std::vector<Mon> gms;
  detail::gen_monomials(gd, P.bound, gms);
  MonomialSpace gs(gd.size(), P.bound);
  auto in_range = [&](const Mon& x) {
    int d = 0;
    for (std::size_t g = 0; g < x.size(); ++g) d += x[g] * gd[g];
    return d <= P.bound;
  };
  Echelon ker, tgt;
  for (const auto& r : P.relations) ker.insert(gs.vec(r));
  for (const auto& g : target.gens())
    for (const auto& x : gms) {
      Poly p = poly_mul(poly_of(x), g);
      bool ok = true;
      for (const auto& [mm, c] : p)
        if (!in_range(mm)) ok = false;
      if (ok) tgt.insert(gs.vec(p));
    }
  bool a = true, b = true;
  for (const auto& [p, row] : ker.rows())
    if (!tgt.contains(row)) a = false;
  for (const auto& [p, row] : tgt.rows())
    if (!ker.contains(row)) b = false;
  m.relations_equal = a && b;
  return m;
}

}  // namespace stabwc
