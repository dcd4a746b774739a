#pragma once

#include "stabwc/cech.hpp"

#include <random>

namespace stabwc {

// Polynomial forms on the standard p-simplex in reduced coordinates t1..tp,
// with t0 = 1 - sum t_i and dt0 = -sum dt_i eliminated.  A term is keyed by
// (e1, e2, dt-mask); bit k of the mask is dt_{k+1}.
class Form {
 public:
  using Mono = std::array<int, 3>;

  Form() = default;
  explicit Form(int p) : p_(p) {
    if (p < 0 || p > 2) throw std::invalid_argument("Form: simplex dimension must be 0, 1 or 2");
  }

  static Form constant(int p, const Rat& c) {
    Form f(p);
    f.add({0, 0, 0}, c);
    return f;
  }
  static Form one(int p) { return constant(p, 1); }

  // Barycentric coordinate t_i, i = 0..p.
  static Form t(int p, int i) {
    Form f(p);
    if (i == 0) {
      f.add({0, 0, 0}, 1);
      for (int k = 1; k <= p; ++k) f.add(unit_t(k), -1);
    } else {
      if (i > p) throw std::invalid_argument("Form::t index");
      f.add(unit_t(i), 1);
    }
    return f;
  }

  static Form dt(int p, int i) {
    Form f(p);
    if (i == 0) {
      for (int k = 1; k <= p; ++k) f.add({0, 0, 1 << (k - 1)}, -1);
    } else {
      if (i > p) throw std::invalid_argument("Form::dt index");
      f.add({0, 0, 1 << (i - 1)}, 1);
    }
    return f;
  }

  int dim() const { return p_; }
  const std::map<Mono, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Mono& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend Form operator+(Form a, const Form& b) {
    a.same(b);
    for (const auto& [m, c] : b.terms_) a.add(m, c);
    return a;
  }
  friend Form operator-(Form a, const Form& b) {
    a.same(b);
    for (const auto& [m, c] : b.terms_) a.add(m, -c);
    return a;
  }
  friend Form operator*(const Rat& k, Form a) {
    Form r(a.p_);
    for (const auto& [m, c] : a.terms_) r.add(m, k * c);
    return r;
  }
  // Wedge product.
  friend Form operator*(const Form& a, const Form& b) {
    a.same(b);
    Form r(a.p_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m;
        int s;
        if (!wedge(ma, mb, m, s)) continue;
        r.add(m, Rat(s) * ca * cb);
      }
    return r;
  }

  static bool wedge(const Mono& a, const Mono& b, Mono& out, int& sign) {
    if (a[2] & b[2]) return false;
    out = {a[0] + b[0], a[1] + b[1], a[2] | b[2]};
    // dt2 ^ dt1 = -dt1 ^ dt2
    sign = ((a[2] & 2) && (b[2] & 1)) ? -1 : 1;
    return true;
  }

  static Mono unit_t(int i) { return i == 1 ? Mono{1, 0, 0} : Mono{0, 1, 0}; }

 private:
  void same(const Form& o) const {
    if (p_ != o.p_) throw std::invalid_argument("Form: simplex dimension mismatch");
  }
  int p_ = 0;
  std::map<Mono, Rat> terms_;
};

inline Form pow(const Form& f, int k) {
  Form r = Form::one(f.dim());
  for (int i = 0; i < k; ++i) r = r * f;
  return r;
}

// omega (x) f for a cochain f supported on level omega.dim().
inline Vec tensor(const Form& omega, const Vec& f) {
  Vec r;
  for (const auto& [k, c] : f) {
    if (k.level() != omega.dim()) throw std::invalid_argument("tensor: form and cochain levels differ");
    if (k.dt || k.e1 || k.e2) throw std::invalid_argument("tensor: cochain already carries a form");
    for (const auto& [m, a] : omega.terms()) {
      Key o = k;
      o.e1 = m[0];
      o.e2 = m[1];
      o.dt = m[2];
      add_to(r, o, a * c);
    }
  }
  return r;
}

inline int tw_key_degree(const Key& k) { return k.form_degree() + k.internal(); }

inline std::optional<int> tw_degree(const Vec& x) {
  std::optional<int> d;
  for (const auto& [k, c] : x) {
    int v = tw_key_degree(k);
    if (d && *d != v) return std::nullopt;
    d = v;
  }
  return d;
}

// (omega (x) f) o (eta (x) g) = (-1)^{|f||eta|} (omega ^ eta) (x) (f o g)
inline bool tw_forms(const Key& a, const Key& b, Key& out, Rat& sign) {
  Form::Mono m;
  int s;
  if (!Form::wedge({a.e1, a.e2, a.dt}, {b.e1, b.e2, b.dt}, m, s)) return false;
  out.e1 = m[0];
  out.e2 = m[1];
  out.dt = m[2];
  sign = s * sign_of(a.internal() * b.form_degree());
  return true;
}

inline Vec tw_compose(const Vec& x, const Vec& y) { return compose(x, y, tw_forms); }

inline Vec tw_bracket(const Vec& x, const Vec& y) {
  if (x.empty() || y.empty()) return {};
  auto dx = tw_degree(x), dy = tw_degree(y);
  if (!dx || !dy) throw std::invalid_argument("tw_bracket: inhomogeneous element");
  return combine(tw_compose(x, y), tw_compose(y, x), -sign_of(*dx * *dy));
}

// de Rham differential of the form factors.
inline Vec form_d(const Vec& x) {
  Vec r;
  for (const auto& [k, c] : x) {
    int p = k.level();
    for (int i = 1; i <= p; ++i) {
      int e = i == 1 ? k.e1 : k.e2;
      int bit = 1 << (i - 1);
      if (e == 0 || (k.dt & bit)) continue;
      Key o = k;
      (i == 1 ? o.e1 : o.e2) -= 1;
      o.dt |= bit;
      int sg = (i == 2 && (k.dt & 1)) ? -1 : 1;
      add_to(r, o, Rat(sg * e) * c);
    }
  }
  return r;
}

// Pullback of the form factors of level-p components along the face
// inclusion delta_i : Delta^{p-1} -> Delta^p.  The result keeps the level-p
// cochain and carries the face index in the tag.
inline Vec face_pullback(int i, const Vec& x) {
  Vec r;
  auto binom = [](int n, int k) {
    Rat b = 1;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
  };
  for (const auto& [k, c] : x) {
    int p = k.level();
    if (p == 0 || i > p) continue;
    Key o = k;
    o.tag = i + 1;
    o.e1 = o.e2 = o.dt = 0;
    if (p == 1) {
      if (k.dt) continue;
      if (i == 0) {
        add_to(r, o, c);
      } else if (k.e1 == 0) {
        add_to(r, o, c);
      }
      continue;
    }
    int a = k.e1, b = k.e2, A = k.dt;
    if (i == 0) {
      // t1 = 1 - s, t2 = s, dt1 = -ds, dt2 = ds
      if (A == 3) continue;
      Rat sg = A == 1 ? -1 : 1;
      for (int j = 0; j <= a; ++j) {
        Key q = o;
        q.e1 = b + j;
        q.dt = A ? 1 : 0;
        add_to(r, q, sg * binom(a, j) * Rat(j % 2 ? -1 : 1) * c);
      }
    } else if (i == 1) {
      // t1 = 0, t2 = s, dt1 = 0, dt2 = ds
      if (a != 0 || (A & 1)) continue;
      o.e1 = b;
      o.dt = A ? 1 : 0;
      add_to(r, o, c);
    } else {
      // t1 = s, t2 = 0, dt1 = ds, dt2 = 0
      if (b != 0 || (A & 2)) continue;
      o.e1 = a;
      o.dt = A ? 1 : 0;
      add_to(r, o, c);
    }
  }
  return r;
}

inline Rat simplex_integral(int p, int e1, int e2) {
  // int_{Delta^p} t^e dt_1...dt_p = prod e_i! / (|e| + p)!
  auto fact = [](int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  mpz_class num = fact(e1) * (p == 2 ? fact(e2) : mpz_class(1));
  Rat r(num, fact(e1 + (p == 2 ? e2 : 0) + p));
  r.canonicalize();
  return r;
}

// Integration of top-degree form parts; a chain map to the Cech total complex.
inline Vec integrate(const Vec& x) {
  Vec r;
  for (const auto& [k, c] : x) {
    int p = k.level();
    if (k.dt != (1 << p) - 1 || k.tag) continue;
    Key o = k;
    o.e1 = o.e2 = o.dt = 0;
    add_to(r, o, simplex_integral(p, k.e1, k.e2) * c);
  }
  return r;
}

struct PrimitiveOptions {
  int start_degree = 3;
  int max_degree = 12;
};

struct PrimitiveResult {
  std::optional<Vec> primitive;
  bool nonzero_class = false;
  std::optional<Weight> failing_weight;
  int degree_bound = 0;
  std::string diagnostic;
};

// The Thom-Whitney totalization of the Cech semicosimplicial DGLA Hom(E, F).
class TotTW {
 public:
  TotTW(const BundleComplex& E, const BundleComplex& F, int margin = -1) : coh_(E, F, margin) {}
  explicit TotTW(const BundleComplex& E, int margin = -1) : coh_(E, E, margin) {}

  const HomSpace& space() const { return coh_.space(); }
  HomCohomology& cohomology() { return coh_; }
  int nchart() const { return space().nchart(); }

  Vec d(const Vec& x) const {
    Vec r = form_d(x);
    for (const auto& [k, c] : space().d_int(x)) add_to(r, k, sign_of(k.form_degree()) * c);
    return r;
  }

  Vec bracket(const Vec& x, const Vec& y) const { return tw_bracket(x, y); }

  // (delta_i^* (x) id) x_p - (id (x) face_i) x_{p-1}, all faces; zero iff compatible.
  Vec compat_defect(const Vec& x) const {
    Vec r;
    for (int p = 1; p < nchart(); ++p) {
      Vec xp = at_level(x, p), xq = at_level(x, p - 1);
      for (int i = 0; i <= p; ++i) {
        axpy(r, 1, face_pullback(i, xp));
        Vec f = space().face(i, xq);
        for (const auto& [k, c] : f) {
          Key o = k;
          o.tag = i + 1;
          add_to(r, o, -c);
        }
      }
    }
    return r;
  }

  bool compatible(const Vec& x) const { return compat_defect(x).empty(); }

  Vec integrate(const Vec& x) const { return stabwc::integrate(x); }

  // Coordinates of [x] in the basis of representatives of H^degree; nullopt if x is not closed.
  std::optional<std::vector<Rat>> class_of(const Vec& x) {
    auto deg = tw_degree(x);
    if (x.empty()) return coh_.coordinates({}, 0);
    if (!deg || !d(x).empty()) return std::nullopt;
    return coh_.coordinates(integrate(x), *deg);
  }

  std::optional<std::vector<Rat>> class_of(const Vec& x, int degree) {
    if (x.empty()) return coh_.coordinates({}, degree);
    return class_of(x);
  }

  bool is_exact(const Vec& x) {
    if (x.empty()) return true;
    auto deg = tw_degree(x);
    if (!deg || !d(x).empty()) return false;
    return coh_.primitive(integrate(x)).has_value();
  }

  // Unknowns of an ansatz at weight w and total degree k: every admissible
  // slot times every form monomial of t-degree <= D and matching form degree.
  std::vector<Key> ansatz(Weight w, int k, int D) const {
    std::vector<Key> out;
    for (int deg = 0; deg <= D; ++deg)
      for (const auto& sl : space().slots()) {
        if (!space().admissible(sl, w)) continue;
        int p = popcount(sl.I) - 1;
        int f = k - (sl.t - sl.s);
        if (f < 0 || f > p) continue;
        if (p == 0 && deg > 0) continue;
        for (int A = 0; A < (1 << p); ++A) {
          if (popcount(A) != f) continue;
          for (int a = deg; a >= 0; --a) {
            int b = deg - a;
            if (p < 2 && b != 0) continue;
            Key key = space().key(sl, w);
            key.e1 = a;
            key.e2 = b;
            key.dt = A;
            out.push_back(key);
          }
        }
      }
    return out;
  }

  PrimitiveResult solve_primitive(const Vec& c, const PrimitiveOptions& opt = {}) {
    PrimitiveResult res;
    if (c.empty()) {
      res.primitive = Vec{};
      return res;
    }
    auto deg = tw_degree(c);
    if (!deg) throw std::invalid_argument("solve_primitive: inhomogeneous element");
    if (!d(c).empty() || !compatible(c)) throw std::invalid_argument("solve_primitive: element is not a compatible cocycle");
    if (!coh_.primitive(integrate(c))) {
      res.nonzero_class = true;
      res.diagnostic = "class is nonzero in cohomology";
      return res;
    }
    Vec theta;
    for (Weight w : weights_of(c)) {
      Vec cw = at_weight(c, w);
      int need = 0;
      for (const auto& [k, v] : cw) need = std::max(need, k.e1 + k.e2 + 1);
      bool done = false;
      for (int D = std::max(opt.start_degree, need); D <= opt.max_degree; D = D * 2) {
        res.degree_bound = D;
        auto sol = solve_at(cw, w, *deg - 1, D);
        if (sol) {
          axpy(theta, 1, *sol);
          done = true;
          break;
        }
        if (D * 2 > opt.max_degree && D < opt.max_degree) D = opt.max_degree / 2;
      }
      if (!done) {
        res.failing_weight = w;
        res.diagnostic = "no primitive with t-degree <= " + std::to_string(opt.max_degree) + " at weight (" +
                         std::to_string(w[0]) + "," + std::to_string(w[1]) + ")";
        return res;
      }
    }
    res.primitive = theta;
    return res;
  }

  // Compatible elements of degree k at weight w with t-degree <= D.
  std::vector<Vec> compatible_basis(Weight w, int k, int D) const {
    auto cols = ansatz(w, k, D);
    std::map<Key, std::size_t> rows;
    std::vector<Vec> images;
    for (const auto& key : cols) images.push_back(compat_defect(Vec{{key, Rat(1)}}));
    for (const auto& im : images)
      for (const auto& [kk, v] : im) rows.emplace(kk, 0);
    std::size_t r = 0;
    for (auto& [kk, idx] : rows) idx = r++;
    QMatrix m(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [kk, v] : images[j]) m.set(rows[kk], j, v);
    std::vector<Vec> out;
    for (const auto& v : kernel_basis(m)) {
      Vec x;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) x.emplace(cols[j], v[j]);
      out.push_back(std::move(x));
    }
    return out;
  }

  // Closed compatible elements whose classes are the standard basis of H^k
  // (in the order of cohomology().representatives(k)).
  std::vector<Vec> lift_classes(int k, int max_degree = 4) {
    std::vector<Vec> out;
    for (const auto& [w, dk] : coh_.dims().by_weight) {
      auto it = dk.find(k);
      if (it == dk.end()) continue;
      std::size_t m = std::size_t(it->second);
      bool done = false;
      for (int D = 0; D <= max_degree && !done; ++D) {
        std::vector<Vec> closed;
        auto basis = compatible_basis(w, k, D);
        {
          std::map<Key, std::size_t> rows;
          std::vector<Vec> images;
          for (const auto& b : basis) images.push_back(d(b));
          for (const auto& im : images)
            for (const auto& [kk, v] : im) rows.emplace(kk, 0);
          std::size_t r = 0;
          for (auto& [kk, idx] : rows) idx = r++;
          QMatrix a(rows.size(), basis.size());
          for (std::size_t j = 0; j < basis.size(); ++j)
            for (const auto& [kk, v] : images[j]) a.set(rows[kk], j, v);
          for (const auto& v : kernel_basis(a)) {
            Vec x;
            for (std::size_t j = 0; j < v.size(); ++j) axpy(x, v[j], basis[j]);
            closed.push_back(std::move(x));
          }
        }
        std::vector<std::size_t> ids;
        {
          auto all = coh_.representatives(k);
          for (std::size_t j = 0; j < all.size(); ++j)
            if (all[j].begin()->first.w == w) ids.push_back(j);
        }
        QMatrix cls(m, closed.size());
        for (std::size_t j = 0; j < closed.size(); ++j) {
          auto c = class_of(closed[j], k);
          if (!c) throw std::logic_error("lift_classes: closed element without a class");
          for (std::size_t i = 0; i < m; ++i) cls.set(i, j, (*c)[ids[i]]);
        }
        if (rank(cls) < m) continue;
        for (std::size_t i = 0; i < m; ++i) {
          std::vector<Rat> e(m, Rat(0));
          e[i] = 1;
          auto sol = solve_linear(cls, e);
          Vec x;
          for (std::size_t j = 0; j < sol->size(); ++j) axpy(x, (*sol)[j], closed[j]);
          out.push_back(std::move(x));
        }
        done = true;
      }
      if (!done)
        throw std::runtime_error("lift_classes: no lift with t-degree <= " + std::to_string(max_degree) + " at weight (" +
                                 std::to_string(w[0]) + "," + std::to_string(w[1]) + ")");
    }
    return out;
  }

  Vec random_compatible(std::mt19937& g, Weight w, int k, int D) const {
    auto basis = compatible_basis(w, k, D);
    std::uniform_int_distribution<int> co(-3, 3);
    Vec x;
    for (const auto& b : basis) axpy(x, co(g), b);
    return x;
  }

 private:
  std::optional<Vec> solve_at(const Vec& c, Weight w, int k, int D) const {
    auto cols = ansatz(w, k, D);
    std::map<Key, std::size_t> rows;
    std::vector<Vec> images;
    images.reserve(cols.size());
    for (const auto& key : cols) {
      Vec unit{{key, Rat(1)}};
      Vec im = d(unit);
      axpy(im, 1, compat_defect(unit));
      images.push_back(std::move(im));
    }
    for (const auto& im : images)
      for (const auto& [kk, v] : im) rows.emplace(kk, 0);
    for (const auto& [kk, v] : c) rows.emplace(kk, 0);
    std::size_t r = 0;
    for (auto& [kk, idx] : rows) idx = r++;
    QMatrix m(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [kk, v] : images[j]) m.set(rows[kk], j, v);
    std::vector<Rat> rhs(rows.size(), Rat(0));
    for (const auto& [kk, v] : c) rhs[rows[kk]] = v;
    auto sol = solve_linear(m, rhs);
    if (!sol) return std::nullopt;
    Vec theta;
    for (std::size_t j = 0; j < sol->size(); ++j)
      if ((*sol)[j] != 0) theta.emplace(cols[j], (*sol)[j]);
    return theta;
  }

  mutable HomCohomology coh_;
};

}  // namespace stabwc
