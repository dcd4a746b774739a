#pragma once

#include "stabwc/localmodel.hpp"

#include <compare>
#include <functional>
#include <optional>
#include <set>

namespace stabwc {

// One basis element of a cochain: a single monomial entry of a Hom-matrix on
// U_I, written in the frames of chart first(I), optionally tensored with a
// polynomial form on a simplex (t-exponents and a dt-mask).  w is the torus
// weight of the element; the monomial itself is recovered from the frames.
struct Key {
  Weight w{0, 0};
  int I = 1;
  int tag = 0;
  int dt = 0;
  int e1 = 0, e2 = 0;
  int s = 0, t = 0;
  int row = 0, col = 0;

  auto operator<=>(const Key&) const = default;
  bool operator==(const Key&) const = default;

  int level() const { return popcount(I) - 1; }
  int internal() const { return t - s; }
  int form_degree() const { return popcount(dt); }
};

using Vec = std::map<Key, Rat>;

inline void add_to(Vec& v, const Key& k, const Rat& c) {
  if (c == 0) return;
  auto it = v.find(k);
  if (it == v.end()) {
    v.emplace(k, c);
  } else {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

inline void axpy(Vec& y, const Rat& a, const Vec& x) {
  if (a == 0) return;
  for (const auto& [k, c] : x) add_to(y, k, a * c);
}

inline Vec combine(Vec a, const Vec& b, const Rat& k = 1) {
  axpy(a, k, b);
  return a;
}

inline Vec scaled(const Rat& k, Vec a) {
  if (k == 0) return {};
  for (auto& [key, c] : a) c *= k;
  return a;
}

inline std::set<Weight> weights_of(const Vec& v) {
  std::set<Weight> r;
  for (const auto& [k, c] : v) r.insert(k.w);
  return r;
}

inline Vec at_weight(const Vec& v, Weight w) {
  Vec r;
  for (const auto& [k, c] : v)
    if (k.w == w) r.emplace(k, c);
  return r;
}

inline Vec at_level(const Vec& v, int p) {
  Vec r;
  for (const auto& [k, c] : v)
    if (k.level() == p) r.emplace(k, c);
  return r;
}

inline Vec shifted_weight(const Vec& v, Weight d) {
  Vec r;
  for (const auto& [k, c] : v) {
    Key o = k;
    o.w = k.w + d;
    r.emplace(o, c);
  }
  return r;
}

// Total degree p + n of a plain Cech cochain, if homogeneous.
inline std::optional<int> cech_degree(const Vec& v) {
  std::optional<int> d;
  for (const auto& [k, c] : v) {
    int x = k.level() + k.internal();
    if (d && *d != x) return std::nullopt;
    d = x;
  }
  return d;
}

inline int sign_of(int parity) { return parity % 2 == 0 ? 1 : -1; }

// Pointwise composition f o g on each overlap, with the Koszul sign
// (-1)^{|f||eta|} when the elements carry forms (omega (x) f) o (eta (x) g).
// Form wedge and the dt bookkeeping are supplied by the caller.
using FormProduct = std::function<bool(const Key&, const Key&, Key&, Rat&)>;

inline bool no_forms(const Key& a, const Key& b, Key& out, Rat& sign) {
  if (a.dt || a.e1 || a.e2 || b.dt || b.e1 || b.e2 || a.tag || b.tag) throw std::logic_error("compose: form part present");
  out.dt = 0;
  out.e1 = out.e2 = 0;
  sign = 1;
  return true;
}

inline Vec compose(const Vec& f, const Vec& g, const FormProduct& forms = no_forms) {
  std::map<std::tuple<int, int, int>, std::vector<const std::pair<const Key, Rat>*>> by_src;
  for (const auto& e : f) by_src[{e.first.I, e.first.s, e.first.col}].push_back(&e);
  Vec r;
  for (const auto& [kg, cg] : g) {
    auto it = by_src.find({kg.I, kg.t, kg.row});
    if (it == by_src.end()) continue;
    for (const auto* pf : it->second) {
      const Key& kf = pf->first;
      Key k;
      k.I = kg.I;
      k.w = kf.w + kg.w;
      k.s = kg.s;
      k.t = kf.t;
      k.row = kf.row;
      k.col = kg.col;
      Rat sign;
      if (!forms(kf, kg, k, sign)) continue;
      add_to(r, k, sign * pf->second * cg);
    }
  }
  return r;
}

inline std::optional<int> internal_degree(const Vec& v) {
  std::optional<int> d;
  for (const auto& [k, c] : v) {
    if (d && *d != k.internal()) return std::nullopt;
    d = k.internal();
  }
  return d;
}

// Graded commutator with respect to internal degree.
inline Vec bracket(const Vec& f, const Vec& g) {
  if (f.empty() || g.empty()) return {};
  auto df = internal_degree(f), dg = internal_degree(g);
  if (!df || !dg) throw std::invalid_argument("bracket: inhomogeneous cochain");
  return combine(compose(f, g), compose(g, f), -sign_of(*df * *dg));
}

struct Slot {
  int I, s, t, row, col;
  auto operator<=>(const Slot&) const = default;
};

// Cech cochains of the Hom complex Hom(E, F) on the cover of the model.
class HomSpace {
 public:
  HomSpace(BundleComplex E, BundleComplex F) : E_(std::move(E)), F_(std::move(F)) {
    if (E_.model->label() != F_.model->label()) throw std::invalid_argument("HomSpace: different models");
    m_ = E_.model.get();
    for (int p = 0; p < m_->nchart; ++p)
      for (int I : m_->masks_of_size(p + 1))
        for (const auto& te : E_.terms)
          for (const auto& tf : F_.terms)
            for (int r = 0; r < tf.rank; ++r)
              for (int c = 0; c < te.rank; ++c) slots_.push_back({I, te.deg, tf.deg, r, c});
  }

  const BundleComplex& source() const { return E_; }
  const BundleComplex& target() const { return F_; }
  const ToricModel& model() const { return *m_; }
  int nchart() const { return m_->nchart; }
  const std::vector<Slot>& slots() const { return slots_; }

  int min_internal() const { return F_.min_deg() - E_.max_deg(); }
  int max_internal() const { return F_.max_deg() - E_.min_deg(); }
  int min_total() const { return min_internal(); }
  int max_total() const { return max_internal() + m_->nchart - 1; }

  Weight frame_diff(int chart, int s, int t, int row, int col) const {
    return E_.term(s).frame[chart][col] - F_.term(t).frame[chart][row];
  }

  // Character of the monomial carried by a key.
  Weight entry_char(const Key& k) const { return k.w + frame_diff(first_chart(k.I), k.s, k.t, k.row, k.col); }

  Key key(const Slot& sl, Weight w) const {
    Key k;
    k.w = w;
    k.I = sl.I;
    k.s = sl.s;
    k.t = sl.t;
    k.row = sl.row;
    k.col = sl.col;
    return k;
  }

  // Key holding the monomial with character ch at the given slot.
  Key key_for_char(const Slot& sl, Weight ch) const {
    return key(sl, ch - frame_diff(first_chart(sl.I), sl.s, sl.t, sl.row, sl.col));
  }

  bool admissible(const Slot& sl, Weight w) const {
    return m_->regular(sl.I, w + frame_diff(first_chart(sl.I), sl.s, sl.t, sl.row, sl.col));
  }

  bool admissible(const Key& k) const {
    if (!E_.has(k.s) || !F_.has(k.t)) return false;
    if (k.col < 0 || k.col >= E_.rank(k.s) || k.row < 0 || k.row >= F_.rank(k.t)) return false;
    return m_->regular(k.I, entry_char(k));
  }

  std::string describe(const Key& k) const {
    return "U" + mask_name(k.I) + " Hom^{" + std::to_string(k.s) + "," + std::to_string(k.t) + "}(" +
           std::to_string(k.row) + "," + std::to_string(k.col) + ") = " +
           m_->format(first_chart(k.I), entry_char(k));
  }

  static std::string mask_name(int I) {
    std::string s;
    for (int c : mask_charts(I)) s += std::to_string(c + 1);
    return s;
  }

  // Internal differential d(f) = d_F o f - (-1)^n f o d_E, chartwise in the
  // frames of first(I).  Form fields are carried along untouched.
  Vec d_int(const Vec& f) const {
    Vec r;
    for (const auto& [k, c] : f) {
      int i0 = first_chart(k.I);
      for (const auto& x : F_.d_at(k.t, i0))
        if (x.col == k.row) {
          Key o = k;
          o.t = k.t + 1;
          o.row = x.row;
          add_to(r, o, c * x.c);
        }
      Rat sg = -sign_of(k.internal());
      for (const auto& x : E_.d_at(k.s - 1, i0))
        if (x.row == k.col) {
          Key o = k;
          o.s = k.s - 1;
          o.col = x.col;
          add_to(r, o, sg * c * x.c);
        }
    }
    return r;
  }

  // k-th coface: (face_k f)_J = f_{J minus j_k}, converted to the frames of
  // chart j_0 when k = 0.
  Vec face(int k, const Vec& f) const {
    Vec r;
    for (const auto& [key, c] : f) face_into(r, k, key, c);
    return r;
  }

  // Cech differential sum_k (-1)^k face_k.
  Vec cech(const Vec& f) const {
    Vec r;
    for (const auto& [key, c] : f)
      for (int k = 0; k <= key.level() + 1; ++k) face_into(r, k, key, sign_of(k) * c);
    return r;
  }

  // Total differential cech + (-1)^p d_int on level p.
  Vec total_d(const Vec& f) const {
    Vec r = cech(f);
    for (const auto& [k, c] : d_int(f)) add_to(r, k, sign_of(k.level()) * c);
    return r;
  }

  bool well_formed(const Vec& f) const {
    for (const auto& [k, c] : f)
      if (!admissible(k)) return false;
    return true;
  }

 private:
  void face_into(Vec& r, int k, const Key& key, const Rat& c) const {
    if (c == 0) return;
    auto charts = mask_charts(key.I);
    for (int j = 0; j < m_->nchart; ++j) {
      if (key.I & (1 << j)) continue;
      int pos = 0;
      for (int x : charts)
        if (x < j) ++pos;
      if (pos != k) continue;
      Key o = key;
      o.I = key.I | (1 << j);
      if (pos != 0) {
        add_to(r, o, c);
        continue;
      }
      // F^{(j0)} = T^t_{j1 j0} F^{(j1)} T^s_{j0 j1}
      int j1 = charts.front();
      const auto& Ts = E_.T(key.s, j, j1);
      const auto& Tt = F_.T(key.t, j1, j);
      for (const auto& a : Ts) {
        if (a.row != key.col) continue;
        for (const auto& b : Tt) {
          if (b.col != key.row) continue;
          Key q = o;
          q.col = a.col;
          q.row = b.row;
          add_to(r, q, c * a.c * b.c);
        }
      }
    }
  }

  BundleComplex E_, F_;
  const ToricModel* m_ = nullptr;
  std::vector<Slot> slots_;
};

struct WindowBox {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  WindowBox grown(int k) const { return {x0 - k, x1 + k, y0 - k, y1 + k}; }
  bool contains(Weight w) const { return w[0] >= x0 && w[0] <= x1 && w[1] >= y0 && w[1] <= y1; }
  bool on_boundary(Weight w) const { return w[0] == x0 || w[0] == x1 || w[1] == y0 || w[1] == y1; }
  std::string to_string() const {
    return "[" + std::to_string(x0) + ".." + std::to_string(x1) + "]x[" + std::to_string(y0) + ".." +
           std::to_string(y1) + "]";
  }
};

class WindowTooSmall : public std::runtime_error {
 public:
  WindowTooSmall(const std::string& what, Weight w) : std::runtime_error(what), weight(w) {}
  Weight weight;
};

struct ExtResult {
  std::map<int, int> dims;  // total degree -> dimension
  std::map<Weight, std::map<int, int>> by_weight;  // only weights with cohomology
  WindowBox window;
  int enlargements = 0;
  int patterns = 0;
};

// Cohomology of the Cech total complex of Hom(E, F), weight by weight.  The
// complex at a weight depends only on which slots carry a regular monomial,
// so results are cached per admissibility pattern.
class HomCohomology {
 public:
  using Progress = std::function<void(const std::string&)>;

  // margin < 0 selects the default 2 * max(n); margin == 0 fixes the window.
  HomCohomology(BundleComplex E, BundleComplex F, int margin = -1, Progress progress = {})
      : space_(std::move(E), std::move(F)), progress_(std::move(progress)) {
    int nmax = 1;
    for (int x : space_.model().n) nmax = std::max(nmax, x);
    margin_ = margin < 0 ? 2 * nmax : margin;
  }

  const HomSpace& space() const { return space_; }
  int margin() const { return margin_; }

  WindowBox base_box() const {
    bool first = true;
    WindowBox b;
    for (int i = 0; i < space_.nchart(); ++i)
      for (const auto& sl : space_.slots()) {
        if (first_chart(sl.I) != i || popcount(sl.I) != 1) continue;
        Weight w = -space_.frame_diff(i, sl.s, sl.t, sl.row, sl.col);
        if (first) {
          b = {w[0], w[0], w[1], w[1]};
          first = false;
        }
        b.x0 = std::min(b.x0, w[0]);
        b.x1 = std::max(b.x1, w[0]);
        b.y0 = std::min(b.y0, w[1]);
        b.y1 = std::max(b.y1, w[1]);
      }
    return b;
  }

  const ExtResult& dims() {
    if (result_) return *result_;
    ExtResult r;
    WindowBox box = base_box().grown(margin_);
    for (;;) {
      r.by_weight.clear();
      Weight touch{0, 0};
      bool touched = false;
      for (int x = box.x0; x <= box.x1; ++x)
        for (int y = box.y0; y <= box.y1; ++y) {
          Weight w{x, y};
          const auto& pd = pattern_at(w);
          bool any = false;
          for (const auto& [k, d] : pd.dims)
            if (d) {
              r.by_weight[w][k] = d;
              any = true;
            }
          if (any && box.on_boundary(w) && !touched) {
            touched = true;
            touch = w;
          }
        }
      if (!touched) break;
      if (margin_ == 0)
        throw WindowTooSmall("cohomology reaches the window boundary " + box.to_string() + " at weight (" +
                                 std::to_string(touch[0]) + "," + std::to_string(touch[1]) + ")",
                             touch);
      if (progress_)
        progress_("window " + box.to_string() + " touched at (" + std::to_string(touch[0]) + "," +
                  std::to_string(touch[1]) + "), enlarging");
      box = box.grown(margin_);
      ++r.enlargements;
    }
    for (int k = space_.min_total(); k <= space_.max_total(); ++k) r.dims[k] = 0;
    for (const auto& [w, dk] : r.by_weight) {
      if (progress_) progress_(weight_line(w, dk));
      for (const auto& [k, d] : dk) r.dims[k] += d;
    }
    r.window = box;
    r.patterns = int(cache_.size());
    result_ = r;
    return *result_;
  }

  int dim(int degree) {
    const auto& d = dims().dims;
    auto it = d.find(degree);
    return it == d.end() ? 0 : it->second;
  }

  // Cocycles whose classes form a basis of H^degree, ordered by weight.
  std::vector<Vec> representatives(int degree) {
    std::vector<Vec> out;
    for (const auto& [w, dk] : dims().by_weight) {
      if (!dk.count(degree)) continue;
      for (auto& v : reps_at(w, degree)) out.push_back(std::move(v));
    }
    return out;
  }

  std::vector<Vec> reps_at(Weight w, int degree) {
    const auto& pd = pattern_at(w);
    auto it = pd.reps.find(degree);
    std::vector<Vec> out;
    if (it == pd.reps.end()) return out;
    const auto& basis = pd.basis.at(degree);
    for (const auto& coeffs : it->second) {
      Vec v;
      for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (coeffs[j] != 0) v.emplace(space_.key(space_.slots()[basis[j]], w), coeffs[j]);
      out.push_back(std::move(v));
    }
    return out;
  }

  // Coordinates of [z] with respect to representatives(degree); nullopt when
  // z is not a cocycle of that degree.
  std::optional<std::vector<Rat>> coordinates(const Vec& z, int degree) {
    auto reps = representatives(degree);
    std::vector<Rat> out(reps.size(), Rat(0));
    if (z.empty()) return out;
    if (cech_degree(z) != degree || !space_.total_d(z).empty()) return std::nullopt;
    std::map<Weight, std::vector<std::size_t>> idx;
    for (std::size_t j = 0; j < reps.size(); ++j) idx[reps[j].begin()->first.w].push_back(j);
    for (Weight w : weights_of(z)) {
      auto c = local_coordinates(at_weight(z, w), w, degree);
      if (!c) return std::nullopt;
      const auto& ids = idx[w];
      if (c->size() != ids.size()) throw std::logic_error("coordinates: representative mismatch");
      for (std::size_t j = 0; j < ids.size(); ++j) out[ids[j]] = (*c)[j];
    }
    return out;
  }

  // y with total_d(y) = z, if z is exact.
  std::optional<Vec> primitive(const Vec& z) {
    Vec y;
    if (z.empty()) return y;
    auto deg = cech_degree(z);
    if (!deg) return std::nullopt;
    for (Weight w : weights_of(z)) {
      const auto& pd = pattern_at(w);
      auto zb = to_local(at_weight(z, w), pd, *deg);
      if (!zb) return std::nullopt;
      if (!pd.d.count(*deg - 1)) return std::nullopt;
      auto sol = solve_linear(pd.d.at(*deg - 1), *zb);
      if (!sol) return std::nullopt;
      const auto& basis = pd.basis.at(*deg - 1);
      for (std::size_t j = 0; j < sol->size(); ++j)
        if ((*sol)[j] != 0) y.emplace(space_.key(space_.slots()[basis[j]], w), (*sol)[j]);
    }
    return y;
  }

  // Dimensions of the (finite) complex at one weight.
  std::map<int, int> dims_at(Weight w) { return pattern_at(w).dims; }

  // Admissible slots of total degree k at weight w, as keys.
  std::vector<Key> basis_at(Weight w, int k) {
    std::vector<Key> out;
    const auto& pd = pattern_at(w);
    auto it = pd.basis.find(k);
    if (it == pd.basis.end()) return out;
    for (int j : it->second) out.push_back(space_.key(space_.slots()[j], w));
    return out;
  }

 private:
  struct PatternData {
    std::map<int, std::vector<int>> basis;  // degree -> slot indices
    std::map<int, QMatrix> d;               // degree k: C^k -> C^{k+1}
    std::map<int, int> dims;
    std::map<int, std::vector<std::vector<Rat>>> reps;
  };

  std::string weight_line(Weight w, const std::map<int, int>& dk) const {
    std::string s = "weight (" + std::to_string(w[0]) + "," + std::to_string(w[1]) + "):";
    for (const auto& [k, d] : dk) s += " H^" + std::to_string(k) + "=" + std::to_string(d);
    return s;
  }

  const PatternData& pattern_at(Weight w) {
    const auto& slots = space_.slots();
    std::vector<char> pat(slots.size());
    for (std::size_t j = 0; j < slots.size(); ++j) pat[j] = space_.admissible(slots[j], w) ? 1 : 0;
    auto it = cache_.find(pat);
    if (it != cache_.end()) return it->second;
    PatternData pd;
    int lo = space_.min_total(), hi = space_.max_total();
    for (int k = lo - 1; k <= hi + 1; ++k) pd.basis[k];
    for (std::size_t j = 0; j < slots.size(); ++j)
      if (pat[j]) pd.basis[popcount(slots[j].I) - 1 + slots[j].t - slots[j].s].push_back(int(j));
    for (int k = lo - 1; k <= hi; ++k) {
      const auto& src = pd.basis[k];
      const auto& tgt = pd.basis[k + 1];
      std::map<Key, std::size_t> row_of;
      for (std::size_t r = 0; r < tgt.size(); ++r) row_of[space_.key(slots[tgt[r]], w)] = r;
      QMatrix m(tgt.size(), src.size());
      for (std::size_t c = 0; c < src.size(); ++c) {
        Vec unit{{space_.key(slots[src[c]], w), Rat(1)}};
        for (const auto& [k2, v] : space_.total_d(unit)) {
          auto f = row_of.find(k2);
          if (f == row_of.end()) throw std::logic_error("total differential left the admissible slots");
          m.set(f->second, c, v);
        }
      }
      pd.d[k] = m;
    }
    for (int k = lo; k <= hi; ++k) {
      const QMatrix& dk = pd.d.at(k);
      const QMatrix& dprev = pd.d.at(k - 1);
      Echelon img;
      for (auto& col : dprev.transpose().sparse_rows()) img.insert(std::move(col));
      std::vector<std::vector<Rat>> reps;
      for (auto& v : kernel_basis(dk)) {
        SparseVec sv;
        for (std::size_t j = 0; j < v.size(); ++j)
          if (v[j] != 0) sv[int(j)] = v[j];
        if (img.insert(sv)) reps.push_back(std::move(v));
      }
      pd.dims[k] = int(reps.size());
      if (!reps.empty()) pd.reps[k] = std::move(reps);
    }
    return cache_.emplace(std::move(pat), std::move(pd)).first->second;
  }

  std::optional<std::vector<Rat>> to_local(const Vec& z, const PatternData& pd, int degree) const {
    const auto& basis = pd.basis.at(degree);
    std::map<Key, std::size_t> pos;
    Weight w = z.begin()->first.w;
    for (std::size_t j = 0; j < basis.size(); ++j) pos[space_.key(space_.slots()[basis[j]], w)] = j;
    std::vector<Rat> v(basis.size(), Rat(0));
    for (const auto& [k, c] : z) {
      auto it = pos.find(k);
      if (it == pos.end()) return std::nullopt;
      v[it->second] = c;
    }
    return v;
  }

  std::optional<std::vector<Rat>> local_coordinates(const Vec& z, Weight w, int degree) {
    const auto& pd = pattern_at(w);
    auto zb = to_local(z, pd, degree);
    if (!zb) return std::nullopt;
    std::vector<std::vector<Rat>> none;
    auto rit = pd.reps.find(degree);
    const auto& reps = rit == pd.reps.end() ? none : rit->second;
    const QMatrix& dprev = pd.d.at(degree - 1);
    QMatrix a(zb->size(), reps.size() + dprev.cols());
    for (std::size_t j = 0; j < reps.size(); ++j)
      for (std::size_t i = 0; i < reps[j].size(); ++i) a.set(i, j, reps[j][i]);
    for (const auto& [ij, v] : dprev.entries()) a.set(ij.first, reps.size() + ij.second, v);
    auto sol = solve_linear(a, *zb);
    if (!sol) return std::nullopt;
    return std::vector<Rat>(sol->begin(), sol->begin() + long(reps.size()));
  }

  HomSpace space_;
  Progress progress_;
  int margin_ = 0;
  std::map<std::vector<char>, PatternData> cache_;
  std::optional<ExtResult> result_;
};

// Dimensions of Ext^k(E, F) for every degree.
inline ExtResult ext_dimensions(const BundleComplex& E, const BundleComplex& F, int margin = -1) {
  HomCohomology h(E, F, margin);
  return h.dims();
}

}  // namespace stabwc
