#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stabwc {

using Rat = mpq_class;
using Weight = std::array<int, 2>;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Weight operator+(Weight a, Weight b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Weight operator-(Weight a, Weight b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Weight operator-(Weight a) { return {-a[0], -a[1]}; }
inline Weight operator*(int k, Weight a) { return {k * a[0], k * a[1]}; }

using SparseVec = std::map<int, Rat>;

inline void axpy(SparseVec& y, const Rat& a, const SparseVec& x) {
  if (a == 0) return;
  for (const auto& [k, v] : x) {
    auto it = y.find(k);
    if (it == y.end()) {
      y.emplace(k, a * v);
    } else {
      it->second += a * v;
      if (it->second == 0) y.erase(it);
    }
  }
}

// Incremental reduced row echelon form over Q.  Pivots are always the
// smallest surviving column index of a row, so particular solutions are
// supported on the leftmost admissible columns.
class Echelon {
 public:
  // Returns true if v was independent of the rows already present.
  bool insert(SparseVec v) {
    reduce(v);
    if (v.empty()) return false;
    auto [p, lead] = *v.begin();
    Rat inv = 1 / lead;
    for (auto& [k, x] : v) x *= inv;
    for (auto& [q, row] : rows_) {
      auto it = row.find(p);
      if (it != row.end()) {
        Rat c = it->second;
        axpy(row, -c, v);
      }
    }
    rows_.emplace(p, std::move(v));
    return true;
  }

  void reduce(SparseVec& v) const {
    std::vector<int> hits;
    for (const auto& [k, x] : v)
      if (rows_.count(k)) hits.push_back(k);
    for (int k : hits) {
      auto it = v.find(k);
      if (it == v.end()) continue;
      Rat c = it->second;
      axpy(v, -c, rows_.at(k));
    }
  }

  bool contains(SparseVec v) const {
    reduce(v);
    return v.empty();
  }

  std::size_t rank() const { return rows_.size(); }
  const std::map<int, SparseVec>& rows() const { return rows_; }
  bool is_pivot(int c) const { return rows_.count(c) > 0; }

 private:
  std::map<int, SparseVec> rows_;
};

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  static QMatrix from_rows(const std::vector<std::vector<Rat>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    QMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void set(std::size_t i, std::size_t j, const Rat& v) {
    check(i, j);
    if (v == 0)
      entries_.erase({i, j});
    else
      entries_[{i, j}] = v;
  }
  void add(std::size_t i, std::size_t j, const Rat& v) { set(i, j, get(i, j) + v); }
  Rat get(std::size_t i, std::size_t j) const {
    check(i, j);
    auto it = entries_.find({i, j});
    return it == entries_.end() ? Rat(0) : it->second;
  }
  const std::map<std::pair<std::size_t, std::size_t>, Rat>& entries() const { return entries_; }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (const auto& [ij, v] : entries_) t.entries_[{ij.second, ij.first}] = v;
    return t;
  }

  QMatrix operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("QMatrix: shape mismatch");
    std::vector<SparseVec> orows(o.rows_);
    for (const auto& [ij, v] : o.entries_) orows[ij.first].emplace(int(ij.second), v);
    QMatrix r(rows_, o.cols_);
    std::vector<SparseVec> acc(rows_);
    for (const auto& [ij, v] : entries_) axpy(acc[ij.first], v, orows[ij.second]);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : acc[i]) r.entries_[{i, std::size_t(j)}] = v;
    return r;
  }

  std::vector<Rat> apply(const std::vector<Rat>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("QMatrix: vector length");
    std::vector<Rat> y(rows_, Rat(0));
    for (const auto& [ij, v] : entries_) y[ij.first] += v * x[ij.second];
    return y;
  }

  std::vector<SparseVec> sparse_rows() const {
    std::vector<SparseVec> r(rows_);
    for (const auto& [ij, v] : entries_) r[ij.first].emplace(int(ij.second), v);
    return r;
  }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("QMatrix index");
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, Rat> entries_;
};

inline std::size_t rank(const QMatrix& m) {
  Echelon e;
  for (auto& r : m.sparse_rows()) e.insert(std::move(r));
  return e.rank();
}

inline std::vector<std::vector<Rat>> kernel_basis(const QMatrix& m) {
  Echelon e;
  for (auto& r : m.sparse_rows()) e.insert(std::move(r));
  std::vector<std::vector<Rat>> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (e.is_pivot(int(f))) continue;
    std::vector<Rat> v(m.cols(), Rat(0));
    v[f] = 1;
    for (const auto& [p, row] : e.rows()) {
      auto it = row.find(int(f));
      if (it != row.end()) v[p] = -it->second;
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Particular solution of m x = b with free variables set to zero, or
// nullopt when the system is inconsistent.
inline std::optional<std::vector<Rat>> solve_linear(const QMatrix& m, const std::vector<Rat>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length");
  int bc = int(m.cols());
  auto rows = m.sparse_rows();
  Echelon e;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (b[i] != 0) rows[i][bc] = b[i];
    e.insert(std::move(rows[i]));
  }
  if (e.is_pivot(bc)) return std::nullopt;
  std::vector<Rat> x(m.cols(), Rat(0));
  for (const auto& [p, row] : e.rows()) {
    auto it = row.find(bc);
    if (it != row.end()) x[p] = it->second;
  }
  return x;
}

// Weight-graded multivariate Laurent polynomials.

struct RingInfo {
  std::string id;
  std::vector<std::string> names;
  std::vector<Weight> weights;
};

using RingPtr = std::shared_ptr<const RingInfo>;

inline RingPtr make_ring(std::string id, std::vector<std::string> names,
                         std::vector<Weight> weights = {}) {
  if (weights.empty()) weights.assign(names.size(), Weight{0, 0});
  if (weights.size() != names.size()) throw std::invalid_argument("make_ring: weights");
  return std::make_shared<RingInfo>(RingInfo{std::move(id), std::move(names), std::move(weights)});
}

using Exponent = std::vector<int>;

class Laurent {
 public:
  Laurent() = default;
  explicit Laurent(RingPtr ring) : ring_(std::move(ring)) {}

  static Laurent constant(RingPtr ring, const Rat& c) {
    Laurent l(ring);
    if (c != 0) l.terms_[Exponent(l.arity(), 0)] = c;
    return l;
  }
  static Laurent monomial(RingPtr ring, Exponent e, const Rat& c = 1) {
    Laurent l(ring);
    if (e.size() != l.arity()) throw std::invalid_argument("Laurent: exponent arity");
    if (c != 0) l.terms_[std::move(e)] = c;
    return l;
  }
  static Laurent variable(RingPtr ring, std::size_t i, int power = 1) {
    Exponent e(ring->names.size(), 0);
    e.at(i) = power;
    return monomial(ring, std::move(e));
  }

  const RingPtr& ring() const { return ring_; }
  std::size_t arity() const { return ring_ ? ring_->names.size() : 0; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rat coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  void add_term(const Exponent& e, const Rat& c) {
    if (c == 0) return;
    if (e.size() != arity()) throw std::invalid_argument("Laurent: exponent arity");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Weight weight_of(const Exponent& e) const {
    Weight w{0, 0};
    for (std::size_t i = 0; i < e.size(); ++i) w = w + e[i] * ring_->weights[i];
    return w;
  }

  // Weight when every term has the same weight.
  std::optional<Weight> homogeneous_weight() const {
    std::optional<Weight> w;
    for (const auto& [e, c] : terms_) {
      Weight x = weight_of(e);
      if (w && *w != x) return std::nullopt;
      w = x;
    }
    return w;
  }

  int total_degree() const {
    int d = -1;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      if (first || s > d) d = s;
      first = false;
    }
    return d;
  }

  Laurent& operator+=(const Laurent& o) {
    same_ring(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    same_ring(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Rat& k, Laurent a) {
    if (k == 0) return Laurent(a.ring_);
    for (auto& [e, c] : a.terms_) c *= k;
    return a;
  }
  Laurent operator-() const { return Rat(-1) * *this; }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    a.same_ring(b);
    Laurent r(a.ring_);
    Exponent e(a.arity());
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  bool operator==(const Laurent& o) const { return ring_id() == o.ring_id() && terms_ == o.terms_; }

  std::string ring_id() const { return ring_ ? ring_->id : std::string(); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rat a = abs(c);
      bool unit = true;
      for (int x : e) unit = unit && x == 0;
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      first = false;
      bool wrote = false;
      if (a != 1 || unit) {
        os << a.get_str();
        wrote = true;
      }
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (wrote) os << "*";
        os << ring_->names[i];
        if (e[i] != 1) os << "^" << e[i];
        wrote = true;
      }
    }
    return os.str();
  }

 private:
  void same_ring(const Laurent& o) const {
    if (ring_id() != o.ring_id())
      throw std::invalid_argument("Laurent: ring mismatch (" + ring_id() + " vs " + o.ring_id() + ")");
  }
  RingPtr ring_;
  std::map<Exponent, Rat> terms_;
};

inline Laurent laurent_mul(const Laurent& a, const Laurent& b) { return a * b; }

inline Laurent pow(const Laurent& a, unsigned k) {
  Laurent r = Laurent::constant(a.ring(), 1);
  for (unsigned i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace stabwc
