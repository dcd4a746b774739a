#pragma once

#include "stabwc/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stabwc {

// dim Hom(O_C12, O_C12(a, b)) on the chain C1 u C2.
inline int hom_dimension(int a, int b) {
  if (a >= 0 && b >= 0) return a + b + 1;
  if (a >= 1 && b < 0) return a;
  if (a < 0 && b >= 1) return b;
  return 0;
}

// A section of O_C12(a, b) as a pair (e-part, f-part): e[i] is the coefficient
// of e0^i e1^(a-i) on C1, f[j] that of f0^j f1^(b-j) on C2.  The two parts
// agree at the node, where e0 = f0 = 0 and e1 = f1 = 1.
struct ChainSection {
  int a = 0, b = 0;
  std::vector<Rat> e, f;

  ChainSection() = default;
  ChainSection(int a_, int b_) : a(a_), b(b_), e(std::size_t(std::max(a_ + 1, 0))), f(std::size_t(std::max(b_ + 1, 0))) {}

  Rat node_e() const { return e.empty() ? Rat(0) : e[0]; }
  Rat node_f() const { return f.empty() ? Rat(0) : f[0]; }
  bool glues() const { return node_e() == node_f(); }
  bool is_zero() const {
    for (const auto& x : e)
      if (x != 0) return false;
    for (const auto& x : f)
      if (x != 0) return false;
    return true;
  }
  bool operator==(const ChainSection&) const = default;
};

enum class BasisKind { E, Glued, F };

struct ChainBasisElement {
  BasisKind kind;
  int k = 0;  // power of e0 (kind E) or of f0 (kind F)
  int a = 0, b = 0;

  std::string name() const {
    auto pw = [](const std::string& v, int e) -> std::string {
      if (e == 0) return "";
      return e == 1 ? v : v + "^" + std::to_string(e);
    };
    auto mono = [&](const std::string& v0, const std::string& v1, int i, int n) {
      std::string s = pw(v0, i), t = pw(v1, n - i);
      if (s.empty() && t.empty()) return std::string("1");
      return s + t;
    };
    switch (kind) {
      case BasisKind::E: return mono("e0", "e1", k, a) + " + 0";
      case BasisKind::F: return "0 + " + mono("f0", "f1", k, b);
      default: return mono("e0", "e1", 0, std::max(a, 0)) + " + " + mono("f0", "f1", 0, std::max(b, 0));
    }
  }

  ChainSection section() const {
    ChainSection s(a, b);
    switch (kind) {
      case BasisKind::E: s.e[std::size_t(k)] = 1; break;
      case BasisKind::F: s.f[std::size_t(k)] = 1; break;
      default:
        s.e[0] = 1;
        s.f[0] = 1;
    }
    return s;
  }
};

// Ordered basis of Hom(O_C12, O_C12(a, b)).
inline std::vector<ChainBasisElement> chain_hom_basis(int a, int b) {
  std::vector<ChainBasisElement> out;
  if (a >= 0 && b >= 0) {
    for (int i = a; i >= 1; --i) out.push_back({BasisKind::E, i, a, b});
    out.push_back({BasisKind::Glued, 0, a, b});
    for (int j = 1; j <= b; ++j) out.push_back({BasisKind::F, j, a, b});
  } else if (a >= 1 && b < 0) {
    for (int i = a; i >= 1; --i) out.push_back({BasisKind::E, i, a, b});
  } else if (a < 0 && b >= 1) {
    for (int j = 1; j <= b; ++j) out.push_back({BasisKind::F, j, a, b});
  }
  return out;
}

// Coordinates of a gluing section in the ordered basis.
inline std::vector<Rat> chain_coordinates(const ChainSection& s) {
  if (!s.glues()) throw std::invalid_argument("chain_coordinates: parts disagree at the node");
  auto basis = chain_hom_basis(s.a, s.b);
  std::vector<Rat> out;
  for (const auto& x : basis) {
    switch (x.kind) {
      case BasisKind::E: out.push_back(s.e[std::size_t(x.k)]); break;
      case BasisKind::F: out.push_back(s.f[std::size_t(x.k)]); break;
      default: out.push_back(s.a >= 0 ? s.node_e() : s.node_f());
    }
  }
  ChainSection back(s.a, s.b);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto t = basis[i].section();
    for (std::size_t k = 0; k < t.e.size(); ++k) back.e[k] += out[i] * t.e[k];
    for (std::size_t k = 0; k < t.f.size(); ++k) back.f[k] += out[i] * t.f[k];
  }
  if (!(back == s)) throw std::invalid_argument("chain_coordinates: section outside Hom(O_C12, O_C12(a,b))");
  return out;
}

// Pointwise product of sections (composition after twisting).
inline ChainSection chain_multiply(const ChainSection& x, const ChainSection& y) {
  ChainSection r(x.a + y.a, x.b + y.b);
  for (std::size_t i = 0; i < x.e.size(); ++i)
    for (std::size_t j = 0; j < y.e.size(); ++j) r.e[i + j] += x.e[i] * y.e[j];
  for (std::size_t i = 0; i < x.f.size(); ++i)
    for (std::size_t j = 0; j < y.f.size(); ++j) r.f[i + j] += x.f[i] * y.f[j];
  return r;
}

// Product of two basis elements expanded in the basis of the composite bidegree.
inline std::vector<Rat> compose_basis(const ChainBasisElement& x, const ChainBasisElement& y) {
  return chain_coordinates(chain_multiply(x.section(), y.section()));
}

// ---- extension classes and the maps xi o - ----

enum class Scenario { Single, Chain };

// Coordinates of xi in the dual of the ordered basis:
// single(n): a_{i,n-1-i} for i = 0..n-1;
// chain(n1,n2): a_{i,n1-2-i} for i = n1-2..1, then b, then c_{j,n2-1-j} for j = 1..n2-1.
struct XiClass {
  Scenario scenario = Scenario::Single;
  int n1 = 0, n2 = 0;
  std::vector<Rat> coeffs;

  static XiClass single(int n, std::vector<Rat> a) {
    if (int(a.size()) != n) throw std::invalid_argument("XiClass: single(n) needs n coefficients");
    return {Scenario::Single, n, 0, std::move(a)};
  }
  static XiClass chain(int n1, int n2, std::vector<Rat> c) {
    if (int(c.size()) != n1 + n2 - 2) throw std::invalid_argument("XiClass: chain needs n1+n2-2 coefficients");
    return {Scenario::Chain, n1, n2, std::move(c)};
  }

  int ext2_dim() const { return int(coeffs.size()); }
  bool is_zero() const {
    for (const auto& x : coeffs)
      if (x != 0) return false;
    return true;
  }
  // chain accessors
  std::vector<Rat> a_part() const { return {coeffs.begin(), coeffs.begin() + (n1 - 2)}; }
  Rat b() const { return coeffs[std::size_t(n1 - 2)]; }
  std::vector<Rat> c_part() const { return {coeffs.begin() + (n1 - 1), coeffs.end()}; }
};

// Matrix of xi o - : Hom(..(0,-1) or (-1), ..) -> Ext^2(..), as the transpose
// of the displayed 2-row matrix.
inline QMatrix xi_composition_matrix(const XiClass& xi) {
  std::vector<std::vector<Rat>> rows;
  if (xi.scenario == Scenario::Single) {
    const auto& a = xi.coeffs;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) rows.push_back({a[k], a[k + 1]});
  } else {
    auto a = xi.a_part();
    auto c = xi.c_part();
    std::vector<Rat> top = a, bottom(a.size(), Rat(0));
    top.push_back(xi.b());
    for (std::size_t j = 0; j + 1 < c.size(); ++j) top.push_back(c[j]);
    for (const auto& x : c) bottom.push_back(x);
    for (std::size_t k = 0; k < top.size(); ++k) rows.push_back({top[k], bottom[k]});
  }
  if (rows.empty()) return QMatrix(0, 2);
  return QMatrix::from_rows(rows);
}

// Primitive integer representative of a projective point, first nonzero entry positive.
inline std::vector<Rat> primitive_projective(std::vector<Rat> v) {
  mpz_class l = 1;
  for (const auto& x : v)
    if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  for (auto& x : v) x *= l;
  mpz_class g = 0;
  for (const auto& x : v)
    if (x != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  if (g == 0) return v;
  int sign = 1;
  for (const auto& x : v)
    if (x != 0) {
      sign = x < 0 ? -1 : 1;
      break;
    }
  for (auto& x : v) x = x * sign / Rat(g);
  return v;
}

struct Stratum {
  std::string label;  // zero | rational-normal-locus | exceptional-locus | generic
  int rank = 0;
  std::vector<Rat> params;  // (b0 : b1) or (lambda : mu), primitive

  std::string to_string() const {
    if (params.empty()) return label;
    std::string s = label + "(";
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? ":" : "") + params[i].get_str();
    return s + ")";
  }
};

// Stratum of xi by the rank of xi o -, with the parameters of the rank <= 1 families:
// single: a_{i,j} = b0^i b1^j; chain: a = 0, b = lambda^(n2-1), c_j = lambda^(n2-1-j) mu^j,
// or c = 0 (exceptional locus).
inline Stratum rank_stratify(const XiClass& xi) {
  Stratum s;
  s.rank = int(rank(xi_composition_matrix(xi)));
  if (xi.is_zero()) {
    s.label = "zero";
    return s;
  }
  if (s.rank >= 2) {
    s.label = "generic";
    return s;
  }
  if (xi.scenario == Scenario::Single) {
    const auto& a = xi.coeffs;
    s.label = "rational-normal-locus";
    if (a[0] != 0)
      s.params = primitive_projective({a[1] / a[0], Rat(1)});
    else
      s.params = {1, 0};
    return s;
  }
  auto c = xi.c_part();
  bool c_zero = true;
  for (const auto& x : c)
    if (x != 0) c_zero = false;
  if (c_zero) {
    s.label = "exceptional-locus";
    return s;
  }
  s.label = "rational-normal-locus";
  if (xi.b() != 0)
    s.params = primitive_projective({Rat(1), c[0] / xi.b()});
  else
    s.params = {0, 1};
  return s;
}

// xi on the rational normal curve: single a_{i,n-1-i} = b0^i b1^(n-1-i).
inline XiClass single_rational_normal(int n, const Rat& b0, const Rat& b1) {
  std::vector<Rat> a;
  for (int i = 0; i < n; ++i) {
    Rat v = 1;
    for (int k = 0; k < i; ++k) v *= b0;
    for (int k = 0; k < n - 1 - i; ++k) v *= b1;
    a.push_back(v);
  }
  return XiClass::single(n, a);
}

// chain: a = 0, b = lambda^(n2-1), c_j = lambda^(n2-1-j) mu^j.
inline XiClass chain_rational_normal(int n1, int n2, const Rat& lambda, const Rat& mu) {
  std::vector<Rat> v(std::size_t(n1 - 2), Rat(0));
  for (int j = 0; j <= n2 - 1; ++j) {
    Rat x = 1;
    for (int k = 0; k < n2 - 1 - j; ++k) x *= lambda;
    for (int k = 0; k < j; ++k) x *= mu;
    v.push_back(x);
  }
  return XiClass::chain(n1, n2, v);
}

// The displayed bidiagonal matrix of phi o -, phi = b1 e0 - b0 e1, with
// columns in the displayed (descending e0-exponent) order.
inline QMatrix glued_locus_matrix(const Rat& b0, const Rat& b1, int n) {
  QMatrix m(std::size_t(n - 1), std::size_t(n));
  for (int k = 0; k + 1 < n; ++k) {
    m.set(std::size_t(k), std::size_t(k), b1);
    m.set(std::size_t(k), std::size_t(k + 1), -b0);
  }
  return m;
}

// Kernel of glued_locus_matrix as an XiClass (coefficients in ascending i).
inline XiClass glued_locus_kernel(const Rat& b0, const Rat& b1, int n) {
  if (b0 == 0 && b1 == 0) throw std::invalid_argument("glued_locus_kernel: (b0, b1) = (0, 0)");
  auto ker = kernel_basis(glued_locus_matrix(b0, b1, n));
  if (ker.size() != 1) throw std::logic_error("glued_locus_kernel: kernel is not one-dimensional");
  std::vector<Rat> a(ker[0].rbegin(), ker[0].rend());
  return XiClass::single(n, a);
}

struct Ext1Dims {
  int kernel = 0;  // dim K = ker(xi o -)
  int ext1 = 0;    // dim Ext^1(E, E)
};

// 0 -> C xi -> Ext^2 -> Ext^1(E,E) -> K -> 0.
inline Ext1Dims ext1_long_sequence_dims(const XiClass& xi) {
  if (xi.is_zero()) throw std::invalid_argument("ext1_long_sequence_dims: xi = 0");
  QMatrix m = xi_composition_matrix(xi);
  Ext1Dims d;
  d.kernel = int(m.cols() - rank(m));
  d.ext1 = (xi.ext2_dim() - 1) + d.kernel;
  return d;
}

// Pairing of the ordered basis with its dual: the identity by construction of the
// dual-basis coordinates (dual vector k evaluates to the k-th coordinate).
inline QMatrix dual_pairing_matrix(int a, int b) {
  auto basis = chain_hom_basis(a, b);
  QMatrix m(basis.size(), basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto c = chain_coordinates(basis[k].section());
    for (std::size_t l = 0; l < c.size(); ++l) m.set(l, k, c[l]);
  }
  return m;
}

}  // namespace stabwc
