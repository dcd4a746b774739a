#pragma once

#include "stabwc/mchull.hpp"

namespace stabwc {

// Cochain with one monomial entry on U_I: Hom^{s,t}, matrix position (row, col).
// Charts are numbered from 1 in masks, so I = 3 is U_12.
inline Vec entry(const HomSpace& H, int I, int s, int t, int row, int col, const std::string& mono) {
  Mono m = H.model().parse_mono(mono);
  Key k = H.key_for_char({I, s, t, row, col}, m.e);
  if (!H.admissible(k)) throw std::invalid_argument("entry: " + mono + " is not regular on U" + HomSpace::mask_name(I));
  return Vec{{k, m.c}};
}

inline Vec sum(std::initializer_list<Vec> parts) {
  Vec r;
  for (const auto& p : parts) axpy(r, 1, p);
  return r;
}

inline Vec one_tensor(const Vec& f) {
  Vec r;
  for (const auto& [k, c] : f) axpy(r, 1, tensor(Form::one(k.level()), Vec{{k, c}}));
  return r;
}

// Deformation data of E = O_C + O_C(-1)[1] on the single-curve model, with the
// explicit lifts alpha_i, beta_j, gamma_k, mu, eta.
struct SingleLifts {
  int n = 0;
  std::shared_ptr<const ToricModel> model;
  BundleComplex E;

  explicit SingleLifts(int n_) : n(n_), model(make_model("single", {n_})), E(split_E(model)) {}

  Vec alpha(const HomSpace& H, int i) const {
    Vec a = entry(H, 3, -1, -1, 0, 1, "y^" + std::to_string(i));
    return tensor(Form::dt(1, 0), a);
  }

  Vec beta_bar(const HomSpace& H, int j) const {
    std::string c1 = j == 0 ? "1" : "x", c2 = j == 0 ? "y" : "1";
    return sum({entry(H, 1, -2, -1, 1, 0, c1), entry(H, 2, -2, -1, 1, 0, c2), entry(H, 1, -1, 0, 0, 0, c1),
                entry(H, 2, -1, 0, 0, 0, c2)});
  }

  Vec beta(const HomSpace& H, int j) const {
    Vec b = beta_bar(H, j);
    return combine(one_tensor(b), one_tensor(H.face(1, b)));
  }

  Vec gamma_bar(const HomSpace& H, int k) const {
    std::string m = "y^" + std::to_string(k);
    return sum({entry(H, 3, -2, -1, 0, 0, m), scaled(-1, entry(H, 3, -1, 0, 0, 1, m))});
  }

  Vec gamma(const HomSpace& H, int k) const { return tensor(Form::dt(1, 0), gamma_bar(H, k)); }

  Vec mu(const HomSpace& H) const {
    Vec m = sum({entry(H, 1, -2, -1, 0, 0, "1"), scaled(-1, entry(H, 1, -1, 0, 0, 1, "1"))});
    return combine(one_tensor(m), tensor(Form::t(1, 0), H.face(1, m)));
  }

  Vec eta(const HomSpace& H) const {
    Vec e = sum({scaled(-1, entry(H, 2, -2, -1, 0, 0, "1")), entry(H, 2, -1, 0, 0, 1, "1")});
    return combine(one_tensor(e), tensor(Form::t(1, 1), H.face(0, e)));
  }
};

// Deformation data at the triple point of the chain model: E is the
// resolution [O(-L-C1-C2) -> V -> O] with V the extension given by beta^0.
struct ChainLifts {
  int n1 = 0, n2 = 0;
  std::shared_ptr<const ToricModel> model;
  BundleComplex E;

  ChainLifts(int a, int b) : n1(a), n2(b), model(make_model("chain", {a, b})), E(make_E(model, a)) {}

  static BundleComplex make_E(std::shared_ptr<const ToricModel> m, int a) {
    std::map<std::pair<int, int>, Mono> lambda{{{0, 2}, m->parse_mono("y^" + std::to_string(a - 1))},
                                               {{1, 2}, m->parse_mono("1")}};
    return extension_complex(m, lambda, "E", 1);
  }

  static std::string pw(const std::string& v, int k) { return k == 0 ? "1" : v + "^" + std::to_string(k); }

  Vec mu_bar(const HomSpace& H, int i) const {
    return sum({entry(H, 3, -1, -1, 0, 1, pw("y", i)), entry(H, 5, -1, -1, 0, 1, pw("y", i))});
  }

  Vec mu(const HomSpace& H, int i) const {
    Vec m = mu_bar(H, i);
    Form f1 = Rat(2) * Form::t(1, 0) * Form::dt(1, 0);
    Form f2 = Rat(2) * Form::t(2, 0) * Form::dt(2, 0);
    return combine(tensor(f1, m), tensor(f2, H.face(1, m)));
  }

  Vec eta_bar(const HomSpace& H, int j) const {
    return sum({entry(H, 5, -1, -1, 0, 1, pw("y", n1 - 1) + " " + pw("w", j)), entry(H, 6, -1, -1, 0, 1, pw("w", j))});
  }

  Vec eta(const HomSpace& H, int j) const {
    Vec e = eta_bar(H, j);
    Form f1 = Rat(2) * Form::t(1, 1) * Form::dt(1, 1);
    Form f2 = Rat(2) * Form::t(2, 2) * Form::dt(2, 2);
    return combine(tensor(f1, e), tensor(f2, H.face(0, e)));
  }

  Vec tau_bar(const HomSpace& H) const {
    std::string a = "x u", b = pw("x", n1) + " u";
    return sum({scaled(-1, entry(H, 1, -2, -1, 0, 0, a)), entry(H, 1, -2, -1, 1, 0, b),
                scaled(-1, entry(H, 2, -2, -1, 0, 0, "v")), entry(H, 2, -2, -1, 1, 0, "v"),
                entry(H, 4, -2, -1, 1, 0, "1"),
                scaled(-1, entry(H, 1, -1, 0, 0, 0, b)), scaled(-1, entry(H, 1, -1, 0, 0, 1, a)),
                scaled(-1, entry(H, 2, -1, 0, 0, 0, "v")), scaled(-1, entry(H, 2, -1, 0, 0, 1, "v")),
                scaled(-1, entry(H, 4, -1, 0, 0, 0, "1"))});
  }

  Vec tau(const HomSpace& H) const {
    Vec t = tau_bar(H);
    Vec t1 = H.face(0, t);
    return sum({one_tensor(t), one_tensor(t1), one_tensor(H.face(0, t1))});
  }

  Vec theta_bar(const HomSpace& H, int i) const {
    std::string m = "u " + pw("x", n1 - i);
    return sum({scaled(-1, entry(H, 1, -1, 0, 0, 1, m)), scaled(-1, entry(H, 1, -2, -1, 0, 0, m))});
  }

  Vec theta(const HomSpace& H, int i) const {
    Vec t = theta_bar(H, i);
    Vec t1 = H.face(1, t);
    return sum({one_tensor(t), tensor(pow(Form::t(1, 0), 2), t1), tensor(pow(Form::t(2, 0), 2), H.face(1, t1))});
  }

  Vec nu_bar(const HomSpace& H) const {
    return sum({entry(H, 1, -2, -1, 1, 0, "1"), entry(H, 2, -2, -1, 1, 0, "1"), entry(H, 4, -2, -1, 1, 0, "w"),
                scaled(-1, entry(H, 1, -1, 0, 0, 0, "1")), scaled(-1, entry(H, 2, -1, 0, 0, 0, "1")),
                scaled(-1, entry(H, 4, -1, 0, 0, 0, "w"))});
  }

  Vec nu(const HomSpace& H) const {
    Vec v = nu_bar(H);
    Vec v0 = H.face(0, v), v1 = H.face(1, v);
    Vec l1 = combine(tensor(pow(Form::t(1, 1), 2), combine(v0, v1, -1)), one_tensor(v1));
    Vec w00 = H.face(0, v0), w01 = H.face(0, v1);
    Vec l2 = combine(tensor(pow(Form::t(2, 2), 2), combine(w00, w01, -1)), one_tensor(w01));
    return sum({one_tensor(v), l1, l2});
  }
};

// Wall point of single(n): coordinates p_1..p_n, q_0, q_1 dual to alpha_i, beta_j,
// torus weights (-1,1) on the p_i and (1,-1) on the q_j.
inline DeformationProblem single_wall_problem(int n, int margin = -1) {
  SingleLifts L(n);
  DeformationProblem P;
  P.tw = std::make_shared<TotTW>(L.E, margin);
  const HomSpace& H = P.tw->space();
  for (int i = 1; i <= n; ++i) {
    P.names.push_back("p" + std::to_string(i));
    P.lifts.push_back(L.alpha(H, i));
    P.weights.push_back({-1, 1});
  }
  for (int j = 0; j <= 1; ++j) {
    P.names.push_back("q" + std::to_string(j));
    P.lifts.push_back(L.beta(H, j));
    P.weights.push_back({1, -1});
  }
  std::size_t r = P.names.size();
  P.hints[mon_mul(var_mon(r, 0), var_mon(r, std::size_t(n + 1)))] = scaled(-1, L.mu(H));
  P.hints[mon_mul(var_mon(r, std::size_t(n - 1)), var_mon(r, std::size_t(n)))] = scaled(-1, L.eta(H));
  return P;
}

// Triple point of chain(n1, n2): coordinates p_i (mu^i), q_j (eta^j), r (tau).
inline DeformationProblem chain_triple_problem(int n1, int n2, int margin = -1) {
  ChainLifts L(n1, n2);
  DeformationProblem P;
  P.tw = std::make_shared<TotTW>(L.E, margin);
  const HomSpace& H = P.tw->space();
  for (int i = 1; i <= n1 - 2; ++i) {
    P.names.push_back("p" + std::to_string(i));
    P.lifts.push_back(L.mu(H, i));
  }
  for (int j = 1; j <= n2 - 1; ++j) {
    P.names.push_back("q" + std::to_string(j));
    P.lifts.push_back(L.eta(H, j));
  }
  P.names.push_back("r");
  P.lifts.push_back(L.tau(H));
  std::size_t r = P.names.size();
  P.weights.assign(r, {0});
  for (int i = 1; i <= n1 - 2; ++i)
    P.hints[mon_mul(var_mon(r, std::size_t(i - 1)), var_mon(r, r - 1))] = L.theta(H, i);
  P.hints[mon_mul(var_mon(r, std::size_t(n1 - 2)), var_mon(r, r - 1))] = L.nu(H);
  return P;
}

// A point of the non-geometric chamber of single(n): E is the extension
// resolution with class y^k; lifts come from the generic class lifting.
inline DeformationProblem single_chamber_problem(int n, int k, int margin = -1) {
  auto m = make_model("single", {n});
  std::map<std::pair<int, int>, Mono> lambda{{{0, 1}, m->parse_mono("y^" + std::to_string(k))}};
  DeformationProblem P;
  P.tw = std::make_shared<TotTW>(extension_complex(m, lambda, "F"), margin);
  P.lifts = P.tw->lift_classes(1);
  for (std::size_t a = 0; a < P.lifts.size(); ++a) P.names.push_back("s" + std::to_string(a + 1));
  P.weights.assign(P.lifts.size(), {0});
  return P;
}

}  // namespace stabwc
