#pragma once

#include "stabwc/curvechains.hpp"
#include "stabwc/lifts.hpp"
#include "stabwc/walls.hpp"
#include "stabwc_golden.hpp"

#include <chrono>
#include <functional>
#include <random>

namespace stabwc {

struct CriterionResult {
  int id = 0;
  std::string title;
  std::string status;  // pass, fail or environment-limited
  std::string detail;
  double seconds = 0;

  bool passed() const { return status == "pass"; }
};

struct AcceptanceOptions {
  int margin = -1;  // < 0: default window margin
  std::function<void(const std::string&)> progress;
};

namespace acceptance {

// Collects failed checks of one criterion.
struct Checker {
  std::vector<std::string> failures;
  void check(bool ok, const std::string& what) {
    if (!ok && failures.size() < 8) failures.push_back(what);
  }
};

inline Vec random_cochain(HomCohomology& hc, std::mt19937& g, Weight w, int level, int internal) {
  std::uniform_int_distribution<int> co(-3, 3);
  Vec v;
  for (const auto& k : hc.basis_at(w, level + internal))
    if (k.level() == level) add_to(v, k, co(g));
  return v;
}

inline Weight random_weight(std::mt19937& g, int r) {
  std::uniform_int_distribution<int> d(-r, r);
  return {d(g), d(g)};
}

inline void hom_table(Checker& c, const AcceptanceOptions& o) {
  for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}}) {
    auto m = make_model("chain", {n1, n2});
    auto src = chain_sheaf(m, 0, 0);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        auto r = ext_dimensions(src, chain_sheaf(m, a, b), o.margin);
        int got = r.dims.count(0) ? r.dims.at(0) : 0;
        c.check(got == hom_dimension(a, b), "chain(" + std::to_string(n1) + "," + std::to_string(n2) + ") (" +
                                                std::to_string(a) + "," + std::to_string(b) + "): Cech " +
                                                std::to_string(got) + ", closed form " + std::to_string(hom_dimension(a, b)));
      }
  }
}

inline int dim_at(const ExtResult& r, int k) { return r.dims.count(k) ? r.dims.at(k) : 0; }

inline void single_ext(Checker& c, const AcceptanceOptions& o) {
  for (int n : {3, 4, 5}) {
    auto m = make_model("single", {n});
    auto r = ext_dimensions(curve_sheaf(m, 0), curve_sheaf(m, -1), o.margin);
    c.check(dim_at(r, 2) == n, "Ext^2(O_C, O_C(-1)) on single(" + std::to_string(n) + ") = " + std::to_string(dim_at(r, 2)));
    auto e = ext_dimensions(split_E(m), split_E(m), o.margin);
    std::vector<int> got{dim_at(e, 0), dim_at(e, 1), dim_at(e, 2), dim_at(e, 3)};
    std::vector<int> want{2, n + 2, 2 * n - 2, n - 2};
    c.check(got == want, "RHom(E,E) on single(" + std::to_string(n) + ")");
  }
}

inline void brackets(Checker& c, const AcceptanceOptions& o) {
  for (int n : {3, 4}) {
    SingleLifts L(n);
    TotTW T(L.E, o.margin);
    const auto& H = T.space();
    std::string tag = "single(" + std::to_string(n) + ")";
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j <= 1; ++j)
        c.check(T.bracket(L.alpha(H, i), L.beta(H, j)) == L.gamma(H, i - j),
                tag + " [alpha_" + std::to_string(i) + ", beta_" + std::to_string(j) + "]");
    c.check(T.d(L.mu(H)) == L.gamma(H, 0), tag + " gamma_0 = d mu");
    c.check(T.d(L.eta(H)) == L.gamma(H, n), tag + " gamma_n = d eta");
  }
}

inline std::vector<Poly> single_candidate(const DeformationProblem& P, int n) {
  std::vector<Poly> I;
  std::size_t r = P.nvars();
  for (int i = 1; i < n; ++i) {
    Poly p = poly_of(mon_mul(var_mon(r, std::size_t(i - 1)), var_mon(r, std::size_t(n))));
    poly_add(p, mon_mul(var_mon(r, std::size_t(i)), var_mon(r, std::size_t(n + 1))), 1);
    I.push_back(p);
  }
  return I;
}

inline void single_hull(Checker& c, const AcceptanceOptions& o) {
  for (int n : {3, 4}) {
    auto P = single_wall_problem(n, o.margin);
    auto s = start_hull(P);
    extend_order(P, s);
    c.check(s.lifted && mc_holds(P, s), "single(" + std::to_string(n) + ") lifts to order 2");
    auto v = stopping_check(s, single_candidate(P, n), 3, coordinate_weights(P));
    c.check(v.verdict() == "hull-equals-candidate", "single(" + std::to_string(n) + ") stopping check at d = 3");
  }
}

inline void invariant_ring(Checker& c, const AcceptanceOptions& o) {
  for (int n : {3, 4}) {
    auto P = single_wall_problem(n, o.margin);
    auto s = start_hull(P);
    extend_order(P, s);
    std::size_t r = P.nvars();
    TruncatedIdeal J(P.names, s.gens, 4);
    std::vector<Poly> im{poly_of(mon_mul(var_mon(r, 0), var_mon(r, std::size_t(n + 1))), -1)};
    std::vector<std::string> nm{"s0"};
    for (int k = 1; k <= n; ++k) {
      im.push_back(poly_of(mon_mul(var_mon(r, std::size_t(k - 1)), var_mon(r, std::size_t(n)))));
      nm.push_back("s" + std::to_string(k));
    }
    auto match = compare_presentation(present_invariants(J, P.weights, nm, im, 4), hankel_rank_ideal(n));
    c.check(match.surjective && match.relations_equal, "single(" + std::to_string(n) + ") invariants vs Hankel ideal");
  }
}

inline Poly named(const std::vector<std::string>& names, std::vector<std::pair<int, std::vector<std::string>>> terms) {
  Poly p;
  for (const auto& [k, vars] : terms) {
    Mon m(names.size(), 0);
    for (const auto& v : vars) ++m[std::size_t(std::find(names.begin(), names.end(), v) - names.begin())];
    poly_add(p, m, k);
  }
  return p;
}

inline void triple_ladder(Checker& c, const AcceptanceOptions& o) {
  for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}}) {
    std::string tag = "chain(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
    auto P = chain_triple_problem(n1, n2, o.margin);
    const auto& N = P.names;
    auto s = start_hull(P);
    extend_order(P, s);
    std::vector<Poly> j2;
    for (int j = 2; j <= n2 - 1; ++j) j2.push_back(named(N, {{1, {"q" + std::to_string(j), "r"}}}));
    c.check(s.J(2).equals(TruncatedIdeal(N, j2, 2, 3)), tag + " J_2");
    ExtendOptions eo;
    eo.lift = false;
    extend_order(P, s, eo);
    std::vector<Poly> j3{named(N, {{1, {"q2", "r"}}, {1, {"q1", "q1", "r"}}}), named(N, {{1, {"p1", "q1", "r"}}})};
    for (int j = 3; j <= n2 - 1; ++j) j3.push_back(named(N, {{1, {"q" + std::to_string(j), "r"}}}));
    c.check(s.J(3).equals(TruncatedIdeal(N, j3, 3, 4)), tag + " J_3");
    std::vector<Poly> I{named(N, {{1, {"p1", "q1", "r"}}})};
    for (int j = 2; j <= n2 - 1; ++j) I.push_back(named(N, {{1, {"q" + std::to_string(j), "r"}}}));
    c.check(stopping_check(s, I, 4, coordinate_weights(P)).verdict() == "hull-equals-candidate",
            tag + " stopping check at d = 4");
  }
}

inline void walls(Checker& c, const AcceptanceOptions&) {
  for (int n : {1, 2, 3, 4, 5}) {
    auto a = wall_arrangement(ScenarioSpec{"single", {n}});
    c.check(a.walls.size() == 1 && a.walls[0].form == LinearForm{{-1}}, "single(" + std::to_string(n) + ") wall eps = 0");
  }
  for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {4, 3}, {5, 6}}) {
    std::string tag = "chain(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
    auto a = wall_arrangement(ScenarioSpec{"chain", {n1, n2}});
    c.check(a.walls[0].form == LinearForm{{-n1, 1}}, tag + " W1");
    c.check(a.walls[1].form == LinearForm{{1, -n2}}, tag + " W2");
    auto w12 = primitive_integer(LinearForm{{n1 - 1, n2 - 1}});
    // loci are compared up to sign
    bool same = a.walls[2].form == w12 || a.walls[2].form == LinearForm{{-w12.c[0], -w12.c[1]}};
    c.check(same, tag + " W12");
    auto ch = enumerate_chambers(a);
    c.check(ch.size() == 6, tag + " six chambers");
    bool labels = ch.size() == 6;
    for (std::size_t i = 0; i < ch.size() && labels; ++i) labels = ch[i].label == "C" + std::to_string(i + 1);
    c.check(labels, tag + " labels C1..C6");
    bool geometric = std::all_of(ch[0].signs.begin(), ch[0].signs.end(), [](int s) { return s > 0; });
    c.check(geometric, tag + " C1 is the geometric chamber");
    int across = 0;
    std::size_t which = 0;
    for (std::size_t w = 0; w < 3; ++w)
      if (ch[0].signs[w] != ch[1].signs[w]) {
        ++across;
        which = w;
      }
    c.check(across == 1 && a.walls[which].name == "W1", tag + " W1 between C1 and C2");
    c.check(transversality(a) == "concurrent", tag + " walls concurrent, not transversal");
  }
  for (std::size_t r = 1; r <= 4; ++r) {
    ScenarioSpec sc{"disjoint", {}};
    for (std::size_t i = 0; i < r; ++i) sc.n.push_back(3 + int(i));
    auto a = wall_arrangement(sc);
    auto ch = enumerate_chambers(a);
    c.check(ch.size() == (std::size_t(1) << r), "disjoint r = " + std::to_string(r) + " chamber count");
    c.check(transversality(a) == "transversal", "disjoint r = " + std::to_string(r) + " transversal");
    for (const auto& x : ch) {
      bool ok = true;
      for (std::size_t i = 0; i < r; ++i) {
        bool in = std::find(x.subset.begin(), x.subset.end(), i) != x.subset.end();
        ok = ok && in == (x.point[i] > 0);
      }
      c.check(ok, "disjoint chamber " + x.label + " label");
    }
  }
}

inline void stratification(Checker& c, const AcceptanceOptions&) {
  std::mt19937 g(2024);
  auto rnd = [&](int lo, int hi) { return Rat(std::uniform_int_distribution<int>(lo, hi)(g)); };
  auto brute = [](const XiClass& x) { return int(rank(xi_composition_matrix(x))); };
  // single(4): random classes, the parametrized locus, random off-locus points
  const int n = 4;
  for (int s = 0; s < 200; ++s) {
    std::vector<Rat> a;
    for (int i = 0; i < n; ++i) a.push_back(rnd(-3, 3));
    auto x = XiClass::single(n, a);
    c.check(rank_stratify(x).rank == brute(x), "single(4) random class rank");
  }
  for (int s = 0; s < 200; ++s) {
    Rat b0 = rnd(-4, 4), b1 = rnd(-4, 4);
    if (b0 == 0 && b1 == 0) b0 = 1;
    auto x = single_rational_normal(n, b0, b1);
    auto st = rank_stratify(x);
    c.check(brute(x) == 1 && st.label == "rational-normal-locus", "single(4) parametrized locus has rank 1");
  }
  int off = 0;
  while (off < 200) {
    std::vector<Rat> a;
    for (int i = 0; i < n; ++i) a.push_back(rnd(-5, 5));
    bool on = true;
    for (int k = 0; k + 2 < n; ++k)
      for (int l = k + 1; l + 1 < n; ++l) on = on && a[k] * a[l + 1] == a[k + 1] * a[l];
    if (on) continue;
    ++off;
    auto x = XiClass::single(n, a);
    c.check(brute(x) == 2 && rank_stratify(x).label == "generic", "single(4) off-locus point has rank 2");
  }
  // chain(3,3)
  const int n1 = 3, n2 = 3, d = n1 + n2 - 2;
  for (int s = 0; s < 200; ++s) {
    std::vector<Rat> v;
    for (int i = 0; i < d; ++i) v.push_back(rnd(-3, 3));
    auto x = XiClass::chain(n1, n2, v);
    c.check(rank_stratify(x).rank == brute(x), "chain(3,3) random class rank");
  }
  for (int s = 0; s < 200; ++s) {
    Rat l = rnd(-4, 4), mu = rnd(1, 4);
    auto x = chain_rational_normal(n1, n2, l, mu);
    c.check(brute(x) <= 1 && rank_stratify(x).label == "rational-normal-locus", "chain(3,3) rational normal family");
    std::vector<Rat> v(std::size_t(d), Rat(0));
    for (int i = 0; i <= n1 - 2; ++i) v[std::size_t(i)] = rnd(-3, 3);
    v[std::size_t(n1 - 2)] = rnd(1, 3);
    auto e = XiClass::chain(n1, n2, v);
    c.check(brute(e) == 1 && rank_stratify(e).label == "exceptional-locus", "chain(3,3) exceptional family");
  }
  off = 0;
  while (off < 200) {
    std::vector<Rat> v;
    for (int i = 0; i < d; ++i) v.push_back(rnd(-5, 5));
    auto x = XiClass::chain(n1, n2, v);
    auto a = x.a_part(), cc = x.c_part();
    bool c_zero = std::all_of(cc.begin(), cc.end(), [](const Rat& r) { return r == 0; });
    bool a_zero = std::all_of(a.begin(), a.end(), [](const Rat& r) { return r == 0; });
    std::vector<Rat> seq{x.b()};
    seq.insert(seq.end(), cc.begin(), cc.end());
    bool geometric = true;
    for (std::size_t k = 0; k < seq.size(); ++k)
      for (std::size_t l = k + 1; l + 1 < seq.size(); ++l) geometric = geometric && seq[k] * seq[l + 1] == seq[k + 1] * seq[l];
    if (c_zero || (a_zero && geometric)) continue;
    ++off;
    c.check(brute(x) == 2 && rank_stratify(x).label == "generic", "chain(3,3) off-locus point has rank 2");
  }
}

inline void properties(Checker& c, const AcceptanceOptions& o) {
  std::mt19937 g(77);
  for (auto m : {make_model("single", {3}), make_model("chain", {3, 3})}) {
    std::string tag = m->tag;
    HomCohomology hc(split_E(m), split_E(m), o.margin);
    const auto& H = hc.space();
    int checked = 0;
    for (int s = 0; s < 4000 && checked < 100; ++s) {
      int level = s % m->nchart;
      auto pick = [&] {
        return random_cochain(hc, g, random_weight(g, 2), level, std::uniform_int_distribution<int>(-2, 1)(g));
      };
      Vec a = pick(), b = pick(), x = pick();
      if (a.empty() || b.empty() || x.empty()) continue;
      ++checked;
      int da = internal_degree(a).value_or(0), db = internal_degree(b).value_or(0);
      c.check(bracket(a, b) == scaled(-sign_of(da * db), bracket(b, a)), tag + " Cech bracket antisymmetry");
      c.check(H.d_int(bracket(a, b)) == combine(bracket(H.d_int(a), b), bracket(a, H.d_int(b)), sign_of(da)),
              tag + " Cech Leibniz");
      c.check(bracket(a, bracket(b, x)) == combine(bracket(bracket(a, b), x), bracket(b, bracket(a, x)), sign_of(da * db)),
              tag + " Cech Jacobi");
      c.check(H.d_int(H.d_int(a)).empty() && H.cech(H.cech(a)).empty() && H.total_d(H.total_d(a)).empty(),
              tag + " d^2 = 0 on Cech cochains");
    }
    c.check(checked == 100, tag + " 100 Cech triples");

    TotTW T(split_E(m), o.margin);
    checked = 0;
    for (int s = 0; s < 4000 && checked < 100; ++s) {
      auto pick = [&] {
        return T.random_compatible(g, random_weight(g, 2), std::uniform_int_distribution<int>(0, 1)(g), 2);
      };
      Vec x = pick(), y = pick(), z = pick();
      if (x.empty() || y.empty() || z.empty()) continue;
      ++checked;
      int dx = *tw_degree(x), dy = *tw_degree(y);
      c.check(T.d(T.d(x)).empty(), tag + " TW d^2 = 0");
      c.check(T.compatible(T.d(x)) && T.compatible(T.bracket(x, y)), tag + " face compatibility under d and bracket");
      c.check(T.bracket(x, y) == scaled(-sign_of(dx * dy), T.bracket(y, x)), tag + " TW antisymmetry");
      c.check(T.d(T.bracket(x, y)) == combine(T.bracket(T.d(x), y), T.bracket(x, T.d(y)), sign_of(dx)), tag + " TW Leibniz");
      c.check(T.bracket(x, T.bracket(y, z)) ==
                  combine(T.bracket(T.bracket(x, y), z), T.bracket(y, T.bracket(x, z)), sign_of(dx * dy)),
              tag + " TW Jacobi");
    }
    c.check(checked == 100, tag + " 100 TW triples");

    for (const auto& spec : {"point", "E", "OX"}) {
      auto E = resolve_sheaf(spec, m);
      auto F = std::string(spec) == "OX" ? resolve_sheaf("point", m) : E;
      HomCohomology a(E, F, o.margin);
      HomCohomology b(E, F, a.margin() + 2);
      c.check(a.dims().dims == b.dims().dims && a.dims().by_weight == b.dims().by_weight,
              tag + " window stability for " + spec);
    }
  }
}

inline void reports(Checker& c, const AcceptanceOptions&) {
  const auto& gold = golden_files();
  auto d = component_report(wall_arrangement(ScenarioSpec{"disjoint", {3, 4}}), "{1,2}");
  c.check(d.to_text() == gold.at("disjoint_3_4_I12.txt"), "disjoint(3,4) chamber {1,2} report vs golden");
  c.check(d.components.size() == 3 && d.components[1].name.rfind("P^2", 0) == 0 && d.components[2].name.rfind("P^3", 0) == 0,
          "disjoint(3,4) components S, P^2, P^3");
  auto ch = component_report(wall_arrangement(ScenarioSpec{"chain", {3, 3}}), "C3");
  c.check(ch.to_text() == gold.at("chain_3_3_C3.txt"), "chain(3,3) chamber C3 report vs golden");
  c.check(ch.components.size() == 3 && ch.gluings.size() == 3, "chain(3,3) C3 has three components and three gluings");
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o = {}) {
  using Fn = void (*)(acceptance::Checker&, const AcceptanceOptions&);
  const std::vector<std::pair<std::string, Fn>> criteria{
      {"Hom dimension table, chain(3,3) and chain(3,4)", acceptance::hom_table},
      {"Ext dimensions, single curve", acceptance::single_ext},
      {"bracket identities of the single-curve lifts", acceptance::brackets},
      {"hull of the single curve at d = 3", acceptance::single_hull},
      {"invariant ring against the Hankel ideal", acceptance::invariant_ring},
      {"triple-point obstruction ladder", acceptance::triple_ladder},
      {"wall equations and chambers", acceptance::walls},
      {"rank stratification", acceptance::stratification},
      {"property suites", acceptance::properties},
      {"component reports against golden files", acceptance::reports},
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult r;
    r.id = int(i + 1);
    r.title = criteria[i].first;
    if (o.progress) o.progress("criterion " + std::to_string(r.id) + ": " + r.title);
    auto t0 = std::chrono::steady_clock::now();
    acceptance::Checker c;
    try {
      criteria[i].second(c, o);
      r.status = c.failures.empty() ? "pass" : "fail";
      for (const auto& f : c.failures) r.detail += (r.detail.empty() ? "" : "; ") + f;
    } catch (const WindowTooSmall& e) {
      r.status = "environment-limited";
      r.detail = e.what();
    } catch (const std::exception& e) {
      r.status = "fail";
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  }
  return out;
}

}  // namespace stabwc
