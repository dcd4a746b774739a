#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stabwc/lifts.hpp"
#include "stabwc/walls.hpp"
#include "stabwc_golden.hpp"

#include <random>

using namespace stabwc;

namespace {

NumClass random_class(std::mt19937& g, std::size_t r) {
  std::uniform_int_distribution<int> d(-5, 5);
  NumClass v = NumClass::zero(r);
  v.ch0 = d(g);
  for (auto& x : v.ch1) x = Rat(d(g)) / 2;
  v.ch2 = Rat(d(g)) / 3;
  return v;
}

Poly linear(std::vector<Rat> c) {
  Poly p;
  for (std::size_t i = 0; i < c.size(); ++i) poly_add(p, var_mon(c.size(), i), c[i]);
  return p;
}

LinearForm form(std::vector<Rat> c) { return LinearForm{std::move(c)}; }

std::vector<ScenarioSpec> scenarios() {
  std::vector<ScenarioSpec> v;
  for (auto s : {"single:1", "single:2", "single:3", "single:4", "disjoint:3,4", "disjoint:3,4,5", "disjoint:3,3,4,5",
                 "chain:3,3", "chain:3,4", "chain:4,3", "chain:5,3"})
    v.push_back(ScenarioSpec::parse(s));
  return v;
}

}  // namespace

TEST_CASE("scenario parsing") {
  auto s = ScenarioSpec::parse("disjoint:3,4");
  CHECK(s.kind == "disjoint");
  CHECK(s.n == std::vector<int>{3, 4});
  CHECK(s.to_string() == "disjoint:3,4");
  CHECK_THROWS_AS(ScenarioSpec::parse("single"), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioSpec::parse("single:3,4"), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioSpec::parse("chain:3"), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioSpec::parse("ring:3"), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioSpec::parse("single:x"), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioSpec::parse("single:0"), std::invalid_argument);
}

TEST_CASE("intersection datum validation") {
  auto d = IntersectionDatum::for_scenario(ScenarioSpec::parse("chain:3,4"));
  CHECK(d.gram == std::vector<std::vector<int>>{{-3, 1}, {1, -4}});
  auto bad = d;
  bad.gram = {{-1, 1}, {1, -1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.gram[0][1] = 2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.eta_sq = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  // default beta is sum (1/2 + 1/(2 n_i)) C_i
  auto b = d.beta_class();
  CHECK(b == std::vector<Rat>{Rat(2) / 3, Rat(5) / 8, 0});
}

TEST_CASE("twisted Chern characters") {
  std::mt19937 g(5);
  for (const auto& sc : scenarios()) {
    auto d = IntersectionDatum::for_scenario(sc);
    std::size_t r = d.r();
    auto b = d.beta_class();
    CHECK(ch_beta(NumClass::point(r), d) == NumClass::point(r));
    for (int t = 0; t < 20; ++t) {
      auto v = random_class(g, r);
      std::vector<Rat> mb;
      for (const auto& x : b) mb.push_back(-x);
      CHECK(twist(twist(v, b, d), mb, d) == v);
      auto w = ch_beta(v, d);
      if (v.ch0 == 0) {
        CHECK(w.ch1 == v.ch1);
        CHECK(w.ch2 == v.ch2 - d.dot(b, v.ch1));
      }
    }
  }
}

TEST_CASE("Chern characters of curve objects") {
  auto d = IntersectionDatum::for_scenario(ScenarioSpec::parse("single:3"));
  auto oc = ch_of_curve_object(curve(0, 0), d);
  CHECK(oc.ch0 == 0);
  CHECK(oc.ch1 == std::vector<Rat>{1, 0});
  CHECK(oc.ch2 == Rat(3) / 2);
  // Riemann-Roch: chi = ch2 - K.ch1/2 with K.C = -2 - C^2
  CHECK(oc.ch2 - Rat(-2 + 3) / 2 == 1);
  for (int n : {3, 4, 5}) {
    auto dn = IntersectionDatum::for_scenario(ScenarioSpec::parse("single:" + std::to_string(n)));
    auto s = ch_of_curve_object(curve(0, -1, true), dn);
    CHECK(s.ch1 == std::vector<Rat>{-1, 0});
    CHECK(s.ch2 == 1 - Rat(n) / 2);
    CHECK(ch_of_curve_object(curve(0, 0), dn) + s == NumClass::point(1));
  }
  auto dc = IntersectionDatum::for_scenario(ScenarioSpec::parse("chain:3,4"));
  auto c12 = ch_of_curve_object({{0, 1}, {0, 0}, false}, dc);
  // (C1 + C2)^2 = -3 - 4 + 2
  CHECK(c12.ch2 == Rat(5) / 2);
  auto dd = IntersectionDatum::for_scenario(ScenarioSpec::parse("disjoint:3,4"));
  CHECK_THROWS_AS(ch_of_curve_object({{0, 1}, {0, 0}, false}, dd), std::invalid_argument);
  CHECK_THROWS_AS(ch_of_curve_object(curve(2, 0), dd), std::invalid_argument);
}

TEST_CASE("central charges") {
  for (const auto& sc : scenarios()) {
    auto d = IntersectionDatum::for_scenario(sc);
    auto z = central_charge(NumClass::point(d.r()), d);
    CHECK(z.re == poly_of(Mon(d.r(), 0), -1));
    CHECK(z.im.empty());
  }
  for (int n : {1, 3, 4}) {
    auto d = IntersectionDatum::for_scenario(ScenarioSpec::parse("single:" + std::to_string(n)));
    CHECK(central_charge(ch_of_curve_object(curve(0, 0), d), d).im == linear({-n}));
  }
  for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {5, 3}}) {
    auto sc = ScenarioSpec::parse("chain:" + std::to_string(n1) + "," + std::to_string(n2));
    auto a = wall_arrangement(sc);
    auto v = ch_of_curve_object(curve(0, a.k[0] - 1, true), a.datum);
    CHECK(central_charge(v, a.datum).im == linear({n1, -1}));
  }
  // additivity
  std::mt19937 g(9);
  for (const auto& sc : scenarios()) {
    auto d = IntersectionDatum::for_scenario(sc);
    for (int t = 0; t < 10; ++t) {
      auto u = random_class(g, d.r()), v = random_class(g, d.r());
      auto zu = central_charge(u, d), zv = central_charge(v, d), zs = central_charge(u + v, d);
      CHECK(zs.re == poly_axpy(zu.re, 1, zv.re));
      CHECK(zs.im == poly_axpy(zu.im, 1, zv.im));
    }
  }
}

TEST_CASE("wall equations") {
  for (int n : {1, 2, 3, 4, 7}) {
    auto a = wall_arrangement(ScenarioSpec::parse("single:" + std::to_string(n)));
    REQUIRE(a.walls.size() == 1);
    // eps = 0, oriented positive on eps < 0
    CHECK(a.walls[0].form == form({-1}));
  }
  for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {4, 3}, {5, 7}}) {
    auto a = wall_arrangement(ScenarioSpec::parse("chain:" + std::to_string(n1) + "," + std::to_string(n2)));
    REQUIRE(a.walls.size() == 3);
    CHECK(a.walls[0].name == "W1");
    CHECK(a.walls[0].form == form({-n1, 1}));
    CHECK(a.walls[1].name == "W2");
    CHECK(a.walls[1].form == form({1, -n2}));
    CHECK(a.walls[2].name == "W12");
    CHECK(a.walls[2].form == primitive_integer(form({-(n1 - 1), -(n2 - 1)})));
    // the ample cone is cut out by the first two walls
    auto amp = ample_forms(a.datum);
    CHECK(amp[0] == a.walls[0].form);
    CHECK(amp[1] == a.walls[1].form);
    for (const auto& f : amp) CHECK(f.eval(geometric_point(a.datum)) > 0);
  }
  auto a = wall_arrangement(ScenarioSpec::parse("disjoint:3,4,5"));
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Rat> c(3, Rat(0));
    c[i] = -1;
    CHECK(a.walls[i].form == form(c));
  }
  auto d = a.datum;
  CHECK(wall_locus(NumClass::point(3), NumClass::point(3), d).degenerate);
}

TEST_CASE("twist offsets") {
  // default beta: beta.C + C^2/2 = -n - 1/2
  CHECK(wall_arrangement(ScenarioSpec::parse("single:3")).k == std::vector<int>{-3});
  CHECK(wall_arrangement(ScenarioSpec::parse("chain:3,4")).k == std::vector<int>{-2, -3});
  // -1 < beta.C - n/2 < 0 gives O_C + O_C(-1)[1]
  auto sc = ScenarioSpec::parse("disjoint:3,4");
  auto d = IntersectionDatum::for_scenario(sc);
  d.beta_c = {Rat(5) / 4, Rat(7) / 4};
  auto a = wall_arrangement(sc, d);
  CHECK(a.k == std::vector<int>{0, 0});
  auto rep = component_report(a, "{1}");
  CHECK(rep.walls[0].polystable == std::vector<std::string>{"O_{C1}", "O_{C1}(-1)[1]"});
  d.beta_c = {Rat(3) / 2, Rat(7) / 4};
  CHECK_THROWS_AS(wall_arrangement(sc, d), std::domain_error);
}

TEST_CASE("destabilizer and complement add up to a point") {
  for (const auto& sc : scenarios()) {
    auto a = wall_arrangement(sc);
    NumClass origin = NumClass::zero(a.r());
    for (const auto& o : a.origin_polystable) origin = origin + ch_of_curve_object(o, a.datum);
    if (sc.kind == "chain") CHECK(origin == NumClass::point(a.r()));
    for (const auto& w : a.walls) {
      CHECK(w.destabilizer_class(a.datum) + w.complement_class(a.datum) == NumClass::point(a.r()));
      // the complement lies on the same wall
      auto c = wall_locus(w.complement_class(a.datum), NumClass::point(a.r()), a.datum);
      CHECK(parallel(c.form, w.form));
    }
  }
}

TEST_CASE("chambers of disjoint curves") {
  for (std::size_t r = 1; r <= 4; ++r) {
    ScenarioSpec sc{"disjoint", {}};
    for (std::size_t i = 0; i < r; ++i) sc.n.push_back(3 + int(i));
    auto a = wall_arrangement(sc);
    CHECK(transversality(a) == "transversal");
    auto ch = enumerate_chambers(a);
    CHECK(ch.size() == (std::size_t(1) << r));
    std::set<std::string> labels;
    for (const auto& c : ch) {
      labels.insert(c.label);
      // i in I iff eps_i > 0
      for (std::size_t i = 0; i < r; ++i) {
        bool in = std::find(c.subset.begin(), c.subset.end(), i) != c.subset.end();
        CHECK(in == (c.point[i] > 0));
        CHECK((c.signs[i] < 0) == in);
      }
    }
    CHECK(labels.size() == ch.size());
    CHECK(ch[0].label == "{}");
  }
  auto ch = enumerate_chambers(wall_arrangement(ScenarioSpec::parse("disjoint:3,4")));
  std::vector<std::string> labels;
  for (const auto& c : ch) labels.push_back(c.label);
  CHECK(labels == std::vector<std::string>{"{}", "{1}", "{2}", "{1,2}"});
}

TEST_CASE("chambers of a chain") {
  for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {4, 3}, {6, 5}}) {
    auto a = wall_arrangement(ScenarioSpec::parse("chain:" + std::to_string(n1) + "," + std::to_string(n2)));
    CHECK(transversality(a) == "concurrent");
    auto ch = enumerate_chambers(a);
    REQUIRE(ch.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(ch[i].label == "C" + std::to_string(i + 1));
    CHECK(std::all_of(ch[0].signs.begin(), ch[0].signs.end(), [](int s) { return s > 0; }));
    // cyclic neighbours differ across exactly one wall
    for (std::size_t i = 0; i < 6; ++i) {
      const auto &x = ch[i], &y = ch[(i + 1) % 6];
      int diff = 0;
      std::size_t wall = 0;
      for (std::size_t w = 0; w < 3; ++w)
        if (x.signs[w] != y.signs[w]) {
          ++diff;
          wall = w;
        }
      CHECK(diff == 1);
      if (i == 0) CHECK(a.walls[wall].name == "W1");
    }
    // C4 is opposite to C1
    for (std::size_t w = 0; w < 3; ++w) CHECK(ch[3].signs[w] == -ch[0].signs[w]);
  }
}

TEST_CASE("component reports") {
  auto a4 = wall_arrangement(ScenarioSpec::parse("single:4"));
  auto r = component_report(a4, "{1}");
  REQUIRE(r.components.size() == 2);
  CHECK(r.components[0].name == "S");
  CHECK(r.components[1].name == "P^3");
  CHECK(r.components[1].dim == 3);
  REQUIRE(r.gluings.size() == 1);
  CHECK(r.gluings[0].left_sub == "C");
  CHECK(r.gluings[0].right_sub == "rational normal curve");
  CHECK(component_report(a4, "{}").components.size() == 1);

  auto r1 = component_report(wall_arrangement(ScenarioSpec::parse("single:1")), "{1}");
  REQUIRE(r1.components.size() == 1);
  CHECK(r1.components[0].name == "T");
  auto r2 = component_report(wall_arrangement(ScenarioSpec::parse("single:2")), "{1}");
  REQUIRE(r2.components.size() == 1);
  CHECK(r2.components[0].name == "S");

  auto d = wall_arrangement(ScenarioSpec::parse("disjoint:3,4"));
  auto rd = component_report(d, "{1,2}");
  CHECK(rd.to_text() == golden_files().at("disjoint_3_4_I12.txt"));
  REQUIRE(rd.walls.size() == 2);
  CHECK(rd.walls[0].singularity == 3);
  CHECK(rd.walls[1].singularity == 4);

  auto c = wall_arrangement(ScenarioSpec::parse("chain:3,3"));
  auto rc = component_report(c, "C3");
  CHECK(rc.to_text() == golden_files().at("chain_3_3_C3.txt"));
  CHECK(rc.components.size() == 3);
  CHECK(rc.gluings.size() == 3);
  CHECK_THROWS_AS(component_report(c, "C4"), std::invalid_argument);
  CHECK_THROWS_AS(component_report(c, "C7"), std::invalid_argument);
  auto r6 = component_report(c, "C6");
  REQUIRE(r6.gluings.size() == 1);
  CHECK(r6.gluings[0].left_sub == "C2");
  auto r2c = component_report(c, "C2");
  REQUIRE(r2c.gluings.size() == 1);
  CHECK(r2c.gluings[0].left_sub == "C1");
  CHECK(component_report(c, "C1").components.size() == 1);
}

TEST_CASE("on-wall singularity tag matches the invariant ring") {
  for (int n : {3, 4}) {
    auto a = wall_arrangement(ScenarioSpec::parse("single:" + std::to_string(n)));
    int tag = a.walls[0].singularity;
    auto P = single_wall_problem(n);
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
    auto match = compare_presentation(present_invariants(J, P.weights, nm, im, 4), hankel_rank_ideal(tag));
    CHECK(match.surjective);
    CHECK(match.relations_equal);
  }
}
