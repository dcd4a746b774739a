#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stabwc/lifts.hpp"

#include <random>

using namespace stabwc;

namespace {

// Random homogeneous cochain at weight w with given level and internal degree.
Vec random_cochain(HomCohomology& hc, std::mt19937& g, Weight w, int level, int internal) {
  std::uniform_int_distribution<int> co(-3, 3);
  Vec v;
  for (const auto& k : hc.basis_at(w, level + internal))
    if (k.level() == level) add_to(v, k, co(g));
  return v;
}

Weight random_weight(std::mt19937& g, int r = 3) {
  std::uniform_int_distribution<int> d(-r, r);
  return {d(g), d(g)};
}

// Local function of each matrix entry, as character -> coefficient.
using Poly2 = std::map<Weight, Rat>;
using Block = std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Poly2>;  // ((t,row),(s,col))

std::map<int, Block> dense(const HomSpace& H, const Vec& f) {
  std::map<int, Block> out;
  for (const auto& [k, c] : f) {
    auto& p = out[k.I][{{k.t, k.row}, {k.s, k.col}}];
    p[H.entry_char(k)] += c;
  }
  return out;
}

// Full block-matrix product on each overlap.
std::map<int, Block> dense_product(const std::map<int, Block>& a, const std::map<int, Block>& b) {
  std::map<int, Block> out;
  for (const auto& [I, A] : a) {
    auto it = b.find(I);
    if (it == b.end()) continue;
    for (const auto& [ia, pa] : A)
      for (const auto& [ib, pb] : it->second) {
        if (ia.second != ib.first) continue;
        auto& r = out[I][{ia.first, ib.second}];
        for (const auto& [wa, ca] : pa)
          for (const auto& [wb, cb] : pb) r[wa + wb] += ca * cb;
      }
  }
  for (auto& [I, B] : out) {
    for (auto& [ij, p] : B) std::erase_if(p, [](const auto& e) { return e.second == 0; });
    std::erase_if(B, [](const auto& e) { return e.second.empty(); });
  }
  std::erase_if(out, [](const auto& e) { return e.second.empty(); });
  return out;
}

std::vector<std::shared_ptr<const ToricModel>> models() {
  return {make_model("single", {3}), make_model("chain", {3, 3})};
}

int internal_of(const Vec& v) { return internal_degree(v).value_or(0); }

}  // namespace

TEST_CASE("hom differential squares to zero") {
  std::mt19937 g(1);
  for (auto m : models()) {
    HomCohomology hc(split_E(m), split_E(m));
    const auto& H = hc.space();
    for (int s = 0; s < 40; ++s) {
      int level = s % m->nchart, internal = std::uniform_int_distribution<int>(-2, 1)(g);
      Vec f = random_cochain(hc, g, random_weight(g), level, internal);
      CHECK(H.d_int(H.d_int(f)).empty());
      CHECK(H.cech(H.cech(f)).empty());
      CHECK(H.total_d(H.total_d(f)).empty());
    }
  }
}

TEST_CASE("identity endomorphism is closed") {
  for (auto m : models()) {
    for (const auto& spec : {"point", "E"}) {
      auto E = resolve_sheaf(spec, m);
      HomSpace H(E, E);
      Vec id;
      for (int i = 0; i < m->nchart; ++i)
        for (const auto& t : E.terms)
          for (int r = 0; r < t.rank; ++r) axpy(id, 1, entry(H, 1 << i, t.deg, t.deg, r, r, "1"));
      CHECK(H.d_int(id).empty());
      CHECK(H.total_d(id).empty());
      // compose(id, g) = g
      std::mt19937 g(3);
      HomCohomology hc(E, E);
      for (int s = 0; s < 10; ++s) {
        Vec f = random_cochain(hc, g, random_weight(g), 0, std::uniform_int_distribution<int>(-1, 1)(g));
        CHECK(compose(id, f) == f);
        CHECK(compose(f, id) == f);
      }
    }
  }
}

TEST_CASE("composition agrees with block matrix products") {
  std::mt19937 g(7);
  for (auto m : models()) {
    auto E = resolve_sheaf("point", m);
    HomCohomology hc(E, E);
    const auto& H = hc.space();
    for (int s = 0; s < 40; ++s) {
      int level = s % m->nchart;
      Vec f = random_cochain(hc, g, random_weight(g), level, std::uniform_int_distribution<int>(-1, 1)(g));
      Vec h = random_cochain(hc, g, random_weight(g), level, std::uniform_int_distribution<int>(-1, 1)(g));
      CHECK(dense(H, compose(f, h)) == dense_product(dense(H, f), dense(H, h)));
    }
  }
}

TEST_CASE("bracket: antisymmetry, Leibniz and Jacobi") {
  std::mt19937 g(13);
  for (auto m : models()) {
    HomCohomology hc(split_E(m), split_E(m));
    const auto& H = hc.space();
    int checked = 0;
    for (int s = 0; s < 60 && checked < 25; ++s) {
      int level = s % m->nchart;
      auto pick = [&] {
        return random_cochain(hc, g, random_weight(g, 2), level, std::uniform_int_distribution<int>(-2, 1)(g));
      };
      Vec a = pick(), b = pick(), c = pick();
      if (a.empty() || b.empty() || c.empty()) continue;
      ++checked;
      int da = internal_of(a), db = internal_of(b);
      CHECK(bracket(a, b) == scaled(-sign_of(da * db), bracket(b, a)));
      if (da % 2 == 0) CHECK(bracket(a, a).empty());
      // d[a,b] = [da,b] + (-1)^|a| [a,db]
      Vec lhs = H.d_int(bracket(a, b));
      Vec rhs = combine(bracket(H.d_int(a), b), bracket(a, H.d_int(b)), sign_of(da));
      CHECK(lhs == rhs);
      // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
      Vec j1 = bracket(a, bracket(b, c));
      Vec j2 = combine(bracket(bracket(a, b), c), bracket(b, bracket(a, c)), sign_of(da * db));
      CHECK(j1 == j2);
    }
    CHECK(checked >= 10);
  }
}

TEST_CASE("face maps satisfy the semicosimplicial identities") {
  std::mt19937 g(17);
  for (auto m : models()) {
    HomCohomology hc(split_E(m), split_E(m));
    const auto& H = hc.space();
    int N = m->nchart;
    for (int level = 0; level + 2 < N; ++level)
      for (int s = 0; s < 20; ++s) {
        Vec f = random_cochain(hc, g, random_weight(g), level, std::uniform_int_distribution<int>(-1, 1)(g));
        for (int k = 0; k <= level + 1; ++k)
          for (int l = 0; l <= k; ++l) CHECK(H.face(k + 1, H.face(l, f)) == H.face(l, H.face(k, f)));
      }
    // the Cech differential is the alternating sum of faces
    for (int s = 0; s < 10; ++s) {
      Vec f = random_cochain(hc, g, random_weight(g), 0, 0);
      Vec alt;
      for (int k = 0; k <= 1; ++k) axpy(alt, sign_of(k), H.face(k, f));
      CHECK(H.cech(f) == alt);
    }
  }
}

TEST_CASE("the alpha cocycles commute") {
  for (int n : {3, 4}) {
    SingleLifts L(n);
    HomSpace H(L.E, L.E);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        Vec ai = entry(H, 3, -1, -1, 0, 1, "y^" + std::to_string(i));
        Vec aj = entry(H, 3, -1, -1, 0, 1, "y^" + std::to_string(j));
        CHECK(bracket(ai, aj).empty());
      }
  }
}

TEST_CASE("Ext dimensions") {
  for (auto m : models()) {
    auto r = ext_dimensions(resolve_sheaf("point", m), resolve_sheaf("point", m));
    CHECK(r.dims.at(0) == 1);
    CHECK(r.dims.at(1) == 2);
    CHECK(r.dims.at(2) == 1);
    // hypercohomology of the point sheaf
    auto h = ext_dimensions(structure_sheaf(m), resolve_sheaf("point", m));
    int chi = 0;
    for (const auto& [k, d] : h.dims) chi += sign_of(k) * d;
    CHECK(chi == 1);
    CHECK(h.dims.at(0) == 1);
  }
  auto m4 = make_model("single", {4});
  // Ext^2(O_C, O_C(-1)) = Ext^1(O_C, O_C(-1)[1]) is n-dimensional
  CHECK(ext_dimensions(resolve_sheaf("OC", m4), resolve_sheaf("OC(-1)", m4)).dims.at(2) == 4);
  CHECK(ext_dimensions(resolve_sheaf("OC", m4), resolve_sheaf("OC(-1)[1]", m4)).dims.at(1) == 4);
  for (int n : {3, 4, 5}) {
    auto m = make_model("single", {n});
    auto r = ext_dimensions(split_E(m), split_E(m));
    CHECK(r.dims.at(0) == 2);
    CHECK(r.dims.at(1) == n + 2);
    CHECK(r.dims.at(2) == 2 * n - 2);
    CHECK(r.dims.at(3) == n - 2);
  }
}

TEST_CASE("window stability and window-too-small") {
  for (auto m : models()) {
    for (const auto& spec : {"point", "E"}) {
      auto E = resolve_sheaf(spec, m);
      HomCohomology a(E, E);
      HomCohomology b(E, E, a.margin() + 2);
      CHECK(a.dims().dims == b.dims().dims);
      CHECK(a.dims().by_weight == b.dims().by_weight);
    }
  }
  auto m = make_model("single", {3});
  CHECK_THROWS_AS(ext_dimensions(split_E(m), split_E(m), 0), WindowTooSmall);
  CHECK_THROWS_AS(ext_dimensions(resolve_sheaf("point", m), resolve_sheaf("point", m), 0), WindowTooSmall);
}

TEST_CASE("Ext dimensions recomputed from the differential") {
  for (auto m : models()) {
    auto E = split_E(m);
    HomCohomology hc(E, E);
    const auto& H = hc.space();
    auto box = hc.dims().window;
    for (int deg = 0; deg <= 1; ++deg) {
      int total = 0;
      for (int x = box.x0; x <= box.x1; ++x)
        for (int y = box.y0; y <= box.y1; ++y) {
          auto assemble = [&](int k) {
            auto src = hc.basis_at({x, y}, k), tgt = hc.basis_at({x, y}, k + 1);
            std::map<Key, std::size_t> row;
            for (std::size_t i = 0; i < tgt.size(); ++i) row[tgt[i]] = i;
            QMatrix d(tgt.size(), src.size());
            for (std::size_t j = 0; j < src.size(); ++j)
              for (const auto& [k2, c] : H.total_d(Vec{{src[j], Rat(1)}})) d.set(row.at(k2), j, c);
            return d;
          };
          QMatrix dk = assemble(deg), dprev = assemble(deg - 1);
          total += int(dk.cols() - rank(dk) - rank(dprev));
        }
      CHECK(total == hc.dim(deg));
    }
  }
}

TEST_CASE("cohomology representatives") {
  for (int n : {3, 4}) {
    SingleLifts L(n);
    HomCohomology hc(L.E, L.E);
    auto reps = hc.representatives(1);
    REQUIRE(int(reps.size()) == n + 2);
    const auto& H = hc.space();
    std::mt19937 g(n);
    std::vector<Rat> coeffs;
    Vec mix;
    for (std::size_t j = 0; j < reps.size(); ++j) {
      CHECK(H.total_d(reps[j]).empty());
      std::vector<Rat> unit(reps.size(), Rat(0));
      unit[j] = 1;
      CHECK(hc.coordinates(reps[j], 1) == unit);
      coeffs.push_back(Rat(std::uniform_int_distribution<int>(-5, 5)(g)) / 3);
      axpy(mix, coeffs.back(), reps[j]);
    }
    // adding a coboundary does not change the class
    Vec y = random_cochain(hc, g, reps[0].begin()->first.w, 0, 0);
    axpy(mix, 1, H.total_d(y));
    CHECK(hc.coordinates(mix, 1) == coeffs);
  }
  auto m = make_model("single", {3});
  auto OC = resolve_sheaf("OC", m);
  HomCohomology hc(OC, OC);
  const auto& H = hc.space();
  REQUIRE(hc.dim(0) == 1);
  Vec id;
  for (int i : {1, 2})
    for (int s : {-1, 0}) axpy(id, 1, entry(H, i, s, s, 0, 0, "1"));
  auto c = hc.coordinates(id, 0);
  REQUIRE(c);
  CHECK(c->size() == 1);
  CHECK((*c)[0] != 0);
}

TEST_CASE("gamma_0 is the Cech differential of mu-bar") {
  for (int n : {3, 4}) {
    SingleLifts L(n);
    HomSpace H(L.E, L.E);
    Vec mu_bar = sum({entry(H, 1, -2, -1, 0, 0, "1"), scaled(-1, entry(H, 1, -1, 0, 0, 1, "1"))});
    // gamma_0 = dt (x) gamma-bar_0 integrates to -gamma-bar_0 over the oriented 1-simplex
    CHECK(H.total_d(mu_bar) == integrate(L.gamma(H, 0)));
    CHECK(H.total_d(mu_bar) == scaled(-1, L.gamma_bar(H, 0)));
  }
}
