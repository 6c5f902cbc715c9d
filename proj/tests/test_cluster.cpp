#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <random>

#include "sl3web/cluster.hpp"

using namespace sl3web;

namespace {

Poly X(uint32_t id) { return Poly::var(id); }

Quiver random_quiver(std::mt19937& rng, int n, int max_mult, int max_frozen) {
  std::vector<QuiverVertex> vs(n);
  std::uniform_int_distribution<int> coin(0, 3);
  int frozen = 0;
  for (int i = 0; i < n; ++i) {
    vs[i].name = "v" + std::to_string(i);
    if (frozen < max_frozen && i > 0 && coin(rng) == 0) {
      vs[i].frozen = true;
      ++frozen;
    }
  }
  Quiver q(std::move(vs));
  std::uniform_int_distribution<int> mult(-max_mult, max_mult);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) q.set_arrows(x, y, mult(rng));
  return q;
}

std::vector<int> mutable_vertices(const Quiver& q) {
  std::vector<int> out;
  for (int i = 0; i < q.size(); ++i)
    if (!q.vertex(i).frozen) out.push_back(i);
  return out;
}

// Level-zero slice of the rank-2 recurrence quiver: two generations of the
// two families, double arrows linking opposite families across generations.
Quiver recurrence_quiver() {
  Quiver q({{"a0", false}, {"b0", false}, {"a1", false}, {"b1", false}});
  q.set_arrows(2, 0, 2);
  q.set_arrows(0, 3, 1);
  q.set_arrows(3, 1, 2);
  q.set_arrows(1, 2, 1);
  return q;
}

}  // namespace

TEST_CASE("rational expression reduction") {
  Poly u = X(0), v = X(1);
  RationalExpr a(u * u - v * v, u + v);
  CHECK(a.num() == u - v);
  CHECK(a.den() == Poly(Int(1)));
  CHECK(a.is_polynomial());

  RationalExpr b(u * Poly::constant(6), v * Poly::constant(4));
  CHECK(b.num() == u * Poly::constant(3));
  CHECK(b.den() == v * Poly::constant(2));

  RationalExpr c(u * u * v, u * v * v);
  CHECK(c.num() == u);
  CHECK(c.den() == v);

  RationalExpr d(u, -v);
  CHECK(d.num() == -u);
  CHECK(d.den() == v);

  CHECK(RationalExpr(Poly(), u + v).is_zero());
  CHECK(RationalExpr(Poly(), u + v) == RationalExpr());
  CHECK_THROWS_AS(RationalExpr(u, Poly()), Sl3Error);
}

TEST_CASE("rational expression arithmetic") {
  RationalExpr u = RationalExpr::symbol(0);
  RationalExpr v = RationalExpr::symbol(1);
  RationalExpr one = RationalExpr::constant(1);

  CHECK((u / v) * (v / u) == one);
  CHECK((u / v + (-(u / v))).is_zero());
  CHECK(one / u + one / v == RationalExpr(X(0) + X(1), X(0) * X(1)));
  CHECK((u / v) / (u / v) == one);
  CHECK_THROWS_AS(u / RationalExpr(), Sl3Error);

  RationalExpr e = (u + v) / (u - v);
  std::unordered_map<uint32_t, Rat> pt{{0, Rat(3)}, {1, Rat(1)}};
  CHECK(e.eval(pt) == Rat(2));
  std::unordered_map<uint32_t, Rat> sing{{0, Rat(1)}, {1, Rat(1)}};
  CHECK_THROWS_AS(e.eval(sing), Sl3Error);
}

TEST_CASE("laurent detection") {
  Poly u = X(0), v = X(1), z = X(2), w = X(3);
  std::vector<uint32_t> cluster{0, 1, 2};
  CHECK(is_laurent(RationalExpr(u + v, z), cluster));
  CHECK_FALSE(is_laurent(RationalExpr(u + v, z + Poly::constant(1)), cluster));
  CHECK_FALSE(is_laurent(RationalExpr(u + v, z * Poly::constant(2)), cluster));
  CHECK_FALSE(is_laurent(RationalExpr(u, w), cluster));
  CHECK(is_laurent(RationalExpr::from_poly(u * v + z), cluster));
  CHECK(is_laurent(RationalExpr(), cluster));
}

TEST_CASE("quiver mutation reverses arrows at the vertex") {
  Quiver q({{"x", false}, {"z", false}});
  q.set_arrows(0, 1, 1);
  Quiver m = mutate_quiver(q, 1);
  CHECK(m.arrows(0, 1) == -1);
  CHECK(m.arrows(1, 0) == 1);
  CHECK(mutate_quiver(m, 1) == q);

  Quiver f({{"x", false}, {"c", true}});
  f.set_arrows(0, 1, 1);
  CHECK_THROWS_AS(mutate_quiver(f, 1), Sl3Error);
  try {
    mutate_quiver(f, 1);
  } catch (const Sl3Error& e) {
    CHECK(e.code() == ErrorCode::FrozenVertex);
  }
  CHECK_THROWS_AS(mutate_quiver(q, 5), Sl3Error);
  CHECK_THROWS_AS(q.set_arrows(0, 0, 2), Sl3Error);
}

TEST_CASE("quiver mutation is an involution") {
  std::mt19937 rng(20260815);
  std::uniform_int_distribution<int> nd(2, 6);
  for (int iter = 0; iter < 200; ++iter) {
    Quiver q = random_quiver(rng, nd(rng), 3, 2);
    auto mut = mutable_vertices(q);
    REQUIRE(!mut.empty());
    int z = mut[std::uniform_int_distribution<int>(0, (int)mut.size() - 1)(rng)];
    Quiver once = mutate_quiver(q, z);
    // Frozen-frozen multiplicities stay untouched.
    for (int x = 0; x < q.size(); ++x)
      for (int y = 0; y < q.size(); ++y)
        if (q.vertex(x).frozen && q.vertex(y).frozen) CHECK(once.arrows(x, y) == q.arrows(x, y));
    CHECK(mutate_quiver(once, z) == q);
  }
}

TEST_CASE("quiver isomorphism respects kinds and multiplicities") {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    Quiver q = random_quiver(rng, 5, 2, 2);
    std::vector<int> perm{0, 1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<QuiverVertex> vs(5);
    for (int i = 0; i < 5; ++i) vs[perm[i]] = q.vertex(i);
    Quiver p(vs);
    for (int x = 0; x < 5; ++x)
      for (int y = x + 1; y < 5; ++y) p.set_arrows(perm[x], perm[y], q.arrows(x, y));
    CHECK(quiver_isomorphic(q, p));
  }
  Quiver a({{"x", false}, {"y", false}});
  a.set_arrows(0, 1, 1);
  Quiver b({{"x", false}, {"y", false}});
  b.set_arrows(0, 1, 2);
  CHECK_FALSE(quiver_isomorphic(a, b));
  Quiver c({{"x", false}, {"y", true}});
  c.set_arrows(0, 1, 1);
  CHECK_FALSE(quiver_isomorphic(a, c));
}

TEST_CASE("recurrence quiver advances by one generation under paired mutation") {
  Quiver q = recurrence_quiver();
  CHECK(q.arrows(0, 1) == 0);  // the two same-generation vertices commute
  Quiver step = mutate_quiver(mutate_quiver(q, 0), 1);
  CHECK(step != q);
  CHECK(quiver_isomorphic(step, q));
  // A single mutation is not enough.
  CHECK_FALSE(quiver_isomorphic(mutate_quiver(q, 0), q));
}

TEST_CASE("seed exchange with frozen coefficients") {
  Quiver q({{"u", true}, {"z", false}, {"v", true}});
  q.set_arrows(0, 1, 1);
  q.set_arrows(1, 2, 1);
  Seed s = Seed::initial(q, std::make_shared<VarPool>(), {"u", "z", "v"});
  Seed m = mutate_seed(s, 1);
  CHECK(m.vars[1].num() == X(0) + X(2));
  CHECK(m.vars[1].den() == X(1));
  CHECK(m.quiver.arrows(0, 1) == -1);
  CHECK(m.quiver.arrows(1, 2) == -1);
  CHECK(m.quiver.arrows(0, 2) == 0);  // frozen pair stays disconnected
  CHECK(s.vars[1] == RationalExpr::symbol(1));
  CHECK_THROWS_AS(mutate_seed(s, 0), Sl3Error);

  Seed zeroed = s;
  zeroed.vars[1] = RationalExpr();
  try {
    mutate_seed(zeroed, 1);
    CHECK(false);
  } catch (const Sl3Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDivision);
  }
}

TEST_CASE("seed mutation is an involution") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> nd(2, 5);
  for (int iter = 0; iter < 50; ++iter) {
    Quiver q = random_quiver(rng, nd(rng), 2, 1);
    std::vector<std::string> names;
    for (int i = 0; i < q.size(); ++i) names.push_back(q.vertex(i).name);
    Seed s = Seed::initial(q, std::make_shared<VarPool>(), names);
    auto mut = mutable_vertices(q);
    int z = mut[std::uniform_int_distribution<int>(0, (int)mut.size() - 1)(rng)];
    Seed back = mutate_seed(mutate_seed(s, z), z);
    CHECK(back.quiver == s.quiver);
    for (int i = 0; i < q.size(); ++i) CHECK(back.vars[i] == s.vars[i]);
  }
}

TEST_CASE("exchange products are binomials in the old variables") {
  std::mt19937 rng(99);
  for (int iter = 0; iter < 40; ++iter) {
    Quiver q = random_quiver(rng, 4, 2, 1);
    std::vector<std::string> names{"p", "q", "r", "s"};
    Seed s = Seed::initial(q, std::make_shared<VarPool>(), names);
    auto mut = mutable_vertices(q);
    int z = mut[std::uniform_int_distribution<int>(0, (int)mut.size() - 1)(rng)];
    Seed m = mutate_seed(s, z);
    RationalExpr prod = m.vars[z] * s.vars[z];
    RationalExpr in = RationalExpr::constant(1), out = RationalExpr::constant(1);
    for (int y = 0; y < q.size(); ++y) {
      for (int k = 0; k < q.arrows(y, z); ++k) in = in * s.vars[y];
      for (int k = 0; k < q.arrows(z, y); ++k) out = out * s.vars[y];
    }
    CHECK(prod == in + out);
    CHECK(prod.is_polynomial());
    CHECK(prod.num().term_count() <= 2);
  }
}

TEST_CASE("mutated variables stay laurent along random paths") {
  // Simply-laced random quivers: double arrows make numerators square at
  // every exchange, which explodes past any practical cap within five steps.
  std::mt19937 rng(123);
  std::uniform_int_distribution<int> nd(2, 4);
  for (int path = 0; path < 30; ++path) {
    Quiver q = random_quiver(rng, nd(rng), 1, 1);
    std::vector<std::string> names;
    for (int i = 0; i < q.size(); ++i) names.push_back(q.vertex(i).name);
    Seed s = Seed::initial(q, std::make_shared<VarPool>(), names);
    std::vector<uint32_t> initial;
    for (int i = 0; i < q.size(); ++i) initial.push_back((uint32_t)i);
    int last = -1;
    for (int step = 0; step < 5; ++step) {
      auto mut = mutable_vertices(s.quiver);
      std::vector<int> pick;
      for (int v : mut)
        if (v != last) pick.push_back(v);
      if (pick.empty()) break;
      int z = pick[std::uniform_int_distribution<int>(0, (int)pick.size() - 1)(rng)];
      s = mutate_seed(s, z);
      last = z;
      for (const auto& var : s.vars) CHECK(is_laurent(var, initial));
    }
  }
}

TEST_CASE("recurrence seed stays laurent across five generations") {
  Seed s = Seed::initial(recurrence_quiver(), std::make_shared<VarPool>(), {"a0", "b0", "a1", "b1"});
  std::vector<uint32_t> initial{0, 1, 2, 3};
  for (int gen = 0; gen < 5; ++gen) {
    s = mutate_seed(s, 0);
    s = mutate_seed(s, 1);
    for (const auto& var : s.vars) CHECK(is_laurent(var, initial));
  }
}

TEST_CASE("seed initializer attaches no webs") {
  Quiver q({{"x", false}, {"y", false}});
  q.set_arrows(0, 1, 1);
  Seed s = Seed::initial(q, std::make_shared<VarPool>(), {"x", "y"});
  REQUIRE(s.webs.size() == 2);
  CHECK(!s.webs[0].has_value());
  CHECK(!s.webs[1].has_value());
  Seed m = mutate_seed(s, 0);
  CHECK(!m.webs[0].has_value());
  CHECK(m.pool == s.pool);
}
