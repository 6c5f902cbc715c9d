#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sl3web/diagram.hpp"
#include "sl3web/eval.hpp"
#include "sl3web/skein.hpp"
#include "sl3web/surface.hpp"

using namespace sl3web;

namespace {

SurfacePtr make_ctx(int genus, const std::vector<std::string>& comps) {
  MarkedSurface s;
  s.genus = genus;
  for (const auto& word : comps) {
    BoundaryComponent bc;
    for (char ch : word) bc.colors.push_back(ch == 'B' ? Color::Black : Color::White);
    s.components.push_back(bc);
  }
  return SurfaceContext::make(s);
}

SurfacePtr annulus() { return make_ctx(0, {"B", "B"}); }

// Solves lhs == c * rhs for an integer c, |c| <= 9; returns 99 when no
// integer multiple matches.
long long solve_scale(const SurfaceContext& ctx, const InvariantPolynomial& lhs,
                      const InvariantPolynomial& rhs) {
  for (long long c = -9; c <= 9; ++c) {
    InvariantPolynomial t = zero_polynomial(ctx);
    t.add_scaled(rhs, Int((long)c));
    if (t == lhs) return c;
  }
  return 99;
}

// Solves lhs == c1 * r1 + c2 * r2 over the integer grid [-3,3]^2.
std::pair<long long, long long> solve_pair(const SurfaceContext& ctx,
                                           const InvariantPolynomial& lhs,
                                           const InvariantPolynomial& r1,
                                           const InvariantPolynomial& r2) {
  for (long long c1 = -3; c1 <= 3; ++c1)
    for (long long c2 = -3; c2 <= 3; ++c2) {
      InvariantPolynomial t = zero_polynomial(ctx);
      t.add_scaled(r1, Int((long)c1));
      t.add_scaled(r2, Int((long)c2));
      if (t == lhs) return {c1, c2};
    }
  return {99, 99};
}

bool equal_as_invariants(const Diagram& d, const WebCombination& c) {
  EqualityConfidence conf;
  return semantically_equal({{d, 1}}, c.to_terms(), &conf);
}

Diagram theta(SurfacePtr ctx) {
  Diagram d(ctx);
  int w = d.add_vertex(Color::White);
  int v = d.add_vertex(Color::Black);
  d.add_edge(Diagram::at_vertex(w, 0), Diagram::at_vertex(v, 0));
  d.add_edge(Diagram::at_vertex(w, 1), Diagram::at_vertex(v, 2));
  d.add_edge(Diagram::at_vertex(w, 2), Diagram::at_vertex(v, 1));
  return d;
}

// Internal bigon with one leg on each side; collapses to the 0 -> 1 strand.
Diagram bigon_with_legs(SurfacePtr ctx) {
  Diagram d(ctx);
  int v = d.add_vertex(Color::Black);
  int w = d.add_vertex(Color::White);
  d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0));
  d.add_edge(Diagram::at_vertex(w, 1), Diagram::at_vertex(v, 2));
  d.add_edge(Diagram::at_vertex(w, 2), Diagram::at_vertex(v, 1));
  d.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(1));
  return d;
}

Diagram boundary_bigon(SurfacePtr ctx) {
  Diagram d(ctx);
  int v = d.add_vertex(Color::Black);
  d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0));
  d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 1));
  d.add_edge(Diagram::at_point(1), Diagram::at_vertex(v, 2));
  return d;
}

// All-internal square with a leg at each corner, on {"WBWB", ...} points.
Diagram square_web(SurfacePtr ctx) {
  Diagram d(ctx);
  int b1 = d.add_vertex(Color::Black);
  int wA = d.add_vertex(Color::White);
  int b2 = d.add_vertex(Color::Black);
  int wB = d.add_vertex(Color::White);
  d.add_edge(Diagram::at_point(0), Diagram::at_vertex(b1, 0));
  d.add_edge(Diagram::at_vertex(wA, 0), Diagram::at_point(1));
  d.add_edge(Diagram::at_point(2), Diagram::at_vertex(b2, 0));
  d.add_edge(Diagram::at_vertex(wB, 0), Diagram::at_point(3));
  d.add_edge(Diagram::at_vertex(wA, 2), Diagram::at_vertex(b1, 1));
  d.add_edge(Diagram::at_vertex(wA, 1), Diagram::at_vertex(b2, 2));
  d.add_edge(Diagram::at_vertex(wB, 2), Diagram::at_vertex(b2, 1));
  d.add_edge(Diagram::at_vertex(wB, 1), Diagram::at_vertex(b1, 2));
  return d;
}

Diagram kink_strand(SurfacePtr ctx, bool flip) {
  Diagram d(ctx);
  int x = d.add_crossing();
  if (flip) {
    d.add_edge(Diagram::at_crossing(x, 1), Diagram::at_crossing(x, 0));
    d.add_edge(Diagram::at_crossing(x, 2), Diagram::at_point(1));
    d.add_edge(Diagram::at_point(0), Diagram::at_crossing(x, 3));
  } else {
    d.add_edge(Diagram::at_crossing(x, 0), Diagram::at_crossing(x, 1));
    d.add_edge(Diagram::at_crossing(x, 3), Diagram::at_point(1));
    d.add_edge(Diagram::at_point(0), Diagram::at_crossing(x, 2));
  }
  return d;
}

Diagram tripod_around(SurfacePtr ctx, bool withSense) {
  Diagram d(ctx);
  int w = d.add_vertex(Color::White);
  if (withSense) {
    d.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(0));
    d.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(0), {{0, true, -1}});
    d.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(1));
  } else {
    d.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(0), {{0, false, -1}});
    d.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(0));
    d.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(1));
  }
  return d;
}

const Redex* site_of(const std::vector<Redex>& sites, RuleId rule) {
  for (const auto& s : sites)
    if (s.rule == rule) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("rule names round-trip") {
  for (int i = 0; i <= (int)RuleId::YangBaxterE; ++i) {
    RuleId r = (RuleId)i;
    CHECK(rule_from_name(rule_name(r)) == r);
  }
  CHECK(is_reduction_rule(RuleId::CrossingResolution));
  CHECK(is_reduction_rule(RuleId::BoundaryBigon));
  CHECK_FALSE(is_reduction_rule(RuleId::YangBaxterA));
  CHECK_THROWS_AS((void)rule_from_name("untwist"), Sl3Error);
}

TEST_CASE("web combinations merge isotopic terms and cancel") {
  auto ctx = make_ctx(0, {"BBB"});
  Diagram t1(ctx);
  int w1 = t1.add_vertex(Color::White);
  t1.add_edge(Diagram::at_vertex(w1, 0), Diagram::at_point(0));
  t1.add_edge(Diagram::at_vertex(w1, 1), Diagram::at_point(1));
  t1.add_edge(Diagram::at_vertex(w1, 2), Diagram::at_point(2));
  // same web, edges inserted in a different order
  Diagram t2(ctx);
  int w2 = t2.add_vertex(Color::White);
  t2.add_edge(Diagram::at_vertex(w2, 2), Diagram::at_point(2));
  t2.add_edge(Diagram::at_vertex(w2, 0), Diagram::at_point(0));
  t2.add_edge(Diagram::at_vertex(w2, 1), Diagram::at_point(1));

  CHECK(WebCombination::key_of(t1) == WebCombination::key_of(t2));
  WebCombination c(ctx);
  c.add(t1, 2);
  c.add(t2, 3);
  CHECK(c.size() == 1);
  CHECK(c.coefficient(t1) == 5);
  c.add(t1, -5);
  CHECK(c.zero());

  WebCombination e = WebCombination::one(ctx);
  CHECK(e.size() == 1);
  CHECK(e.coefficient(Diagram(ctx)) == 1);
}

TEST_CASE("free loop removal multiplies by three") {
  auto ctx = make_ctx(0, {"B"});
  Diagram d(ctx);
  d.add_loop({});
  auto sites = find_redexes(d);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].rule == RuleId::LoopRemoval);
  CHECK(sites[0].loop == -1);
  WebCombination rhs = apply_rule(d, sites[0]);
  REQUIRE(rhs.size() == 1);
  CHECK(rhs.coefficient(Diagram(ctx)) == 3);
  CHECK(equal_as_invariants(d, rhs));
  CHECK(flatten(d) == rhs);
}

TEST_CASE("contractible plugged loop is removed, core loop is kept") {
  auto ctx = annulus();
  Diagram finger(ctx);
  finger.add_loop({{0, true, -1}, {0, false, -1}});
  auto sites = find_redexes(finger);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].rule == RuleId::LoopRemoval);
  CHECK(sites[0].loop >= 0);
  WebCombination rhs = apply_rule(finger, sites[0]);
  CHECK(rhs.coefficient(Diagram(ctx)) == 3);
  CHECK(equal_as_invariants(finger, rhs));

  Diagram core(ctx);
  core.add_loop({{0, true, -1}});
  CHECK(find_redexes(core).empty());
  CHECK(is_non_elliptic(core));
}

TEST_CASE("bigon collapses with factor minus two") {
  auto ctx = make_ctx(0, {"B"});
  Diagram th = theta(ctx);
  REQUIRE(th.validate().empty());
  auto sites = find_redexes(th);
  const Redex* site = site_of(sites, RuleId::BigonRemoval);
  REQUIRE(site != nullptr);
  WebCombination rhs = apply_rule(th, *site);
  REQUIRE(rhs.size() == 1);
  const auto& term = rhs.terms().begin()->second;

  // probe: the collapsed web is a single loop, worth 3; theta evaluates to -6
  InvariantPolynomial lhs = evaluate_symbolic(th);
  InvariantPolynomial one = evaluate_symbolic(term.web);
  CAPTURE(lhs.to_string());
  CHECK(solve_scale(*ctx, lhs, one) == -6 / 3);
  CHECK(term.coeff == -2);
  CHECK(equal_as_invariants(th, rhs));

  // theta flattens to -6 times the empty web
  WebCombination flat = flatten(th);
  REQUIRE(flat.size() == 1);
  CHECK(flat.coefficient(Diagram(ctx)) == -6);
}

TEST_CASE("bigon with legs collapses to the through strand") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram d = bigon_with_legs(ctx);
  REQUIRE(d.validate().empty());
  Diagram strand(ctx);
  strand.add_edge(Diagram::at_point(0), Diagram::at_point(1));

  WebCombination flat = flatten(d);
  CHECK(flat == WebCombination::single(strand, -2));
  CHECK(equal_as_invariants(d, flat));
}

TEST_CASE("bigon pinched at a marked point annihilates") {
  auto ctx = make_ctx(0, {"WWB"});
  Diagram d = boundary_bigon(ctx);
  REQUIRE(d.validate().empty());
  auto sites = find_redexes(d);
  const Redex* site = site_of(sites, RuleId::BoundaryBigon);
  REQUIRE(site != nullptr);
  WebCombination rhs = apply_rule(d, *site);
  CHECK(rhs.zero());
  CHECK(evaluate_symbolic(d).is_zero());
  CHECK(flatten(d).zero());
}

TEST_CASE("square face splits into its two smoothings") {
  auto ctx = make_ctx(0, {"WBWBB"});
  Diagram d = square_web(ctx);
  REQUIRE(d.validate().empty());
  auto sites = find_redexes(d);
  const Redex* site = site_of(sites, RuleId::SquareRemoval);
  REQUIRE(site != nullptr);
  WebCombination rhs = apply_rule(d, *site);
  REQUIRE(rhs.size() == 2);

  auto it = rhs.terms().begin();
  const auto& tA = it->second;
  const auto& tB = std::next(it)->second;
  InvariantPolynomial lhs = evaluate_symbolic(d);
  auto [c1, c2] = solve_pair(*ctx, lhs, evaluate_symbolic(tA.web), evaluate_symbolic(tB.web));
  CAPTURE(c1);
  CAPTURE(c2);
  CHECK(c1 == 1);
  CHECK(c2 == 1);
  CHECK(tA.coeff == 1);
  CHECK(tB.coeff == 1);
  CHECK(equal_as_invariants(d, rhs));

  WebCombination flat = flatten(d);
  for (const auto& [k, t] : flat.terms()) {
    CHECK(t.web.crossing_free());
    CHECK(is_non_elliptic(t.web));
  }
}

TEST_CASE("crossing resolves into smoothing plus H") {
  auto ctx = make_ctx(0, {"WWBB"});
  Diagram a(ctx), b(ctx);
  a.add_edge(Diagram::at_point(0), Diagram::at_point(2));
  b.add_edge(Diagram::at_point(1), Diagram::at_point(3));
  Diagram d = superpose(a, b);
  REQUIRE(d.count_crossings() == 1);

  auto sites = find_redexes(d);
  const Redex* site = site_of(sites, RuleId::CrossingResolution);
  REQUIRE(site != nullptr);
  WebCombination rhs = apply_rule(d, *site);
  REQUIRE(rhs.size() == 2);

  const WebCombination::Term* smooth = nullptr;
  const WebCombination::Term* hweb = nullptr;
  for (const auto& [k, t] : rhs.terms())
    (t.web.count_vertices() == 0 ? smooth : hweb) = &t;
  REQUIRE(smooth != nullptr);
  REQUIRE(hweb != nullptr);

  InvariantPolynomial lhs = evaluate_symbolic(d);
  auto [cs, ch] =
      solve_pair(*ctx, lhs, evaluate_symbolic(smooth->web), evaluate_symbolic(hweb->web));
  CAPTURE(cs);
  CAPTURE(ch);
  CHECK(cs == 1);
  CHECK(ch == 1);
  CHECK(smooth->coeff == 1);
  CHECK(hweb->coeff == 1);
  CHECK(equal_as_invariants(d, rhs));

  WebCombination flat = flatten(d);
  CHECK(equal_as_invariants(d, flat));
  for (const auto& [k, t] : flat.terms()) CHECK(is_non_elliptic(t.web));
}

TEST_CASE("curl straightens to the plain strand") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram strand(ctx);
  strand.add_edge(Diagram::at_point(0), Diagram::at_point(1));

  for (bool flip : {false, true}) {
    Diagram d = kink_strand(ctx, flip);
    if (!d.validate().empty()) continue;  // only one chirality embeds this way
    auto sites = find_redexes(d, true);
    const Redex* site = site_of(sites, RuleId::YangBaxterB);
    REQUIRE(site != nullptr);
    WebCombination rhs = apply_rule(d, *site);
    REQUIRE(rhs.size() == 1);
    CHECK(rhs.coefficient(strand) == 1);
    CHECK(equal_as_invariants(d, rhs));
    // the reduction path agrees: 3 (loop) - 2 (bigon inside the H part) = 1
    CHECK(flatten(d) == WebCombination::single(strand));
  }
}

TEST_CASE("double crossing between parallel strands cancels") {
  auto ctx = make_ctx(0, {"WWBB"});
  Diagram d(ctx);
  int x1 = d.add_crossing();
  int x2 = d.add_crossing();
  d.add_edge(Diagram::at_point(0), Diagram::at_crossing(x1, 0));
  d.add_edge(Diagram::at_point(1), Diagram::at_crossing(x1, 1));
  d.add_edge(Diagram::at_crossing(x1, 2), Diagram::at_crossing(x2, 0));
  d.add_edge(Diagram::at_crossing(x1, 3), Diagram::at_crossing(x2, 3));
  d.add_edge(Diagram::at_crossing(x2, 1), Diagram::at_point(2));
  d.add_edge(Diagram::at_crossing(x2, 2), Diagram::at_point(3));
  REQUIRE(d.validate().empty());

  Diagram plain(ctx);
  plain.add_edge(Diagram::at_point(0), Diagram::at_point(3));
  plain.add_edge(Diagram::at_point(1), Diagram::at_point(2));

  auto sites = find_redexes(d, true);
  const Redex* site = site_of(sites, RuleId::YangBaxterC);
  REQUIRE(site != nullptr);
  WebCombination rhs = apply_rule(d, *site);
  REQUIRE(rhs.size() == 1);
  CHECK(rhs.coefficient(plain) == 1);
  CHECK(equal_as_invariants(d, rhs));
  CHECK(flatten(d) == WebCombination::single(plain));
}

TEST_CASE("crossed tripod legs untwist with factor minus one") {
  for (Color color : {Color::White, Color::Black}) {
    bool white = color == Color::White;
    auto ctx = make_ctx(0, {white ? "BBB" : "WWW"});
    Diagram d(ctx);
    int v = d.add_vertex(color);
    int x = d.add_crossing();
    if (white) {
      d.add_edge(Diagram::at_vertex(v, 0), Diagram::at_point(0));
      d.add_edge(Diagram::at_vertex(v, 2), Diagram::at_crossing(x, 0));
      d.add_edge(Diagram::at_vertex(v, 1), Diagram::at_crossing(x, 1));
      d.add_edge(Diagram::at_crossing(x, 2), Diagram::at_point(1));
      d.add_edge(Diagram::at_crossing(x, 3), Diagram::at_point(2));
    } else {
      d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0));
      d.add_edge(Diagram::at_crossing(x, 0), Diagram::at_vertex(v, 2));
      d.add_edge(Diagram::at_crossing(x, 1), Diagram::at_vertex(v, 1));
      d.add_edge(Diagram::at_point(1), Diagram::at_crossing(x, 2));
      d.add_edge(Diagram::at_point(2), Diagram::at_crossing(x, 3));
    }
    REQUIRE(d.validate().empty());

    auto sites = find_redexes(d, true);
    const Redex* site =
        site_of(sites, white ? RuleId::YangBaxterD : RuleId::YangBaxterE);
    REQUIRE(site != nullptr);
    WebCombination rhs = apply_rule(d, *site);
    REQUIRE(rhs.size() == 1);
    CHECK(rhs.terms().begin()->second.coeff == -1);
    CHECK(rhs.terms().begin()->second.web.count_crossings() == 0);
    CHECK(equal_as_invariants(d, rhs));
  }
}

TEST_CASE("three pairwise crossings slide across a strand") {
  auto ctx = make_ctx(0, {"BWBWBWW"});
  Diagram d(ctx);
  int c1 = d.add_crossing();
  int c2 = d.add_crossing();
  int c3 = d.add_crossing();
  d.add_edge(Diagram::at_point(5), Diagram::at_crossing(c1, 3));
  d.add_edge(Diagram::at_crossing(c1, 1), Diagram::at_crossing(c2, 0));
  d.add_edge(Diagram::at_crossing(c2, 2), Diagram::at_point(2));
  d.add_edge(Diagram::at_point(1), Diagram::at_crossing(c2, 1));
  d.add_edge(Diagram::at_crossing(c2, 3), Diagram::at_crossing(c3, 1));
  d.add_edge(Diagram::at_crossing(c3, 3), Diagram::at_point(4));
  d.add_edge(Diagram::at_point(3), Diagram::at_crossing(c3, 2));
  d.add_edge(Diagram::at_crossing(c3, 0), Diagram::at_crossing(c1, 2));
  d.add_edge(Diagram::at_crossing(c1, 0), Diagram::at_point(0));
  REQUIRE(d.validate().empty());

  auto plain = find_redexes(d, false);
  CHECK(site_of(plain, RuleId::YangBaxterA) == nullptr);
  auto sites = find_redexes(d, true);
  const Redex* site = site_of(sites, RuleId::YangBaxterA);
  REQUIRE(site != nullptr);
  WebCombination rhs = apply_rule(d, *site);
  REQUIRE(rhs.size() == 1);
  CHECK(rhs.terms().begin()->second.coeff == 1);
  CHECK(rhs.terms().begin()->second.web.count_crossings() == 3);
  CHECK(equal_as_invariants(d, rhs));
}

TEST_CASE("rewrite sites exist exactly on elliptic webs") {
  auto check = [](const Diagram& d) {
    REQUIRE(d.validate().empty());
    CHECK(find_redexes(d).empty() == is_non_elliptic(d));
  };
  check(theta(make_ctx(0, {"B"})));
  check(bigon_with_legs(make_ctx(0, {"WBB"})));
  check(boundary_bigon(make_ctx(0, {"WWB"})));
  check(square_web(make_ctx(0, {"WBWBB"})));
  check(tripod_around(annulus(), true));
  {
    Diagram d(annulus());
    d.add_loop({{0, true, -1}});
    check(d);
  }
  {
    Diagram d(make_ctx(0, {"B"}));
    d.add_loop({});
    check(d);
  }
  {
    Diagram d(make_ctx(0, {"WBB"}));
    d.add_edge(Diagram::at_point(0), Diagram::at_point(1));
    check(d);
  }
}

TEST_CASE("floating loop multiplies the ambient web by three") {
  auto ctx = make_ctx(0, {"BBB"});
  Diagram tripod(ctx);
  int w = tripod.add_vertex(Color::White);
  tripod.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(0));
  tripod.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(1));
  tripod.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(2));
  Diagram d = tripod;
  d.add_loop({});
  CHECK(flatten(d) == WebCombination::single(tripod, 3));
}

TEST_CASE("flatten agrees with the invariant on random webs") {
  std::vector<SurfacePtr> ctxs = {annulus(), make_ctx(0, {"WBB", "B"}),
                                  make_ctx(0, {"WWBB"}), make_ctx(0, {"WBWBB"})};
  int tested = 0;
  for (size_t c = 0; c < ctxs.size(); ++c) {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
      Diagram d = random_diagram(ctxs[c], seed * 17 + c, 6);
      REQUIRE(d.validate().empty());
      WebCombination flat = flatten(d);
      for (const auto& [k, t] : flat.terms()) {
        CHECK(t.web.crossing_free());
        CHECK(is_non_elliptic(t.web));
      }
      CHECK(equal_as_invariants(d, flat));
      ++tested;
    }
  }
  CHECK(tested == 32);
}

TEST_CASE("flatten is confluent under randomized strategies") {
  std::vector<SurfacePtr> ctxs = {annulus(), make_ctx(0, {"WBB", "B"}),
                                  make_ctx(0, {"WWBB"}), make_ctx(0, {"WBWBB", "B"})};
  int count = 0;
  for (uint64_t seed = 1; count < 100; ++seed) {
    Diagram d = random_diagram(ctxs[seed % ctxs.size()], seed * 1009 + 3, 8);
    if (!d.validate().empty()) continue;
    CHECK(confluence_check(d, 5, seed));
    ++count;
  }
}

TEST_CASE("superposition product matches the product of invariants") {
  auto ctx = annulus();
  Diagram d1 = tripod_around(ctx, true);
  Diagram d2(ctx);
  d2.add_loop({{0, false, -1}});
  REQUIRE(d1.validate().empty());

  WebCombination prod = skein_multiply(WebCombination::single(d1), WebCombination::single(d2));
  CHECK(prod == flatten(superpose(d1, d2)));
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Assignment a = random_assignment(*ctx, seed, 5);
    CHECK(evaluate(prod.to_terms(), a) == evaluate(d1, a) * evaluate(d2, a));
  }
}

TEST_CASE("multiplication is commutative with unit the empty web") {
  auto ctx = annulus();
  WebCombination e = WebCombination::one(ctx);
  Diagram d1 = tripod_around(ctx, false);
  Diagram d2(ctx);
  d2.add_loop({{0, true, -1}});

  WebCombination a = WebCombination::single(d1);
  WebCombination b = WebCombination::single(d2, 2);
  CHECK(skein_multiply(e, a) == a);
  CHECK(skein_multiply(a, e) == a);
  CHECK(skein_multiply(a, b) == skein_multiply(b, a));

  for (uint64_t seed = 3; seed <= 7; ++seed) {
    Diagram r1 = random_diagram(ctx, seed, 4);
    Diagram r2 = random_diagram(ctx, seed + 100, 4);
    WebCombination p = skein_multiply(WebCombination::single(r1), WebCombination::single(r2));
    WebCombination q = skein_multiply(WebCombination::single(r2), WebCombination::single(r1));
    CHECK(p == q);
  }
}

TEST_CASE("dual tripods resolve into the three-term expansion") {
  auto ctx = make_ctx(0, {"WBWBWBB"});
  Diagram white(ctx);
  int w = white.add_vertex(Color::White);
  white.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(1));
  white.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(3));
  white.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(5));
  Diagram black(ctx);
  int b = black.add_vertex(Color::Black);
  black.add_edge(Diagram::at_point(0), Diagram::at_vertex(b, 0));
  black.add_edge(Diagram::at_point(2), Diagram::at_vertex(b, 1));
  black.add_edge(Diagram::at_point(4), Diagram::at_vertex(b, 2));

  Diagram d = superpose(white, black);
  WebCombination flat = flatten(d);
  CAPTURE(flat.to_string());
  CHECK(flat.size() == 3);
  CHECK(equal_as_invariants(d, flat));
}

TEST_CASE("mismatched redexes are rejected") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram d(ctx);
  d.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  Redex r;
  r.rule = RuleId::LoopRemoval;
  r.loop = -1;
  CHECK_THROWS_AS((void)apply_rule(d, r), Sl3Error);
  r.rule = RuleId::CrossingResolution;
  r.crossing = 0;
  r.loop = -1;
  CHECK_THROWS_AS((void)apply_rule(d, r), Sl3Error);

  Diagram th = theta(make_ctx(0, {"B"}));
  Redex bad;
  bad.rule = RuleId::BigonRemoval;
  bad.nodes = {0, 0};
  bad.edges = {0, 1};
  CHECK_THROWS_AS((void)apply_rule(th, bad), Sl3Error);
}

TEST_CASE("selftest validates every rule on randomized webs") {
  auto counts = skein_selftest(2026, 50);
  REQUIRE(counts.size() == 10);
  for (int i = 0; i <= (int)RuleId::YangBaxterE; ++i) {
    CAPTURE(rule_name((RuleId)i));
    CHECK(counts[rule_name((RuleId)i)] >= 50);
  }
}
