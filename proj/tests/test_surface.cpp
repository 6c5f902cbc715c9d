#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "sl3web/surface.hpp"

using namespace sl3web;

namespace {

MarkedSurface make_surface(int genus, const std::vector<std::string>& comps) {
  MarkedSurface s;
  s.genus = genus;
  for (const auto& word : comps) {
    BoundaryComponent bc;
    for (char ch : word) bc.colors.push_back(ch == 'B' ? Color::Black : Color::White);
    s.components.push_back(bc);
  }
  return s;
}

const MarkedSurface annulus = make_surface(0, {"B", "B"});
const MarkedSurface genus2 = make_surface(2, {"BBB", "BBWBBWW"});
const MarkedSurface disk3 = make_surface(0, {"BBB"});

}  // namespace

TEST_CASE("surface_type on the reference surfaces") {
  CHECK(surface_type(genus2) == std::tuple{3, 7, 5});
  CHECK(surface_type(annulus) == std::tuple{0, 2, 1});
  CHECK(surface_type(disk3) == std::tuple{0, 3, 0});
}

TEST_CASE("surface_type invariance under rotation and reordering") {
  MarkedSurface s1 = make_surface(2, {"BBWBBWW", "BBB"});
  MarkedSurface s2 = make_surface(2, {"BBB", "WBBWWBB"});
  CHECK(surface_type(s1) == surface_type(genus2));
  CHECK(surface_type(s2) == surface_type(genus2));
}

TEST_CASE("validate_surface") {
  CHECK(validate_surface(annulus).empty());
  CHECK(validate_surface(genus2).empty());
  Violations v1 = validate_surface(make_surface(0, {"WBWB"}));
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].message.find("alternate") != std::string::npos);
  Violations v2 = validate_surface(make_surface(0, {"BBB", ""}));
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].where == "component 1");
}

TEST_CASE("unfold annulus gives a 4-gon") {
  PolygonPresentation poly = unfold(annulus, canonical_cuts(annulus));
  REQUIRE(poly.sides.size() == 4);
  CHECK_FALSE(poly.sides[0].is_cut);
  CHECK(poly.sides[0].points == std::vector<int>{0});
  CHECK(poly.sides[1].is_cut);
  CHECK(poly.sides[1].cut == 0);
  CHECK(poly.sides[1].with_direction);
  CHECK_FALSE(poly.sides[2].is_cut);
  CHECK(poly.sides[2].points == std::vector<int>{1});
  CHECK(poly.sides[3].is_cut);
  CHECK_FALSE(poly.sides[3].with_direction);
}

TEST_CASE("unfold genus-2 two-component surface gives a 20-gon") {
  CutSystem cs = canonical_cuts(genus2);
  REQUIRE(cs.cuts.size() == 5);
  PolygonPresentation poly = unfold(genus2, cs);
  CHECK(poly.sides.size() == 20);
  // Sides alternate segment / cut.
  for (size_t i = 0; i < poly.sides.size(); ++i)
    CHECK(poly.sides[i].is_cut == (i % 2 == 1));
  // Each cut appears exactly twice, once in each direction.
  std::map<int, std::set<bool>> seen;
  for (const Side& s : poly.sides)
    if (s.is_cut) CHECK(seen[s.cut].insert(s.with_direction).second);
  CHECK(seen.size() == 5);
  for (const auto& [cut, dirs] : seen) CHECK(dirs.size() == 2);
}

TEST_CASE("unfold disk with no cuts") {
  PolygonPresentation poly = unfold(disk3, CutSystem{});
  REQUIRE(poly.sides.size() == 1);
  CHECK(poly.sides[0].points == std::vector<int>{0, 1, 2});
}

TEST_CASE("unfold torus-with-boundary and pants") {
  MarkedSurface torus = make_surface(1, {"BB"});
  PolygonPresentation p1 = unfold(torus, canonical_cuts(torus));
  CHECK(p1.sides.size() == 8);
  MarkedSurface pants = make_surface(0, {"B", "B", "B"});
  PolygonPresentation p2 = unfold(pants, canonical_cuts(pants));
  CHECK(p2.sides.size() == 8);
}

TEST_CASE("re-gluing the polygon reproduces the component point structure") {
  for (const MarkedSurface& s : {annulus, genus2, disk3}) {
    PolygonPresentation poly = unfold(s, canonical_cuts(s));
    std::map<int, std::vector<int>> byComp;
    int expected = 0;
    for (const auto& comp : s.components) expected += (int)comp.colors.size();
    int got = 0;
    for (const Side& side : poly.sides)
      if (!side.is_cut) {
        got += (int)side.points.size();
        for (int p : side.points) byComp[side.component].push_back(p);
      }
    CHECK(got == expected);
  }
}

TEST_CASE("unfold rejects bad cut systems") {
  // Wrong count.
  CHECK_THROWS_AS(unfold(annulus, CutSystem{}), Sl3Error);
  // Non-interleaved handle cuts do not cut the torus into a disk.
  MarkedSurface torus = make_surface(1, {"BB"});
  CutSystem seq;
  seq.cuts.push_back(Cut{{0, 1, 0}, {0, 1, 1}});
  seq.cuts.push_back(Cut{{0, 1, 2}, {0, 1, 3}});
  try {
    unfold(torus, seq);
    FAIL("expected NotADisk");
  } catch (const Sl3Error& e) {
    CHECK(e.code() == ErrorCode::NotADisk);
  }
  // A component untouched by cuts.
  MarkedSurface threeHoles = make_surface(0, {"B", "B", "B"});
  CutSystem bad;
  bad.cuts.push_back(Cut{{0, 0, 0}, {1, 0, 0}});
  bad.cuts.push_back(Cut{{0, 0, 1}, {1, 0, 1}});
  try {
    unfold(threeHoles, bad);
    FAIL("expected NotADisk");
  } catch (const Sl3Error& e) {
    CHECK(e.code() == ErrorCode::NotADisk);
  }
  // Bad gap index.
  CutSystem badGap;
  badGap.cuts.push_back(Cut{{0, 5, 0}, {1, 0, 0}});
  try {
    unfold(annulus, badGap);
    FAIL("expected BadAttachment");
  } catch (const Sl3Error& e) {
    CHECK(e.code() == ErrorCode::BadAttachment);
  }
  // Duplicate attachment position.
  CutSystem dup;
  dup.cuts.push_back(Cut{{0, 0, 0}, {0, 0, 0}});
  try {
    unfold(annulus, dup);
    FAIL("expected BadAttachment");
  } catch (const Sl3Error& e) {
    CHECK(e.code() == ErrorCode::BadAttachment);
  }
}

TEST_CASE("surface context tables") {
  SurfacePtr ctx = SurfaceContext::make(annulus);
  CHECK(ctx->a == 0);
  CHECK(ctx->b == 2);
  CHECK(ctx->c == 1);
  CHECK(ctx->nPoints == 2);
  CHECK(ctx->pointColor[0] == Color::Black);
  CHECK(ctx->sideWith[0] == 1);
  CHECK(ctx->sideAgainst[0] == 3);
  CHECK(ctx->segSideOfPoint[0] == 0);
  CHECK(ctx->segSideOfPoint[1] == 2);
  CHECK(ctx->nextPoint(0) == 0);  // single point on its component
  CHECK(ctx->pointLabel[0] == "p0.0");
  CHECK(ctx->pointLabel[1] == "p1.0");

  SurfacePtr g2 = SurfaceContext::make(genus2);
  CHECK(g2->nPoints == 10);
  CHECK(g2->nextPoint(3) == 4);
  CHECK(g2->nextPoint(9) == 3);  // wraps within component 1
  CHECK(g2->numberingNext(3) == 4);
}

TEST_CASE("reversed numbering only relabels") {
  MarkedSurface s = make_surface(0, {"BWB", "BB"});
  s.components[0].reversed = true;
  SurfacePtr ctx = SurfaceContext::make(s);
  // Walk order is unchanged; labels run the other way.
  CHECK(ctx->numberingIndex(0) == 0);
  CHECK(ctx->numberingIndex(1) == 2);
  CHECK(ctx->numberingIndex(2) == 1);
  CHECK(ctx->numberingNext(0) == 2);
  CHECK(ctx->pointLabel[1] == "p0.2");
}

TEST_CASE("canonical cuts are valid for a grid of surfaces") {
  for (int g = 0; g <= 2; ++g)
    for (int k = 1; k <= 3; ++k) {
      if (g == 0 && k == 1) continue;  // the disk needs no cuts and is covered above
      std::vector<std::string> comps;
      for (int i = 0; i < k; ++i) comps.push_back(i % 2 ? "BB" : "BWW");
      MarkedSurface s = make_surface(g, comps);
      CutSystem cs = canonical_cuts(s);
      auto [a, b, c] = surface_type(s);
      REQUIRE((int)cs.cuts.size() == c);
      PolygonPresentation poly = unfold(s, cs);
      CHECK((int)poly.sides.size() == 4 * c);
    }
}
