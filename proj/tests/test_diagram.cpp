#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sl3web/common.hpp"
#include "sl3web/diagram.hpp"
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

// Annulus with one black point per component; the polygon is a 4-gon
// [segment x][cut with][segment y][cut against].
SurfacePtr annulus() { return make_ctx(0, {"B", "B"}); }

// Tripod with one leg around the annulus. `around` picks the wrapping
// direction (the plug sense of the middle leg). The wrapping leg re-enters
// left of the direct leg, so it attaches first at point 0.
Diagram tripod_around(SurfacePtr ctx, bool around) {
  Diagram d(ctx);
  int w = d.add_vertex(Color::White);
  d.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(0), {{0, around, -1}});
  d.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(0));
  d.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(1));
  return d;
}

int count_regions(const MapView& M) { return (int)M.regions.size(); }

// (corner events, point corners, arc events) of the unique circle of a disk
// region; returns a matching region count.
int disk_regions_matching(const MapView& M, int corners, int pointCorners) {
  int n = 0;
  for (const auto& r : M.regions) {
    if (!r.disk()) continue;
    int arcs = 0, c = 0, pc = 0;
    for (const auto& ev : r.circles[0]) {
      if (ev.isArc)
        ++arcs;
      else {
        ++c;
        if (ev.kind == MapView::NPoint) ++pc;
      }
    }
    if (arcs == 0 && c == corners && pc == pointCorners) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("empty annulus map: one region of Euler characteristic 0 with two circles") {
  Diagram d(annulus());
  CHECK(d.validate().empty());
  MapView M = build_map(d);
  CHECK(M.faces.size() == 2);  // outer + the reglued interior
  REQUIRE(count_regions(M) == 1);
  CHECK(M.regions[0].chi == 0);
  CHECK(M.regions[0].circles.size() == 2);
  CHECK(M.regions[0].touchesArc);
  CHECK(is_non_elliptic(d));
}

TEST_CASE("single chord on a disk splits it into two boundary regions") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram d(ctx);
  d.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  CHECK(d.validate().empty());
  MapView M = build_map(d);
  CHECK(M.faces.size() == 3);
  CHECK(count_regions(M) == 2);
  for (const auto& r : M.regions) CHECK(r.touchesArc);
  CHECK(is_non_elliptic(d));
}

TEST_CASE("edge color discipline") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram d(ctx);
  // black to white is rejected at build time
  CHECK_THROWS_AS(d.add_edge(Diagram::at_point(1), Diagram::at_point(0)), Sl3Error);
  // degree-2 vertex is a validation failure
  Diagram d2(ctx);
  int v = d2.add_vertex(Color::Black);
  d2.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0));
  Violations viol = d2.validate();
  REQUIRE_FALSE(viol.empty());
  CHECK(viol[0].message.find("degree") != std::string::npos);
}

TEST_CASE("tripod with a leg around the annulus") {
  Diagram d = tripod_around(annulus(), false);
  CHECK(d.validate().empty());
  MapView M = build_map(d);
  CHECK(M.faces.size() == 5);  // outer + four interior faces
  CHECK(is_non_elliptic(d));

  // the mirrored sense with the same rotation cannot be drawn
  Diagram bad = tripod_around(annulus(), true);
  CHECK_THROWS_AS(build_map(bad), Sl3Error);
  Violations viol = bad.validate();
  REQUIRE_FALSE(viol.empty());
  CHECK(viol[0].message.find("drawn") != std::string::npos);

  // the mirrored embedding uses the opposite vertex rotation
  Diagram mir(annulus());
  int w = mir.add_vertex(Color::White);
  mir.add_edge(Diagram::at_vertex(mir.vertices.size() - 1, 0), Diagram::at_point(0));
  mir.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(0), {{0, true, -1}});
  mir.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(1));
  CHECK(mir.validate().empty());
  // wrapping the other way is a different web
  CHECK(mir.canonical_key() != d.canonical_key());
}

TEST_CASE("canonical key ignores construction order") {
  auto ctx = annulus();
  Diagram a = tripod_around(ctx, false);
  Diagram b(ctx);
  int w = b.add_vertex(Color::White);
  // same embedding, edges added in rotated order
  b.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(1));
  b.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(0), {{0, false, -1}});
  b.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(0));
  CHECK(b.validate().empty());
  CHECK(a.canonical_key() == b.canonical_key());
  CHECK(a.encode() == b.encode());
}

TEST_CASE("loop around the annulus core: orientation is semantic") {
  auto ctx = annulus();
  Diagram d(ctx);
  d.add_loop({{0, false, -1}});
  CHECK(d.validate().empty());
  MapView M = build_map(d);
  // the core loop cuts the annulus into two annuli, neither a disk
  CHECK(count_regions(M) == 2);
  for (const auto& r : M.regions) {
    CHECK(r.chi == 0);
    CHECK(r.circles.size() == 2);
  }
  CHECK(is_non_elliptic(d));

  Diagram rev(ctx);
  rev.add_loop({{0, true, -1}});
  CHECK(rev.validate().empty());
  CHECK(is_non_elliptic(rev));
  CHECK(rev.canonical_key() != d.canonical_key());
}

TEST_CASE("out-and-back loop cancels to a free loop") {
  auto ctx = annulus();
  Diagram d(ctx);
  d.add_loop({{0, true, -1}, {0, false, -1}});
  CHECK(d.validate().empty());
  CHECK_FALSE(is_non_elliptic(d));  // a free loop after cancellation
  d.normalize();
  CHECK(d.total_plugs() == 0);
  CHECK(d.count_loops() == 0);
  CHECK(d.freeLoops == 1);

  Diagram fl(ctx);
  fl.add_loop({});
  CHECK(fl.freeLoops == 1);
  Diagram d2(ctx);
  d2.add_loop({{0, true, -1}, {0, false, -1}});
  CHECK(d2.canonical_key() == fl.canonical_key());
  CHECK_FALSE(is_non_elliptic(fl));
}

TEST_CASE("loop storage phase does not change the encoding") {
  auto ctx = annulus();
  Diagram d1(ctx);
  d1.add_loop({{0, true, -1}, {0, false, -1}, {0, true, -1}, {0, false, -1}});
  Diagram d2(ctx);
  d2.add_loop({{0, true, 2}, {0, false, 3}, {0, true, 0}, {0, false, 1}});
  CHECK(d1.validate().empty());
  CHECK(d2.validate().empty());
  CHECK(d1.encode() == d2.encode());
  CHECK(d1.canonical_key() == d2.canonical_key());
}

TEST_CASE("vertex slide across a cut reaches the directly drawn web") {
  auto ctx = annulus();
  // vertex beside point 1 with two legs through the cut to point 0
  Diagram a(ctx);
  int w = a.add_vertex(Color::White);
  a.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(0), {{0, false, -1}});
  a.add_edge(Diagram::at_vertex(w, 1), Diagram::at_point(0), {{0, false, -1}});
  a.add_edge(Diagram::at_vertex(w, 2), Diagram::at_point(1));
  CHECK(a.validate().empty());

  // vertex beside point 0, third leg through the cut instead
  Diagram b(ctx);
  int w2 = b.add_vertex(Color::White);
  b.add_edge(Diagram::at_vertex(w2, 0), Diagram::at_point(0));
  b.add_edge(Diagram::at_vertex(w2, 1), Diagram::at_point(0));
  b.add_edge(Diagram::at_vertex(w2, 2), Diagram::at_point(1), {{0, true, -1}});
  CHECK(b.validate().empty());

  Diagram an = a;
  an.normalize();
  CHECK(an.total_plugs() == 1);
  CHECK(a.canonical_key() == b.canonical_key());
}

TEST_CASE("bigon, boundary bigon and square faces are detected as redexes") {
  // internal bigon
  auto ctx = make_ctx(0, {"WBB"});
  Diagram big(ctx);
  int v = big.add_vertex(Color::Black);
  int w = big.add_vertex(Color::White);
  big.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0));
  big.add_edge(Diagram::at_vertex(w, 1), Diagram::at_vertex(v, 2));
  big.add_edge(Diagram::at_vertex(w, 2), Diagram::at_vertex(v, 1));
  big.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(1));
  CHECK(big.validate().empty());
  CHECK(disk_regions_matching(build_map(big), 2, 0) == 1);
  CHECK_FALSE(is_non_elliptic(big));

  // boundary bigon pinned at a marked point
  auto ctx2 = make_ctx(0, {"WWB"});
  Diagram bb(ctx2);
  int bv = bb.add_vertex(Color::Black);
  bb.add_edge(Diagram::at_point(0), Diagram::at_vertex(bv, 0));
  bb.add_edge(Diagram::at_point(0), Diagram::at_vertex(bv, 1));
  bb.add_edge(Diagram::at_point(1), Diagram::at_vertex(bv, 2));
  CHECK(bb.validate().empty());
  CHECK(disk_regions_matching(build_map(bb), 2, 1) == 1);
  CHECK_FALSE(is_non_elliptic(bb));

  // doubled boundary arc: both corners at marked points, not a redex.
  // Parallel strands nest, so the arrival order flips at the far endpoint.
  Diagram dbl(ctx);
  dbl.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  dbl.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  std::swap(dbl.attachments[1][0], dbl.attachments[1][1]);
  CHECK(dbl.validate().empty());
  CHECK(disk_regions_matching(build_map(dbl), 2, 2) == 1);
  CHECK(is_non_elliptic(dbl));
}

TEST_CASE("square face is a redex") {
  auto ctx = make_ctx(0, {"WBWBB"});
  Diagram d(ctx);
  int b1 = d.add_vertex(Color::Black);
  int wA = d.add_vertex(Color::White);
  int b2 = d.add_vertex(Color::Black);
  int wB = d.add_vertex(Color::White);
  d.add_edge(Diagram::at_point(0), Diagram::at_vertex(b1, 0));  // p0 -> b1
  d.add_edge(Diagram::at_vertex(wA, 0), Diagram::at_point(1));  // wA -> p1
  d.add_edge(Diagram::at_point(2), Diagram::at_vertex(b2, 0));  // p2 -> b2
  d.add_edge(Diagram::at_vertex(wB, 0), Diagram::at_point(3));  // wB -> p3
  d.add_edge(Diagram::at_vertex(wA, 2), Diagram::at_vertex(b1, 1));
  d.add_edge(Diagram::at_vertex(wA, 1), Diagram::at_vertex(b2, 2));
  d.add_edge(Diagram::at_vertex(wB, 2), Diagram::at_vertex(b2, 1));
  d.add_edge(Diagram::at_vertex(wB, 1), Diagram::at_vertex(b1, 2));
  CHECK(d.validate().empty());
  CHECK(disk_regions_matching(build_map(d), 4, 0) == 1);
  CHECK_FALSE(is_non_elliptic(d));
}

TEST_CASE("square face pinned at one marked point is not a redex") {
  // Same square as above but with one white vertex replaced by a marked
  // point; a 4-gon is only reducible when all four corners are internal.
  auto ctx = make_ctx(0, {"WBWW"});
  Diagram d(ctx);
  int b1 = d.add_vertex(Color::Black);
  int wA = d.add_vertex(Color::White);
  int b2 = d.add_vertex(Color::Black);
  d.add_edge(Diagram::at_point(0), Diagram::at_vertex(b1, 0));
  d.add_edge(Diagram::at_vertex(wA, 0), Diagram::at_point(1));
  d.add_edge(Diagram::at_point(2), Diagram::at_vertex(b2, 0));
  d.add_edge(Diagram::at_vertex(wA, 2), Diagram::at_vertex(b1, 1));
  d.add_edge(Diagram::at_vertex(wA, 1), Diagram::at_vertex(b2, 2));
  d.add_edge(Diagram::at_point(3), Diagram::at_vertex(b2, 1));
  d.add_edge(Diagram::at_point(3), Diagram::at_vertex(b1, 2));
  CHECK(d.validate().empty());
  CHECK(disk_regions_matching(build_map(d), 4, 1) == 1);
  CHECK(is_non_elliptic(d));
}

TEST_CASE("unclasp classification") {
  auto ctx = annulus();
  UnclaspResult t = unclasp(tripod_around(ctx, false));
  CHECK(t.classification == UnclaspResult::Tree);
  CHECK(t.leafCount == 3);
  CHECK(t.componentCount == 1);

  auto ctx2 = make_ctx(0, {"WBB"});
  Diagram forest(ctx2);
  forest.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  forest.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  UnclaspResult f = unclasp(forest);
  CHECK(f.classification == UnclaspResult::Forest);
  CHECK(f.componentCount == 2);
  CHECK(f.leafCount == 4);

  Diagram loopd(ctx);
  loopd.add_loop({{0, false, -1}});
  CHECK(unclasp(loopd).classification == UnclaspResult::Neither);

  Diagram fl(ctx);
  fl.add_loop({});
  CHECK(unclasp(fl).classification == UnclaspResult::Neither);
}

TEST_CASE("split_components") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram d(ctx);
  d.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  d.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  d.freeLoops = 1;
  auto parts = split_components(d);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].count_edges() == 1);
  CHECK(parts[1].count_edges() == 1);
  CHECK(parts[2].freeLoops == 1);
  for (const auto& p : parts) CHECK(p.validate().empty());
  CHECK(parts[0].canonical_key() == parts[1].canonical_key());
}

TEST_CASE("superposing with an empty diagram is the identity") {
  auto ctx = annulus();
  Diagram d = tripod_around(ctx, false);
  Diagram empty(ctx);
  CHECK(superpose(d, empty).canonical_key() == d.canonical_key());
  // inserting everything into an empty host rebuilds the same web
  CHECK(superpose(empty, d).canonical_key() == d.canonical_key());
}

TEST_CASE("superposition shares a marked point without crossing") {
  auto ctx = make_ctx(0, {"WBB"});
  Diagram base(ctx);
  base.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  Diagram add(ctx);
  add.add_edge(Diagram::at_point(0), Diagram::at_point(2));
  Diagram got = superpose(base, add);
  CHECK(got.validate().empty());
  CHECK(got.count_crossings() == 0);
  // the chord to point 2 must land on the far side of the existing chord
  Diagram exp(ctx);
  exp.add_edge(Diagram::at_point(0), Diagram::at_point(2));
  exp.add_edge(Diagram::at_point(0), Diagram::at_point(1));
  CHECK(got.canonical_key() == exp.canonical_key());
}

TEST_CASE("superposition keeps the addition's own attachment order") {
  auto ctx = make_ctx(0, {"WWB"});
  Diagram add(ctx);
  add.add_edge(Diagram::at_point(1), Diagram::at_point(2));
  add.add_edge(Diagram::at_point(0), Diagram::at_point(2));
  CHECK(add.validate().empty());
  Diagram got = superpose(Diagram(ctx), add);
  CHECK(got.count_crossings() == 0);
  CHECK(got.canonical_key() == add.canonical_key());
}

TEST_CASE("superposing the annulus generators creates a crossing") {
  auto ctx = annulus();
  Diagram d1 = tripod_around(ctx, false);
  Diagram d2(ctx);
  d2.add_loop({{0, false, -1}});
  Diagram got = superpose(d1, d2);
  CHECK(got.validate().empty());
  CHECK(got.count_crossings() >= 1);
  CHECK(got.encode() == superpose(d1, d2).encode());  // deterministic
}

TEST_CASE("parallel strands insert without crossings") {
  auto ctx = annulus();
  Diagram base(ctx);
  base.add_loop({{0, false, -1}});
  Diagram add(ctx);
  add.add_loop({{0, false, -1}});
  Diagram got = insert_diagram(base, add, true);  // no crossings needed
  CHECK(got.validate().empty());
  CHECK(got.count_crossings() == 0);
  CHECK(got.count_loops() == 2);
  Diagram exp(ctx);
  exp.add_loop({{0, false, -1}});
  exp.add_loop({{0, false, -1}});
  CHECK(got.canonical_key() == exp.canonical_key());
}

TEST_CASE("insertion refusing crossings throws when blocked") {
  auto ctx = annulus();
  Diagram d1 = tripod_around(ctx, false);
  Diagram d2(ctx);
  d2.add_loop({{0, false, -1}});
  CHECK_THROWS_AS(insert_diagram(d1, d2, true), Sl3Error);
}

TEST_CASE("compacted preserves the encoding") {
  auto ctx = annulus();
  Diagram d = tripod_around(ctx, false);
  Diagram junk = d;
  // retire and rebuild an edge so dead records exist
  int e = 2;
  junk.erase_edge(e);
  junk.add_edge(Diagram::at_vertex(0, 2), Diagram::at_point(1));
  CHECK(junk.validate().empty());
  Diagram c = junk.compacted();
  CHECK(c.validate().empty());
  CHECK(c.edges.size() == 3);
  CHECK(c.encode() == d.encode());
}
