#include "sl3web/special.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "sl3web/common.hpp"
#include "sl3web/eval.hpp"

namespace sl3web {

namespace {

using Route = std::vector<std::pair<int, bool>>;

Color other(Color c) { return c == Color::Black ? Color::White : Color::Black; }

std::vector<TraceStep> to_trace(const Route& r) {
  std::vector<TraceStep> t;
  t.reserve(r.size());
  for (const auto& [cut, sense] : r) t.emplace_back(cut, sense, -1);
  return t;
}

Route revflip(const Route& r) {
  Route out;
  out.reserve(r.size());
  for (auto it = r.rbegin(); it != r.rend(); ++it) out.emplace_back(it->first, !it->second);
  return out;
}

void normalize_route(Route& r) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
      if (r[i].first == r[i + 1].first && r[i].second != r[i + 1].second) {
        r.erase(r.begin() + i, r.begin() + i + 2);
        changed = true;
        break;
      }
    }
  }
}

Route concat_null_test(const std::vector<Route>& parts) {
  Route all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  normalize_route(all);
  return all;
}

std::string route_str(const Route& r) {
  std::string s;
  for (const auto& [cut, sense] : r) {
    if (!s.empty()) s += ' ';
    s += std::to_string(cut);
    s += sense ? '+' : '-';
  }
  return s;
}

// Directed edge honoring the white -> black storage convention; `route` runs
// from end x to end y.
void connect(Diagram& d, const EndRef& x, Color cx, const EndRef& y, Color cy, const Route& route) {
  if (cx == cy) throw Sl3Error(ErrorCode::BadConfiguration, "edge endpoints of equal color");
  if (cx == Color::White)
    d.add_edge(x, y, to_trace(route));
  else
    d.add_edge(y, x, to_trace(revflip(route)));
}

}  // namespace

Arc Arc::reversed() const {
  Arc out;
  out.p = q;
  out.q = p;
  out.route = revflip(route);
  out.boundarySegment = boundarySegment;
  return out;
}

void Arc::normalize() { normalize_route(route); }

std::string Arc::str() const {
  std::string s = std::to_string(p) + "->" + std::to_string(q);
  if (!route.empty()) s += "[" + route_str(route) + "]";
  if (boundarySegment) s += "*";
  return s;
}

std::vector<std::pair<int, bool>> boundary_trace(const SurfaceContext& ctx, int fromPoint, int toPoint) {
  auto [comp, idx] = ctx.slotOfPoint.at(fromPoint);
  auto [compTo, idxTo] = ctx.slotOfPoint.at(toPoint);
  if (comp != compTo)
    throw Sl3Error(ErrorCode::BadInput, "boundary trace endpoints on different components");
  const auto& slots = ctx.slots[comp];
  int n = (int)slots.size();
  Route out;
  int i = (idx + 1) % n;
  while (i != idxTo) {
    const Slot& s = slots[i];
    if (!s.is_point) out.emplace_back(s.cut, s.is_from ? false : true);
    i = (i + 1) % n;
  }
  // Equal endpoints mean a full lap, and the loop above exits immediately;
  // walk once more all the way around.
  if (fromPoint == toPoint && out.empty() && n > 1) {
    i = (idx + 1) % n;
    do {
      const Slot& s = slots[i];
      if (!s.is_point) out.emplace_back(s.cut, s.is_from ? false : true);
      i = (i + 1) % n;
    } while (i != idxTo);
  }
  return out;
}

Arc boundary_arc(const SurfaceContext& ctx, int p) {
  int q = ctx.nextPoint(p);
  Arc a(p, q, boundary_trace(ctx, p, q), true);
  return a;
}

Arc dehn_twisted(const SurfaceContext& ctx, const Arc& a, int cut, bool sense) {
  (void)ctx;
  Arc out = a;
  out.boundarySegment = false;
  out.route.emplace_back(cut, sense);
  out.normalize();
  return out;
}

Arc Triangulation::side_arc(const TriangleData& tri, int i) const {
  const Arc& a = arcs.at(tri.sides[i]);
  return tri.forward[i] ? a : a.reversed();
}

Violations validate_triangulation(const Triangulation& t) {
  Violations v;
  const SurfaceContext& ctx = *t.ctx;
  for (size_t i = 0; i < t.arcs.size(); ++i) {
    const Arc& a = t.arcs[i];
    std::string where = "arc " + std::to_string(i);
    if (a.p < 0 || a.p >= ctx.nPoints || a.q < 0 || a.q >= ctx.nPoints) {
      v.push_back({where, "endpoint out of range"});
      continue;
    }
    Route r = a.route;
    normalize_route(r);
    if (r != a.route) v.push_back({where, "route is not normalized"});
    if (a.boundarySegment) {
      if (a.q != ctx.nextPoint(a.p))
        v.push_back({where, "boundary segment must join walk neighbors"});
      else if (a.route != boundary_trace(ctx, a.p, a.q))
        v.push_back({where, "boundary segment route mismatch"});
    }
  }
  std::vector<int> uses(t.arcs.size(), 0);
  std::vector<int> fwdUses(t.arcs.size(), 0);
  for (size_t ti = 0; ti < t.triangles.size(); ++ti) {
    const TriangleData& tri = t.triangles[ti];
    std::string where = "triangle " + std::to_string(ti);
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      if (tri.sides[i] < 0 || tri.sides[i] >= (int)t.arcs.size()) {
        v.push_back({where, "side index out of range"});
        ok = false;
        continue;
      }
      Arc side = t.side_arc(tri, i);
      ++uses[tri.sides[i]];
      if (tri.forward[i]) ++fwdUses[tri.sides[i]];
      if (side.p != tri.corners[i] || side.q != tri.corners[(i + 1) % 3]) {
        v.push_back({where, "side " + std::to_string(i) + " does not join its corners"});
        ok = false;
      }
    }
    if (!ok) continue;
    Route cycle = concat_null_test({t.side_arc(tri, 0).route, t.side_arc(tri, 1).route, t.side_arc(tri, 2).route});
    if (!cycle.empty()) v.push_back({where, "boundary cycle is not contractible: " + route_str(cycle)});
  }
  for (size_t i = 0; i < t.arcs.size(); ++i) {
    std::string where = "arc " + std::to_string(i);
    int expect = t.arcs[i].boundarySegment ? 1 : 2;
    if (uses[i] != expect)
      v.push_back({where, "bounds " + std::to_string(uses[i]) + " triangles, expected " + std::to_string(expect)});
    if (!t.arcs[i].boundarySegment && uses[i] == 2 && fwdUses[i] != 1)
      v.push_back({where, "internal arc must be traversed once in each direction"});
  }
  int k = (int)ctx.surface.components.size();
  long euler = (long)ctx.nPoints - (long)t.arcs.size() + (long)t.triangles.size();
  long expected = 2 - 2 * (long)ctx.surface.genus - k;
  if (euler != expected)
    v.push_back({"triangulation", "euler count " + std::to_string(euler) + " != " + std::to_string(expected)});
  return v;
}

LambdaTree build_lambda(Diagram& d, int point, bool upper) {
  const SurfaceContext& ctx = *d.ctx;
  auto eff = [&](int pt) { return upper ? other(ctx.color(pt)) : ctx.color(pt); };
  auto actual = [&](Color effective) { return upper ? other(effective) : effective; };

  LambdaTree t;
  t.point = point;
  t.upper = upper;
  if (eff(point) == Color::Black) {
    t.direct = true;
    t.attach = Diagram::at_point(point);
    t.carried = {point};
    return t;
  }

  // Find the first same-colored consecutive pair walking forward.
  int comp = ctx.pointCompIdx[point].first;
  int m = (int)ctx.compPoints[comp].size();
  int j = -1;
  {
    int cur = point;
    for (int step = 0; step < m; ++step) {
      int nxt = ctx.nextPoint(cur);
      if (ctx.color(cur) == ctx.color(nxt)) {
        j = step;
        break;
      }
      cur = nxt;
    }
  }
  if (j < 0)
    throw Sl3Error(ErrorCode::AlternatingSignature,
                   "colors alternate along the component; caterpillar cannot terminate");

  std::vector<int> pts;  // point, point+1, ..., point+j+1
  {
    int cur = point;
    for (int i = 0; i <= j + 1; ++i) {
      pts.push_back(cur);
      cur = ctx.nextPoint(cur);
    }
  }

  // Interior vertices: proxy v0 beside the root, then one per walked point;
  // the last one also picks up the closing point pts[j+1].
  std::vector<int> verts(j + 1, -1);
  std::vector<Color> vcol(j + 1);
  for (int i = 0; i <= j; ++i) {
    vcol[i] = actual(other(eff(pts[i])));
    verts[i] = d.add_vertex(vcol[i]);
  }

  // Point legs: slot 0 of each interior vertex.
  for (int i = 0; i <= j; ++i)
    connect(d, Diagram::at_vertex(verts[i], 0), vcol[i], Diagram::at_point(pts[i]), ctx.color(pts[i]), {});
  // Spine: slot 1 forward, slot 2 backward.
  for (int i = 1; i <= j; ++i)
    connect(d, Diagram::at_vertex(verts[i - 1], 1), vcol[i - 1], Diagram::at_vertex(verts[i], 2), vcol[i],
            boundary_trace(ctx, pts[i - 1], pts[i]));
  // Closing leg to the far point of the same-colored pair.
  connect(d, Diagram::at_vertex(verts[j], 1), vcol[j], Diagram::at_point(pts[j + 1]), ctx.color(pts[j + 1]),
          boundary_trace(ctx, pts[j], pts[j + 1]));

  t.spine = verts;
  t.attach = Diagram::at_vertex(verts[0], 2);
  t.carried = pts;
  return t;
}

namespace {

Color attach_color(const LambdaTree& t, const SurfaceContext& ctx) {
  // Lower trees expose a black end (the point itself or the proxy), upper
  // trees a white one.
  (void)ctx;
  return t.upper ? Color::White : Color::Black;
}

Route arc_prefix(const Arc& a, int split) {
  return Route(a.route.begin(), a.route.begin() + split);
}
Route arc_suffix(const Arc& a, int split) {
  return Route(a.route.begin() + split, a.route.end());
}

std::string point_name(const SurfaceContext& ctx, int p) { return ctx.pointLabel.at(p); }

}  // namespace

std::string SpecialInvariant::key() const {
  if (flattened.zero()) return "0";
  std::string k;
  for (const auto& [web_key, term] : flattened.terms()) {
    if (!k.empty()) k += "|";
    k += std::to_string(term.coeff) + "*" + web_key;
  }
  return k;
}

SpecialInvariant special_invariant(SurfacePtr ctx, SpecialKind kind, const std::vector<int>& points,
                                   const std::vector<Arc>& arcs, std::pair<int, int> quadSplits) {
  SpecialInvariant si(ctx);
  si.kind = kind;
  si.points = points;
  si.arcs = arcs;
  Diagram& d = si.diagram;
  const SurfaceContext& sc = *ctx;

  switch (kind) {
    case SpecialKind::Edge: {
      if (points.size() != 2 || arcs.size() != 1)
        throw Sl3Error(ErrorCode::BadConfiguration, "edge invariant needs two points and one arc");
      const Arc& alpha = arcs[0];
      if (alpha.p != points[0] || alpha.q != points[1])
        throw Sl3Error(ErrorCode::BadConfiguration, "arc endpoints disagree with the invariant's points");
      LambdaTree lo = build_lambda(d, points[0], false);
      LambdaTree up = build_lambda(d, points[1], true);
      // e runs along alpha; stored white -> black it goes from the upper
      // tree's end back to the lower tree's end.
      connect(d, up.attach, Color::White, lo.attach, Color::Black, revflip(alpha.route));
      si.label = "J_" + point_name(sc, points[0]) + "^" + point_name(sc, points[1]) + "(" +
                 route_str(alpha.route) + ")";
      break;
    }
    case SpecialKind::LowerTriangle:
    case SpecialKind::UpperTriangle: {
      if (points.size() != 3 || arcs.size() != 3)
        throw Sl3Error(ErrorCode::BadConfiguration, "triangle invariant needs three points and three arcs");
      for (int i = 0; i < 3; ++i)
        if (arcs[i].p != points[i] || arcs[i].q != points[(i + 1) % 3])
          throw Sl3Error(ErrorCode::BadConfiguration, "triangle side " + std::to_string(i) + " misdirected");
      Route cyc = concat_null_test({arcs[0].route, arcs[1].route, arcs[2].route});
      if (!cyc.empty())
        throw Sl3Error(ErrorCode::BadConfiguration, "triangle boundary is not contractible");
      bool upper = kind == SpecialKind::UpperTriangle;
      std::array<LambdaTree, 3> trees;
      for (int i = 0; i < 3; ++i) trees[i] = build_lambda(d, points[i], upper);
      Color centerColor = upper ? Color::Black : Color::White;
      int center = d.add_vertex(centerColor);
      // The center sits just inside the corner points[0]: legs run directly
      // to corner 0, along side 0 to corner 1, and along reversed side 2 to
      // corner 2.
      std::array<Route, 3> legs{Route{}, arcs[0].route, revflip(arcs[2].route)};
      for (int i = 0; i < 3; ++i)
        connect(d, Diagram::at_vertex(center, i), centerColor, trees[i].attach, attach_color(trees[i], sc),
                legs[i]);
      si.label = std::string(upper ? "J^" : "J_") + point_name(sc, points[0]) + point_name(sc, points[1]) +
                 point_name(sc, points[2]);
      break;
    }
    case SpecialKind::Quad: {
      if (points.size() != 4 || arcs.size() != 2)
        throw Sl3Error(ErrorCode::BadConfiguration, "quad invariant needs four points and two arcs");
      const Arc& alpha = arcs[0];  // p -> r
      const Arc& beta = arcs[1];   // q -> s
      if (alpha.p != points[0] || alpha.q != points[2] || beta.p != points[1] || beta.q != points[3])
        throw Sl3Error(ErrorCode::BadConfiguration, "quad arcs must join p->r and q->s");
      int sa = quadSplits.first, sb = quadSplits.second;
      if (sa < 0 || sa > (int)alpha.route.size() || sb < 0 || sb > (int)beta.route.size())
        throw Sl3Error(ErrorCode::BadConfiguration, "quad crossing split out of range");
      LambdaTree lp = build_lambda(d, points[0], false);
      LambdaTree lq = build_lambda(d, points[1], false);
      LambdaTree ur = build_lambda(d, points[2], true);
      LambdaTree us = build_lambda(d, points[3], true);
      int W = d.add_vertex(Color::White);
      int B = d.add_vertex(Color::Black);
      // W and B replace the crossing; the five incident edges fan out
      // toward p and q (white side) and r and s (black side).
      connect(d, Diagram::at_vertex(W, 0), Color::White, lp.attach, Color::Black,
              revflip(arc_prefix(alpha, sa)));
      connect(d, Diagram::at_vertex(W, 1), Color::White, lq.attach, Color::Black,
              revflip(arc_prefix(beta, sb)));
      connect(d, Diagram::at_vertex(W, 2), Color::White, Diagram::at_vertex(B, 0), Color::Black, {});
      connect(d, Diagram::at_vertex(B, 1), Color::Black, ur.attach, Color::White,
              arc_suffix(alpha, sa));
      connect(d, Diagram::at_vertex(B, 2), Color::Black, us.attach, Color::White,
              arc_suffix(beta, sb));
      si.label = "J_" + point_name(sc, points[0]) + point_name(sc, points[1]) + "^" +
                 point_name(sc, points[2]) + point_name(sc, points[3]);
      break;
    }
    case SpecialKind::Factor:
      throw Sl3Error(ErrorCode::BadConfiguration, "factor pieces are produced by factoring only");
  }

  Violations v = d.validate();
  if (!v.empty())
    throw Sl3Error(ErrorCode::BadConfiguration,
                   "special invariant does not embed: " + v.front().where + ": " + v.front().message);
  si.flattened = flatten(d);
  return si;
}

namespace {

// Pairwise products of pool entries, keyed lazily by the flattened key.
struct PairProducts {
  const std::vector<SpecialInvariant>* pool = nullptr;
  std::map<std::pair<int, int>, std::string> keys;

  std::string key(int i, int j) {
    auto it = keys.find({i, j});
    if (it != keys.end()) return it->second;
    WebCombination prod = skein_multiply((*pool)[i].flattened, (*pool)[j].flattened);
    std::string k;
    for (const auto& [wk, term] : prod.terms()) {
      if (!k.empty()) k += "|";
      k += std::to_string(term.coeff) + "*" + wk;
    }
    keys[{i, j}] = k;
    return k;
  }
};

std::string web_only_key(const Diagram& web) { return WebCombination::key_of(web); }

SpecialInvariant wrap_factor(SurfacePtr ctx, const Diagram& web, const std::string& label) {
  SpecialInvariant si(ctx);
  si.kind = SpecialKind::Factor;
  si.diagram = web;
  si.flattened = WebCombination::single(web, 1);
  si.label = label;
  return si;
}

}  // namespace

std::vector<SpecialInvariant> factor_indecomposable(const SpecialInvariant& s,
                                                    const std::vector<SpecialInvariant>& pool) {
  if (s.is_zero()) throw Sl3Error(ErrorCode::ZeroInvariant, "cannot factor the zero invariant");
  if (s.flattened.size() != 1 || s.flattened.terms().begin()->second.coeff != 1)
    throw Sl3Error(ErrorCode::BadConfiguration, "nonzero special invariants must flatten to one web");

  std::map<std::string, int> poolByKey;
  for (size_t i = 0; i < pool.size(); ++i)
    if (!pool[i].is_zero()) poolByKey.emplace(pool[i].key(), (int)i);
  PairProducts products;
  products.pool = &pool;

  const Diagram& whole = s.flattened.terms().begin()->second.web;
  std::vector<Diagram> parts = split_components(whole);
  if (parts.empty()) parts.push_back(whole);

  std::vector<SpecialInvariant> out;
  int counter = 0;
  for (const Diagram& part : parts) {
    std::string k = "1*" + web_only_key(part);
    auto direct = poolByKey.find(k);
    if (direct != poolByKey.end()) {
      out.push_back(pool[direct->second]);
      continue;
    }
    bool matched = false;
    for (size_t i = 0; i < pool.size() && !matched; ++i) {
      if (pool[i].is_zero()) continue;
      for (size_t j = i; j < pool.size() && !matched; ++j) {
        if (pool[j].is_zero()) continue;
        if (products.key((int)i, (int)j) == k) {
          out.push_back(pool[i]);
          out.push_back(pool[j]);
          matched = true;
        }
      }
    }
    if (!matched)
      out.push_back(wrap_factor(s.flattened.context(), part, s.label + "#" + std::to_string(counter)));
    ++counter;
  }

  // The factors must multiply back to the original invariant.
  WebCombination prod = WebCombination::one(s.flattened.context());
  for (const auto& f : out) prod = skein_multiply(prod, f.flattened);
  if (!(prod == s.flattened))
    throw Sl3Error(ErrorCode::DistillationFailure, "factor product mismatch for " + s.label);
  return out;
}

std::vector<SpecialInvariant> coefficient_invariants(SurfacePtr ctx) {
  const SurfaceContext& sc = *ctx;
  bool disk = sc.surface.genus == 0 && sc.surface.components.size() == 1;
  if (disk && sc.a + sc.b <= 4)
    throw Sl3Error(ErrorCode::ExcludedCase, "coefficient invariants are undefined on a disk with a+b <= 4");
  std::vector<SpecialInvariant> out;
  std::set<std::string> seen;
  for (int p = 0; p < sc.nPoints; ++p) {
    Arc seg = boundary_arc(sc, p);
    std::vector<SpecialInvariant> cands;
    cands.push_back(special_invariant(ctx, SpecialKind::Edge, {seg.p, seg.q}, {seg}));
    cands.push_back(special_invariant(ctx, SpecialKind::Edge, {seg.q, seg.p}, {seg.reversed()}));
    for (SpecialInvariant& cand : cands) {
      if (cand.is_zero()) continue;
      if (seen.insert(cand.key()).second) out.push_back(std::move(cand));
    }
  }
  return out;
}

int ExtendedCluster::index_of(const std::string& key) const {
  for (size_t i = 0; i < z.size(); ++i)
    if (z[i].key() == key) return (int)i;
  return -1;
}

ExtendedCluster extended_cluster(const Triangulation& t) {
  Violations v = validate_triangulation(t);
  if (!v.empty())
    throw Sl3Error(ErrorCode::BadConfiguration, "triangulation invalid: " + v.front().where + ": " + v.front().message);
  SurfacePtr ctx = t.ctx;

  // Directed invariants per arc; these double as the factoring pool.
  std::vector<SpecialInvariant> members;
  std::vector<SpecialInvariant> pool;
  for (const Arc& a : t.arcs) {
    members.push_back(special_invariant(ctx, SpecialKind::Edge, {a.p, a.q}, {a}));
    members.push_back(special_invariant(ctx, SpecialKind::Edge, {a.q, a.p}, {a.reversed()}));
  }
  for (const SpecialInvariant& m : members)
    if (!m.is_zero()) pool.push_back(m);
  for (const TriangleData& tri : t.triangles) {
    std::vector<int> pts(tri.corners.begin(), tri.corners.end());
    std::vector<Arc> sides{t.side_arc(tri, 0), t.side_arc(tri, 1), t.side_arc(tri, 2)};
    members.push_back(special_invariant(ctx, SpecialKind::LowerTriangle, pts, sides));
  }

  ExtendedCluster zc;
  std::set<std::string> seen;
  for (const SpecialInvariant& m : members) {
    if (m.is_zero()) continue;
    for (const SpecialInvariant& f : factor_indecomposable(m, pool)) {
      if (seen.insert(f.key()).second) zc.z.push_back(f);
    }
  }

  std::set<std::string> coeffKeys;
  for (const SpecialInvariant& c : coefficient_invariants(ctx)) coeffKeys.insert(c.key());
  zc.coefficient.resize(zc.z.size());
  for (size_t i = 0; i < zc.z.size(); ++i) {
    zc.coefficient[i] = coeffKeys.count(zc.z[i].key()) > 0;
    if (!zc.coefficient[i]) zc.x.push_back((int)i);
  }
  return zc;
}

QuadConfig quad_around_diagonal(const Triangulation& t, int arcIndex) {
  const Arc& diag = t.arcs.at(arcIndex);
  if (diag.boundarySegment)
    throw Sl3Error(ErrorCode::BadConfiguration, "boundary segments have no surrounding quadrilateral");
  int triFwd = -1, posFwd = -1, triRev = -1, posRev = -1;
  for (size_t ti = 0; ti < t.triangles.size(); ++ti)
    for (int i = 0; i < 3; ++i)
      if (t.triangles[ti].sides[i] == arcIndex) {
        if (t.triangles[ti].forward[i]) {
          triFwd = (int)ti;
          posFwd = i;
        } else {
          triRev = (int)ti;
          posRev = i;
        }
      }
  if (triFwd < 0 || triRev < 0)
    throw Sl3Error(ErrorCode::BadConfiguration, "diagonal does not separate two triangles");

  // Triangle traversing the diagonal p->r is prs (sides delta, kappa follow);
  // the one traversing r->p is pqr (sides rho, gamma follow).
  const TriangleData& B = t.triangles[triFwd];
  const TriangleData& A = t.triangles[triRev];
  QuadConfig c;
  c.p = B.corners[posFwd];
  c.r = B.corners[(posFwd + 1) % 3];
  c.s = B.corners[(posFwd + 2) % 3];
  c.q = A.corners[(posRev + 2) % 3];
  c.delta = t.side_arc(B, (posFwd + 1) % 3);
  c.kappa = t.side_arc(B, (posFwd + 2) % 3);
  c.rho = t.side_arc(A, (posRev + 1) % 3);
  c.gamma = t.side_arc(A, (posRev + 2) % 3);
  c.alpha = diag;
  c.beta = Arc(c.q, c.s, concat_null_test({c.gamma.route, c.delta.route}));
  // Keep the raw concatenation so the split index stays meaningful even if
  // normalization would shorten it.
  c.beta.route.clear();
  c.beta.route.insert(c.beta.route.end(), c.gamma.route.begin(), c.gamma.route.end());
  c.beta.route.insert(c.beta.route.end(), c.delta.route.begin(), c.delta.route.end());
  c.splits = {(int)c.alpha.route.size(), (int)c.gamma.route.size()};
  return c;
}

namespace {

SpecialInvariant edge_inv(SurfacePtr ctx, const Arc& a) {
  return special_invariant(ctx, SpecialKind::Edge, {a.p, a.q}, {a});
}

SpecialInvariant tri_inv(SurfacePtr ctx, bool upper, int c0, int c1, int c2, const Arc& s0, const Arc& s1,
                         const Arc& s2) {
  return special_invariant(ctx, upper ? SpecialKind::UpperTriangle : SpecialKind::LowerTriangle,
                           {c0, c1, c2}, {s0, s1, s2});
}

SpecialInvariant quad_inv(SurfacePtr ctx, int p, int q, int r, int s, const Arc& alpha, const Arc& beta,
                          std::pair<int, int> splits) {
  return special_invariant(ctx, SpecialKind::Quad, {p, q, r, s}, {alpha, beta}, splits);
}

}  // namespace

InvariantIdentity identity_triangle_product(SurfacePtr ctx, const std::array<int, 3>& corners,
                                            const std::array<Arc, 3>& sides) {
  int p = corners[0], q = corners[1], r = corners[2];
  const Arc& a = sides[0];  // p -> q
  const Arc& b = sides[1];  // q -> r
  const Arc& g = sides[2];  // r -> p
  InvariantIdentity id;
  id.name = "triangle-product";
  id.lhs.push_back({1, {tri_inv(ctx, false, p, q, r, a, b, g), tri_inv(ctx, true, p, q, r, a, b, g)}});
  id.rhs.push_back({1, {edge_inv(ctx, g), edge_inv(ctx, b), edge_inv(ctx, a)}});
  id.rhs.push_back({1, {edge_inv(ctx, b.reversed()), edge_inv(ctx, g.reversed()), edge_inv(ctx, a.reversed())}});
  return id;
}

InvariantIdentity identity_diagonal_triangle(SurfacePtr ctx, const QuadConfig& c) {
  InvariantIdentity id;
  id.name = "diagonal-triangle";
  id.lhs.push_back({1,
                    {edge_inv(ctx, c.alpha),
                     tri_inv(ctx, false, c.q, c.r, c.s, c.gamma, c.delta, c.beta.reversed())}});
  id.rhs.push_back({1,
                    {edge_inv(ctx, c.gamma),
                     tri_inv(ctx, false, c.p, c.r, c.s, c.alpha, c.delta, c.kappa)}});
  id.rhs.push_back({1,
                    {edge_inv(ctx, c.delta.reversed()),
                     tri_inv(ctx, false, c.p, c.q, c.r, c.rho, c.gamma, c.alpha.reversed())}});
  return id;
}

InvariantIdentity identity_two_diagonals(SurfacePtr ctx, const QuadConfig& c) {
  InvariantIdentity id;
  id.name = "two-diagonals";
  int lb = (int)c.beta.route.size();
  id.lhs.push_back({1, {edge_inv(ctx, c.alpha), edge_inv(ctx, c.beta.reversed())}});
  id.rhs.push_back({1, {edge_inv(ctx, c.delta.reversed()), edge_inv(ctx, c.rho)}});
  id.rhs.push_back({1,
                    {quad_inv(ctx, c.s, c.p, c.q, c.r, c.beta.reversed(), c.alpha,
                              {lb - c.splits.second, c.splits.first})}});
  return id;
}

InvariantIdentity identity_quad_lower(SurfacePtr ctx, const QuadConfig& c) {
  InvariantIdentity id;
  id.name = "quad-lower";
  int la = (int)c.alpha.route.size(), lb = (int)c.beta.route.size();
  id.lhs.push_back({1,
                    {edge_inv(ctx, c.alpha),
                     quad_inv(ctx, c.r, c.s, c.p, c.q, c.alpha.reversed(), c.beta.reversed(),
                              {la - c.splits.first, lb - c.splits.second})}});
  id.rhs.push_back({1,
                    {edge_inv(ctx, c.rho), edge_inv(ctx, c.alpha.reversed()),
                     edge_inv(ctx, c.delta.reversed())}});
  id.rhs.push_back({1,
                    {tri_inv(ctx, false, c.p, c.r, c.s, c.alpha, c.delta, c.kappa),
                     tri_inv(ctx, true, c.p, c.q, c.r, c.rho, c.gamma, c.alpha.reversed())}});
  return id;
}

InvariantIdentity identity_quad_upper(SurfacePtr ctx, const QuadConfig& c) {
  InvariantIdentity id;
  id.name = "quad-upper";
  int lb = (int)c.beta.route.size();
  id.lhs.push_back({1,
                    {edge_inv(ctx, c.alpha.reversed()),
                     quad_inv(ctx, c.s, c.p, c.q, c.r, c.beta.reversed(), c.alpha,
                              {lb - c.splits.second, c.splits.first})}});
  id.rhs.push_back({1,
                    {edge_inv(ctx, c.gamma.reversed()), edge_inv(ctx, c.kappa), edge_inv(ctx, c.alpha)}});
  id.rhs.push_back({1,
                    {tri_inv(ctx, false, c.p, c.r, c.s, c.alpha, c.delta, c.kappa),
                     tri_inv(ctx, true, c.p, c.q, c.r, c.rho, c.gamma, c.alpha.reversed())}});
  return id;
}

namespace {

void require_two_exposed(const SurfaceContext& sc, const QuadConfig& c) {
  if (!c.rho.boundarySegment || !c.gamma.boundarySegment || sc.nextPoint(c.p) != c.q ||
      sc.nextPoint(c.q) != c.r)
    throw Sl3Error(ErrorCode::BadConfiguration, "exposed relation needs consecutive corners p, p+1, p+2");
  if (c.p == c.q || c.q == c.r || c.p == c.r)
    throw Sl3Error(ErrorCode::BadConfiguration, "exposed relation needs three distinct corners");
}

}  // namespace

InvariantIdentity identity_exposed_wb(SurfacePtr ctx, const QuadConfig& c) {
  const SurfaceContext& sc = *ctx;
  require_two_exposed(sc, c);
  if (sc.color(c.p) != Color::White || sc.color(c.q) != Color::Black)
    throw Sl3Error(ErrorCode::BadConfiguration, "white-black exposed relation needs p white, p+1 black");
  InvariantIdentity id;
  id.name = "exposed-wb";
  id.lhs.push_back({1, {edge_inv(ctx, c.alpha.reversed()), edge_inv(ctx, c.beta)}});
  id.rhs.push_back({1, {edge_inv(ctx, c.rho.reversed()), edge_inv(ctx, c.delta)}});
  id.rhs.push_back({1, {edge_inv(ctx, c.kappa.reversed())}});
  return id;
}

InvariantIdentity identity_exposed_bw(SurfacePtr ctx, const QuadConfig& c) {
  const SurfaceContext& sc = *ctx;
  require_two_exposed(sc, c);
  if (sc.color(c.p) != Color::Black || sc.color(c.q) != Color::White)
    throw Sl3Error(ErrorCode::BadConfiguration, "black-white exposed relation needs p black, p+1 white");
  InvariantIdentity id;
  id.name = "exposed-bw";
  id.lhs.push_back({1, {edge_inv(ctx, c.alpha), edge_inv(ctx, c.beta.reversed())}});
  id.rhs.push_back({1, {edge_inv(ctx, c.rho), edge_inv(ctx, c.delta.reversed())}});
  id.rhs.push_back({1, {edge_inv(ctx, c.kappa)}});
  return id;
}

bool verify_identity(SurfacePtr ctx, const InvariantIdentity& id, int samples, uint64_t seed) {
  for (int k = 0; k < samples; ++k) {
    Assignment a = random_assignment(*ctx, seed + (uint64_t)k, 4);
    auto side = [&](const std::vector<InvariantIdentity::Term>& terms) {
      Rat total(0);
      for (const auto& term : terms) {
        Rat prod((long)term.coeff);
        for (const auto& f : term.factors) prod *= evaluate(f.flattened.to_terms(), a);
        total += prod;
      }
      return total;
    };
    if (side(id.lhs) != side(id.rhs)) return false;
  }
  return true;
}

bool verify_relation(SurfacePtr ctx, const ExtendedCluster& zc, const DistilledRelation& r, int samples,
                     uint64_t seed) {
  InvariantIdentity id;
  id.name = "exchange";
  id.lhs.push_back({1, {zc.z[r.x], r.partner}});
  for (int m = 0; m < 2; ++m) {
    InvariantIdentity::Term t;
    t.coeff = 1;
    for (int zi : r.monomials[m]) t.factors.push_back(zc.z[zi]);
    id.rhs.push_back(std::move(t));
  }
  return verify_identity(ctx, id, samples, seed);
}

namespace {

// The same quadrilateral with (p,q,r,s) relabeled to (r,s,p,q); rotating by
// two swaps the roles of the two triangles and reverses both diagonals.
QuadConfig rotated_quad(const QuadConfig& c) {
  QuadConfig o;
  o.p = c.r;
  o.q = c.s;
  o.r = c.p;
  o.s = c.q;
  o.rho = c.delta;
  o.gamma = c.kappa;
  o.delta = c.rho;
  o.kappa = c.gamma;
  o.alpha = c.alpha.reversed();
  o.beta = c.beta.reversed();  // reversed() keeps the raw route
  o.splits = {(int)c.alpha.route.size() - c.splits.first, (int)c.beta.route.size() - c.splits.second};
  return o;
}

// One instantiated three-term identity before distillation: two invariant
// lists on the left (a product) and two on the right.
struct RawRelation {
  std::vector<SpecialInvariant> lhs;
  std::array<std::vector<SpecialInvariant>, 2> rhs;
};

// Multiset of factor keys with the invariants kept alongside.
struct FactorBag {
  std::vector<SpecialInvariant> items;
  bool zero = false;
};

FactorBag factor_all(const std::vector<SpecialInvariant>& invs, const std::vector<SpecialInvariant>& pool) {
  FactorBag bag;
  for (const auto& inv : invs) {
    if (inv.is_zero()) {
      bag.zero = true;
      return bag;
    }
    for (auto& f : factor_indecomposable(inv, pool)) bag.items.push_back(std::move(f));
  }
  return bag;
}

void sort_bag(FactorBag& b) {
  std::sort(b.items.begin(), b.items.end(),
            [](const SpecialInvariant& x, const SpecialInvariant& y) { return x.key() < y.key(); });
}

// Remove one copy of `key`; true when found.
bool remove_one(std::vector<SpecialInvariant>& items, const std::string& key) {
  for (size_t i = 0; i < items.size(); ++i)
    if (items[i].key() == key) {
      items.erase(items.begin() + i);
      return true;
    }
  return false;
}

}  // namespace

std::vector<DistilledRelation> exchange_relations(const Triangulation& t, const ExtendedCluster& zc) {
  SurfacePtr ctx = t.ctx;
  std::vector<SpecialInvariant> pool;
  for (const auto& e : zc.z) pool.push_back(e);

  std::vector<RawRelation> raw;
  auto add_identity = [&](const InvariantIdentity& id) {
    RawRelation r;
    if (id.lhs.size() != 1 || id.rhs.size() != 2) return;
    r.lhs = id.lhs[0].factors;
    r.rhs[0] = id.rhs[0].factors;
    r.rhs[1] = id.rhs[1].factors;
    raw.push_back(std::move(r));
  };

  for (const TriangleData& tri : t.triangles) {
    add_identity(identity_triangle_product(
        ctx, tri.corners, {t.side_arc(tri, 0), t.side_arc(tri, 1), t.side_arc(tri, 2)}));
  }
  for (size_t ai = 0; ai < t.arcs.size(); ++ai) {
    if (t.arcs[ai].boundarySegment) continue;
    QuadConfig c;
    try {
      c = quad_around_diagonal(t, (int)ai);
    } catch (const Sl3Error&) {
      continue;
    }
    for (const QuadConfig& q : {c, rotated_quad(c)}) {
      add_identity(identity_diagonal_triangle(ctx, q));
      bool exposed = q.rho.boundarySegment || q.gamma.boundarySegment;
      if (exposed) {
        add_identity(identity_quad_lower(ctx, q));
        add_identity(identity_quad_upper(ctx, q));
      }
      const SurfaceContext& sc = *ctx;
      try {
        if (sc.color(q.p) == Color::White && sc.color(q.q) == Color::Black)
          add_identity(identity_exposed_wb(ctx, q));
        else if (sc.color(q.p) == Color::Black && sc.color(q.q) == Color::White)
          add_identity(identity_exposed_bw(ctx, q));
      } catch (const Sl3Error&) {
        // not a two-exposed configuration; skip
      }
    }
  }

  std::vector<DistilledRelation> out;
  std::set<std::string> seenRelations;
  for (const RawRelation& r : raw) {
    FactorBag lhs = factor_all(r.lhs, pool);
    FactorBag m1 = factor_all(r.rhs[0], pool);
    FactorBag m2 = factor_all(r.rhs[1], pool);
    if (lhs.zero || m1.zero || m2.zero) continue;  // a vanished side is discarded
    sort_bag(lhs);
    sort_bag(m1);
    sort_bag(m2);
    // Distill: cancel factors common to the left side and both monomials.
    for (size_t i = 0; i < lhs.items.size();) {
      std::string k = lhs.items[i].key();
      std::vector<SpecialInvariant> m1copy = m1.items;
      if (remove_one(m1copy, k)) {
        std::vector<SpecialInvariant> m2copy = m2.items;
        if (remove_one(m2copy, k)) {
          lhs.items.erase(lhs.items.begin() + i);
          m1.items = std::move(m1copy);
          m2.items = std::move(m2copy);
          continue;
        }
      }
      ++i;
    }
    if (lhs.items.size() != 2) continue;  // tautology or not an exchange shape
    int xi = zc.index_of(lhs.items[0].key());
    int pi = zc.index_of(lhs.items[1].key());
    int xIdx;
    SpecialInvariant partner(ctx);
    bool xiMutable = xi >= 0 && !zc.coefficient[xi];
    bool piMutable = pi >= 0 && !zc.coefficient[pi];
    if (xiMutable && pi < 0) {
      xIdx = xi;
      partner = lhs.items[1];
    } else if (piMutable && xi < 0) {
      xIdx = pi;
      partner = lhs.items[0];
    } else {
      continue;  // both or neither inside the cluster: not an exchange for T
    }
    DistilledRelation rel(ctx);
    rel.x = xIdx;
    rel.partner = partner;
    bool ok = true;
    for (int m = 0; m < 2; ++m) {
      for (const auto& f : (m == 0 ? m1 : m2).items) {
        int zi = zc.index_of(f.key());
        if (zi < 0) {
          ok = false;
          break;
        }
        rel.monomials[m].push_back(zi);
      }
      std::sort(rel.monomials[m].begin(), rel.monomials[m].end());
      if (!ok) break;
    }
    if (!ok) continue;
    if (rel.monomials[0] > rel.monomials[1]) std::swap(rel.monomials[0], rel.monomials[1]);
    std::string sig = std::to_string(rel.x) + ";" + rel.partner.key() + ";";
    for (int m = 0; m < 2; ++m) {
      for (int zi : rel.monomials[m]) sig += std::to_string(zi) + ",";
      sig += "|";
    }
    if (seenRelations.insert(sig).second) out.push_back(std::move(rel));
  }

  // Every cluster variable needs its relation.
  std::set<int> covered;
  for (const auto& r : out) covered.insert(r.x);
  for (int xi : zc.x)
    if (!covered.count(xi))
      throw Sl3Error(ErrorCode::DistillationFailure,
                     "no exchange relation distilled for " + zc.z[xi].label);
  return out;
}

Quiver quiver_from_relations(const std::vector<DistilledRelation>& rels, const ExtendedCluster& zc) {
  int n = (int)zc.z.size();
  std::vector<QuiverVertex> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = {zc.z[i].label, zc.coefficient[i]};
  Quiver q(std::move(verts));

  // One relation per mutable vertex.
  std::vector<int> relOf(n, -1);
  for (size_t ri = 0; ri < rels.size(); ++ri) {
    int x = rels[ri].x;
    if (relOf[x] >= 0)
      throw Sl3Error(ErrorCode::InconsistentRelations, "two relations for " + zc.z[x].label);
    relOf[x] = (int)ri;
  }
  for (int xi : zc.x)
    if (relOf[xi] < 0) throw Sl3Error(ErrorCode::InconsistentRelations, "missing relation for " + zc.z[xi].label);

  auto mult_in = [&](const DistilledRelation& r, int side, int y) {
    int m = 0;
    for (int zi : r.monomials[side])
      if (zi == y) ++m;
    return m;
  };

  // orient[x] = which monomial of x's relation is incoming; propagate across
  // mutable neighbors, new components start with monomial 0 incoming.
  std::vector<int> orient(n, -1);
  for (int start : zc.x) {
    if (orient[start] >= 0) continue;
    orient[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      const DistilledRelation& r = rels[relOf[x]];
      int outSide = 1 - orient[x];
      for (int side = 0; side < 2; ++side) {
        for (int y : r.monomials[side]) {
          if (zc.coefficient[y]) continue;
          const DistilledRelation& ry = rels[relOf[y]];
          int mx0 = mult_in(ry, 0, x), mx1 = mult_in(ry, 1, x);
          if (mx0 == 0 && mx1 == 0)
            throw Sl3Error(ErrorCode::InconsistentRelations,
                           "asymmetric neighbor " + zc.z[y].label + " / " + zc.z[x].label);
          if (mx0 > 0 && mx1 > 0)
            throw Sl3Error(ErrorCode::InconsistentRelations,
                           zc.z[x].label + " appears in both monomials of " + zc.z[y].label);
          // Arrows x->y exactly when y sits in x's outgoing monomial; then x
          // must sit in y's incoming one, and conversely.
          int has = mx0 > 0 ? 0 : 1;  // the ry monomial containing x
          bool xIncomingAtY = side == outSide;
          int desired = xIncomingAtY ? has : 1 - has;
          if (orient[y] < 0) {
            orient[y] = desired;
            stack.push_back(y);
          } else if (orient[y] != desired) {
            throw Sl3Error(ErrorCode::InconsistentRelations,
                           "orientation conflict between " + zc.z[x].label + " and " + zc.z[y].label);
          }
        }
      }
    }
  }

  for (int x : zc.x) {
    const DistilledRelation& r = rels[relOf[x]];
    int in = orient[x];
    for (int side = 0; side < 2; ++side) {
      std::map<int, int> mult;
      for (int y : r.monomials[side]) ++mult[y];
      for (auto [y, m] : mult) {
        if (y == x) throw Sl3Error(ErrorCode::InconsistentRelations, "variable appears in its own exchange");
        int existing = q.arrows(y, x);
        int desired = (side == in) ? m : -m;
        if (existing != 0 && existing != desired)
          throw Sl3Error(ErrorCode::InconsistentRelations,
                         "multiplicity conflict between " + zc.z[y].label + " and " + zc.z[x].label);
        q.set_arrows(y, x, desired);
      }
    }
  }
  return q;
}

Seed seed_from_triangulation(const Triangulation& t, const ExtendedCluster& zc,
                             const std::vector<DistilledRelation>& rels) {
  Seed s;
  s.quiver = quiver_from_relations(rels, zc);
  s.pool = std::make_shared<VarPool>();
  for (size_t i = 0; i < zc.z.size(); ++i) {
    uint32_t id = s.pool->intern("z" + std::to_string(i));
    s.vars.push_back(RationalExpr::symbol(id));
    s.webs.push_back(zc.z[i].flattened);
  }
  (void)t;
  return s;
}

Triangulation annulus_triangulation(SurfacePtr ctx) {
  const SurfaceContext& sc = *ctx;
  if (sc.surface.genus != 0 || sc.surface.components.size() != 2 || sc.nPoints != 2)
    throw Sl3Error(ErrorCode::BadInput, "annulus fixture needs one point per boundary circle");
  int x = 0, y = 1;
  Triangulation t;
  t.ctx = ctx;
  Arc alpha = boundary_arc(sc, x);            // x -> x, passes the cut against
  Arc beta(x, y, {});                         // direct chord
  Arc gamma = boundary_arc(sc, y);            // y -> y, passes the cut with
  Arc delta(x, y, {{0, false}});              // the twisted chord
  t.arcs = {alpha, beta, gamma, delta};
  // (x, y, x): x->y via beta, y->x via delta reversed, x->x via alpha.
  t.triangles.push_back({{x, y, x}, {1, 3, 0}, {true, false, true}});
  // (y, x, y): y->x via beta reversed, x->y via delta, y->y via gamma.
  t.triangles.push_back({{y, x, y}, {1, 3, 2}, {false, true, true}});
  return t;
}

Triangulation ladder_triangulation(SurfacePtr ctx) {
  const SurfaceContext& sc = *ctx;
  if (sc.surface.genus != 0 || sc.surface.components.size() != 2)
    throw Sl3Error(ErrorCode::BadInput, "ladder fixture needs an annulus");
  int b1 = (int)sc.compPoints[0].size();
  int b2 = (int)sc.compPoints[1].size();
  auto tp = [&](int i) { return sc.compPoints[0][i]; };
  auto bp = [&](int j) { return sc.compPoints[1][j]; };

  Triangulation t;
  t.ctx = ctx;
  // Boundary segments first: indices 0..b1+b2-1 by starting point.
  for (int i = 0; i < b1 + b2; ++i) t.arcs.push_back(boundary_arc(sc, i));
  auto seg = [&](int p) { return p; };

  // Fan rungs: top fan pivots at the last bottom point, bottom fan at the
  // last top point, then one closing rung through the cut.
  std::map<std::pair<int, int>, int> rung;  // (top idx, bottom idx) -> arc index
  for (int i = 0; i < b1; ++i) {
    rung[{i, b2 - 1}] = (int)t.arcs.size();
    t.arcs.push_back(Arc(tp(i), bp(b2 - 1), {}));
  }
  for (int j = b2 - 2; j >= 0; --j) {
    rung[{b1 - 1, j}] = (int)t.arcs.size();
    t.arcs.push_back(Arc(tp(b1 - 1), bp(j), {}));
  }
  int closing = (int)t.arcs.size();
  t.arcs.push_back(Arc(tp(b1 - 1), bp(b2 - 1), {{0, false}}));

  for (int i = 0; i + 1 < b1; ++i)
    t.triangles.push_back({{tp(i), tp(i + 1), bp(b2 - 1)},
                           {seg(tp(i)), rung[{i + 1, b2 - 1}], rung[{i, b2 - 1}]},
                           {true, true, false}});
  for (int j = b2 - 1; j >= 1; --j)
    t.triangles.push_back({{bp(j - 1), bp(j), tp(b1 - 1)},
                           {seg(bp(j - 1)), rung[{b1 - 1, j}], rung[{b1 - 1, j - 1}]},
                           {true, false, true}});
  // Closing quadrilateral, diagonal through the cut.
  t.triangles.push_back({{tp(b1 - 1), tp(0), bp(b2 - 1)},
                         {seg(tp(b1 - 1)), rung[{0, b2 - 1}], closing},
                         {true, true, false}});
  t.triangles.push_back({{tp(b1 - 1), bp(b2 - 1), bp(0)},
                         {closing, seg(bp(b2 - 1)), rung[{b1 - 1, 0}]},
                         {true, true, false}});
  return t;
}

Triangulation pants_triangulation(SurfacePtr ctx) {
  const SurfaceContext& sc = *ctx;
  if (sc.surface.genus != 0 || sc.surface.components.size() != 3 || sc.nPoints != 3)
    throw Sl3Error(ErrorCode::BadInput, "pants fixture needs three circles with one point each");
  int x = 0, y = 1, z = 2;
  Triangulation t;
  t.ctx = ctx;
  Arc segx = boundary_arc(sc, x);  // [(0,-),(1,-)]
  Arc segy = boundary_arc(sc, y);  // [(0,+)]
  Arc segz = boundary_arc(sc, z);  // [(1,+)]
  Arc beta(x, y, {});
  Arc delta(x, y, {{0, false}});
  Arc ra(x, z, {});
  Arc rb(y, z, {});
  Arc rc(x, z, {{0, false}});
  Arc ra2(x, z, {{1, true}});
  t.arcs = {segx, segy, segz, beta, delta, ra, rb, rc, ra2};
  // (y, x, y): beta reversed, delta, segy.
  t.triangles.push_back({{y, x, y}, {3, 4, 1}, {false, true, true}});
  // (x, y, z): beta, rb, ra reversed.
  t.triangles.push_back({{x, y, z}, {3, 6, 5}, {true, true, false}});
  // (y, x, z): delta reversed, rc, rb reversed.
  t.triangles.push_back({{y, x, z}, {4, 7, 6}, {false, true, false}});
  // (x, x, z): segx, ra2, rc reversed.
  t.triangles.push_back({{x, x, z}, {0, 8, 7}, {true, true, false}});
  // (x, z, z): ra, segz, ra2 reversed.
  t.triangles.push_back({{x, z, z}, {5, 2, 8}, {true, true, false}});
  return t;
}

}  // namespace sl3web
