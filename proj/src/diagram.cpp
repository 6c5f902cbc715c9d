#include "sl3web/diagram.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sl3web/common.hpp"

namespace sl3web {

Diagram::Diagram(SurfacePtr c) : ctx(std::move(c)) {
  if (!ctx) throw Sl3Error(ErrorCode::BadInput, "diagram requires a surface context");
  attachments.resize(ctx->nPoints);
  cutPlugs.resize(ctx->cuts.cuts.size());
}

int Diagram::add_vertex(Color c) {
  vertices.push_back(Vertex{c, {{{-1, -1}, {-1, -1}, {-1, -1}}}, true});
  return (int)vertices.size() - 1;
}

int Diagram::add_crossing() {
  crossings.push_back(Crossing{});
  return (int)crossings.size() - 1;
}

int Diagram::new_plug(int cut, bool sense, int position) {
  if (cut < 0 || cut >= (int)cutPlugs.size()) throw Sl3Error(ErrorCode::BadInput, "plug on unknown cut");
  plugs.push_back(PlugRec{cut, sense, -1, -1, true});
  int id = (int)plugs.size() - 1;
  auto& order = cutPlugs[cut];
  if (position < 0 || position > (int)order.size()) position = (int)order.size();
  order.insert(order.begin() + position, id);
  return id;
}

void Diagram::attach_end(int e, int end, const EndRef& r) {
  (end == 0 ? edges[e].a : edges[e].b) = r;
  switch (r.kind) {
    case EndRef::VertexEnd: {
      if (r.id < 0 || r.id >= (int)vertices.size() || r.port < 0 || r.port > 2)
        throw Sl3Error(ErrorCode::BadInput, "bad vertex end");
      auto& s = vertices[r.id].slots[r.port];
      if (s.first >= 0) throw Sl3Error(ErrorCode::BadInput, "vertex port already occupied");
      s = {e, end};
      break;
    }
    case EndRef::CrossingEnd: {
      if (r.id < 0 || r.id >= (int)crossings.size() || r.port < 0 || r.port > 3)
        throw Sl3Error(ErrorCode::BadInput, "bad crossing end");
      auto& s = crossings[r.id].slots[r.port];
      if (s.first >= 0) throw Sl3Error(ErrorCode::BadInput, "crossing port already occupied");
      s = {e, end};
      break;
    }
    case EndRef::PointEnd:
      if (r.id < 0 || r.id >= (int)attachments.size())
        throw Sl3Error(ErrorCode::BadInput, "bad point end");
      attachments[r.id].push_back(e * 2 + end);
      break;
    default:
      break;
  }
}

void Diagram::detach_end(int e, int end) {
  EndRef& r = (end == 0 ? edges[e].a : edges[e].b);
  if (r.kind == EndRef::VertexEnd)
    vertices[r.id].slots[r.port] = {-1, -1};
  else if (r.kind == EndRef::CrossingEnd)
    crossings[r.id].slots[r.port] = {-1, -1};
  else if (r.kind == EndRef::PointEnd) {
    auto& A = attachments[r.id];
    A.erase(std::find(A.begin(), A.end(), e * 2 + end));
  }
  r = EndRef{};
}

int Diagram::add_edge(EndRef a, EndRef b, const std::vector<TraceStep>& trace) {
  edges.push_back(Edge{});
  int e = (int)edges.size() - 1;
  attach_end(e, 0, a);
  attach_end(e, 1, b);
  auto ca = end_color(a), cb = end_color(b);
  if (ca && *ca != Color::White) throw Sl3Error(ErrorCode::BadInput, "edge must leave a white end");
  if (cb && *cb != Color::Black) throw Sl3Error(ErrorCode::BadInput, "edge must arrive at a black end");
  for (const auto& [cut, sense, pos] : trace) {
    int p = new_plug(cut, sense, pos);
    plugs[p].edge = e;
    edges[e].plugs.push_back(p);
  }
  return e;
}

int Diagram::add_loop(const std::vector<TraceStep>& trace) {
  if (trace.empty()) {
    ++freeLoops;
    return -1;
  }
  loops.push_back(Loop{});
  int l = (int)loops.size() - 1;
  for (const auto& [cut, sense, pos] : trace) {
    int p = new_plug(cut, sense, pos);
    plugs[p].loop = l;
    loops[l].plugs.push_back(p);
  }
  return l;
}

void Diagram::erase_plug(int p) {
  auto& pr = plugs[p];
  if (!pr.alive) return;
  auto& order = cutPlugs[pr.cut];
  order.erase(std::find(order.begin(), order.end(), p));
  if (pr.edge >= 0) {
    auto& L = edges[pr.edge].plugs;
    L.erase(std::find(L.begin(), L.end(), p));
  }
  if (pr.loop >= 0) {
    auto& L = loops[pr.loop].plugs;
    L.erase(std::find(L.begin(), L.end(), p));
  }
  pr.alive = false;
}

void Diagram::erase_edge(int e) {
  if (!edges[e].alive) return;
  detach_end(e, 0);
  detach_end(e, 1);
  auto ps = edges[e].plugs;
  for (int p : ps) erase_plug(p);
  edges[e].alive = false;
}

void Diagram::erase_loop(int l) {
  if (!loops[l].alive) return;
  auto ps = loops[l].plugs;
  for (int p : ps) erase_plug(p);
  loops[l].alive = false;
}

void Diagram::erase_vertex(int v) {
  for (auto& s : vertices[v].slots)
    if (s.first >= 0) throw Sl3Error(ErrorCode::BadInput, "erasing a vertex with occupied ports");
  vertices[v].alive = false;
}

void Diagram::erase_crossing(int x) {
  for (auto& s : crossings[x].slots)
    if (s.first >= 0) throw Sl3Error(ErrorCode::BadInput, "erasing a crossing with occupied ports");
  crossings[x].alive = false;
}

std::optional<Color> Diagram::end_color(const EndRef& r) const {
  if (r.kind == EndRef::VertexEnd) return vertices[r.id].color;
  if (r.kind == EndRef::PointEnd) return ctx->pointColor[r.id];
  return std::nullopt;
}

int Diagram::count_vertices() const {
  int n = 0;
  for (const auto& v : vertices) n += v.alive;
  return n;
}
int Diagram::count_crossings() const {
  int n = 0;
  for (const auto& x : crossings) n += x.alive;
  return n;
}
int Diagram::count_edges() const {
  int n = 0;
  for (const auto& e : edges) n += e.alive;
  return n;
}
int Diagram::count_loops() const {
  int n = 0;
  for (const auto& l : loops) n += l.alive;
  return n;
}
int Diagram::total_plugs() const {
  int n = 0;
  for (const auto& p : plugs) n += p.alive;
  return n;
}

bool Diagram::crossing_free() const { return count_crossings() == 0; }

Violations Diagram::validate() const {
  Violations out;
  auto bad = [&](const std::string& w, const std::string& m) { out.push_back({w, m}); };

  for (int v = 0; v < (int)vertices.size(); ++v) {
    if (!vertices[v].alive) continue;
    std::string where = "vertex " + std::to_string(v);
    int deg = 0;
    for (int i = 0; i < 3; ++i) {
      auto [e, end] = vertices[v].slots[i];
      if (e < 0) continue;
      ++deg;
      if (e >= (int)edges.size() || !edges[e].alive) {
        bad(where, "port references a dead edge");
        continue;
      }
      const EndRef& r = end == 0 ? edges[e].a : edges[e].b;
      if (!(r.kind == EndRef::VertexEnd && r.id == v && r.port == i))
        bad(where, "port backreference mismatch");
    }
    if (deg != 3) bad(where, "internal vertex has degree " + std::to_string(deg) + ", expected 3");
  }

  for (int x = 0; x < (int)crossings.size(); ++x) {
    if (!crossings[x].alive) continue;
    std::string where = "crossing " + std::to_string(x);
    int deg = 0;
    std::array<int, 4> incoming{-1, -1, -1, -1};
    for (int i = 0; i < 4; ++i) {
      auto [e, end] = crossings[x].slots[i];
      if (e < 0) continue;
      ++deg;
      if (e >= (int)edges.size() || !edges[e].alive) {
        bad(where, "port references a dead edge");
        continue;
      }
      const EndRef& r = end == 0 ? edges[e].a : edges[e].b;
      if (!(r.kind == EndRef::CrossingEnd && r.id == x && r.port == i))
        bad(where, "port backreference mismatch");
      incoming[i] = (end == 1);
    }
    if (deg != 4) {
      bad(where, "crossing has degree " + std::to_string(deg) + ", expected 4");
    } else {
      for (int i = 0; i < 2; ++i)
        if (incoming[i] + incoming[i + 2] != 1)
          bad(where, "strand through the crossing lacks a consistent orientation");
    }
  }

  for (int e = 0; e < (int)edges.size(); ++e) {
    if (!edges[e].alive) continue;
    std::string where = "edge " + std::to_string(e);
    if (edges[e].a.kind == EndRef::None || edges[e].b.kind == EndRef::None)
      bad(where, "dangling edge end");
    auto ca = end_color(edges[e].a), cb = end_color(edges[e].b);
    if (ca && *ca != Color::White) bad(where, "edge leaves a black end; strands run white to black");
    if (cb && *cb != Color::Black) bad(where, "edge arrives at a white end; strands run white to black");
    for (int p : edges[e].plugs) {
      if (p < 0 || p >= (int)plugs.size() || !plugs[p].alive || plugs[p].edge != e)
        bad(where, "plug list corrupt");
    }
  }

  for (int p = 0; p < (int)plugs.size(); ++p) {
    if (!plugs[p].alive) continue;
    std::string where = "plug " + std::to_string(p);
    const auto& pr = plugs[p];
    if ((pr.edge >= 0) == (pr.loop >= 0)) bad(where, "plug must belong to exactly one strand");
    if (pr.cut < 0 || pr.cut >= (int)cutPlugs.size()) {
      bad(where, "references an unknown cut");
      continue;
    }
    const auto& order = cutPlugs[pr.cut];
    if (std::count(order.begin(), order.end(), p) != 1) bad(where, "missing from its cut order");
    if (pr.edge >= 0) {
      const auto& L = edges[pr.edge].plugs;
      if (std::count(L.begin(), L.end(), p) != 1) bad(where, "missing from its edge");
    }
    if (pr.loop >= 0) {
      const auto& L = loops[pr.loop].plugs;
      if (std::count(L.begin(), L.end(), p) != 1) bad(where, "missing from its loop");
    }
  }

  for (int k = 0; k < (int)cutPlugs.size(); ++k) {
    for (int p : cutPlugs[k]) {
      if (p < 0 || p >= (int)plugs.size() || !plugs[p].alive || plugs[p].cut != k)
        bad("cut " + std::to_string(k), "plug order corrupt");
    }
  }

  for (int pt = 0; pt < (int)attachments.size(); ++pt) {
    for (int tok : attachments[pt]) {
      int e = tok >> 1, end = tok & 1;
      if (e < 0 || e >= (int)edges.size() || !edges[e].alive) {
        bad("point " + std::to_string(pt), "attachment references a dead edge");
        continue;
      }
      const EndRef& r = end == 0 ? edges[e].a : edges[e].b;
      if (!(r.kind == EndRef::PointEnd && r.id == pt))
        bad("point " + std::to_string(pt), "attachment backreference mismatch");
    }
  }

  for (int l = 0; l < (int)loops.size(); ++l) {
    if (!loops[l].alive) continue;
    if (loops[l].plugs.empty())
      bad("loop " + std::to_string(l), "loop without cut crossings must use the free-loop counter");
    for (int p : loops[l].plugs)
      if (p < 0 || p >= (int)plugs.size() || !plugs[p].alive || plugs[p].loop != l)
        bad("loop " + std::to_string(l), "plug list corrupt");
  }

  if (freeLoops < 0) bad("diagram", "negative free-loop count");
  if (out.empty()) {
    try {
      build_map(*this);
    } catch (const Sl3Error& e) {
      bad("diagram", e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// MapView
// ---------------------------------------------------------------------------

MapView build_map(const Diagram& d) {
  MapView M;
  const SurfaceContext& S = *d.ctx;
  const int nSides = (int)S.polygon.sides.size();

  auto addNode = [&](MapView::NodeKind k, int id, int side) -> int {
    M.nodes.push_back({k, id, side});
    return (int)M.nodes.size() - 1;
  };

  std::vector<int> nodeOfVertex(d.vertices.size(), -1), nodeOfCrossing(d.crossings.size(), -1);
  std::vector<int> nodeOfPoint(S.nPoints, -1);
  std::vector<int> plugEnterNode(d.plugs.size(), -1), plugExitNode(d.plugs.size(), -1);
  M.pieceOfPlugEnter.assign(d.plugs.size(), -1);
  M.pieceOfPlugExit.assign(d.plugs.size(), -1);

  for (int v = 0; v < (int)d.vertices.size(); ++v)
    if (d.vertices[v].alive) nodeOfVertex[v] = addNode(MapView::NVertex, v, -1);
  for (int x = 0; x < (int)d.crossings.size(); ++x)
    if (d.crossings[x].alive) nodeOfCrossing[x] = addNode(MapView::NCrossing, x, -1);
  for (int p = 0; p < S.nPoints; ++p) nodeOfPoint[p] = addNode(MapView::NPoint, p, -1);

  // Boundary cycle of the polygon, clockwise, with a corner node before each
  // side (when more than one side exists) and one node per plug per cut side.
  struct CycleEnt {
    int node;
    int arcSide;
  };
  std::vector<CycleEnt> cycle;
  for (int s = 0; s < nSides; ++s) {
    if (nSides > 1) cycle.push_back({addNode(MapView::NCorner, s, -1), s});
    const Side& sd = S.polygon.sides[s];
    if (!sd.is_cut) {
      for (int pid : sd.points) cycle.push_back({nodeOfPoint[pid], s});
    } else {
      int k = sd.cut;
      const auto& order = d.cutPlugs[k];
      int m = (int)order.size();
      for (int t = 0; t < m; ++t) {
        int q = order[sd.with_direction ? t : (m - 1 - t)];
        bool w = d.plugs[q].with_sense;
        int exitSide = w ? S.sideAgainst[k] : S.sideWith[k];
        int nd = addNode(MapView::NPlug, q, s);
        (s == exitSide ? plugExitNode[q] : plugEnterNode[q]) = nd;
        cycle.push_back({nd, s});
      }
    }
  }

  auto newDartPair = [&](int n1, int n2) -> std::pair<int, int> {
    int d1 = (int)M.darts.size();
    M.darts.push_back({});
    int d2 = (int)M.darts.size();
    M.darts.push_back({});
    M.darts[d1].node = n1;
    M.darts[d1].twin = d2;
    M.darts[d2].node = n2;
    M.darts[d2].twin = d1;
    return {d1, d2};
  };

  int nCyc = (int)cycle.size();
  std::vector<std::vector<int>> sideArcs(nSides);  // fwd darts, traversal order
  std::vector<int> outArcOfNode(0), inBwdOfNode(0);
  std::vector<int> arcFwd(nCyc, -1);
  outArcOfNode.assign(M.nodes.size() + 1, -1);
  inBwdOfNode.assign(M.nodes.size() + 1, -1);
  for (int i = 0; i < nCyc; ++i) {
    int j = (i + 1) % nCyc;
    auto [f, b] = newDartPair(cycle[i].node, cycle[j].node);
    M.darts[f].isArc = M.darts[b].isArc = true;
    M.darts[f].side = M.darts[b].side = cycle[i].arcSide;
    arcFwd[i] = f;
    sideArcs[cycle[i].arcSide].push_back(f);
    outArcOfNode[cycle[i].node] = f;
    inBwdOfNode[cycle[j].node] = b;
  }

  // Strand pieces.
  M.piecesOfEdge.assign(d.edges.size(), {});
  M.piecesOfLoop.assign(d.loops.size(), {});
  auto anchorNode = [&](const EndRef& r) -> int {
    switch (r.kind) {
      case EndRef::VertexEnd: return nodeOfVertex[r.id];
      case EndRef::PointEnd: return nodeOfPoint[r.id];
      case EndRef::CrossingEnd: return nodeOfCrossing[r.id];
      default: throw Sl3Error(ErrorCode::BadInput, "dangling edge end in map construction");
    }
  };
  auto addPiece = [&](bool onLoop, int owner, int index, int n1, int n2) -> int {
    int pid = (int)M.pieces.size();
    auto [f, b] = newDartPair(n1, n2);
    M.darts[f].piece = M.darts[b].piece = pid;
    M.pieces.push_back({onLoop, owner, index, f, b});
    (onLoop ? M.piecesOfLoop[owner] : M.piecesOfEdge[owner]).push_back(pid);
    return pid;
  };
  for (int e = 0; e < (int)d.edges.size(); ++e) {
    if (!d.edges[e].alive) continue;
    const auto& E = d.edges[e];
    std::vector<int> seq;
    seq.push_back(anchorNode(E.a));
    for (int q : E.plugs) {
      seq.push_back(plugExitNode[q]);
      seq.push_back(plugEnterNode[q]);
    }
    seq.push_back(anchorNode(E.b));
    int m = (int)E.plugs.size();
    for (int i = 0; i <= m; ++i) {
      int pid = addPiece(false, e, i, seq[2 * i], seq[2 * i + 1]);
      if (i > 0) M.pieceOfPlugEnter[E.plugs[i - 1]] = pid;
      if (i < m) M.pieceOfPlugExit[E.plugs[i]] = pid;
    }
  }
  for (int l = 0; l < (int)d.loops.size(); ++l) {
    if (!d.loops[l].alive) continue;
    const auto& L = d.loops[l];
    int m = (int)L.plugs.size();
    for (int i = 0; i < m; ++i) {
      int qa = L.plugs[i], qb = L.plugs[(i + 1) % m];
      int pid = addPiece(true, l, i, plugEnterNode[qa], plugExitNode[qb]);
      M.pieceOfPlugEnter[qa] = pid;
      M.pieceOfPlugExit[qb] = pid;
    }
  }

  // Clockwise rotations.
  std::vector<std::vector<int>> rot(M.nodes.size());
  auto endDart = [&](int e, int end) -> int {
    const auto& ps = M.piecesOfEdge[e];
    return end == 0 ? M.pieces[ps.front()].dartFwd : M.pieces[ps.back()].dartBwd;
  };
  for (int n = 0; n < (int)M.nodes.size(); ++n) {
    const auto& nd = M.nodes[n];
    switch (nd.kind) {
      case MapView::NVertex:
        for (auto [e, end] : d.vertices[nd.id].slots)
          if (e >= 0) rot[n].push_back(endDart(e, end));
        break;
      case MapView::NCrossing:
        for (auto [e, end] : d.crossings[nd.id].slots)
          if (e >= 0) rot[n].push_back(endDart(e, end));
        break;
      case MapView::NPoint: {
        rot[n].push_back(outArcOfNode[n]);
        const auto& A = d.attachments[nd.id];
        for (auto it = A.rbegin(); it != A.rend(); ++it) rot[n].push_back(endDart(*it >> 1, *it & 1));
        rot[n].push_back(inBwdOfNode[n]);
        break;
      }
      case MapView::NPlug: {
        rot[n].push_back(outArcOfNode[n]);
        int q = nd.id;
        rot[n].push_back(plugExitNode[q] == n ? M.pieces[M.pieceOfPlugExit[q]].dartBwd
                                              : M.pieces[M.pieceOfPlugEnter[q]].dartFwd);
        rot[n].push_back(inBwdOfNode[n]);
        break;
      }
      case MapView::NCorner:
        rot[n].push_back(outArcOfNode[n]);
        rot[n].push_back(inBwdOfNode[n]);
        break;
    }
  }
  for (const auto& r : rot) {
    int m = (int)r.size();
    for (int i = 0; i < m; ++i) M.darts[r[i]].nextCw = r[(i + 1) % m];
  }

  // Faces: successor within a face is nextCw(twin(d)); bounded faces run
  // counterclockwise with the face on the left of each dart.
  for (int dd = 0; dd < (int)M.darts.size(); ++dd) {
    if (M.darts[dd].face >= 0) continue;
    int f = (int)M.faces.size();
    M.faces.push_back({});
    int cur = dd;
    do {
      M.darts[cur].face = f;
      M.faces[f].darts.push_back(cur);
      cur = M.darts[M.darts[cur].twin].nextCw;
    } while (cur != dd);
  }
  assert(nCyc > 0);
  M.outerFace = M.darts[arcFwd[0]].face;
  M.faces[M.outerFace].outer = true;

  // Planarity of the embedding data: every connected component of the map
  // must be a sphere, so V - E + F = 2 * (components with darts) + isolated
  // nodes. Rotation or sense data that cannot be drawn in the polygon fails
  // this count.
  {
    std::vector<int> nf(M.nodes.size());
    for (int i = 0; i < (int)nf.size(); ++i) nf[i] = i;
    std::function<int(int)> nfind = [&](int a) { return nf[a] == a ? a : nf[a] = nfind(nf[a]); };
    std::vector<char> hasDart(M.nodes.size(), 0);
    for (int dd = 0; dd < (int)M.darts.size(); dd += 2) {
      int u = M.darts[dd].node, v = M.darts[dd + 1].node;
      hasDart[u] = hasDart[v] = 1;
      nf[nfind(u)] = nfind(v);
    }
    for (int n = 0; n < (int)M.nodes.size(); ++n)
      if (hasDart[n]) hasDart[nfind(n)] = 1;
    std::set<int> dartedRoots;
    long isolated = 0;
    for (int n = 0; n < (int)M.nodes.size(); ++n) {
      if (hasDart[nfind(n)])
        dartedRoots.insert(nfind(n));
      else
        ++isolated;
    }
    long euler = (long)M.nodes.size() - (long)(M.darts.size() / 2) + (long)M.faces.size();
    if (euler != 2 * (long)dartedRoots.size() + isolated)
      throw Sl3Error(ErrorCode::BadConfiguration,
                     "embedding data cannot be drawn in the cut-open polygon");
  }

  // Regluing: identify cut-side arc intervals pairwise (inner darts).
  for (int k = 0; k < (int)S.cuts.cuts.size(); ++k) {
    const auto& A = sideArcs[S.sideWith[k]];
    const auto& B = sideArcs[S.sideAgainst[k]];
    int m = (int)d.cutPlugs[k].size();
    assert((int)A.size() == m + 1 && (int)B.size() == m + 1);
    for (int i = 0; i <= m; ++i)
      M.gluePairs.push_back({M.darts[A[i]].twin, M.darts[B[m - i]].twin});
  }

  // Regions: union-find over inner faces across glue pairs.
  std::vector<int> uf(M.faces.size());
  for (int i = 0; i < (int)uf.size(); ++i) uf[i] = i;
  std::function<int(int)> find = [&](int a) { return uf[a] == a ? a : uf[a] = find(uf[a]); };
  for (auto [da, db] : M.gluePairs) uf[find(M.darts[da].face)] = find(M.darts[db].face);

  std::map<int, int> regionOfRoot;
  for (int f = 0; f < (int)M.faces.size(); ++f) {
    if (f == M.outerFace) continue;
    int r = find(f);
    auto it = regionOfRoot.find(r);
    if (it == regionOfRoot.end()) {
      it = regionOfRoot.emplace(r, (int)M.regions.size()).first;
      M.regions.push_back({});
    }
    M.faces[f].region = it->second;
    M.regions[it->second].faces.push_back(f);
  }
  for (auto [da, db] : M.gluePairs) {
    (void)db;
    ++M.regions[M.faces[M.darts[da].face].region].glueCount;
  }
  for (auto& r : M.regions) r.chi = (int)r.faces.size() - r.glueCount;

  std::vector<int> partner(M.darts.size(), -1);
  for (auto [da, db] : M.gluePairs) {
    partner[da] = db;
    partner[db] = da;
  }
  auto faceSucc = [&](int dd) { return M.darts[M.darts[dd].twin].nextCw; };
  std::vector<char> visited(M.darts.size(), 0);
  for (int t = 0; t < (int)M.darts.size(); ++t) {
    if (visited[t] || partner[t] >= 0 || M.darts[t].face == M.outerFace) continue;
    int regionId = M.faces[M.darts[t].face].region;
    auto& region = M.regions[regionId];
    region.circles.push_back({});
    auto& events = region.circles.back();
    int cur = t;
    do {
      visited[cur] = 1;
      if (M.darts[cur].isArc) {
        MapView::Event ev;
        ev.isArc = true;
        region.touchesArc = true;
        events.push_back(ev);
      }
      int chainLast = cur;
      int e = faceSucc(cur);
      while (partner[e] >= 0) {
        chainLast = partner[e];
        e = faceSucc(chainLast);
      }
      const auto& jn = M.nodes[M.darts[e].node];
      if (jn.kind == MapView::NVertex || jn.kind == MapView::NCrossing || jn.kind == MapView::NPoint) {
        MapView::Event ev;
        ev.kind = jn.kind;
        ev.node = jn.id;
        ev.inDart = chainLast;
        ev.outDart = e;
        ev.inPiece = M.darts[chainLast].piece;
        ev.outPiece = M.darts[e].piece;
        events.push_back(ev);
      }
      cur = e;
    } while (cur != t);
  }

  return M;
}

// ---------------------------------------------------------------------------
// Ellipticity
// ---------------------------------------------------------------------------

bool is_non_elliptic(const Diagram& w) {
  if (!w.crossing_free())
    throw Sl3Error(ErrorCode::BadInput, "ellipticity is defined for crossing-free diagrams");
  if (w.freeLoops > 0) return false;
  MapView M = build_map(w);
  for (const auto& r : M.regions) {
    if (!r.disk()) continue;
    int arcs = 0, corners = 0, pointCorners = 0;
    std::set<int> cornerVertices;
    for (const auto& ev : r.circles[0]) {
      if (ev.isArc) {
        ++arcs;
      } else {
        ++corners;
        if (ev.kind == MapView::NPoint) ++pointCorners;
        if (ev.kind == MapView::NVertex) cornerVertices.insert(ev.node);
      }
    }
    if (arcs > 0) continue;
    if (corners == 0) return false;
    if (corners == 2 && pointCorners <= 1) return false;
    // A square only reduces along a simple cycle: four distinct vertices.
    if (corners == 4 && pointCorners == 0 && (int)cornerVertices.size() == 4) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Normalization moves: plug-pair cancellation and vertex slides across cuts.
// ---------------------------------------------------------------------------

namespace {

struct NMove {
  int kind = 0;  // 0 = cancel opposite plug pair, 1 = vertex wedge slide
  int pA = -1, pB = -1;
  int v = -1, cut = -1, eGain = -1, gainEnd = 0, freedPos = -1;
  bool senseStored = true;
};

int position_in_cut(const Diagram& d, int plug) {
  const auto& order = d.cutPlugs[d.plugs[plug].cut];
  return (int)(std::find(order.begin(), order.end(), plug) - order.begin());
}

std::vector<NMove> enumerate_moves(const Diagram& d, const MapView& M) {
  std::vector<NMove> out;
  for (int f = 0; f < (int)M.faces.size(); ++f) {
    if (f == M.outerFace) continue;
    const auto& F = M.faces[f];
    if (F.darts.size() == 2) {
      int d1 = F.darts[0], d2 = F.darts[1];
      int arcD = M.darts[d1].isArc ? d1 : (M.darts[d2].isArc ? d2 : -1);
      int pcD = !M.darts[d1].isArc ? d1 : (!M.darts[d2].isArc ? d2 : -1);
      if (arcD < 0 || pcD < 0) continue;
      int n1 = M.darts[pcD].node, n2 = M.darts[M.darts[pcD].twin].node;
      if (M.nodes[n1].kind != MapView::NPlug || M.nodes[n2].kind != MapView::NPlug) continue;
      int qa = M.nodes[n1].id, qb = M.nodes[n2].id;
      if (qa == qb) continue;
      const auto& A = d.plugs[qa];
      const auto& B = d.plugs[qb];
      if (A.cut != B.cut || A.with_sense == B.with_sense) continue;
      NMove m;
      m.kind = 0;
      m.pA = qa;
      m.pB = qb;
      out.push_back(m);
    } else if (F.darts.size() == 3) {
      int arcD = -1, nArcs = 0;
      for (int dd : F.darts)
        if (M.darts[dd].isArc) {
          arcD = dd;
          ++nArcs;
        }
      if (nArcs != 1) continue;
      const Side& sd = d.ctx->polygon.sides[M.darts[arcD].side];
      if (!sd.is_cut) continue;
      int k = sd.cut;
      // In a 3-dart face the dart origins are exactly the three corner nodes:
      // the arc's endpoints must be plug nodes, the third a vertex where both
      // strand pieces terminate.
      int vNode = -1, q1 = -1, q2 = -1;
      bool shapeOk = true;
      for (int dd : F.darts) {
        const auto& nd = M.nodes[M.darts[dd].node];
        if (nd.kind == MapView::NVertex && vNode < 0)
          vNode = M.darts[dd].node;
        else if (nd.kind == MapView::NPlug && q1 < 0)
          q1 = nd.id;
        else if (nd.kind == MapView::NPlug && q2 < 0)
          q2 = nd.id;
        else
          shapeOk = false;
      }
      if (!shapeOk || vNode < 0 || q1 < 0 || q2 < 0) continue;
      if (d.plugs[q1].cut != k || d.plugs[q2].cut != k) continue;
      int e1 = d.plugs[q1].edge, e2 = d.plugs[q2].edge;
      if (e1 < 0 || e2 < 0 || e1 == e2) continue;  // wedge legs must be edge ends
      int v = M.nodes[vNode].id;
      int eGain = -1, gainEnd = 0;
      for (auto [e, end] : d.vertices[v].slots) {
        if (e >= 0 && e != e1 && e != e2) {
          eGain = e;
          gainEnd = end;
        }
      }
      if (eGain < 0) continue;
      int i1 = position_in_cut(d, q1), i2 = position_in_cut(d, q2);
      if (std::abs(i1 - i2) != 1) continue;
      bool vfarWith = (M.darts[arcD].side == d.ctx->sideWith[k]);
      NMove m;
      m.kind = 1;
      m.v = v;
      m.cut = k;
      m.pA = q1;
      m.pB = q2;
      m.eGain = eGain;
      m.gainEnd = gainEnd;
      m.freedPos = std::min(i1, i2);
      m.senseStored = (gainEnd == 0) ? vfarWith : !vfarWith;
      out.push_back(m);
    }
  }
  return out;
}

void apply_move(Diagram& d, const NMove& m) {
  if (m.kind == 0) {
    int la = d.plugs[m.pA].loop;
    d.erase_plug(m.pA);
    d.erase_plug(m.pB);
    if (la >= 0 && d.loops[la].alive && d.loops[la].plugs.empty()) {
      d.loops[la].alive = false;
      ++d.freeLoops;
    }
  } else {
    d.erase_plug(m.pA);
    d.erase_plug(m.pB);
    int np = d.new_plug(m.cut, m.senseStored, m.freedPos);
    d.plugs[np].edge = m.eGain;
    auto& L = d.edges[m.eGain].plugs;
    if (m.gainEnd == 0)
      L.insert(L.begin(), np);
    else
      L.push_back(np);
  }
}

}  // namespace

void Diagram::normalize() {
  for (;;) {
    MapView M = build_map(*this);
    auto mv = enumerate_moves(*this, M);
    if (mv.empty()) break;
    apply_move(*this, mv.front());
  }
}

// ---------------------------------------------------------------------------
// Canonical encoding
// ---------------------------------------------------------------------------

namespace {

// Deterministic anchored BFS labeling; `seedEdges` non-empty encodes one
// unanchored component rooted at the given edge instead.
std::string encode_impl(const Diagram& d, const std::vector<int>& seedEdges, bool anchored) {
  std::vector<int> eid(d.edges.size(), -1), vid(d.vertices.size(), -1), xid(d.crossings.size(), -1),
      lid(d.loops.size(), -1);
  std::vector<int> ventry(d.vertices.size(), 0), xentry(d.crossings.size(), 0);
  std::vector<int> edgeOrder, vertOrder, crossOrder, loopOrder;
  std::deque<int> bfs;

  auto seeLoop = [&](int l) {
    if (lid[l] < 0) {
      lid[l] = (int)loopOrder.size();
      loopOrder.push_back(l);
    }
  };
  auto seeEdge = [&](int e) {
    if (e >= 0 && d.edges[e].alive && eid[e] < 0) {
      eid[e] = (int)edgeOrder.size();
      edgeOrder.push_back(e);
      bfs.push_back(e);
    }
  };
  auto visitAnchor = [&](const EndRef& r) {
    if (r.kind == EndRef::VertexEnd) {
      int v = r.id;
      if (vid[v] < 0) {
        vid[v] = (int)vertOrder.size();
        vertOrder.push_back(v);
        ventry[v] = r.port;
        for (int i = 1; i < 3; ++i) seeEdge(d.vertices[v].slots[(r.port + i) % 3].first);
      }
    } else if (r.kind == EndRef::CrossingEnd) {
      int x = r.id;
      if (xid[x] < 0) {
        xid[x] = (int)crossOrder.size();
        crossOrder.push_back(x);
        xentry[x] = r.port;
        for (int i = 1; i < 4; ++i) seeEdge(d.crossings[x].slots[(r.port + i) % 4].first);
      }
    }
  };

  if (anchored) {
    for (const auto& A : d.attachments)
      for (int tok : A) seeEdge(tok >> 1);
    for (const auto& order : d.cutPlugs)
      for (int q : order) {
        const auto& P = d.plugs[q];
        if (P.edge >= 0)
          seeEdge(P.edge);
        else
          seeLoop(P.loop);
      }
  } else {
    for (int e : seedEdges) seeEdge(e);
  }
  while (!bfs.empty()) {
    int e = bfs.front();
    bfs.pop_front();
    visitAnchor(d.edges[e].a);
    visitAnchor(d.edges[e].b);
  }

  // Canonical phase for each loop: lexicographically minimal trace, ties
  // broken by cut positions.
  std::vector<int> loopPhase(d.loops.size(), 0);
  for (int l : loopOrder) {
    const auto& P = d.loops[l].plugs;
    int m = (int)P.size();
    auto key = [&](int r) {
      std::vector<std::tuple<int, int, int>> k;
      for (int i = 0; i < m; ++i) {
        int q = P[(r + i) % m];
        k.emplace_back(d.plugs[q].cut, d.plugs[q].with_sense ? 0 : 1, position_in_cut(d, q));
      }
      return k;
    };
    int best = 0;
    auto bestKey = key(0);
    for (int r = 1; r < m; ++r) {
      auto kr = key(r);
      if (kr < bestKey) {
        bestKey = std::move(kr);
        best = r;
      }
    }
    loopPhase[l] = best;
  }

  std::ostringstream out;
  auto anchorToken = [&](const EndRef& r) -> std::string {
    switch (r.kind) {
      case EndRef::VertexEnd: return "V" + std::to_string(vid[r.id]);
      case EndRef::PointEnd: return "P" + std::to_string(r.id);
      case EndRef::CrossingEnd: return "X" + std::to_string(xid[r.id]);
      default: return "-";
    }
  };
  auto edgeEndToken = [&](int e, int end) {
    return "e" + std::to_string(eid[e]) + "." + std::to_string(end);
  };

  if (anchored) {
    out << "fl=" << d.freeLoops << ";";
    for (int p = 0; p < (int)d.attachments.size(); ++p) {
      out << "P" << p << ":";
      for (int tok : d.attachments[p]) out << edgeEndToken(tok >> 1, tok & 1) << ",";
      out << ";";
    }
    for (int k = 0; k < (int)d.cutPlugs.size(); ++k) {
      out << "C" << k << ":";
      for (int q : d.cutPlugs[k]) {
        const auto& P = d.plugs[q];
        out << (P.with_sense ? "w" : "a");
        if (P.edge >= 0) {
          const auto& L = d.edges[P.edge].plugs;
          int occ = (int)(std::find(L.begin(), L.end(), q) - L.begin());
          out << "e" << eid[P.edge] << "#" << occ << ",";
        } else {
          const auto& L = d.loops[P.loop].plugs;
          int m = (int)L.size();
          int occ = (int)(std::find(L.begin(), L.end(), q) - L.begin());
          out << "l" << lid[P.loop] << "#" << ((occ - loopPhase[P.loop]) % m + m) % m << ",";
        }
      }
      out << ";";
    }
  }
  for (int v : vertOrder) {
    out << "V" << vid[v] << ":" << (d.vertices[v].color == Color::Black ? "B" : "W") << ":";
    for (int i = 0; i < 3; ++i) {
      auto [e, end] = d.vertices[v].slots[(ventry[v] + i) % 3];
      out << (e >= 0 ? edgeEndToken(e, end) : std::string("-")) << ",";
    }
    out << ";";
  }
  for (int x : crossOrder) {
    out << "X" << xid[x] << ":";
    for (int i = 0; i < 4; ++i) {
      auto [e, end] = d.crossings[x].slots[(xentry[x] + i) % 4];
      out << (e >= 0 ? edgeEndToken(e, end) : std::string("-")) << ",";
    }
    out << ";";
  }
  for (int e : edgeOrder) {
    out << "E" << eid[e] << ":" << anchorToken(d.edges[e].a) << ">" << anchorToken(d.edges[e].b) << ":";
    for (int q : d.edges[e].plugs)
      out << "(" << d.plugs[q].cut << (d.plugs[q].with_sense ? "w" : "a") << ")";
    out << ";";
  }
  for (int l : loopOrder) {
    const auto& P = d.loops[l].plugs;
    int m = (int)P.size();
    out << "L" << lid[l] << ":";
    for (int i = 0; i < m; ++i) {
      int q = P[(loopPhase[l] + i) % m];
      out << "(" << d.plugs[q].cut << (d.plugs[q].with_sense ? "w" : "a") << ")";
    }
    out << ";";
  }

  if (anchored) {
    // Unanchored components (no attachments, no plugs): canonical per
    // component, sorted.
    std::vector<std::string> islands;
    std::vector<char> seen(d.edges.size(), 0);
    for (int e0 = 0; e0 < (int)d.edges.size(); ++e0) {
      if (!d.edges[e0].alive || eid[e0] >= 0 || seen[e0]) continue;
      std::vector<int> comp;
      std::deque<int> q2{e0};
      seen[e0] = 1;
      while (!q2.empty()) {
        int e = q2.front();
        q2.pop_front();
        comp.push_back(e);
        for (int end = 0; end < 2; ++end) {
          const EndRef& r = end == 0 ? d.edges[e].a : d.edges[e].b;
          if (r.kind == EndRef::VertexEnd) {
            for (auto [e2, u2] : d.vertices[r.id].slots) {
              (void)u2;
              if (e2 >= 0 && !seen[e2]) { seen[e2] = 1; q2.push_back(e2); }
            }
          } else if (r.kind == EndRef::CrossingEnd) {
            for (auto [e2, u2] : d.crossings[r.id].slots) {
              (void)u2;
              if (e2 >= 0 && !seen[e2]) { seen[e2] = 1; q2.push_back(e2); }
            }
          }
        }
      }
      std::string best;
      for (int root : comp) {
        std::string s = encode_impl(d, {root}, false);
        if (best.empty() || s < best) best = std::move(s);
      }
      islands.push_back(std::move(best));
    }
    std::sort(islands.begin(), islands.end());
    out << "U{";
    for (const auto& s : islands) out << s << "|";
    out << "}";
  }
  return out.str();
}

}  // namespace

std::string Diagram::encode() const { return encode_impl(*this, {}, true); }

std::string Diagram::canonical_key() const {
  std::set<std::string> seen;
  std::vector<std::string> terminals;
  std::deque<Diagram> work;
  work.push_back(*this);
  seen.insert(encode());
  const size_t cap = 2048;
  while (!work.empty()) {
    Diagram cur = std::move(work.front());
    work.pop_front();
    MapView M = build_map(cur);
    auto mv = enumerate_moves(cur, M);
    if (mv.empty()) terminals.push_back(cur.encode());
    for (const auto& m : mv) {
      Diagram nxt = cur;
      apply_move(nxt, m);
      std::string s = nxt.encode();
      if (seen.insert(s).second && seen.size() <= cap) work.push_back(std::move(nxt));
    }
    // Transposing adjacent plugs along a cut changes only the transverse
    // stacking order, never the invariant: strands sliding across each other
    // resolve to the plain exchange.  Exploring every embeddable reordering
    // keeps the key independent of how parallel strands happened to stack.
    for (int k = 0; k < (int)cur.cutPlugs.size(); ++k) {
      for (int i = 0; i + 1 < (int)cur.cutPlugs[k].size(); ++i) {
        Diagram nxt = cur;
        std::swap(nxt.cutPlugs[k][i], nxt.cutPlugs[k][i + 1]);
        std::string s = nxt.encode();
        if (seen.count(s)) continue;
        bool embeds = true;
        try {
          embeds = nxt.validate().empty();
        } catch (const Sl3Error&) {
          embeds = false;
        }
        if (!embeds) continue;
        if (seen.insert(s).second && seen.size() <= cap) work.push_back(std::move(nxt));
      }
    }
  }
  if (terminals.empty()) {
    Diagram g = *this;
    g.normalize();
    return g.encode();
  }
  return *std::min_element(terminals.begin(), terminals.end());
}

// ---------------------------------------------------------------------------
// Unclasping and component factorization
// ---------------------------------------------------------------------------

namespace {

struct StrandWalkResult {
  std::vector<std::pair<int, bool>> edgesAlong;  // (edge, traversed a->b?)
  EndRef endA, endB;                             // resolved non-crossing ends
  bool closed = false;
};

// Follows a strand through crossings starting from the given edge.
StrandWalkResult follow_strand(const Diagram& d, int e0, std::vector<char>& used) {
  StrandWalkResult R;
  auto hop = [&](EndRef r) -> std::pair<int, int> {  // (edge, endArrivedAt) after a crossing
    int x = r.id;
    int op = (r.port + 2) % 4;
    auto [e2, end2] = d.crossings[x].slots[op];
    return {e2, end2};
  };
  // walk backward from e0's a end
  int e = e0, end = 0;
  while (true) {
    EndRef r = end == 0 ? d.edges[e].a : d.edges[e].b;
    if (r.kind != EndRef::CrossingEnd) {
      R.endA = r;
      break;
    }
    auto [e2, end2] = hop(r);
    if (e2 == e0 && end2 == 1) {  // came around: closed strand
      R.closed = true;
      break;
    }
    e = e2;
    end = 1 - end2;  // continue toward the other end
  }
  // forward pass collecting edges
  int startEdge = R.closed ? e0 : e;
  int startEnd = R.closed ? 0 : end;
  e = startEdge;
  // direction: we are at end `startEnd`; traverse toward the other end
  int from = startEnd;
  while (true) {
    used[e] = 1;
    R.edgesAlong.emplace_back(e, from == 0);
    EndRef r = from == 0 ? d.edges[e].b : d.edges[e].a;
    if (r.kind != EndRef::CrossingEnd) {
      R.endB = r;
      break;
    }
    auto [e2, end2] = hop(r);
    if (R.closed && e2 == startEdge && end2 == startEnd) break;
    e = e2;
    from = end2;
  }
  return R;
}

}  // namespace

UnclaspResult unclasp(const Diagram& d) {
  UnclaspResult R;
  R.vertexComponent.assign(d.vertices.size(), -1);
  R.edgeComponent.assign(d.edges.size(), -1);
  R.loopComponent.assign(d.loops.size(), -1);

  // Union-find elements: internal vertices, one leaf per attachment, one
  // phantom element per closed strand / loop / free loop.
  int nV = (int)d.vertices.size();
  std::vector<int> leafBase(d.attachments.size() + 1, 0);
  for (size_t p = 0; p < d.attachments.size(); ++p)
    leafBase[p + 1] = leafBase[p] + (int)d.attachments[p].size();
  R.leafCount = leafBase.back();
  int nElems = nV + R.leafCount;
  std::vector<int> extra;  // ids of phantom elements

  std::vector<int> uf;
  auto find = [&](int a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  auto unite = [&](int a, int b) { uf[find(a)] = find(b); };

  struct Arc {
    int u, v;
    std::vector<int> edgeIds;
  };
  std::vector<Arc> arcs;

  std::vector<char> used(d.edges.size(), 0);
  std::vector<StrandWalkResult> strands;
  for (int e = 0; e < (int)d.edges.size(); ++e)
    if (d.edges[e].alive && !used[e]) strands.push_back(follow_strand(d, e, used));

  auto leafOf = [&](const EndRef& r, int edge, int end) -> int {
    const auto& A = d.attachments[r.id];
    int idx = (int)(std::find(A.begin(), A.end(), edge * 2 + end) - A.begin());
    return nV + leafBase[r.id] + idx;
  };

  int phantoms = 0;
  auto elemOf = [&](const EndRef& r, int edge, int end) -> int {
    if (r.kind == EndRef::VertexEnd) return r.id;
    if (r.kind == EndRef::PointEnd) return leafOf(r, edge, end);
    return -1;
  };
  // count phantoms first
  for (const auto& s : strands)
    if (s.closed) ++phantoms;
  phantoms += d.count_loops() + (int)d.freeLoops;
  uf.resize(nElems + phantoms);
  for (int i = 0; i < (int)uf.size(); ++i) uf[i] = i;

  int nextPhantom = nElems;
  for (const auto& s : strands) {
    int u, v;
    if (s.closed) {
      u = v = nextPhantom++;
    } else {
      auto [eA, dirA] = s.edgesAlong.front();
      auto [eB, dirB] = s.edgesAlong.back();
      u = elemOf(s.endA, eA, dirA ? 0 : 1);
      v = elemOf(s.endB, eB, dirB ? 1 : 0);
      if (u < 0 || v < 0) throw Sl3Error(ErrorCode::BadInput, "unclasp on a diagram with dangling ends");
    }
    Arc a;
    a.u = u;
    a.v = v;
    for (auto [e, dir] : s.edgesAlong) {
      (void)dir;
      a.edgeIds.push_back(e);
    }
    arcs.push_back(std::move(a));
    unite(u, v);
  }
  std::vector<int> loopPhantom(d.loops.size(), -1);
  for (int l = 0; l < (int)d.loops.size(); ++l)
    if (d.loops[l].alive) loopPhantom[l] = nextPhantom++;
  int freeLoopPhantomBase = nextPhantom;
  nextPhantom += (int)d.freeLoops;

  // component ids: order of first appearance over vertices, leaves, phantoms
  std::map<int, int> compOfRoot;
  auto compId = [&](int elem) {
    int r = find(elem);
    auto it = compOfRoot.find(r);
    if (it == compOfRoot.end()) it = compOfRoot.emplace(r, (int)compOfRoot.size()).first;
    return it->second;
  };
  for (int v = 0; v < nV; ++v)
    if (d.vertices[v].alive) R.vertexComponent[v] = compId(v);
  for (int i = 0; i < R.leafCount; ++i) compId(nV + i);
  for (const auto& a : arcs)
    for (int e : a.edgeIds) R.edgeComponent[e] = compId(a.u);
  for (int l = 0; l < (int)d.loops.size(); ++l)
    if (loopPhantom[l] >= 0) R.loopComponent[l] = compId(loopPhantom[l]);
  for (int i = 0; i < (int)d.freeLoops; ++i) compId(freeLoopPhantomBase + i);

  R.componentCount = (int)compOfRoot.size();

  // cycles: a component is acyclic iff its arc count is one less than its
  // element count; loops and closed strands are immediate cycles.
  std::map<int, std::pair<int, int>> stats;  // comp -> (elems, arcs)
  auto countElem = [&](int elem) { stats[compId(elem)].first++; };
  for (int v = 0; v < nV; ++v)
    if (d.vertices[v].alive) countElem(v);
  for (int i = 0; i < R.leafCount; ++i) countElem(nV + i);
  bool cycle = d.freeLoops > 0 || d.count_loops() > 0;
  for (const auto& s : strands)
    if (s.closed) cycle = true;
  for (const auto& a : arcs) stats[compId(a.u)].second++;
  if (!cycle)
    for (const auto& [c, se] : stats)
      if (se.second >= se.first) cycle = true;

  if (cycle)
    R.classification = UnclaspResult::Neither;
  else
    R.classification = R.componentCount <= 1 ? UnclaspResult::Tree : UnclaspResult::Forest;
  return R;
}

std::vector<Diagram> split_components(const Diagram& d) {
  if (!d.crossing_free())
    throw Sl3Error(ErrorCode::BadInput, "component split requires a crossing-free diagram");
  UnclaspResult U = unclasp(d);
  int nComp = 0;
  for (int v = 0; v < (int)U.vertexComponent.size(); ++v) nComp = std::max(nComp, U.vertexComponent[v] + 1);
  for (int e = 0; e < (int)U.edgeComponent.size(); ++e) nComp = std::max(nComp, U.edgeComponent[e] + 1);
  for (int l = 0; l < (int)U.loopComponent.size(); ++l) nComp = std::max(nComp, U.loopComponent[l] + 1);

  std::vector<Diagram> parts;
  std::vector<int> partOfComp(nComp, -1);
  auto partFor = [&](int comp) -> Diagram& {
    if (partOfComp[comp] < 0) {
      partOfComp[comp] = (int)parts.size();
      parts.emplace_back(d.ctx);
    }
    return parts[partOfComp[comp]];
  };

  std::vector<int> vMap(d.vertices.size(), -1), eMap(d.edges.size(), -1), lMap(d.loops.size(), -1);
  for (int v = 0; v < (int)d.vertices.size(); ++v)
    if (d.vertices[v].alive && U.vertexComponent[v] >= 0) {
      Diagram& P = partFor(U.vertexComponent[v]);
      vMap[v] = P.add_vertex(d.vertices[v].color);
    }
  for (int e = 0; e < (int)d.edges.size(); ++e)
    if (d.edges[e].alive && U.edgeComponent[e] >= 0) {
      Diagram& P = partFor(U.edgeComponent[e]);
      P.edges.push_back(Diagram::Edge{});
      eMap[e] = (int)P.edges.size() - 1;
    }
  for (int l = 0; l < (int)d.loops.size(); ++l)
    if (d.loops[l].alive && U.loopComponent[l] >= 0) {
      Diagram& P = partFor(U.loopComponent[l]);
      P.loops.push_back(Diagram::Loop{});
      lMap[l] = (int)P.loops.size() - 1;
    }

  // edge ends and vertex slots
  for (int e = 0; e < (int)d.edges.size(); ++e) {
    if (eMap[e] < 0) continue;
    Diagram& P = partFor(U.edgeComponent[e]);
    auto mapEnd = [&](const EndRef& r) -> EndRef {
      if (r.kind == EndRef::VertexEnd) return Diagram::at_vertex(vMap[r.id], r.port);
      return r;  // point ends keep their ids; order handled below
    };
    P.edges[eMap[e]].a = mapEnd(d.edges[e].a);
    P.edges[eMap[e]].b = mapEnd(d.edges[e].b);
    auto setBack = [&](const EndRef& r, int end) {
      if (r.kind == EndRef::VertexEnd) P.vertices[r.id].slots[r.port] = {eMap[e], end};
    };
    setBack(P.edges[eMap[e]].a, 0);
    setBack(P.edges[eMap[e]].b, 1);
  }
  // attachments in original walk order
  for (int pt = 0; pt < (int)d.attachments.size(); ++pt)
    for (int tok : d.attachments[pt]) {
      int e = tok >> 1;
      if (eMap[e] < 0) continue;
      partFor(U.edgeComponent[e]).attachments[pt].push_back(eMap[e] * 2 + (tok & 1));
    }
  // plugs in original cut order
  for (int k = 0; k < (int)d.cutPlugs.size(); ++k)
    for (int q : d.cutPlugs[k]) {
      const auto& pr = d.plugs[q];
      int comp = pr.edge >= 0 ? U.edgeComponent[pr.edge] : U.loopComponent[pr.loop];
      Diagram& P = partFor(comp);
      int np = P.new_plug(k, pr.with_sense, -1);
      if (pr.edge >= 0) {
        P.plugs[np].edge = eMap[pr.edge];
      } else {
        P.plugs[np].loop = lMap[pr.loop];
      }
    }
  // Strand plug lists: the copies were created in original cut-scan order, so
  // matching originals to copies per (part, cut) front-to-front is exact.
  std::vector<std::map<int, std::deque<int>>> pendingByPart(parts.size());
  for (int k = 0; k < (int)d.cutPlugs.size(); ++k)
    for (int q : d.cutPlugs[k]) {
      const auto& pr = d.plugs[q];
      int comp = pr.edge >= 0 ? U.edgeComponent[pr.edge] : U.loopComponent[pr.loop];
      pendingByPart[partOfComp[comp]][k].push_back(q);
    }
  for (int pi = 0; pi < (int)parts.size(); ++pi) {
    Diagram& P = parts[pi];
    // map original plug id -> copied plug id by matching cut order
    std::map<int, int> plugMap;
    std::map<int, std::deque<int>> copies;
    for (int k = 0; k < (int)P.cutPlugs.size(); ++k)
      for (int np : P.cutPlugs[k]) copies[k].push_back(np);
    for (auto& [k, dq] : pendingByPart[pi]) {
      auto& cp = copies[k];
      for (int q : dq) {
        plugMap[q] = cp.front();
        cp.pop_front();
      }
    }
    for (int e = 0; e < (int)d.edges.size(); ++e) {
      if (eMap[e] < 0 || partOfComp[U.edgeComponent[e]] != pi) continue;
      for (int q : d.edges[e].plugs) P.edges[eMap[e]].plugs.push_back(plugMap.at(q));
    }
    for (int l = 0; l < (int)d.loops.size(); ++l) {
      if (lMap[l] < 0 || partOfComp[U.loopComponent[l]] != pi) continue;
      for (int q : d.loops[l].plugs) P.loops[lMap[l]].plugs.push_back(plugMap.at(q));
    }
  }
  // free loops become their own factors
  for (int i = 0; i < (int)d.freeLoops; ++i) {
    parts.emplace_back(d.ctx);
    parts.back().freeLoops = 1;
  }
  return parts;
}

Diagram Diagram::compacted() const {
  Diagram R(ctx);
  std::vector<int> vMap(vertices.size(), -1), xMap(crossings.size(), -1), eMap(edges.size(), -1),
      lMap(loops.size(), -1), pMap(plugs.size(), -1);
  for (int v = 0; v < (int)vertices.size(); ++v)
    if (vertices[v].alive) {
      vMap[v] = (int)R.vertices.size();
      R.vertices.push_back(Vertex{vertices[v].color, {{{-1, -1}, {-1, -1}, {-1, -1}}}, true});
    }
  for (int x = 0; x < (int)crossings.size(); ++x)
    if (crossings[x].alive) {
      xMap[x] = (int)R.crossings.size();
      R.crossings.push_back(Crossing{});
    }
  for (int e = 0; e < (int)edges.size(); ++e)
    if (edges[e].alive) {
      eMap[e] = (int)R.edges.size();
      R.edges.push_back(Edge{});
    }
  for (int l = 0; l < (int)loops.size(); ++l)
    if (loops[l].alive) {
      lMap[l] = (int)R.loops.size();
      R.loops.push_back(Loop{});
    }
  for (int p = 0; p < (int)plugs.size(); ++p)
    if (plugs[p].alive) {
      pMap[p] = (int)R.plugs.size();
      R.plugs.push_back(PlugRec{plugs[p].cut, plugs[p].with_sense,
                                plugs[p].edge >= 0 ? eMap[plugs[p].edge] : -1,
                                plugs[p].loop >= 0 ? lMap[plugs[p].loop] : -1, true});
    }
  auto mapEnd = [&](const EndRef& r) -> EndRef {
    if (r.kind == EndRef::VertexEnd) return at_vertex(vMap[r.id], r.port);
    if (r.kind == EndRef::CrossingEnd) return at_crossing(xMap[r.id], r.port);
    return r;
  };
  for (int e = 0; e < (int)edges.size(); ++e) {
    if (eMap[e] < 0) continue;
    auto& E = R.edges[eMap[e]];
    E.a = mapEnd(edges[e].a);
    E.b = mapEnd(edges[e].b);
    for (int q : edges[e].plugs) E.plugs.push_back(pMap[q]);
  }
  for (int v = 0; v < (int)vertices.size(); ++v)
    if (vMap[v] >= 0)
      for (int i = 0; i < 3; ++i) {
        auto [e, end] = vertices[v].slots[i];
        if (e >= 0) R.vertices[vMap[v]].slots[i] = {eMap[e], end};
      }
  for (int x = 0; x < (int)crossings.size(); ++x)
    if (xMap[x] >= 0)
      for (int i = 0; i < 4; ++i) {
        auto [e, end] = crossings[x].slots[i];
        if (e >= 0) R.crossings[xMap[x]].slots[i] = {eMap[e], end};
      }
  for (int l = 0; l < (int)loops.size(); ++l)
    if (lMap[l] >= 0)
      for (int q : loops[l].plugs) R.loops[lMap[l]].plugs.push_back(pMap[q]);
  for (int pt = 0; pt < (int)attachments.size(); ++pt)
    for (int tok : attachments[pt])
      if (eMap[tok >> 1] >= 0) R.attachments[pt].push_back(eMap[tok >> 1] * 2 + (tok & 1));
  for (int k = 0; k < (int)cutPlugs.size(); ++k)
    for (int q : cutPlugs[k]) R.cutPlugs[k].push_back(pMap[q]);
  R.freeLoops = freeLoops;
  return R;
}

}  // namespace sl3web
