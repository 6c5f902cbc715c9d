// Superposition: inserting one diagram's strands into another drawing.
//
// Each strand of the addition is routed through the faces of the current
// drawing by a shortest-path search layered over the strand's cut trace:
// stepping through an existing strand costs one new crossing, passing through
// a glued cut interval costs nothing and advances the trace. Attachment
// positions at marked points and plug positions along cuts are free except
// that the addition's own relative orders are preserved; the router picks the
// cheapest placement. New crossings split the existing strand in place.

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "sl3web/diagram.hpp"

namespace sl3web {

namespace {

constexpr long kInf = std::numeric_limits<long>::max() / 4;

bool same_presentation(const SurfacePtr& a, const SurfacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  const auto& pa = a->polygon.sides;
  const auto& pb = b->polygon.sides;
  if (pa.size() != pb.size()) return false;
  for (size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].is_cut != pb[i].is_cut || pa[i].component != pb[i].component ||
        pa[i].points != pb[i].points || pa[i].cut != pb[i].cut ||
        pa[i].with_direction != pb[i].with_direction)
      return false;
  }
  return a->pointColor == b->pointColor;
}

// One glued interval of a cut: the inner darts of the paired arc pieces.
struct Glue {
  int cut = -1;
  int idx = -1;  // interval along the cut: 0..#plugs
  int dWith = -1, dAgainst = -1;
};

std::vector<Glue> glue_table(const Diagram& d, const MapView& M) {
  std::vector<Glue> out;
  size_t at = 0;
  for (int k = 0; k < (int)d.cutPlugs.size(); ++k)
    for (int i = 0; i <= (int)d.cutPlugs[k].size(); ++i, ++at)
      out.push_back({k, i, M.gluePairs[at].first, M.gluePairs[at].second});
  return out;
}

int node_of(const MapView& M, MapView::NodeKind k, int id) {
  for (int n = 0; n < (int)M.nodes.size(); ++n)
    if (M.nodes[n].kind == k && M.nodes[n].id == id) return n;
  throw Sl3Error(ErrorCode::BadConfiguration, "map node lookup failed");
}

int terminal_dart(const MapView& M, int e, int end) {
  const auto& ps = M.piecesOfEdge[e];
  return end == 0 ? M.pieces[ps.front()].dartFwd : M.pieces[ps.back()].dartBwd;
}

// Face of the corner split by a new attachment at index `idx` of point P's
// walk-ordered list (rotations put later attachments closer to the outgoing
// boundary arc, so the corner is bounded by the previous token's dart).
int point_corner_face(const Diagram& W, const MapView& M, int P, int idx) {
  if (idx > 0) {
    int tok = W.attachments[P][idx - 1];
    return M.darts[terminal_dart(M, tok / 2, tok % 2)].face;
  }
  int n = node_of(M, MapView::NPoint, P);
  for (int dd = 0; dd < (int)M.darts.size(); ++dd)
    if (M.darts[dd].node == n && M.darts[dd].isArc && M.darts[dd].face != M.outerFace)
      return M.darts[dd].face;
  throw Sl3Error(ErrorCode::BadConfiguration, "boundary corner lookup failed");
}

// Face of the corner a new edge entering `slot` of an already-drawn vertex or
// crossing splits: the corner is bounded by the next occupied slot clockwise.
template <typename Slots>
int port_corner_face(const MapView& M, const Slots& slots, int nSlots, int slot) {
  for (int t = 1; t <= nSlots; ++t) {
    auto [e, end] = slots[(slot + t) % nSlots];
    if (e >= 0) return M.darts[terminal_dart(M, e, end)].face;
  }
  throw Sl3Error(ErrorCode::BadConfiguration, "port corner lookup failed");
}

// One leg of a strand's cut trace, with the interval window that keeps the
// addition's own plug order along the cut.
struct TraceLeg {
  int cut = -1;
  bool sense = true;
  int lo = 0, hi = 0;  // admissible glue intervals, inclusive
};

struct Step {
  bool thru = false;
  int dart = -1;     // crossed piece dart; its face is the approach side
  int k = -1;        // trace leg index
  int glueIdx = -1;  // chosen interval along the cut
};

struct Search {
  std::vector<long> dist;
  std::vector<int> parent;
  std::vector<Step> via;
  std::vector<int> label;  // source label carried along the path
};

// Layered Dijkstra over (face, legs consumed). Deterministic: ties resolve by
// state id and fixed relaxation order.
Search layered_route(const MapView& M, const std::vector<Glue>& G,
                     const std::vector<TraceLeg>& legs,
                     const std::vector<std::pair<int, int>>& sources, bool allowCross) {
  int nF = (int)M.faces.size();
  int nS = nF * ((int)legs.size() + 1);
  Search R{std::vector<long>(nS, kInf), std::vector<int>(nS, -1), std::vector<Step>(nS),
           std::vector<int>(nS, -1)};
  std::priority_queue<std::pair<long, int>, std::vector<std::pair<long, int>>,
                      std::greater<std::pair<long, int>>>
      pq;
  for (auto [f, lab] : sources) {
    if (R.dist[f] < kInf) continue;
    R.dist[f] = 0;
    R.label[f] = lab;
    pq.push({0, f});
  }
  auto relax = [&](int from, int to, long w, const Step& st) {
    if (R.dist[from] + w < R.dist[to]) {
      R.dist[to] = R.dist[from] + w;
      R.parent[to] = from;
      R.via[to] = st;
      R.label[to] = R.label[from];
      pq.push({R.dist[to], to});
    }
  };
  std::vector<char> done(nS, 0);
  while (!pq.empty()) {
    auto [dcur, s] = pq.top();
    pq.pop();
    if (done[s]) continue;
    done[s] = 1;
    int k = s / nF, f = s % nF;
    if (allowCross)
      for (int dd : M.faces[f].darts)
        if (!M.darts[dd].isArc && M.darts[dd].piece >= 0)
          relax(s, k * nF + M.darts[M.darts[dd].twin].face, 1, Step{false, dd, -1, -1});
    if (k < (int)legs.size()) {
      const auto& leg = legs[k];
      for (const auto& g : G) {
        if (g.cut != leg.cut || g.idx < leg.lo || g.idx > leg.hi) continue;
        int dFrom = leg.sense ? g.dAgainst : g.dWith;
        int dTo = leg.sense ? g.dWith : g.dAgainst;
        if (M.darts[dFrom].face != f) continue;
        relax(s, (k + 1) * nF + M.darts[dTo].face, 0, Step{true, -1, k, g.idx});
      }
    }
  }
  return R;
}

std::vector<Step> unwind(const Search& R, int goal) {
  std::vector<Step> steps;
  for (int s = goal; R.parent[s] >= 0; s = R.parent[s]) steps.push_back(R.via[s]);
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// Where a routed strand terminates: a concrete anchor with its candidate
// corner faces, or a floating (not yet drawn) vertex/crossing.
struct Anchor {
  EndRef wref;                            // resolved target in the host
  std::vector<std::pair<int, int>> cands;  // (face, attachment index or -1)
  int point = -1, addIdx = -1;
  bool floating = false;
};

// Current location of an original map piece after splits: piece `k` of edge
// `owner` (between its plugs k-1 and k), or loop piece `k` before any split.
struct Loc {
  bool loop = false;
  int owner = -1;
  int k = -1;
};

struct Inserter {
  Diagram& W;
  const Diagram& add;
  bool forbid;

  std::vector<int> vMap, xMap;
  // Per point: (index into add's attachment list, token now in the host).
  std::vector<std::vector<std::pair<int, int>>> doneAt;
  // Per cut: (index into add's plug order, plug id now in the host).
  std::vector<std::vector<std::pair<int, int>>> donePlug;

  MapView M;  // rebuilt before each strand
  std::vector<Glue> G;
  std::vector<Loc> cur;  // original piece id -> current location

  Inserter(Diagram& w, const Diagram& a, bool f)
      : W(w),
        add(a),
        forbid(f),
        vMap(a.vertices.size(), -1),
        xMap(a.crossings.size(), -1),
        doneAt(w.attachments.size()),
        donePlug(w.cutPlugs.size()) {}

  void refresh_map() {
    M = build_map(W);
    G = glue_table(W, M);
    cur.assign(M.pieces.size(), Loc{});
    for (int p = 0; p < (int)M.pieces.size(); ++p)
      cur[p] = Loc{M.pieces[p].onLoop, M.pieces[p].owner, M.pieces[p].index};
  }

  // Admissible attachment indices at P for the add-list position addIdx.
  std::pair<int, int> point_window(int P, int addIdx) const {
    int lo = 0, hi = (int)W.attachments[P].size();
    const auto& A = W.attachments[P];
    for (auto [ai, tok] : doneAt[P]) {
      int pi = (int)(std::find(A.begin(), A.end(), tok) - A.begin());
      if (ai < addIdx)
        lo = std::max(lo, pi + 1);
      else
        hi = std::min(hi, pi);
    }
    return {lo, hi};
  }

  // Admissible glue intervals on `cut` for add's plug-order position addPos.
  std::pair<int, int> plug_window(int cut, int addPos) const {
    int lo = 0, hi = (int)W.cutPlugs[cut].size();
    const auto& O = W.cutPlugs[cut];
    for (auto [ap, wq] : donePlug[cut]) {
      int pi = (int)(std::find(O.begin(), O.end(), wq) - O.begin());
      if (ap < addPos)
        lo = std::max(lo, pi + 1);
      else
        hi = std::min(hi, pi);
    }
    return {lo, hi};
  }

  Anchor anchor_for(int eAdd, int end) {
    const EndRef& r = end == 0 ? add.edges[eAdd].a : add.edges[eAdd].b;
    Anchor A;
    switch (r.kind) {
      case EndRef::PointEnd: {
        A.wref = Diagram::at_point(r.id);
        A.point = r.id;
        const auto& L = add.attachments[r.id];
        A.addIdx = (int)(std::find(L.begin(), L.end(), eAdd * 2 + end) - L.begin());
        auto [lo, hi] = point_window(r.id, A.addIdx);
        for (int j = lo; j <= hi; ++j) A.cands.push_back({point_corner_face(W, M, r.id, j), j});
        break;
      }
      case EndRef::VertexEnd:
        if (vMap[r.id] >= 0) {
          A.wref = Diagram::at_vertex(vMap[r.id], r.port);
          A.cands.push_back({port_corner_face(M, W.vertices[vMap[r.id]].slots, 3, r.port), -1});
        } else {
          A.floating = true;
        }
        break;
      case EndRef::CrossingEnd:
        if (xMap[r.id] >= 0) {
          A.wref = Diagram::at_crossing(xMap[r.id], r.port);
          A.cands.push_back({port_corner_face(M, W.crossings[xMap[r.id]].slots, 4, r.port), -1});
        } else {
          A.floating = true;
        }
        break;
      default:
        throw Sl3Error(ErrorCode::BadInput, "dangling edge end in insertion");
    }
    return A;
  }

  EndRef place_ref(const EndRef& r) {
    if (r.kind == EndRef::VertexEnd) {
      if (vMap[r.id] < 0) vMap[r.id] = W.add_vertex(add.vertices[r.id].color);
      return Diagram::at_vertex(vMap[r.id], r.port);
    }
    if (r.kind == EndRef::CrossingEnd) {
      if (xMap[r.id] < 0) xMap[r.id] = W.add_crossing();
      return Diagram::at_crossing(xMap[r.id], r.port);
    }
    throw Sl3Error(ErrorCode::BadInput, "dangling edge end in insertion");
  }

  // Split the strand currently under `dartCrossed` at a new crossing. The new
  // strand arrives on the crossed dart's side; clockwise around the crossing
  // the ports read incoming half, arrival, outgoing half, continuation when
  // approaching from the strand's left.
  std::array<int, 3> split_at(int dartCrossed) {
    int pid = M.darts[dartCrossed].piece;
    bool fromLeft = (M.pieces[pid].dartFwd == dartCrossed);
    Loc loc = cur[pid];
    int x = W.add_crossing();
    int e2;
    if (loc.loop) {
      auto plugsOld = W.loops[loc.owner].plugs;
      int m = (int)plugsOld.size();
      std::vector<int> ps((size_t)m);
      for (int t = 0; t < m; ++t) ps[t] = plugsOld[(loc.k + 1 + t) % m];
      W.edges.push_back(Diagram::Edge{Diagram::at_crossing(x, 2), Diagram::at_crossing(x, 0), ps, true});
      e2 = (int)W.edges.size() - 1;
      for (int p : ps) {
        W.plugs[p].loop = -1;
        W.plugs[p].edge = e2;
      }
      W.loops[loc.owner].plugs.clear();
      W.loops[loc.owner].alive = false;
      W.crossings[x].slots[0] = {e2, 1};
      W.crossings[x].slots[2] = {e2, 0};
      for (auto& L : cur) {
        if (!L.loop || L.owner != loc.owner) continue;
        int j = L.k;
        L.loop = false;
        L.owner = e2;
        L.k = (j == loc.k) ? 0 : ((j - loc.k - 1 + m) % m) + 1;
      }
    } else {
      EndRef bref = W.edges[loc.owner].b;
      auto& plugsRef = W.edges[loc.owner].plugs;
      std::vector<int> tail(plugsRef.begin() + loc.k, plugsRef.end());
      plugsRef.resize(loc.k);
      W.edges.push_back(Diagram::Edge{Diagram::at_crossing(x, 2), bref, tail, true});
      e2 = (int)W.edges.size() - 1;
      for (int p : tail) W.plugs[p].edge = e2;
      if (bref.kind == EndRef::VertexEnd)
        W.vertices[bref.id].slots[bref.port] = {e2, 1};
      else if (bref.kind == EndRef::CrossingEnd)
        W.crossings[bref.id].slots[bref.port] = {e2, 1};
      else if (bref.kind == EndRef::PointEnd) {
        auto& A = W.attachments[bref.id];
        *std::find(A.begin(), A.end(), loc.owner * 2 + 1) = e2 * 2 + 1;
      }
      W.edges[loc.owner].b = Diagram::at_crossing(x, 0);
      W.crossings[x].slots[0] = {loc.owner, 1};
      W.crossings[x].slots[2] = {e2, 0};
      for (auto& L : cur) {
        if (L.loop || L.owner != loc.owner) continue;
        if (L.k == loc.k) {
          L.owner = e2;
          L.k = 0;
        } else if (L.k > loc.k) {
          L.owner = e2;
          L.k -= loc.k;
        }
      }
      // The piece that was split keeps its later half toward the new edge.
      cur[pid] = Loc{false, e2, 0};
    }
    int arrive = fromLeft ? 1 : 3;
    int cont = fromLeft ? 3 : 1;
    return {x, arrive, cont};
  }

  void reposition(int P, int tok, int idx) {
    auto& A = W.attachments[P];
    A.erase(std::find(A.begin(), A.end(), tok));
    A.insert(A.begin() + idx, tok);
  }

  // Lay down a routed open strand from aW to bW. Returns (first, last) edge.
  std::pair<int, int> lay_chain(EndRef aW, EndRef bW, const std::vector<Step>& steps,
                                const std::vector<TraceLeg>& legs,
                                const std::vector<int>& addPosOf) {
    std::vector<std::vector<int>> fresh(W.cutPlugs.size());
    std::vector<TraceStep> pending;
    std::vector<int> pendCut, pendPos;
    EndRef cursor = aW;
    int firstEdge = -1, lastEdge = -1;
    auto flush = [&](const EndRef& to) {
      int e = W.add_edge(cursor, to, pending);
      if (firstEdge < 0) firstEdge = e;
      lastEdge = e;
      for (size_t t = 0; t < pending.size(); ++t)
        donePlug[pendCut[t]].push_back({pendPos[t], W.edges[e].plugs[t]});
      pending.clear();
      pendCut.clear();
      pendPos.clear();
    };
    for (const Step& st : steps) {
      if (st.thru) {
        const auto& leg = legs[st.k];
        int pos = st.glueIdx;
        for (int iv : fresh[leg.cut])
          if (iv <= st.glueIdx) ++pos;
        fresh[leg.cut].push_back(st.glueIdx);
        pending.push_back({leg.cut, leg.sense, pos});
        pendCut.push_back(leg.cut);
        pendPos.push_back(addPosOf[st.k]);
      } else {
        auto [x, arrive, cont] = split_at(st.dart);
        flush(Diagram::at_crossing(x, arrive));
        cursor = Diagram::at_crossing(x, cont);
      }
    }
    flush(bW);
    return {firstEdge, lastEdge};
  }

  std::vector<TraceLeg> legs_for(const std::vector<int>& plugIds, std::vector<int>& addPosOf) {
    std::vector<TraceLeg> legs;
    for (int q : plugIds) {
      int c = add.plugs[q].cut;
      const auto& co = add.cutPlugs[c];
      int ap = (int)(std::find(co.begin(), co.end(), q) - co.begin());
      auto [lo, hi] = plug_window(c, ap);
      legs.push_back({c, add.plugs[q].with_sense, lo, hi});
      addPosOf.push_back(ap);
    }
    return legs;
  }

  void insert_edge(int eAdd) {
    refresh_map();
    const auto& E = add.edges[eAdd];
    std::vector<int> addPosOf;
    std::vector<TraceLeg> legs = legs_for(E.plugs, addPosOf);
    Anchor A = anchor_for(eAdd, 0), B = anchor_for(eAdd, 1);
    int nF = (int)M.faces.size();
    std::vector<std::pair<int, int>> sources;
    if (A.floating) {
      for (int f = 0; f < nF; ++f)
        if (f != M.outerFace) sources.push_back({f, -1});
    } else {
      sources = A.cands;
    }
    Search R = layered_route(M, G, legs, sources, !forbid);
    int base = (int)legs.size() * nF;
    long best = kInf;
    int bestState = -1, bestJ = -1;
    if (B.floating) {
      for (int f = 0; f < nF; ++f) {
        if (f == M.outerFace) continue;
        if (R.dist[base + f] < best) {
          best = R.dist[base + f];
          bestState = base + f;
        }
      }
    } else {
      for (auto [f, j] : B.cands) {
        if (R.dist[base + f] < best) {
          best = R.dist[base + f];
          bestState = base + f;
          bestJ = j;
        }
      }
    }
    if (bestState < 0 || best >= kInf)
      throw Sl3Error(ErrorCode::BadConfiguration,
                     forbid ? "insertion cannot be routed without new crossings"
                            : "no admissible routing for insertion");
    std::vector<Step> steps = unwind(R, bestState);
    int jA = R.label[bestState];
    EndRef aW = A.floating ? place_ref(E.a) : A.wref;
    EndRef bW = B.floating ? place_ref(E.b) : B.wref;
    auto [firstEdge, lastEdge] = lay_chain(aW, bW, steps, legs, addPosOf);
    if (A.point >= 0) {
      reposition(A.point, firstEdge * 2 + 0, jA);
      doneAt[A.point].push_back({A.addIdx, firstEdge * 2 + 0});
    }
    if (B.point >= 0) {
      reposition(B.point, lastEdge * 2 + 1, bestJ);
      doneAt[B.point].push_back({B.addIdx, lastEdge * 2 + 1});
    }
  }

  void insert_loop(int lAdd) {
    refresh_map();
    std::vector<int> addPosOf;
    std::vector<TraceLeg> legs = legs_for(add.loops[lAdd].plugs, addPosOf);
    int nF = (int)M.faces.size();
    int m = (int)legs.size();
    long best = kInf;
    int bestF = -1;
    Search bestR;
    for (int f = 0; f < nF; ++f) {
      if (f == M.outerFace) continue;
      Search R = layered_route(M, G, legs, {{f, -1}}, !forbid);
      if (R.dist[m * nF + f] < best) {
        best = R.dist[m * nF + f];
        bestF = f;
        bestR = std::move(R);
      }
    }
    if (bestF < 0 || best >= kInf)
      throw Sl3Error(ErrorCode::BadConfiguration,
                     forbid ? "insertion cannot be routed without new crossings"
                            : "no admissible routing for insertion");
    std::vector<Step> steps = unwind(bestR, m * nF + bestF);
    int c0 = -1;
    for (int i = 0; i < (int)steps.size(); ++i)
      if (!steps[i].thru) {
        c0 = i;
        break;
      }
    if (c0 < 0) {
      // No crossings: a plain loop with concrete plug positions.
      std::vector<std::vector<int>> fresh(W.cutPlugs.size());
      std::vector<TraceStep> tr;
      for (const Step& st : steps) {
        const auto& leg = legs[st.k];
        int pos = st.glueIdx;
        for (int iv : fresh[leg.cut])
          if (iv <= st.glueIdx) ++pos;
        fresh[leg.cut].push_back(st.glueIdx);
        tr.push_back({leg.cut, leg.sense, pos});
      }
      int l = W.add_loop(tr);
      for (int t = 0; t < m; ++t)
        donePlug[legs[steps[t].k].cut].push_back({addPosOf[steps[t].k], W.loops[l].plugs[t]});
      return;
    }
    std::rotate(steps.begin(), steps.begin() + c0, steps.end());
    auto [x0, arrive0, cont0] = split_at(steps[0].dart);
    std::vector<Step> rest(steps.begin() + 1, steps.end());
    lay_chain(Diagram::at_crossing(x0, cont0), Diagram::at_crossing(x0, arrive0), rest, legs,
              addPosOf);
  }
};

}  // namespace

Diagram insert_diagram(const Diagram& base, const Diagram& add, bool forbidCrossings) {
  if (!same_presentation(base.ctx, add.ctx))
    throw Sl3Error(ErrorCode::BadInput, "superposition needs matching polygon presentations");
  Diagram W = base;
  W.freeLoops += add.freeLoops;
  Inserter I(W, add, forbidCrossings);

  int nE = (int)add.edges.size();
  std::vector<char> done(nE, 0);
  int remaining = 0;
  for (int e = 0; e < nE; ++e) {
    if (add.edges[e].alive)
      ++remaining;
    else
      done[e] = 1;
  }
  auto concrete = [&](const EndRef& r) {
    return r.kind == EndRef::PointEnd || (r.kind == EndRef::VertexEnd && I.vMap[r.id] >= 0) ||
           (r.kind == EndRef::CrossingEnd && I.xMap[r.id] >= 0);
  };
  while (remaining > 0) {
    int pick = -1;
    for (int e = 0; e < nE && pick < 0; ++e)
      if (!done[e] && (concrete(add.edges[e].a) || concrete(add.edges[e].b))) pick = e;
    for (int e = 0; e < nE && pick < 0; ++e)
      if (!done[e]) pick = e;
    I.insert_edge(pick);
    done[pick] = 1;
    --remaining;
  }
  for (int l = 0; l < (int)add.loops.size(); ++l)
    if (add.loops[l].alive) I.insert_loop(l);
  for (int v = 0; v < (int)add.vertices.size(); ++v)
    if (add.vertices[v].alive && I.vMap[v] < 0) I.vMap[v] = W.add_vertex(add.vertices[v].color);
  for (int x = 0; x < (int)add.crossings.size(); ++x)
    if (add.crossings[x].alive && I.xMap[x] < 0) I.xMap[x] = W.add_crossing();

  Violations viol = W.validate();
  if (!viol.empty())
    throw Sl3Error(ErrorCode::BadConfiguration,
                   "superposition produced an inconsistent drawing: " + viol[0].message);
  return W;
}

Diagram superpose(const Diagram& d1, const Diagram& d2) { return insert_diagram(d1, d2, false); }

}  // namespace sl3web
