#include "sl3web/skein.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "sl3web/common.hpp"

namespace sl3web {

namespace {

// Rule coefficients. Each is pinned against the exact-evaluation oracle by
// the unit tests and revalidated on randomized fixtures by skein_selftest().
constexpr long long kLoopFactor = 3;
constexpr long long kBigonFactor = -2;
constexpr long long kSmoothingFactor = 1;
constexpr long long kHFactor = 1;
constexpr long long kSquareFactorA = 1;
constexpr long long kSquareFactorB = 1;
constexpr long long kKinkFactor = 1;
constexpr long long kParallelFactor = 1;
constexpr long long kUntwistFactor = -1;
constexpr long long kSlideFactor = 1;

}  // namespace

const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::CrossingResolution: return "crossing-resolution";
    case RuleId::LoopRemoval: return "loop-removal";
    case RuleId::BigonRemoval: return "bigon-removal";
    case RuleId::BoundaryBigon: return "boundary-bigon";
    case RuleId::SquareRemoval: return "square-removal";
    case RuleId::YangBaxterA: return "yang-baxter-a";
    case RuleId::YangBaxterB: return "yang-baxter-b";
    case RuleId::YangBaxterC: return "yang-baxter-c";
    case RuleId::YangBaxterD: return "yang-baxter-d";
    case RuleId::YangBaxterE: return "yang-baxter-e";
  }
  return "?";
}

RuleId rule_from_name(const std::string& name) {
  for (int i = 0; i <= (int)RuleId::YangBaxterE; ++i)
    if (name == rule_name((RuleId)i)) return (RuleId)i;
  throw Sl3Error(ErrorCode::BadInput, "unknown rewrite rule: " + name);
}

bool is_reduction_rule(RuleId r) {
  switch (r) {
    case RuleId::CrossingResolution:
    case RuleId::LoopRemoval:
    case RuleId::BigonRemoval:
    case RuleId::BoundaryBigon:
    case RuleId::SquareRemoval: return true;
    default: return false;
  }
}

std::string to_string(const Redex& r) {
  std::ostringstream os;
  os << rule_name(r.rule);
  if (r.crossing >= 0) os << " crossing=" << r.crossing;
  if (r.rule == RuleId::LoopRemoval) os << " loop=" << r.loop;
  if (r.point >= 0) os << " point=" << r.point;
  if (!r.nodes.empty()) {
    os << " nodes=";
    for (size_t i = 0; i < r.nodes.size(); ++i) os << (i ? "," : "") << r.nodes[i];
  }
  if (!r.edges.empty()) {
    os << " edges=";
    for (size_t i = 0; i < r.edges.size(); ++i) os << (i ? "," : "") << r.edges[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// WebCombination
// ---------------------------------------------------------------------------

WebCombination::WebCombination(SurfacePtr ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw Sl3Error(ErrorCode::BadInput, "combination requires a surface context");
}

WebCombination WebCombination::single(const Diagram& d, long long coeff) {
  WebCombination c(d.ctx);
  c.add(d, coeff);
  return c;
}

WebCombination WebCombination::one(SurfacePtr ctx) {
  Diagram empty(ctx);
  return single(empty, 1);
}

std::string WebCombination::key_of(const Diagram& d) {
  if (d.crossing_free()) return d.canonical_key();
  Diagram t = d;
  t.normalize();
  return "x:" + t.compacted().encode();
}

void WebCombination::add(const Diagram& web, long long coeff) {
  if (coeff == 0) return;
  if (web.ctx != ctx_)
    throw Sl3Error(ErrorCode::TypeMismatch, "web belongs to a different surface context");
  std::string key = key_of(web);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), Term{web, coeff});
  } else {
    it->second.coeff += coeff;
    if (it->second.coeff == 0) terms_.erase(it);
  }
}

void WebCombination::add(const WebCombination& other, long long scale) {
  if (scale == 0) return;
  for (const auto& [k, t] : other.terms_) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, Term{t.web, t.coeff * scale});
    } else {
      it->second.coeff += t.coeff * scale;
      if (it->second.coeff == 0) terms_.erase(it);
    }
  }
}

long long WebCombination::coefficient(const Diagram& web) const {
  auto it = terms_.find(key_of(web));
  return it == terms_.end() ? 0 : it->second.coeff;
}

bool WebCombination::operator==(const WebCombination& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  for (; a != terms_.end(); ++a, ++b)
    if (a->first != b->first || a->second.coeff != b->second.coeff) return false;
  return true;
}

DiagramCombination WebCombination::to_terms() const {
  DiagramCombination out;
  out.reserve(terms_.size());
  for (const auto& [k, t] : terms_) out.push_back({t.web, t.coeff});
  return out;
}

std::string WebCombination::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, t] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff << "*{" << k << "}";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Strand surgery: joining dangling edge ends
// ---------------------------------------------------------------------------

namespace {

using Half = std::pair<int, int>;  // (edge, end); end 0 departs, 1 arrives

// Joins pairs of dangling edge ends, merging edges while carrying plugs along
// (reversed and sense-flipped when the merge runs against an edge's stored
// direction) and closing single edges into loops or the free-loop counter.
// Handles of edges consumed by earlier joins are followed through `remap`.
struct Splicer {
  Diagram& d;
  std::map<Half, Half> remap;

  explicit Splicer(Diagram& dd) : d(dd) {}

  Half resolve(Half h) const {
    for (;;) {
      auto it = remap.find(h);
      if (it == remap.end()) return h;
      h = it->second;
    }
  }

  // e's `end` takes over the anchor that (oldEdge, oldEnd) held.
  void take_end(int e, int end, const EndRef& r, int oldEdge, int oldEnd) {
    (end == 0 ? d.edges[e].a : d.edges[e].b) = r;
    if (r.kind == EndRef::VertexEnd) {
      d.vertices[r.id].slots[r.port] = {e, end};
    } else if (r.kind == EndRef::CrossingEnd) {
      d.crossings[r.id].slots[r.port] = {e, end};
    } else if (r.kind == EndRef::PointEnd) {
      auto& A = d.attachments[r.id];
      *std::find(A.begin(), A.end(), oldEdge * 2 + oldEnd) = e * 2 + end;
    }
  }

  void retire(int f) {
    d.edges[f].plugs.clear();
    d.edges[f].a = d.edges[f].b = EndRef{};
    d.edges[f].alive = false;
  }

  std::vector<int> flipped_reversed(const std::vector<int>& plugs) {
    std::vector<int> out(plugs.rbegin(), plugs.rend());
    for (int p : out) d.plugs[p].with_sense = !d.plugs[p].with_sense;
    return out;
  }

  void join(Half x, Half y) {
    x = resolve(x);
    y = resolve(y);
    auto [e, ex] = x;
    auto [f, fy] = y;
    if (e == f) {
      if (ex == fy) throw Sl3Error(ErrorCode::BadConfiguration, "strand closes onto the same end");
      auto& E = d.edges[e];
      if (E.plugs.empty()) {
        ++d.freeLoops;
      } else {
        d.loops.push_back(Diagram::Loop{E.plugs, true});
        int l = (int)d.loops.size() - 1;
        for (int p : E.plugs) {
          d.plugs[p].edge = -1;
          d.plugs[p].loop = l;
        }
      }
      retire(e);
      return;
    }
    auto& E = d.edges[e];
    auto& F = d.edges[f];
    auto reown = [&](const std::vector<int>& ps) {
      for (int p : ps) d.plugs[p].edge = e;
    };
    if (ex == 1 && fy == 0) {  // e forward then f forward
      take_end(e, 1, F.b, f, 1);
      reown(F.plugs);
      E.plugs.insert(E.plugs.end(), F.plugs.begin(), F.plugs.end());
      remap[{f, 1}] = {e, 1};
    } else if (ex == 0 && fy == 1) {  // f forward then e forward
      take_end(e, 0, F.a, f, 0);
      reown(F.plugs);
      E.plugs.insert(E.plugs.begin(), F.plugs.begin(), F.plugs.end());
      remap[{f, 0}] = {e, 0};
    } else if (ex == 1 && fy == 1) {  // e forward then f backward
      auto moved = flipped_reversed(F.plugs);
      take_end(e, 1, F.a, f, 0);
      reown(moved);
      E.plugs.insert(E.plugs.end(), moved.begin(), moved.end());
      remap[{f, 0}] = {e, 1};
    } else {  // f backward then e forward
      auto moved = flipped_reversed(F.plugs);
      take_end(e, 0, F.b, f, 1);
      reown(moved);
      E.plugs.insert(E.plugs.begin(), moved.begin(), moved.end());
      remap[{f, 1}] = {e, 0};
    }
    F.plugs.clear();
    F.a = F.b = EndRef{};
    F.alive = false;
  }
};

// Which end of `edge` sits at the given vertex (kind=1) or crossing (kind=3).
std::pair<int, int> end_and_port_at(const Diagram& d, int edge, int kind, int id) {
  const auto& E = d.edges[edge];
  if (E.a.kind == kind && E.a.id == id) return {0, E.a.port};
  if (E.b.kind == kind && E.b.id == id) return {1, E.b.port};
  throw Sl3Error(ErrorCode::PatternMismatch, "edge does not reach the expected node");
}

std::pair<int, int> third_slot(const Diagram& d, int v, int eA, int eB) {
  for (auto [e, end] : d.vertices[v].slots)
    if (e >= 0 && e != eA && e != eB) return {e, end};
  throw Sl3Error(ErrorCode::PatternMismatch, "vertex lacks a third edge");
}

// ---------------------------------------------------------------------------
// Redex detection
// ---------------------------------------------------------------------------

int edge_of_event_piece(const MapView& M, int piece) {
  if (piece < 0) return -1;
  return M.edge_of_piece(piece);
}

// Redexes are produced crossings first, then the free-loop site, then face
// sites in region order, so the deterministic strategy resolves crossings
// before faces.
std::vector<Redex> find_redexes_impl(const Diagram& d, bool includeYB) {
  std::vector<Redex> out;
  for (int x = 0; x < (int)d.crossings.size(); ++x) {
    if (!d.crossings[x].alive) continue;
    Redex r;
    r.rule = RuleId::CrossingResolution;
    r.crossing = x;
    out.push_back(std::move(r));
  }
  if (d.freeLoops > 0) {
    Redex r;
    r.rule = RuleId::LoopRemoval;
    r.loop = -1;
    out.push_back(std::move(r));
  }

  MapView M = build_map(d);
  std::set<int> loopsSeen;
  for (const auto& reg : M.regions) {
    if (!reg.disk() || reg.touchesArc) continue;
    const auto& events = reg.circles[0];
    std::vector<const MapView::Event*> cs;
    bool anyArc = false;
    for (const auto& ev : events) {
      if (ev.isArc)
        anyArc = true;
      else
        cs.push_back(&ev);
    }
    if (anyArc) continue;

    if (cs.empty()) {
      // vertex-free loop bounding an empty glued disk
      int owner = -1;
      for (int f : reg.faces) {
        for (int dd : M.faces[f].darts) {
          int p = M.darts[dd].piece;
          if (p >= 0 && M.pieces[p].onLoop) {
            owner = M.pieces[p].owner;
            break;
          }
        }
        if (owner >= 0) break;
      }
      if (owner < 0 || !loopsSeen.insert(owner).second) continue;
      Redex r;
      r.rule = RuleId::LoopRemoval;
      r.loop = owner;
      out.push_back(std::move(r));
      continue;
    }

    if (cs.size() == 1) {
      if (includeYB && cs[0]->kind == MapView::NCrossing) {
        int k = edge_of_event_piece(M, cs[0]->inPiece);
        if (k >= 0 && k == edge_of_event_piece(M, cs[0]->outPiece)) {
          Redex r;
          r.rule = RuleId::YangBaxterB;
          r.crossing = cs[0]->node;
          r.edges = {k};
          out.push_back(std::move(r));
        }
      }
      continue;
    }

    if (cs.size() == 2) {
      int eFwd = edge_of_event_piece(M, cs[0]->outPiece);  // corner0 -> corner1
      int eBwd = edge_of_event_piece(M, cs[1]->outPiece);  // corner1 -> corner0
      if (eFwd < 0 || eBwd < 0 || eFwd == eBwd) continue;
      auto k0 = cs[0]->kind, k1 = cs[1]->kind;
      int n0 = cs[0]->node, n1 = cs[1]->node;
      if (k0 == MapView::NVertex && k1 == MapView::NVertex) {
        if (n0 == n1) continue;
        Redex r;
        r.rule = RuleId::BigonRemoval;
        r.nodes = {n0, n1};
        r.edges = {eFwd, eBwd};
        out.push_back(std::move(r));
      } else if ((k0 == MapView::NVertex && k1 == MapView::NPoint) ||
                 (k0 == MapView::NPoint && k1 == MapView::NVertex)) {
        Redex r;
        r.rule = RuleId::BoundaryBigon;
        r.nodes = {k0 == MapView::NVertex ? n0 : n1};
        r.point = k0 == MapView::NPoint ? n0 : n1;
        r.edges = {eFwd, eBwd};
        out.push_back(std::move(r));
      } else if (includeYB && k0 == MapView::NCrossing && k1 == MapView::NCrossing) {
        if (n0 == n1) continue;
        Redex r;
        r.rule = RuleId::YangBaxterC;
        r.nodes = {n0, n1};
        r.edges = {eFwd, eBwd};
        out.push_back(std::move(r));
      } else if (includeYB && ((k0 == MapView::NVertex && k1 == MapView::NCrossing) ||
                               (k0 == MapView::NCrossing && k1 == MapView::NVertex))) {
        int v = k0 == MapView::NVertex ? n0 : n1;
        int x = k0 == MapView::NCrossing ? n0 : n1;
        Redex r;
        r.rule = d.vertices[v].color == Color::White ? RuleId::YangBaxterD : RuleId::YangBaxterE;
        r.nodes = {v, x};
        r.edges = {eFwd, eBwd};
        out.push_back(std::move(r));
      }
      continue;
    }

    if (cs.size() == 3) {
      if (!includeYB) continue;
      bool allX = true;
      std::set<int> ids;
      for (auto* ev : cs) {
        allX = allX && ev->kind == MapView::NCrossing;
        ids.insert(ev->node);
      }
      if (!allX || ids.size() != 3) continue;
      std::vector<int> tEdges;
      bool ok = true;
      for (int i = 0; i < 3; ++i) {
        int e = edge_of_event_piece(M, cs[i]->outPiece);
        if (e < 0 || !d.edges[e].plugs.empty()) ok = false;  // triangle must stay clear of cuts
        tEdges.push_back(e);
      }
      if (!ok || std::set<int>(tEdges.begin(), tEdges.end()).size() != 3) continue;
      Redex r;
      r.rule = RuleId::YangBaxterA;
      r.nodes = {cs[0]->node, cs[1]->node, cs[2]->node};
      r.edges = tEdges;
      out.push_back(std::move(r));
      continue;
    }

    if (cs.size() == 4) {
      bool allV = true;
      std::set<int> ids;
      for (auto* ev : cs) {
        allV = allV && ev->kind == MapView::NVertex;
        ids.insert(ev->node);
      }
      if (!allV || ids.size() != 4) continue;
      std::vector<int> ns, es;
      for (int i = 0; i < 4; ++i) {
        ns.push_back(cs[i]->node);
        es.push_back(edge_of_event_piece(M, cs[i]->outPiece));
      }
      bool alt = true;
      for (int i = 0; i < 4; ++i)
        if (d.vertices[ns[i]].color == d.vertices[ns[(i + 1) % 4]].color) alt = false;
      if (!alt) continue;
      Redex r;
      r.rule = RuleId::SquareRemoval;
      r.nodes = std::move(ns);
      r.edges = std::move(es);
      out.push_back(std::move(r));
      continue;
    }
  }
  return out;
}

bool same_site(const Redex& a, const Redex& b) {
  if (a.rule != b.rule || a.crossing != b.crossing || a.loop != b.loop || a.point != b.point)
    return false;
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  size_t n = std::max(a.nodes.size(), a.edges.size());
  if (n == 0) return true;
  for (size_t rot = 0; rot < n; ++rot) {
    bool match = true;
    for (size_t i = 0; i < a.nodes.size() && match; ++i)
      match = a.nodes[i] == b.nodes[(i + rot) % b.nodes.size()];
    for (size_t i = 0; i < a.edges.size() && match; ++i)
      match = a.edges[i] == b.edges[(i + rot) % b.edges.size()];
    if (match) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Rule surgeries
// ---------------------------------------------------------------------------

using TermList = std::vector<std::pair<Diagram, long long>>;

TermList surgery_loop(const Diagram& d, const Redex& r) {
  Diagram out = d;
  if (r.loop < 0) {
    if (out.freeLoops <= 0) throw Sl3Error(ErrorCode::PatternMismatch, "no free loop present");
    --out.freeLoops;
  } else {
    out.erase_loop(r.loop);
  }
  return {{std::move(out), kLoopFactor}};
}

TermList surgery_bigon(const Diagram& d, const Redex& r) {
  int n0 = r.nodes[0], n1 = r.nodes[1];
  int vW = d.vertices[n0].color == Color::White ? n0 : n1;
  int vB = d.vertices[n0].color == Color::Black ? n0 : n1;
  if (d.vertices[vW].color != Color::White || d.vertices[vB].color != Color::Black)
    throw Sl3Error(ErrorCode::PatternMismatch, "face corners must have opposite colors");
  int e1 = r.edges[0], e2 = r.edges[1];
  auto [eW, eWend] = third_slot(d, vW, e1, e2);
  auto [eB, eBend] = third_slot(d, vB, e1, e2);
  Diagram out = d;
  out.detach_end(e1, 0);
  out.detach_end(e1, 1);
  out.erase_edge(e2);
  out.detach_end(eW, eWend);
  out.detach_end(eB, eBend);
  out.erase_vertex(vW);
  out.erase_vertex(vB);
  Splicer sp(out);
  sp.join({eB, eBend}, {e1, 1});
  sp.join({e1, 0}, {eW, eWend});
  return {{std::move(out), kBigonFactor}};
}

TermList surgery_square(const Diagram& d, const Redex& r) {
  const auto& vs = r.nodes;
  const auto& fs = r.edges;
  std::array<int, 4> leg{}, legEnd{}, fEndLo{};  // fEndLo[i]: end of fs[i] at vs[i]
  for (int i = 0; i < 4; ++i) {
    auto [g, ge] = third_slot(d, vs[i], fs[(i + 3) % 4], fs[i]);
    leg[i] = g;
    legEnd[i] = ge;
    fEndLo[i] = end_and_port_at(d, fs[i], EndRef::VertexEnd, vs[i]).first;
  }
  auto smooth = [&](int fa, int fb) {  // keep fs[fa], fs[fb]; join legs through them
    Diagram out = d;
    out.detach_end(fs[fa], 0);
    out.detach_end(fs[fa], 1);
    out.detach_end(fs[fb], 0);
    out.detach_end(fs[fb], 1);
    for (int i = 0; i < 4; ++i)
      if (i != fa && i != fb) out.erase_edge(fs[i]);
    for (int i = 0; i < 4; ++i) out.detach_end(leg[i], legEnd[i]);
    for (int i = 0; i < 4; ++i) out.erase_vertex(vs[i]);
    Splicer sp(out);
    for (int i : {fa, fb}) {
      sp.join({leg[i], legEnd[i]}, {fs[i], fEndLo[i]});
      sp.join({fs[i], 1 - fEndLo[i]}, {leg[(i + 1) % 4], legEnd[(i + 1) % 4]});
    }
    return out;
  };
  return {{smooth(0, 2), kSquareFactorA}, {smooth(1, 3), kSquareFactorB}};
}

TermList surgery_crossing(const Diagram& d, const Redex& r) {
  const auto& slots = d.crossings[r.crossing].slots;
  int rot = -1;
  for (int i = 0; i < 4; ++i)
    if (slots[i].second == 1 && slots[(i + 1) % 4].second == 1) rot = i;
  if (rot < 0) throw Sl3Error(ErrorCode::PatternMismatch, "crossing lacks adjacent inflows");
  std::array<Half, 4> h;
  for (int i = 0; i < 4; ++i) h[i] = slots[(rot + i) % 4];

  Diagram sm = d;
  for (auto [e, end] : h) sm.detach_end(e, end);
  sm.erase_crossing(r.crossing);
  {
    Splicer sp(sm);
    sp.join(h[0], h[3]);
    sp.join(h[1], h[2]);
  }

  Diagram hw = d;
  for (auto [e, end] : h) hw.detach_end(e, end);
  hw.erase_crossing(r.crossing);
  int vb = hw.add_vertex(Color::Black);
  int vw = hw.add_vertex(Color::White);
  hw.attach_end(h[0].first, h[0].second, Diagram::at_vertex(vb, 0));
  hw.attach_end(h[1].first, h[1].second, Diagram::at_vertex(vb, 1));
  hw.attach_end(h[2].first, h[2].second, Diagram::at_vertex(vw, 0));
  hw.attach_end(h[3].first, h[3].second, Diagram::at_vertex(vw, 1));
  hw.add_edge(Diagram::at_vertex(vw, 2), Diagram::at_vertex(vb, 2));
  return {{std::move(sm), kSmoothingFactor}, {std::move(hw), kHFactor}};
}

TermList surgery_kink(const Diagram& d, const Redex& r) {
  int x = r.crossing, k = r.edges[0];
  const auto& slots = d.crossings[x].slots;
  std::vector<int> kPorts, through;
  for (int i = 0; i < 4; ++i) (slots[i].first == k ? kPorts : through).push_back(i);
  if (kPorts.size() != 2 || (kPorts[1] - kPorts[0] != 1 && !(kPorts[0] == 0 && kPorts[1] == 3)))
    throw Sl3Error(ErrorCode::PatternMismatch, "kink edge must occupy adjacent ports");
  Half u = slots[through[0]], w = slots[through[1]];
  Diagram out = d;
  out.detach_end(k, 0);
  out.detach_end(k, 1);
  out.detach_end(u.first, u.second);
  if (!(u == w)) out.detach_end(w.first, w.second);
  out.erase_edge(k);  // the kink face is an empty disk, so k carries no net cut word
  out.erase_crossing(x);
  Splicer sp(out);
  sp.join(u, w);
  return {{std::move(out), kKinkFactor}};
}

TermList surgery_parallel(const Diagram& d, const Redex& r) {
  int c1 = r.nodes[0], c2 = r.nodes[1];
  int m1 = r.edges[0], m2 = r.edges[1];
  auto [em1c1, pm1c1] = end_and_port_at(d, m1, EndRef::CrossingEnd, c1);
  auto [em1c2, pm1c2] = end_and_port_at(d, m1, EndRef::CrossingEnd, c2);
  auto [em2c1, pm2c1] = end_and_port_at(d, m2, EndRef::CrossingEnd, c1);
  auto [em2c2, pm2c2] = end_and_port_at(d, m2, EndRef::CrossingEnd, c2);
  Half uA = d.crossings[c1].slots[(pm1c1 + 2) % 4];
  Half uB = d.crossings[c1].slots[(pm2c1 + 2) % 4];
  Half wA = d.crossings[c2].slots[(pm1c2 + 2) % 4];
  Half wB = d.crossings[c2].slots[(pm2c2 + 2) % 4];
  Diagram out = d;
  std::set<Half> todo;
  for (int c : {c1, c2})
    for (auto s : out.crossings[c].slots) todo.insert(s);
  for (auto [e, end] : todo) out.detach_end(e, end);
  out.erase_crossing(c1);
  out.erase_crossing(c2);
  Splicer sp(out);
  sp.join(uA, {m1, em1c1});
  sp.join({m1, em1c2}, wA);
  sp.join(uB, {m2, em2c1});
  sp.join({m2, em2c2}, wB);
  return {{std::move(out), kParallelFactor}};
}

TermList surgery_untwist(const Diagram& d, const Redex& r) {
  int x = r.nodes[1];  // verified NCrossing by the caller
  int m1 = r.edges[0], m2 = r.edges[1];
  auto [em1x, pm1] = end_and_port_at(d, m1, EndRef::CrossingEnd, x);
  auto [em2x, pm2] = end_and_port_at(d, m2, EndRef::CrossingEnd, x);
  Half u1 = d.crossings[x].slots[(pm1 + 2) % 4];
  Half u2 = d.crossings[x].slots[(pm2 + 2) % 4];
  Diagram out = d;
  std::set<Half> todo(out.crossings[x].slots.begin(), out.crossings[x].slots.end());
  for (auto [e, end] : todo) out.detach_end(e, end);
  out.erase_crossing(x);
  Splicer sp(out);
  sp.join({m1, em1x}, u2);
  sp.join({m2, em2x}, u1);
  return {{std::move(out), kUntwistFactor}};
}

TermList surgery_slide(const Diagram& d, const Redex& r) {
  // Corner k of the triangle face: old crossing n[k]; walking the face, the
  // strand arrives along t[k-1] and leaves along t[k]. Outer ports: aPort[k]
  // next to the incoming triangle edge, bPort[k] opposite it. The through
  // strands connect outer A_k to outer B_{k+1}; the rewrite rebuilds the
  // triangle on the other side with the crossing order along each strand
  // reversed.
  std::array<int, 3> n{}, t{}, inPort{}, aPort{}, bPort{};
  for (int k = 0; k < 3; ++k) {
    n[k] = r.nodes[k];
    t[k] = r.edges[k];
  }
  int offset = -1;
  for (int k = 0; k < 3; ++k) {
    auto [inEnd, ip] = end_and_port_at(d, t[(k + 2) % 3], EndRef::CrossingEnd, n[k]);
    auto [outEnd, op] = end_and_port_at(d, t[k], EndRef::CrossingEnd, n[k]);
    (void)inEnd;
    (void)outEnd;
    int off = ((op - ip) % 4 + 4) % 4;
    if (off != 1 && off != 3)
      throw Sl3Error(ErrorCode::PatternMismatch, "triangle edges not adjacent at a corner");
    if (offset < 0) offset = off;
    if (off != offset)
      throw Sl3Error(ErrorCode::PatternMismatch, "inconsistent face orientation");
    inPort[k] = ip;
    aPort[k] = (ip + (offset == 3 ? 1 : 3)) % 4;
    bPort[k] = (ip + 2) % 4;
  }
  std::array<Half, 3> aH, bH;
  for (int k = 0; k < 3; ++k) {
    aH[k] = d.crossings[n[k]].slots[aPort[k]];
    bH[k] = d.crossings[n[k]].slots[bPort[k]];
  }

  Diagram out = d;
  std::set<Half> todo;
  for (int k = 0; k < 3; ++k)
    for (auto s : out.crossings[n[k]].slots) todo.insert(s);
  for (auto [e, end] : todo) out.detach_end(e, end);
  for (int k = 0; k < 3; ++k) out.erase_edge(t[k]);  // plug-free by detection
  for (int k = 0; k < 3; ++k) out.erase_crossing(n[k]);

  std::array<int, 3> m{};
  for (int k = 0; k < 3; ++k) m[k] = out.add_crossing();
  // New crossing m[k] clockwise ports: (A_k, s_{k+1}, s_k, B_{k-1}), mirrored
  // when the face walk runs the other way.
  auto slotOfA = [&](int) { return 0; };
  auto slotOfSNext = [&](int) { return offset == 3 ? 1 : 3; };
  auto slotOfS = [&](int) { return 2; };
  auto slotOfB = [&](int) { return offset == 3 ? 3 : 1; };
  for (int k = 0; k < 3; ++k) {
    out.attach_end(aH[k].first, aH[k].second, Diagram::at_crossing(m[k], slotOfA(k)));
    out.attach_end(bH[k].first, bH[k].second, Diagram::at_crossing(m[(k + 1) % 3], slotOfB(k)));
  }
  for (int k = 0; k < 3; ++k) {
    // segment s_k of the strand through A_k: departs m[k] iff A_k flows in.
    EndRef atMk = Diagram::at_crossing(m[k], slotOfS(k));
    EndRef atMprev = Diagram::at_crossing(m[(k + 2) % 3], slotOfSNext(k));
    if (aH[k].second == 1)
      out.add_edge(atMk, atMprev);
    else
      out.add_edge(atMprev, atMk);
  }
  return {{std::move(out), kSlideFactor}};
}

std::tuple<int, int, long> measure(const Diagram& d) {
  return {d.count_crossings(), d.count_vertices(), d.count_loops() + d.freeLoops};
}

}  // namespace

std::vector<Redex> find_redexes(const Diagram& d, bool includeYangBaxter) {
  return find_redexes_impl(d, includeYangBaxter);
}

WebCombination apply_rule(const Diagram& d, const Redex& r) {
  auto sites = find_redexes_impl(d, true);
  const Redex* found = nullptr;
  for (const auto& s : sites)
    if (same_site(s, r)) {
      found = &s;
      break;
    }
  if (!found)
    throw Sl3Error(ErrorCode::PatternMismatch,
                   "no matching rewrite site: " + to_string(r));

  TermList parts;
  switch (found->rule) {
    case RuleId::CrossingResolution: parts = surgery_crossing(d, *found); break;
    case RuleId::LoopRemoval: parts = surgery_loop(d, *found); break;
    case RuleId::BigonRemoval: parts = surgery_bigon(d, *found); break;
    case RuleId::BoundaryBigon: parts = {}; break;
    case RuleId::SquareRemoval: parts = surgery_square(d, *found); break;
    case RuleId::YangBaxterA: parts = surgery_slide(d, *found); break;
    case RuleId::YangBaxterB: parts = surgery_kink(d, *found); break;
    case RuleId::YangBaxterC: parts = surgery_parallel(d, *found); break;
    case RuleId::YangBaxterD:
    case RuleId::YangBaxterE: parts = surgery_untwist(d, *found); break;
  }

  WebCombination out(d.ctx);
  for (auto& [web, coeff] : parts) {
    Violations v = web.validate();
    if (!v.empty())
      throw Sl3Error(ErrorCode::BadConfiguration,
                     "rewrite produced an invalid diagram: " + v.front().message);
    out.add(web, coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flattening
// ---------------------------------------------------------------------------

namespace {

WebCombination flatten_impl(const Diagram& d0, std::mt19937_64* rng) {
  WebCombination out(d0.ctx);
  std::map<std::string, WebCombination::Term> work;
  auto push = [&](Diagram w, long long c) {
    if (c == 0) return;
    w.normalize();
    std::string key = WebCombination::key_of(w);
    auto it = work.find(key);
    if (it == work.end()) {
      work.emplace(std::move(key), WebCombination::Term{std::move(w), c});
    } else {
      it->second.coeff += c;
      if (it->second.coeff == 0) work.erase(it);
    }
  };
  push(d0, 1);

  while (!work.empty()) {
    auto it = work.begin();
    if (rng) {
      std::uniform_int_distribution<size_t> pick(0, work.size() - 1);
      std::advance(it, pick(*rng));
    }
    WebCombination::Term t = std::move(it->second);
    work.erase(it);

    auto sites = find_redexes_impl(t.web, false);
    if (sites.empty()) {
      if (!t.web.crossing_free() || !is_non_elliptic(t.web))
        throw Sl3Error(ErrorCode::NormalizationStuck,
                       "no rewrite applies but the web is not reduced");
      out.add(t.web, t.coeff);
      continue;
    }
    size_t which = 0;
    if (rng) {
      std::uniform_int_distribution<size_t> pick(0, sites.size() - 1);
      which = pick(*rng);
    }
    auto before = measure(t.web);
    WebCombination step = apply_rule(t.web, sites[which]);
    for (const auto& [k, term] : step.terms()) {
      if (!(measure(term.web) < before))
        throw Sl3Error(ErrorCode::NormalizationStuck,
                       "rewrite failed to decrease the termination measure");
      push(term.web, term.coeff * t.coeff);
    }
  }
  return out;
}

}  // namespace

WebCombination flatten(const Diagram& d) { return flatten_impl(d, nullptr); }

WebCombination flatten(const Diagram& d, uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x51d3eb01ULL);
  return flatten_impl(d, &rng);
}

bool confluence_check(const Diagram& d, int trials, uint64_t seed) {
  WebCombination base = flatten(d);
  for (int i = 0; i < trials; ++i)
    if (flatten(d, seed + (uint64_t)i) != base) return false;
  return true;
}

WebCombination skein_multiply(const WebCombination& a, const WebCombination& b) {
  if (a.context() != b.context())
    throw Sl3Error(ErrorCode::TypeMismatch, "factors live on different surfaces");
  WebCombination out(a.context());
  for (const auto& [ka, ta] : a.terms())
    for (const auto& [kb, tb] : b.terms()) {
      WebCombination prod = flatten(superpose(ta.web, tb.web));
      out.add(prod, ta.coeff * tb.coeff);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Random webs
// ---------------------------------------------------------------------------

Diagram random_diagram(SurfacePtr ctx, uint64_t seed, int maxVertices) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  auto pick = [&](int n) { return (int)(rng() % (uint64_t)n); };

  std::vector<int> whites, blacks;
  for (int p = 0; p < ctx->nPoints; ++p)
    (ctx->pointColor[p] == Color::White ? whites : blacks).push_back(p);
  int nCuts = (int)ctx->cuts.cuts.size();

  Diagram d(ctx);
  int vertexBudget = maxVertices;
  int pieces = 2 + pick(3);
  for (int step = 0; step < pieces; ++step) {
    Diagram prim(ctx);
    int kind = pick(4);
    try {
      if (kind == 0 && !whites.empty() && !blacks.empty()) {
        std::vector<TraceStep> tr;
        if (nCuts > 0 && pick(2) == 0) tr.push_back({pick(nCuts), pick(2) == 0, -1});
        prim.add_edge(Diagram::at_point(whites[pick((int)whites.size())]),
                      Diagram::at_point(blacks[pick((int)blacks.size())]), tr);
      } else if (kind == 1 && !blacks.empty() && vertexBudget >= 1) {
        int w = prim.add_vertex(Color::White);
        for (int i = 0; i < 3; ++i)
          prim.add_edge(Diagram::at_vertex(w, i),
                        Diagram::at_point(blacks[pick((int)blacks.size())]));
        --vertexBudget;
      } else if (kind == 2 && !whites.empty() && vertexBudget >= 1) {
        int b = prim.add_vertex(Color::Black);
        for (int i = 0; i < 3; ++i)
          prim.add_edge(Diagram::at_point(whites[pick((int)whites.size())]),
                        Diagram::at_vertex(b, i));
        --vertexBudget;
      } else if (nCuts > 0) {
        prim.add_loop({{pick(nCuts), pick(2) == 0, -1}});
      } else {
        prim.add_loop({});
      }
      if (!prim.validate().empty()) continue;
      Diagram next = insert_diagram(d, prim, false);
      if (next.validate().empty()) d = std::move(next);
    } catch (const Sl3Error&) {
      continue;  // infeasible primitive for this surface; try another
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Rule selftest against the evaluation oracle
// ---------------------------------------------------------------------------

namespace {

SurfacePtr selftest_ctx(int genus, const std::vector<std::string>& comps) {
  MarkedSurface s;
  s.genus = genus;
  for (const auto& word : comps) {
    BoundaryComponent bc;
    for (char ch : word) bc.colors.push_back(ch == 'B' ? Color::Black : Color::White);
    s.components.push_back(bc);
  }
  return SurfaceContext::make(s);
}

// Fixture factory: returns a valid diagram containing the requested pattern,
// randomized by rng, or nullopt when the sampled variant fails to embed.
using Factory = std::function<std::optional<Diagram>(std::mt19937_64&)>;

std::optional<Diagram> checked(Diagram d) {
  if (!d.validate().empty()) return std::nullopt;
  return d;
}

std::vector<TraceStep> random_wrap(std::mt19937_64& rng, int nCuts) {
  if (nCuts == 0 || rng() % 2) return {};
  return {{(int)(rng() % nCuts), rng() % 2 == 0, -1}};
}

std::optional<Diagram> bigon_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"WBB", "B"});
  Diagram d(ctx);
  int v = d.add_vertex(Color::Black);
  int w = d.add_vertex(Color::White);
  std::vector<TraceStep> face = random_wrap(rng, 1);
  try {
    d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0), random_wrap(rng, 1));
    d.add_edge(Diagram::at_vertex(w, 1), Diagram::at_vertex(v, 2), face);
    d.add_edge(Diagram::at_vertex(w, 2), Diagram::at_vertex(v, 1), face);
    d.add_edge(Diagram::at_vertex(w, 0), Diagram::at_point(rng() % 2 ? 1 : 2),
               random_wrap(rng, 1));
    if (rng() % 3 == 0) d.add_loop({{0, rng() % 2 == 0, -1}});
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

std::optional<Diagram> boundary_bigon_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"WW", "B"});
  Diagram d(ctx);
  int v = d.add_vertex(Color::Black);
  std::vector<TraceStep> face = random_wrap(rng, 1);
  try {
    d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 0), face);
    d.add_edge(Diagram::at_point(0), Diagram::at_vertex(v, 1), face);
    d.add_edge(Diagram::at_point(1), Diagram::at_vertex(v, 2), random_wrap(rng, 1));
    if (rng() % 3 == 0) d.add_loop({{0, rng() % 2 == 0, -1}});
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

std::optional<Diagram> square_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"WBWBB", "B"});
  Diagram d(ctx);
  int b1 = d.add_vertex(Color::Black);
  int wA = d.add_vertex(Color::White);
  int b2 = d.add_vertex(Color::Black);
  int wB = d.add_vertex(Color::White);
  std::vector<TraceStep> face = rng() % 3 == 0 ? random_wrap(rng, 1) : std::vector<TraceStep>{};
  try {
    d.add_edge(Diagram::at_point(0), Diagram::at_vertex(b1, 0), random_wrap(rng, 1));
    d.add_edge(Diagram::at_vertex(wA, 0), Diagram::at_point(1), random_wrap(rng, 1));
    d.add_edge(Diagram::at_point(2), Diagram::at_vertex(b2, 0), random_wrap(rng, 1));
    d.add_edge(Diagram::at_vertex(wB, 0), Diagram::at_point(3), random_wrap(rng, 1));
    d.add_edge(Diagram::at_vertex(wA, 2), Diagram::at_vertex(b1, 1), face);
    d.add_edge(Diagram::at_vertex(wA, 1), Diagram::at_vertex(b2, 2), face);
    d.add_edge(Diagram::at_vertex(wB, 2), Diagram::at_vertex(b2, 1), face);
    d.add_edge(Diagram::at_vertex(wB, 1), Diagram::at_vertex(b1, 2), face);
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

std::optional<Diagram> loop_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"B", "B"});
  Diagram d(ctx);
  switch (rng() % 3) {
    case 0: d.add_loop({}); break;
    case 1: {
      bool s = rng() % 2 == 0;
      d.add_loop({{0, s, -1}, {0, !s, -1}});  // finger poking across the cut
      break;
    }
    default: {
      d.add_loop({});
      d.add_loop({{0, rng() % 2 == 0, -1}});  // plus a non-contractible bystander
      break;
    }
  }
  return checked(std::move(d));
}

std::optional<Diagram> crossing_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"WWBB", "B"});
  // Two strands forced to cross by their endpoints; superposition routes them.
  Diagram d1(ctx), d2(ctx);
  try {
    d1.add_edge(Diagram::at_point(0), Diagram::at_point(2), random_wrap(rng, 1));
    d2.add_edge(Diagram::at_point(1), Diagram::at_point(3), random_wrap(rng, 1));
    Diagram s = superpose(d1, d2);
    if (s.count_crossings() == 0) return std::nullopt;
    return checked(std::move(s));
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
}

std::optional<Diagram> kink_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"WBB", "B"});
  Diagram d(ctx);
  int x = d.add_crossing();
  bool flip = rng() % 2 == 0;
  try {
    if (flip) {
      d.add_edge(Diagram::at_crossing(x, 1), Diagram::at_crossing(x, 0));
      d.add_edge(Diagram::at_crossing(x, 2), Diagram::at_point(1), random_wrap(rng, 1));
      d.add_edge(Diagram::at_point(0), Diagram::at_crossing(x, 3), random_wrap(rng, 1));
    } else {
      d.add_edge(Diagram::at_crossing(x, 0), Diagram::at_crossing(x, 1));
      d.add_edge(Diagram::at_crossing(x, 3), Diagram::at_point(1), random_wrap(rng, 1));
      d.add_edge(Diagram::at_point(0), Diagram::at_crossing(x, 2), random_wrap(rng, 1));
    }
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

std::optional<Diagram> parallel_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"WWBB", "B"});
  Diagram d(ctx);
  int x1 = d.add_crossing();
  int x2 = d.add_crossing();
  try {
    d.add_edge(Diagram::at_point(0), Diagram::at_crossing(x1, 0), random_wrap(rng, 1));
    d.add_edge(Diagram::at_point(1), Diagram::at_crossing(x1, 1), random_wrap(rng, 1));
    d.add_edge(Diagram::at_crossing(x1, 2), Diagram::at_crossing(x2, 0));
    d.add_edge(Diagram::at_crossing(x1, 3), Diagram::at_crossing(x2, 3));
    d.add_edge(Diagram::at_crossing(x2, 1), Diagram::at_point(2), random_wrap(rng, 1));
    d.add_edge(Diagram::at_crossing(x2, 2), Diagram::at_point(3), random_wrap(rng, 1));
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

std::optional<Diagram> untwist_fixture(std::mt19937_64& rng, Color vertexColor) {
  auto ctx = selftest_ctx(0, {vertexColor == Color::White ? "BBB" : "WWW", "B"});
  Diagram d(ctx);
  int v = d.add_vertex(vertexColor);
  int x = d.add_crossing();
  bool white = vertexColor == Color::White;
  auto vSlot = [&](int i) { return Diagram::at_vertex(v, i); };
  auto xSlot = [&](int i) { return Diagram::at_crossing(x, i); };
  try {
    if (white) {
      d.add_edge(vSlot(0), Diagram::at_point(0), random_wrap(rng, 1));
      d.add_edge(vSlot(2), xSlot(0));
      d.add_edge(vSlot(1), xSlot(1));
      d.add_edge(xSlot(2), Diagram::at_point(1), random_wrap(rng, 1));
      d.add_edge(xSlot(3), Diagram::at_point(2), random_wrap(rng, 1));
    } else {
      d.add_edge(Diagram::at_point(0), vSlot(0), random_wrap(rng, 1));
      d.add_edge(xSlot(0), vSlot(2));
      d.add_edge(xSlot(1), vSlot(1));
      d.add_edge(Diagram::at_point(1), xSlot(2), random_wrap(rng, 1));
      d.add_edge(Diagram::at_point(2), xSlot(3), random_wrap(rng, 1));
    }
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

std::optional<Diagram> slide_fixture(std::mt19937_64& rng) {
  auto ctx = selftest_ctx(0, {"BWBWBWW", "B"});
  Diagram d(ctx);
  int c1 = d.add_crossing();
  int c2 = d.add_crossing();
  int c3 = d.add_crossing();
  try {
    // three strands pairwise crossing once, triangle face in the middle
    d.add_edge(Diagram::at_point(5), Diagram::at_crossing(c1, 3), random_wrap(rng, 1));
    d.add_edge(Diagram::at_crossing(c1, 1), Diagram::at_crossing(c2, 0));
    d.add_edge(Diagram::at_crossing(c2, 2), Diagram::at_point(2), random_wrap(rng, 1));
    d.add_edge(Diagram::at_point(1), Diagram::at_crossing(c2, 1), random_wrap(rng, 1));
    d.add_edge(Diagram::at_crossing(c2, 3), Diagram::at_crossing(c3, 1));
    d.add_edge(Diagram::at_crossing(c3, 3), Diagram::at_point(4), random_wrap(rng, 1));
    d.add_edge(Diagram::at_point(3), Diagram::at_crossing(c3, 2), random_wrap(rng, 1));
    d.add_edge(Diagram::at_crossing(c3, 0), Diagram::at_crossing(c1, 2));
    d.add_edge(Diagram::at_crossing(c1, 0), Diagram::at_point(0), random_wrap(rng, 1));
  } catch (const Sl3Error&) {
    return std::nullopt;
  }
  return checked(std::move(d));
}

}  // namespace

std::map<std::string, int> skein_selftest(uint64_t seed, int minCasesPerRule) {
  std::map<std::string, int> counts;
  std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 7);

  struct Entry {
    RuleId rule;
    Factory make;
  };
  std::vector<Entry> entries = {
      {RuleId::CrossingResolution, crossing_fixture},
      {RuleId::LoopRemoval, loop_fixture},
      {RuleId::BigonRemoval, bigon_fixture},
      {RuleId::BoundaryBigon, boundary_bigon_fixture},
      {RuleId::SquareRemoval, square_fixture},
      {RuleId::YangBaxterA, slide_fixture},
      {RuleId::YangBaxterB, kink_fixture},
      {RuleId::YangBaxterC, parallel_fixture},
      {RuleId::YangBaxterD,
       [](std::mt19937_64& g) { return untwist_fixture(g, Color::White); }},
      {RuleId::YangBaxterE,
       [](std::mt19937_64& g) { return untwist_fixture(g, Color::Black); }},
  };

  for (const auto& entry : entries) {
    int done = 0, attempts = 0;
    while (done < minCasesPerRule) {
      if (++attempts > 60 * minCasesPerRule)
        throw Sl3Error(ErrorCode::BadConfiguration,
                       std::string("could not build enough fixtures for ") +
                           rule_name(entry.rule));
      auto fx = entry.make(rng);
      if (!fx) continue;
      auto sites = find_redexes(*fx, true);
      const Redex* site = nullptr;
      for (const auto& s : sites)
        if (s.rule == entry.rule) {
          site = &s;
          break;
        }
      if (!site) continue;

      auto before = measure(*fx);
      WebCombination rhs = apply_rule(*fx, *site);
      if (is_reduction_rule(entry.rule)) {
        for (const auto& [k, t] : rhs.terms())
          if (!(measure(t.web) < before))
            throw Sl3Error(ErrorCode::NormalizationStuck,
                           std::string(rule_name(entry.rule)) +
                               " failed to decrease the termination measure");
      }
      if (entry.rule == RuleId::YangBaxterA) {
        for (const auto& [k, t] : rhs.terms())
          if (t.web.count_crossings() != fx->count_crossings())
            throw Sl3Error(ErrorCode::BadConfiguration,
                           "slide move changed the crossing count");
      }
      DiagramCombination lhs{{*fx, 1}};
      EqualityConfidence conf;
      if (!semantically_equal(lhs, rhs.to_terms(), &conf))
        throw Sl3Error(ErrorCode::BadConfiguration,
                       std::string("rewrite rule failed its evaluation oracle: ") +
                           rule_name(entry.rule) + " on " + to_string(*site));
      ++done;
      ++counts[rule_name(entry.rule)];
    }
  }
  return counts;
}

}  // namespace sl3web
