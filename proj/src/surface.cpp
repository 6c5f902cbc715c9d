#include "sl3web/surface.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sl3web {

std::tuple<int, int, int> surface_type(const MarkedSurface& s) {
  int a = 0, b = 0;
  for (const auto& comp : s.components)
    for (Color c : comp.colors) (c == Color::White ? a : b)++;
  int c = 2 * s.genus - 1 + (int)s.components.size();
  return {a, b, c};
}

Violations validate_surface(const MarkedSurface& s) {
  Violations v;
  if (s.genus < 0) v.push_back({"surface", "negative genus"});
  if (s.components.empty()) v.push_back({"surface", "no boundary components"});
  for (size_t i = 0; i < s.components.size(); ++i) {
    const auto& colors = s.components[i].colors;
    std::string where = "component " + std::to_string(i);
    if (colors.empty()) {
      v.push_back({where, "carries no marked points"});
      continue;
    }
    bool hasEqualAdjacent = false;
    for (size_t j = 0; j < colors.size(); ++j)
      if (colors[j] == colors[(j + 1) % colors.size()]) hasEqualAdjacent = true;
    if (!hasEqualAdjacent) v.push_back({where, "colors alternate along the component"});
  }
  return v;
}

CutSystem canonical_cuts(const MarkedSurface& s) {
  CutSystem cs;
  int k = (int)s.components.size();
  if (k == 0) return cs;
  int lastGap0 = std::max(0, (int)s.components[0].colors.size() - 1);
  int rank = 0;
  for (int j = 1; j < k; ++j) {
    int lastGapJ = std::max(0, (int)s.components[j].colors.size() - 1);
    cs.cuts.push_back(Cut{{0, lastGap0, rank++}, {j, lastGapJ, 0}});
  }
  for (int h = 0; h < s.genus; ++h) {
    int base = rank;
    cs.cuts.push_back(Cut{{0, lastGap0, base + 0}, {0, lastGap0, base + 2}});
    cs.cuts.push_back(Cut{{0, lastGap0, base + 1}, {0, lastGap0, base + 3}});
    rank += 4;
  }
  return cs;
}

namespace {

struct SlotRef {
  int comp = -1;
  int idx = -1;
  bool operator==(const SlotRef& o) const { return comp == o.comp && idx == o.idx; }
};

}  // namespace

PolygonPresentation unfold(const MarkedSurface& s, const CutSystem& cuts) {
  auto [a, b, c] = surface_type(s);
  (void)a;
  (void)b;
  int k = (int)s.components.size();
  if ((int)cuts.cuts.size() != c)
    throw Sl3Error(ErrorCode::NotADisk, "cut count " + std::to_string(cuts.cuts.size()) +
                                            " differs from required c = " + std::to_string(c));

  // Global point ids, component-major in walk order.
  std::vector<std::vector<int>> compPoints(k);
  int nPoints = 0;
  for (int i = 0; i < k; ++i)
    for (size_t j = 0; j < s.components[i].colors.size(); ++j) compPoints[i].push_back(nPoints++);

  if (c == 0) {
    if (k != 1 || s.genus != 0)
      throw Sl3Error(ErrorCode::NotADisk, "zero cuts only cut a disk open");
    PolygonPresentation poly;
    Side side;
    side.component = 0;
    side.points = compPoints[0];
    poly.sides.push_back(side);
    return poly;
  }

  // Attachment validation and per-gap buckets.
  std::set<std::tuple<int, int, int>> seen;
  std::vector<std::vector<std::vector<std::pair<int, std::pair<int, bool>>>>> gapEnds(k);
  for (int i = 0; i < k; ++i) gapEnds[i].resize(std::max<size_t>(1, s.components[i].colors.size()));
  for (size_t ci = 0; ci < cuts.cuts.size(); ++ci) {
    for (int end = 0; end < 2; ++end) {
      const CutEnd& e = end == 0 ? cuts.cuts[ci].from : cuts.cuts[ci].to;
      if (e.component < 0 || e.component >= k)
        throw Sl3Error(ErrorCode::BadAttachment, "cut " + std::to_string(ci) + ": bad component");
      int m = (int)s.components[e.component].colors.size();
      if (e.gap < 0 || e.gap >= std::max(1, m))
        throw Sl3Error(ErrorCode::BadAttachment, "cut " + std::to_string(ci) + ": bad gap");
      if (e.rank < 0) throw Sl3Error(ErrorCode::BadAttachment, "cut " + std::to_string(ci) + ": bad rank");
      if (!seen.insert({e.component, e.gap, e.rank}).second)
        throw Sl3Error(ErrorCode::BadAttachment,
                       "two cut endpoints share component/gap/rank on cut " + std::to_string(ci));
      gapEnds[e.component][e.gap].push_back({e.rank, {(int)ci, end == 0}});
    }
  }

  // Slot lists per component: point 0, gap-0 endpoints by rank, point 1, ...
  std::vector<std::vector<Slot>> slots(k);
  std::map<std::pair<int, bool>, SlotRef> endpointSlot;  // (cut, isFrom) -> slot
  for (int i = 0; i < k; ++i) {
    int m = (int)s.components[i].colors.size();
    for (int j = 0; j < std::max(1, m); ++j) {
      if (j < m) {
        Slot sp;
        sp.is_point = true;
        sp.point = compPoints[i][j];
        slots[i].push_back(sp);
      }
      auto bucket = gapEnds[i][j];
      std::sort(bucket.begin(), bucket.end());
      for (const auto& [rank, ce] : bucket) {
        Slot se;
        se.cut = ce.first;
        se.is_from = ce.second;
        endpointSlot[{ce.first, ce.second}] = {i, (int)slots[i].size()};
        slots[i].push_back(se);
      }
    }
  }

  auto succ = [&](SlotRef r) -> SlotRef {
    return {r.comp, (int)((r.idx + 1) % slots[r.comp].size())};
  };
  auto mate = [&](const Slot& sl) -> SlotRef {
    return endpointSlot.at({sl.cut, !sl.is_from});
  };

  // Canonical start: successor of the first endpoint slot in global order.
  SlotRef firstEp{-1, -1};
  for (int i = 0; i < k && firstEp.comp < 0; ++i)
    for (size_t j = 0; j < slots[i].size(); ++j)
      if (!slots[i][j].is_point) {
        firstEp = {i, (int)j};
        break;
      }
  // c >= 1 guarantees at least one endpoint exists somewhere.
  SlotRef start = succ(firstEp);

  PolygonPresentation poly;
  std::set<std::pair<int, int>> arrived;
  SlotRef pos = start;
  do {
    Side seg;
    while (slots[pos.comp][pos.idx].is_point) {
      seg.points.push_back(slots[pos.comp][pos.idx].point);
      pos = succ(pos);
    }
    const Slot& e = slots[pos.comp][pos.idx];
    seg.component = pos.comp;
    poly.sides.push_back(seg);
    if (!arrived.insert({pos.comp, pos.idx}).second)
      throw Sl3Error(ErrorCode::NotADisk, "walk revisited a cut endpoint");
    Side cutSide;
    cutSide.is_cut = true;
    cutSide.cut = e.cut;
    cutSide.with_direction = e.is_from;
    poly.sides.push_back(cutSide);
    pos = succ(mate(e));
  } while (!(pos == start));

  if ((int)arrived.size() != 2 * c)
    throw Sl3Error(ErrorCode::NotADisk, "cut walk closed after " + std::to_string(arrived.size()) +
                                            " of " + std::to_string(2 * c) + " cut banks");
  for (int i = 0; i < k; ++i) {
    bool touched = false;
    for (const Slot& sl : slots[i])
      if (!sl.is_point) touched = true;
    if (!touched)
      throw Sl3Error(ErrorCode::NotADisk, "component " + std::to_string(i) + " meets no cut");
  }
  return poly;
}

int SurfaceContext::nextPoint(int pid) const {
  auto [comp, idx] = pointCompIdx[pid];
  int m = (int)compPoints[comp].size();
  return compPoints[comp][(idx + 1) % m];
}

int SurfaceContext::prevPoint(int pid) const {
  auto [comp, idx] = pointCompIdx[pid];
  int m = (int)compPoints[comp].size();
  return compPoints[comp][(idx + m - 1) % m];
}

int SurfaceContext::numberingNext(int pid) const {
  auto [comp, idx] = pointCompIdx[pid];
  return surface.components[comp].reversed ? prevPoint(pid) : nextPoint(pid);
}

int SurfaceContext::numberingIndex(int pid) const {
  auto [comp, idx] = pointCompIdx[pid];
  int m = (int)compPoints[comp].size();
  return surface.components[comp].reversed ? (m - idx) % m : idx;
}

std::shared_ptr<const SurfaceContext> SurfaceContext::make(const MarkedSurface& s,
                                                           const CutSystem& cuts) {
  Violations v = validate_surface(s);
  if (!v.empty()) {
    std::string msg = "invalid surface:";
    for (const auto& viol : v) msg += " [" + viol.where + ": " + viol.message + "]";
    throw Sl3Error(ErrorCode::Unvalidated, msg);
  }
  auto ctx = std::make_shared<SurfaceContext>();
  ctx->surface = s;
  ctx->cuts = cuts;
  ctx->polygon = unfold(s, cuts);
  std::tie(ctx->a, ctx->b, ctx->c) = surface_type(s);

  int k = (int)s.components.size();
  ctx->compPoints.resize(k);
  for (int i = 0; i < k; ++i) {
    for (size_t j = 0; j < s.components[i].colors.size(); ++j) {
      int pid = ctx->nPoints++;
      ctx->compPoints[i].push_back(pid);
      ctx->pointCompIdx.emplace_back(i, (int)j);
      ctx->pointColor.push_back(s.components[i].colors[j]);
    }
  }
  for (int pid = 0; pid < ctx->nPoints; ++pid) {
    auto [comp, idx] = ctx->pointCompIdx[pid];
    ctx->pointLabel.push_back("p" + std::to_string(comp) + "." +
                              std::to_string(ctx->numberingIndex(pid)));
  }

  // Rebuild slot tables exactly as unfold does.
  std::vector<std::vector<std::vector<std::pair<int, std::pair<int, bool>>>>> gapEnds(k);
  for (int i = 0; i < k; ++i) gapEnds[i].resize(std::max<size_t>(1, s.components[i].colors.size()));
  for (size_t ci = 0; ci < cuts.cuts.size(); ++ci)
    for (int end = 0; end < 2; ++end) {
      const CutEnd& e = end == 0 ? cuts.cuts[ci].from : cuts.cuts[ci].to;
      gapEnds[e.component][e.gap].push_back({e.rank, {(int)ci, end == 0}});
    }
  ctx->slots.resize(k);
  ctx->slotOfPoint.resize(ctx->nPoints);
  for (int i = 0; i < k; ++i) {
    int m = (int)s.components[i].colors.size();
    for (int j = 0; j < std::max(1, m); ++j) {
      if (j < m) {
        Slot sp;
        sp.is_point = true;
        sp.point = ctx->compPoints[i][j];
        ctx->slotOfPoint[sp.point] = {i, (int)ctx->slots[i].size()};
        ctx->slots[i].push_back(sp);
      }
      auto bucket = gapEnds[i][j];
      std::sort(bucket.begin(), bucket.end());
      for (const auto& [rank, ce] : bucket) {
        Slot se;
        se.cut = ce.first;
        se.is_from = ce.second;
        ctx->slots[i].push_back(se);
      }
    }
  }

  ctx->sideWith.assign(cuts.cuts.size(), -1);
  ctx->sideAgainst.assign(cuts.cuts.size(), -1);
  ctx->segSideOfPoint.assign(ctx->nPoints, -1);
  ctx->posInSide.assign(ctx->nPoints, -1);
  for (size_t si = 0; si < ctx->polygon.sides.size(); ++si) {
    const Side& side = ctx->polygon.sides[si];
    if (side.is_cut) {
      (side.with_direction ? ctx->sideWith : ctx->sideAgainst)[side.cut] = (int)si;
    } else {
      for (size_t p = 0; p < side.points.size(); ++p) {
        ctx->segSideOfPoint[side.points[p]] = (int)si;
        ctx->posInSide[side.points[p]] = (int)p;
      }
    }
  }
  return ctx;
}

std::shared_ptr<const SurfaceContext> SurfaceContext::make(const MarkedSurface& s) {
  return make(s, canonical_cuts(s));
}

}  // namespace sl3web
