#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "sl3web/common.hpp"

namespace sl3web {

enum class Color : uint8_t { Black = 0, White = 1 };

inline Color opposite(Color c) { return c == Color::Black ? Color::White : Color::Black; }

// Marked points listed in walk order: the direction along the boundary that
// keeps the surface on the right. `reversed` flips the user-facing numbering
// (labels only; all combinatorial data stays in walk order).
struct BoundaryComponent {
  std::vector<Color> colors;
  bool reversed = false;
};

struct MarkedSurface {
  int genus = 0;
  std::vector<BoundaryComponent> components;
};

// (a, b, c) = (#white, #black, 2*genus - 1 + #components)
std::tuple<int, int, int> surface_type(const MarkedSurface& s);

Violations validate_surface(const MarkedSurface& s);

// Attachment at an unmarked boundary point: in `gap` g (between walk-order
// points g and g+1 of the component, cyclically), at position `rank` among
// the attachments sharing that gap (increasing along the walk).
struct CutEnd {
  int component = 0;
  int gap = 0;
  int rank = 0;
};

// Directed simple arc between unmarked boundary points.
struct Cut {
  CutEnd from, to;
};

struct CutSystem {
  std::vector<Cut> cuts;
};

// Default cut system: (k-1) component-joining cuts from component 0 plus
// 2*genus handle cuts, all stacked in component 0's last gap.
CutSystem canonical_cuts(const MarkedSurface& s);

// One side of the cut-open polygon, in walk order around the disk.
struct Side {
  bool is_cut = false;
  // Boundary segment data:
  int component = -1;
  std::vector<int> points;  // global point ids, in walk order
  // Cut side data:
  int cut = -1;
  bool with_direction = false;  // traversed from->to?
};

struct PolygonPresentation {
  std::vector<Side> sides;
};

// Cuts the surface open along the cut system. Throws NotADisk if the walk
// does not close into a single face covering everything, BadAttachment on
// malformed attachments.
PolygonPresentation unfold(const MarkedSurface& s, const CutSystem& cuts);

// A slot is a stop on the boundary walk of one component: either a marked
// point or a cut endpoint.
struct Slot {
  bool is_point = false;
  int point = -1;  // global point id
  int cut = -1;
  bool is_from = false;
};

// Immutable bundle of a validated surface, cut system and polygon, with
// lookup tables. Everything downstream holds one of these by shared_ptr.
struct SurfaceContext {
  MarkedSurface surface;
  CutSystem cuts;
  PolygonPresentation polygon;

  int a = 0, b = 0, c = 0;
  int nPoints = 0;
  std::vector<std::pair<int, int>> pointCompIdx;  // id -> (component, walk index)
  std::vector<std::vector<int>> compPoints;       // component -> point ids in walk order
  std::vector<Color> pointColor;
  std::vector<std::string> pointLabel;            // "p{comp}.{numbering index}"
  std::vector<std::vector<Slot>> slots;           // component -> walk-ordered slots
  std::vector<std::pair<int, int>> slotOfPoint;   // point id -> (component, slot index)
  // cut -> polygon side index traversed with (resp. against) the direction;
  // -1 when the polygon has no cut sides (disk).
  std::vector<int> sideWith, sideAgainst;
  std::vector<int> segSideOfPoint;  // point id -> polygon side index
  std::vector<int> posInSide;       // point id -> position within that side

  int pointId(int comp, int walkIdx) const { return compPoints[comp][walkIdx]; }
  // Walk-order successor on the same component.
  int nextPoint(int pid) const;
  int prevPoint(int pid) const;
  // User-facing numbering successor (respects the component's reversed flag).
  int numberingNext(int pid) const;
  int numberingIndex(int pid) const;
  Color color(int pid) const { return pointColor[pid]; }

  static std::shared_ptr<const SurfaceContext> make(const MarkedSurface& s, const CutSystem& cuts);
  static std::shared_ptr<const SurfaceContext> make(const MarkedSurface& s);
};

using SurfacePtr = std::shared_ptr<const SurfaceContext>;

}  // namespace sl3web
