#pragma once

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sl3web/rational.hpp"
#include "sl3web/surface.hpp"

namespace sl3web {

// Where an edge end attaches.
struct EndRef {
  enum Kind { None = 0, VertexEnd = 1, PointEnd = 2, CrossingEnd = 3 };
  int kind = None;
  int id = -1;
  int port = -1;  // rotation slot for vertices (0..2) and crossings (0..3)
  bool operator==(const EndRef& o) const { return kind == o.kind && id == o.id && port == o.port; }
};

// (cut, senseWith, position) for building traces; position -1 appends at the
// end of the cut's plug order.
using TraceStep = std::tuple<int, bool, int>;

// Tensor diagram embedded in the cut-open polygon. Edges are directed a->b;
// wherever an end carries a color the direction runs white -> black, and
// loops carry their orientation as data. A plug is one crossing point of a
// strand with a cut: `with_sense` means the strand passes from the cut's left
// bank to its right bank (banks taken facing along the cut's direction) when
// traversed along the owning strand's direction.
class Diagram {
 public:
  struct Vertex {
    Color color = Color::Black;
    std::array<std::pair<int, int>, 3> slots{{{-1, -1}, {-1, -1}, {-1, -1}}};  // (edge, end) cw
    bool alive = true;
  };
  struct Crossing {
    std::array<std::pair<int, int>, 4> slots{{{-1, -1}, {-1, -1}, {-1, -1}, {-1, -1}}};  // cw
    bool alive = true;
  };
  struct Edge {
    EndRef a, b;
    std::vector<int> plugs;  // plug ids in order along a->b
    bool alive = true;
  };
  struct PlugRec {
    int cut = -1;
    bool with_sense = true;
    int edge = -1;  // owner edge, or
    int loop = -1;  // owner loop
    bool alive = true;
  };
  struct Loop {
    std::vector<int> plugs;  // cyclic, in order along the loop's orientation
    bool alive = true;
  };

  explicit Diagram(SurfacePtr ctx);

  SurfacePtr ctx;
  std::vector<Vertex> vertices;
  std::vector<Crossing> crossings;
  std::vector<Edge> edges;
  std::vector<PlugRec> plugs;
  std::vector<Loop> loops;
  std::vector<std::vector<int>> attachments;  // per point: edge*2+end, in walk order
  std::vector<std::vector<int>> cutPlugs;     // per cut: plug ids in order along the cut
  long freeLoops = 0;                         // contractible vertex-free plug-free loops

  static EndRef at_point(int pid) { return EndRef{EndRef::PointEnd, pid, -1}; }
  static EndRef at_vertex(int v, int port) { return EndRef{EndRef::VertexEnd, v, port}; }
  static EndRef at_crossing(int x, int port) { return EndRef{EndRef::CrossingEnd, x, port}; }

  int add_vertex(Color c);
  int add_crossing();
  int add_edge(EndRef a, EndRef b, const std::vector<TraceStep>& trace = {});
  int add_loop(const std::vector<TraceStep>& trace);

  // --- structural helpers (used by the rewriting machinery) ---
  int new_plug(int cut, bool sense, int position);  // position -1 = append
  void attach_end(int edge, int end, const EndRef& r);
  void detach_end(int edge, int end);  // clears the anchor's backref
  void erase_plug(int plug);
  void erase_edge(int edge);      // detaches ends, erases plugs
  void erase_loop(int loop);
  void erase_vertex(int v);       // ports must already be free
  void erase_crossing(int x);
  std::optional<Color> end_color(const EndRef& r) const;
  int count_vertices() const;
  int count_crossings() const;
  int count_edges() const;
  int count_loops() const;
  int total_plugs() const;

  Violations validate() const;
  bool crossing_free() const;

  // Isotopy normalization: cancel opposite same-cut plug pairs bounding empty
  // faces, slide vertices across cuts when that removes crossings, rotate
  // loop storage to a canonical phase. Value-preserving.
  void normalize();

  // Canonical key of the underlying web (requires crossing_free()); explores
  // the orbit of reducing normalization moves and returns the minimal
  // encoding, so isotopic drawings that normalize differently still agree.
  std::string canonical_key() const;

  // Raw deterministic encoding of the current drawing (no normalization).
  std::string encode() const;

  // Deep-copy with all ids compacted; drops dead records.
  Diagram compacted() const;
};

// Planar map of a diagram inside the polygon, with faces, cut-gluing and
// glued-region analysis. Rebuilt on demand; never mutated in place.
struct MapView {
  enum NodeKind { NVertex, NCrossing, NPoint, NPlug, NCorner };
  struct Node {
    NodeKind kind;
    int id;         // vertex/crossing/point/plug id; corner: polygon side it precedes
    int side = -1;  // for NPlug: polygon side the node lies on
  };
  struct Piece {
    bool onLoop = false;
    int owner = -1;  // edge or loop id
    int index = 0;   // piece index along the owner
    int dartFwd = -1, dartBwd = -1;
  };
  struct Dart {
    int node = -1;  // origin
    int twin = -1;
    int nextCw = -1;  // next dart clockwise around `node`
    bool isArc = false;
    int side = -1;   // polygon side of an arc dart
    int piece = -1;  // for interior darts
    int face = -1;
  };
  struct Face {
    std::vector<int> darts;
    bool outer = false;
    int region = -1;
  };
  // One boundary-circle event of a glued region.
  struct Event {
    bool isArc = false;        // passage along a boundary-segment arc
    NodeKind kind = NVertex;   // corner node kind (NVertex/NCrossing/NPoint)
    int node = -1;             // vertex/crossing/point id
    int inDart = -1, outDart = -1;
    int inPiece = -1, outPiece = -1;
  };
  struct Region {
    std::vector<int> faces;
    int glueCount = 0;
    int chi = 0;
    bool touchesArc = false;
    std::vector<std::vector<Event>> circles;
    bool disk() const { return chi == 1 && circles.size() == 1; }
  };

  std::vector<Node> nodes;
  std::vector<Dart> darts;
  std::vector<Piece> pieces;
  std::vector<Face> faces;
  std::vector<std::pair<int, int>> gluePairs;  // inner-dart pairs identified by regluing
  std::vector<Region> regions;
  std::vector<int> pieceOfPlugEnter, pieceOfPlugExit;  // plug id -> piece; -1 when absent
  std::vector<std::vector<int>> piecesOfEdge, piecesOfLoop;
  int outerFace = -1;

  const Piece& piece(int id) const { return pieces[id]; }
  int edge_of_piece(int p) const { return pieces[p].onLoop ? -1 : pieces[p].owner; }
};

MapView build_map(const Diagram& d);

// True iff no face of the web (after regluing across cuts) is a redex:
// contractible empty disk with 0 corners; 2 corners not both at marked
// points; or 4 corners all at internal vertices.
bool is_non_elliptic(const Diagram& web);

// Superposition: d2 drawn over d1 in the same polygon, new crossings
// inserted where routing demands. Deterministic.
Diagram superpose(const Diagram& d1, const Diagram& d2);

// Core of superpose: inserts `add` into `base`. With forbidCrossings, throws
// BadConfiguration if any routing step would cross a strand.
Diagram insert_diagram(const Diagram& base, const Diagram& add, bool forbidCrossings);

struct UnclaspResult {
  enum Class { Tree, Forest, Neither };
  Class classification = Neither;
  int leafCount = 0;
  int componentCount = 0;          // components of the unclasped graph
  std::vector<int> vertexComponent;  // per diagram vertex id, -1 for dead
  std::vector<int> edgeComponent;    // per edge id
  std::vector<int> loopComponent;    // per loop id (always its own cycle)
};

UnclaspResult unclasp(const Diagram& d);

// Splits d into the sub-diagrams induced by the unclasped components
// (free loops go to the first factor as a convention of the caller; here
// they are returned separately via the `freeLoops` member of each part).
std::vector<Diagram> split_components(const Diagram& d);

}  // namespace sl3web
