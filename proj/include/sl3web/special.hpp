#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sl3web/cluster.hpp"
#include "sl3web/diagram.hpp"
#include "sl3web/skein.hpp"
#include "sl3web/surface.hpp"

namespace sl3web {

// Simple curve between marked points, combinatorially: the ordered list of
// cut traversals met walking from p to q. Boundary-segment arcs are
// identified with their segment.
struct Arc {
  int p = -1, q = -1;
  std::vector<std::pair<int, bool>> route;  // (cut, withSense), from p to q
  bool boundarySegment = false;

  Arc() = default;
  Arc(int p_, int q_, std::vector<std::pair<int, bool>> route_, bool segment = false)
      : p(p_), q(q_), route(std::move(route_)), boundarySegment(segment) {
    normalize();
  }

  Arc reversed() const;
  void normalize();  // cancel adjacent opposite traversals of one cut
  bool operator==(const Arc& o) const {
    return p == o.p && q == o.q && route == o.route && boundarySegment == o.boundarySegment;
  }
  std::string str() const;
};

// Cut ends passed by a strand hugging the boundary collar from just past
// `fromPoint` to just before `toPoint` (walk order). Equal endpoints make a
// full lap. Sense: passing a from-end goes against the cut, a to-end with it.
std::vector<std::pair<int, bool>> boundary_trace(const SurfaceContext& ctx, int fromPoint, int toPoint);

// The boundary segment from p to its walk successor, as an arc.
Arc boundary_arc(const SurfaceContext& ctx, int p);

// Composition with the Dehn twist along `cut`: every endpoint-to-endpoint
// pass appends one more traversal of the cut with the given sense.
Arc dehn_twisted(const SurfaceContext& ctx, const Arc& a, int cut, bool sense);

struct TriangleData {
  std::array<int, 3> corners{{-1, -1, -1}};  // marked points, clockwise
  std::array<int, 3> sides{{-1, -1, -1}};    // arc indices; side i joins corners[i] -> corners[i+1]
  std::array<bool, 3> forward{{true, true, true}};  // stored arc already runs that way?
};

struct Triangulation {
  SurfacePtr ctx;
  std::vector<Arc> arcs;
  std::vector<TriangleData> triangles;

  // Side i of tri, directed corners[i] -> corners[i+1].
  Arc side_arc(const TriangleData& tri, int i) const;
};

// Endpoint consistency, boundary-segment recognition, Euler count
// (#points - #arcs + #triangles = 2 - 2g - #components), arc incidence
// (internal arcs border two triangles, segments one), and contractibility of
// every triangle's route cycle.
Violations validate_triangulation(const Triangulation& t);

// Caterpillar tree grown in place. When the variant's effective color of the
// root is black the tree is the root itself; otherwise a proxy plus spine is
// laid along the collar, ending at the first same-colored consecutive pair.
struct LambdaTree {
  int point = -1;
  bool upper = false;
  bool direct = false;      // attach at the marked point itself
  std::vector<int> spine;   // interior vertex ids, proxy first
  EndRef attach;            // where the external edge connects
  std::vector<int> carried; // marked points consumed, root first
};

LambdaTree build_lambda(Diagram& d, int point, bool upper);

// The four shapes of special invariants.
enum class SpecialKind {
  Edge,           // J_p^q(alpha)
  LowerTriangle,  // J_pqr: white center, lower trees
  UpperTriangle,  // J^pqr: black center, upper trees
  Quad,           // J_pq^rs: white/black pair replacing one crossing
  Factor,         // unnamed indecomposable piece produced by factoring
};

struct SpecialInvariant {
  SpecialKind kind = SpecialKind::Edge;
  std::vector<int> points;
  std::vector<Arc> arcs;
  Diagram diagram;
  WebCombination flattened;
  std::string label;

  explicit SpecialInvariant(SurfacePtr ctx) : diagram(ctx), flattened(ctx) {}
  bool is_zero() const { return flattened.zero(); }
  // Canonical key of the flattening; nonzero special invariants are single
  // webs with coefficient one, so the key identifies the invariant.
  std::string key() const;
};

// Assemble the diagram for one special invariant and flatten it.
//   Edge:          points {p,q}, arcs {alpha directed p->q}
//   LowerTriangle: points {c0,c1,c2} clockwise, arcs {c0->c1, c1->c2, c2->c0}
//   UpperTriangle: same data, colors reversed
//   Quad:          points {p,q,r,s}, arcs {alpha p->r, beta q->s}; splits
//                  locate the crossing along the two routes
SpecialInvariant special_invariant(SurfacePtr ctx, SpecialKind kind, const std::vector<int>& points,
                                   const std::vector<Arc>& arcs,
                                   std::pair<int, int> quadSplits = {-1, -1});

// Unique factorization into indecomposables: connectivity components of the
// unclasped web, then matching against products from the candidate pool.
std::vector<SpecialInvariant> factor_indecomposable(const SpecialInvariant& s,
                                                    const std::vector<SpecialInvariant>& pool);

// The a+b nonzero invariants J_p^{p+-1} over boundary segments. Throws
// ExcludedCase for a disk with at most four marked points.
std::vector<SpecialInvariant> coefficient_invariants(SurfacePtr ctx);

struct ExtendedCluster {
  std::vector<SpecialInvariant> z;   // z(T), deterministic order
  std::vector<bool> coefficient;     // parallel to z
  std::vector<int> x;                // indices of the non-coefficients
  int index_of(const std::string& key) const;  // -1 when absent
};

// K(T) -> z(T), x(T): both directed invariants per arc plus one lower
// triangle invariant per clockwise triangle, factored into indecomposables.
ExtendedCluster extended_cluster(const Triangulation& t);

// One distilled exchange relation x * partner = M1 + M2 with every monomial
// factor inside z(T).
struct DistilledRelation {
  int x = -1;
  SpecialInvariant partner;
  std::array<std::vector<int>, 2> monomials;  // z-indices, with multiplicity

  explicit DistilledRelation(SurfacePtr ctx) : partner(ctx) {}
};

std::vector<DistilledRelation> exchange_relations(const Triangulation& t, const ExtendedCluster& zc);

// Quiver realizing the relations: z(T) vertices, coefficients frozen, arrow
// multiplicities read off the exchange monomials, orientation propagated
// from "first monomial of the first relation is incoming" per component.
Quiver quiver_from_relations(const std::vector<DistilledRelation>& rels, const ExtendedCluster& zc);

// Complete seed: quiver from relations, one symbol per z(T) entry, webs
// attached.
Seed seed_from_triangulation(const Triangulation& t, const ExtendedCluster& zc,
                             const std::vector<DistilledRelation>& rels);

// Sum-of-products identity between special invariants, checked by exact
// evaluation at random assignments.
struct InvariantIdentity {
  struct Term {
    long long coeff = 1;
    std::vector<SpecialInvariant> factors;
  };
  std::vector<Term> lhs, rhs;
  std::string name;
};

bool verify_identity(SurfacePtr ctx, const InvariantIdentity& id, int samples = 20, uint64_t seed = 1);
bool verify_relation(SurfacePtr ctx, const ExtendedCluster& zc, const DistilledRelation& r,
                     int samples = 20, uint64_t seed = 1);

// Quadrilateral pqrs (clockwise) with named sides and diagonals:
// rho p->q, gamma q->r, delta r->s, kappa s->p; diagonals alpha p->r and
// beta q->s crossing once.
struct QuadConfig {
  int p = -1, q = -1, r = -1, s = -1;
  Arc rho, gamma, delta, kappa, alpha, beta;
  std::pair<int, int> splits{-1, -1};  // crossing position along alpha/beta
};

// Quadrilateral around an internal arc of t (the two triangles sharing it),
// with the flipped diagonal routed close to corner r and the crossing placed
// on it accordingly.
QuadConfig quad_around_diagonal(const Triangulation& t, int arcIndex);

// The three-term identity family on a triangle or quadrilateral.
InvariantIdentity identity_triangle_product(SurfacePtr ctx, const std::array<int, 3>& corners,
                                            const std::array<Arc, 3>& sides);
InvariantIdentity identity_diagonal_triangle(SurfacePtr ctx, const QuadConfig& c);   // eq. family (2)
InvariantIdentity identity_two_diagonals(SurfacePtr ctx, const QuadConfig& c);       // eq. family (3)
InvariantIdentity identity_quad_lower(SurfacePtr ctx, const QuadConfig& c);          // eq. family (4)
InvariantIdentity identity_quad_upper(SurfacePtr ctx, const QuadConfig& c);          // eq. family (5)
InvariantIdentity identity_exposed_wb(SurfacePtr ctx, const QuadConfig& c);          // p white, p+1 black
InvariantIdentity identity_exposed_bw(SurfacePtr ctx, const QuadConfig& c);          // p black, p+1 white

// Reference triangulations used by tests, the CLI selftest and the docs.
Triangulation annulus_triangulation(SurfacePtr ctx);  // one black point per boundary circle
Triangulation ladder_triangulation(SurfacePtr ctx);   // all-black two-component annulus
Triangulation pants_triangulation(SurfacePtr ctx);    // three circles, one black point each

}  // namespace sl3web
