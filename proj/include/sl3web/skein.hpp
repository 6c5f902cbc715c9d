#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sl3web/diagram.hpp"
#include "sl3web/eval.hpp"

namespace sl3web {

// Local rewrite rules of the diagram calculus. The first five strictly
// decrease the measure (crossings, vertices, loops) lexicographically and
// drive flatten(); the Yang-Baxter family expresses isotopy moves across
// crossings and is available through apply_rule() but is never needed for
// normalization.
enum class RuleId {
  CrossingResolution,  // crossing -> planar smoothing + H-web
  LoopRemoval,         // contractible empty loop -> factor 3
  BigonRemoval,        // internal two-corner face -> single strand, factor -2
  BoundaryBigon,       // two-corner face pinned at a marked point -> 0
  SquareRemoval,       // four-corner all-internal face -> the two smoothings
  YangBaxterA,         // strand slides across a crossing (three crossings flip)
  YangBaxterB,         // kink straightens, factor 1
  YangBaxterC,         // double crossing -> two parallel strands
  YangBaxterD,         // white vertex with twisted legs untwists, factor -1
  YangBaxterE,         // black vertex with twisted legs untwists, factor -1
};

const char* rule_name(RuleId r);
RuleId rule_from_name(const std::string& name);  // throws BadInput
bool is_reduction_rule(RuleId r);

// One reduction site. Node and edge ids refer to the diagram the redex was
// found in; `nodes` and `edges` list face corners and face edges in boundary
// order where the rule involves a face.
struct Redex {
  RuleId rule = RuleId::LoopRemoval;
  int crossing = -1;        // CrossingResolution / YangBaxterB
  int loop = -1;            // LoopRemoval: loop id, or -1 for a free loop
  int point = -1;           // BoundaryBigon: the marked point at the corner
  std::vector<int> nodes;   // corner vertices / crossings
  std::vector<int> edges;   // face edges
};

std::string to_string(const Redex& r);

// Integer linear combination of webs over one surface, keyed by canonical
// encoding so isotopic drawings merge. Terms with coefficient zero are
// dropped eagerly.
class WebCombination {
 public:
  struct Term {
    Diagram web;
    long long coeff = 0;
  };

  explicit WebCombination(SurfacePtr ctx);
  static WebCombination single(const Diagram& d, long long coeff = 1);
  // Multiplicative identity of the skein algebra: the empty web.
  static WebCombination one(SurfacePtr ctx);

  void add(const Diagram& web, long long coeff);
  void add(const WebCombination& other, long long scale = 1);
  long long coefficient(const Diagram& web) const;

  bool zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::map<std::string, Term>& terms() const { return terms_; }
  SurfacePtr context() const { return ctx_; }

  DiagramCombination to_terms() const;
  std::string to_string() const;

  bool operator==(const WebCombination& o) const;
  bool operator!=(const WebCombination& o) const { return !(*this == o); }

  // Canonical key when crossing-free; raw compacted encoding (prefixed) for
  // intermediate diagrams that still carry crossings.
  static std::string key_of(const Diagram& d);

 private:
  SurfacePtr ctx_;
  std::map<std::string, Term> terms_;
};

// All reduction sites of d: one per crossing, one per contractible empty
// loop, one per elliptic face. On a crossing-free web the result is empty
// exactly when the web is non-elliptic. With includeYangBaxter the isotopy
// patterns (kink, double crossing, twisted vertex, slide triangle with
// plug-free triangle edges) are reported as well.
std::vector<Redex> find_redexes(const Diagram& d, bool includeYangBaxter = false);

// Replaces the redex site by the right-hand side of its rule and returns the
// resulting combination. Throws PatternMismatch when the redex does not
// describe a matching site of d.
WebCombination apply_rule(const Diagram& d, const Redex& r);

// Rewrites until no reduction site is left. The result is supported on
// non-elliptic webs; coefficients are exact integers. The one-argument form
// always picks the first site of the first term (deterministic); the seeded
// form picks terms and sites at random, which must not change the result.
WebCombination flatten(const Diagram& d);
WebCombination flatten(const Diagram& d, uint64_t seed);

// Flattens d once deterministically and `trials` more times with randomized
// strategies; true iff every run produced the identical combination.
bool confluence_check(const Diagram& d, int trials = 2, uint64_t seed = 1);

// Product of the skein algebra: superpose representatives pairwise and
// flatten, extended bilinearly.
WebCombination skein_multiply(const WebCombination& a, const WebCombination& b);

// Random web on ctx built from a few random strands, tripods and loops
// superposed over each other; at most maxVertices trivalent vertices.
Diagram random_diagram(SurfacePtr ctx, uint64_t seed, int maxVertices = 8);

// Oracle validation of every rewrite rule: randomized fixtures containing
// each pattern are rewritten and compared against exact evaluation. Returns
// the number of cases checked per rule; throws on the first unsound rewrite.
std::map<std::string, int> skein_selftest(uint64_t seed = 1, int minCasesPerRule = 50);

}  // namespace sl3web
