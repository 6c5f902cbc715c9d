#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sl3web/diagram.hpp"
#include "sl3web/rational.hpp"

namespace sl3web {

// Values an invariant is evaluated at: one rational triple per marked point
// (covector components at white points, vector components at black points)
// and one 3x3 matrix per cut.
struct Assignment {
  std::vector<Vec3> points;
  std::vector<Mat3> cuts;
};

// Shape check plus the exact unimodularity requirement det = 1 on every cut
// matrix. evaluate() itself only needs the shape, so callers can probe what
// happens off the det = 1 locus on purpose.
Violations validate_assignment(const SurfaceContext& ctx, const Assignment& a);

// Product of `shears` elementary shear matrices with nonzero integer offsets
// in [-magnitude, magnitude]; determinant exactly 1, deterministic per seed,
// entries bounded by (1 + magnitude)^shears.
Mat3 random_unimodular(uint64_t seed, int magnitude, int shears = 6);

// Rational point triples of bounded height plus unimodular cut matrices.
Assignment random_assignment(const SurfaceContext& ctx, uint64_t seed, int magnitude);

// Formal variables of the invariant ring in the fixed global order used by
// InvariantPolynomial exponent vectors: x{p}_{i} at black points and y{p}_{i}
// at white points (i = 1..3, points by id), then X{k}_{ij} per cut, row-major.
std::vector<std::string> invariant_variables(const SurfaceContext& ctx);
int point_variable(const SurfaceContext& ctx, int point, int i);
int cut_variable(const SurfaceContext& ctx, int cut, int i, int j);

// Integer-coefficient polynomial over the invariant variables of one surface.
// Terms map dense exponent vectors (indexed like invariant_variables) to
// nonzero coefficients, so equality and printing are canonical.
struct InvariantPolynomial {
  std::vector<std::string> vars;
  int npoints = 0, ncuts = 0;
  std::map<std::vector<int>, Int> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const InvariantPolynomial& o) const { return vars == o.vars && terms == o.terms; }
  bool operator!=(const InvariantPolynomial& o) const { return !(*this == o); }

  void add_term(const std::vector<int>& expo, const Int& c);
  void add_scaled(const InvariantPolynomial& p, const Int& c);

  // Coefficient of the monomial {variable name -> exponent}; 0 if absent.
  Int coefficient(const std::map<std::string, int>& monomial) const;
  Rat substitute(const Assignment& a) const;
  std::string to_string() const;
};

InvariantPolynomial zero_polynomial(const SurfaceContext& ctx);

// Number of independent labels: strand fragments split at plugs, merged
// across crossings. The labeling space has size 3^labeling_width.
int labeling_width(const Diagram& d);

// Fragment count beyond which symbolic evaluation refuses to enumerate.
inline constexpr int kSymbolicSizeLimit = 22;

// Exact value of the invariant: the signed sum over all fragment labelings of
// point components, cut-matrix entries (adjugate when a plug goes against the
// cut) and vertex permutation signs. evaluate() splits the labeling space
// across threads when built with OpenMP; evaluate_serial() is the reference
// single-threaded implementation and always returns the identical rational.
Rat evaluate(const Diagram& d, const Assignment& a);
Rat evaluate_serial(const Diagram& d, const Assignment& a);

// The returned polynomial is the lex normal form modulo the unimodularity
// relations det X^(k) = 1, so two diagrams define the same invariant function
// if and only if their polynomials are equal.
InvariantPolynomial evaluate_symbolic(const Diagram& d, int sizeLimit = kSymbolicSizeLimit);

// Formal integer combination of diagrams over one surface.
struct DiagramTerm {
  Diagram web;
  long long coeff = 1;
};
using DiagramCombination = std::vector<DiagramTerm>;

Rat evaluate(const DiagramCombination& c, const Assignment& a);
InvariantPolynomial evaluate_symbolic(const SurfaceContext& ctx, const DiagramCombination& c,
                                      int sizeLimit = kSymbolicSizeLimit);

enum class EqualityConfidence { Exact, Sampled };

// True iff the two combinations define the same invariant. Compares exact
// polynomials when every diagram fits the size limit; otherwise falls back to
// agreement at `samples` random assignments and reports the weaker confidence.
bool semantically_equal(const DiagramCombination& c1, const DiagramCombination& c2,
                        EqualityConfidence* confidence = nullptr,
                        int sizeLimit = kSymbolicSizeLimit, int samples = 20, int magnitude = 5);

}  // namespace sl3web
