#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sl3web/poly.hpp"
#include "sl3web/skein.hpp"

namespace sl3web {

// Ratio of integer polynomials over a shared symbol pool, kept reduced:
// polynomial gcd and integer content removed, denominator leading
// coefficient positive. The zero element is 0/1.
class RationalExpr {
 public:
  RationalExpr() : den_(Int(1)) {}
  RationalExpr(Poly num, Poly den);

  static RationalExpr symbol(uint32_t id) { return RationalExpr(Poly::var(id), Poly(Int(1))); }
  static RationalExpr constant(long c) { return RationalExpr(Poly::constant(c), Poly(Int(1))); }
  static RationalExpr from_poly(Poly p) { return RationalExpr(std::move(p), Poly(Int(1))); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  bool operator==(const RationalExpr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalExpr& o) const { return !(*this == o); }

  RationalExpr operator-() const;
  RationalExpr operator+(const RationalExpr& o) const;
  RationalExpr operator-(const RationalExpr& o) const;
  RationalExpr operator*(const RationalExpr& o) const;
  RationalExpr operator/(const RationalExpr& o) const;  // ZeroDivision

  // Exact evaluation; ZeroDivision when the denominator vanishes at the point.
  Rat eval(const std::unordered_map<uint32_t, Rat>& point) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  Poly num_, den_;
};

// True iff the reduced denominator is a monomial with coefficient one whose
// variables all belong to `cluster`.
bool is_laurent(const RationalExpr& e, const std::vector<uint32_t>& cluster);

struct QuiverVertex {
  std::string name;
  bool frozen = false;
};

// Finite loopless quiver with no oriented 2-cycles: the arrow data is a
// single antisymmetric integer per vertex pair (positive = arrows x -> y).
class Quiver {
 public:
  Quiver() = default;
  explicit Quiver(std::vector<QuiverVertex> verts);

  int size() const { return (int)verts_.size(); }
  const QuiverVertex& vertex(int i) const { return verts_[i]; }
  const std::vector<QuiverVertex>& vertices() const { return verts_; }
  int arrows(int x, int y) const { return b_[x][y]; }
  void set_arrows(int x, int y, int m);

  bool operator==(const Quiver& o) const { return verts_same(o) && b_ == o.b_; }
  bool operator!=(const Quiver& o) const { return !(*this == o); }

  std::string str() const;

 private:
  bool verts_same(const Quiver& o) const;
  std::vector<QuiverVertex> verts_;
  std::vector<std::vector<int>> b_;
};

// Standard matrix mutation at a mutable vertex; frozen-frozen multiplicities
// are left untouched. Throws FrozenVertex otherwise.
Quiver mutate_quiver(const Quiver& q, int z);

// Graph isomorphism respecting the frozen/mutable kinds and all signed
// multiplicities (vertex names are ignored). Backtracking with degree
// signatures; intended for desk-scale quivers.
bool quiver_isomorphic(const Quiver& a, const Quiver& b);

// A seed: quiver plus one variable per vertex, each a rational expression in
// the initial extended-cluster symbols. Variables produced by the surface
// construction additionally carry their web combination.
struct Seed {
  Quiver quiver;
  std::vector<RationalExpr> vars;
  std::shared_ptr<VarPool> pool;
  std::vector<std::optional<WebCombination>> webs;

  // Initial seed: one fresh symbol per vertex.
  static Seed initial(Quiver q, std::shared_ptr<VarPool> pool, const std::vector<std::string>& names);
};

// Exchange: z' = (prod over arrows into z + prod over arrows out of z) / z.
// Throws FrozenVertex, or ZeroDivision when the variable at z is zero.
Seed mutate_seed(const Seed& s, int z);

}  // namespace sl3web
