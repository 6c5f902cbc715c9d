#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sl3web/rational.hpp"

namespace sl3web {

// Exponent vector, sparse, sorted by variable id. Empty = the unit monomial.
using Monomial = std::vector<std::pair<uint32_t, uint32_t>>;

// Pure lexicographic order with lower variable ids more significant
// (id 0 plays the role of the largest variable).
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
bool mono_divides(const Monomial& a, const Monomial& m);  // a | m
Monomial mono_div(const Monomial& m, const Monomial& a);  // m / a, must divide
std::string mono_str(const Monomial& m, const std::vector<std::string>& names);

// Multivariate polynomial with exact integer coefficients.
class Poly {
 public:
  using Terms = std::map<Monomial, Int, MonoLess>;

  Poly() = default;
  explicit Poly(const Int& c) {
    if (c != 0) terms_[Monomial{}] = c;
  }
  static Poly var(uint32_t id, uint32_t exp = 1, const Int& coeff = 1);
  static Poly constant(long c) { return Poly(Int(c)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  size_t term_count() const { return terms_.size(); }
  bool is_monomial() const { return terms_.size() == 1; }

  // Leading term under MonoLess (the map's last element).
  const Monomial& lead_mono() const;
  const Int& lead_coeff() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return terms_ != o.terms_; }

  void add_term(const Monomial& m, const Int& c);
  Poly mul_term(const Monomial& m, const Int& c) const;

  Int coeff(const Monomial& m) const;
  std::vector<uint32_t> variables() const;
  uint32_t max_var() const;  // throws if constant
  int degree_in(uint32_t v) const;
  long total_degree() const;

  Rat eval(const std::unordered_map<uint32_t, Rat>& point) const;
  Poly substitute(uint32_t v, const Poly& value) const;

  Int content() const;           // gcd of coefficients, sign of leading coeff
  Poly primitive_part() const;   // this / content
  Poly divide_exact(const Poly& d) const;  // exact division, throws if not exact

  std::string str(const std::vector<std::string>& names) const;

 private:
  Terms terms_;
};

Poly poly_gcd(const Poly& a, const Poly& b);

// Remainder of p on division by the divisor set (each divisor must have
// leading coefficient +-1). With pairwise variable-disjoint divisors the
// result is a canonical normal form for the quotient ring.
Poly reduce_by(const Poly& p, const std::vector<Poly>& divisors);

// Shared registry of variable names.
class VarPool {
 public:
  uint32_t intern(const std::string& name);
  uint32_t find(const std::string& name) const;  // throws if absent
  bool contains(const std::string& name) const;
  const std::string& name(uint32_t id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> index_;
};

}  // namespace sl3web
