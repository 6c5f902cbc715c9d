#include "sl3web/cluster.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "sl3web/common.hpp"

namespace sl3web {

namespace {

constexpr size_t kRationalTermCap = 500000;

Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

// Largest monomial dividing every term of p.
Monomial common_mono(const Poly& p) {
  Monomial out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    (void)c;
    if (first) {
      out = m;
      first = false;
      continue;
    }
    Monomial next;
    size_t i = 0, j = 0;
    while (i < out.size() && j < m.size()) {
      if (out[i].first < m[j].first) {
        ++i;
      } else if (out[i].first > m[j].first) {
        ++j;
      } else {
        next.emplace_back(out[i].first, std::min(out[i].second, m[j].second));
        ++i;
        ++j;
      }
    }
    out = std::move(next);
    if (out.empty()) break;
  }
  return out;
}

Monomial mono_gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (a[i].first > b[j].first) {
      ++j;
    } else {
      out.emplace_back(a[i].first, std::min(a[i].second, b[j].second));
      ++i;
      ++j;
    }
  }
  return out;
}

Poly strip_mono(const Poly& p, const Monomial& g) {
  if (g.empty()) return p;
  Poly out;
  for (const auto& [m, c] : p.terms()) out.add_term(mono_div(m, g), c);
  return out;
}

}  // namespace

RationalExpr::RationalExpr(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Sl3Error(ErrorCode::ZeroDivision, "rational expression with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly(Int(1));
    return;
  }
  if (num_.term_count() > kRationalTermCap || den_.term_count() > kRationalTermCap)
    throw Sl3Error(ErrorCode::SizeLimit, "rational expression exceeds term cap");

  // Integer content.
  Int g = gcd(abs_int(num_.content()), abs_int(den_.content()));
  if (g > 1) {
    Poly gp((Int(g)));
    num_ = num_.divide_exact(gp);
    den_ = den_.divide_exact(gp);
  }

  // Shared monomial factor (covers the whole Laurent regime cheaply).
  Monomial shared = mono_gcd(common_mono(num_), common_mono(den_));
  if (!shared.empty()) {
    num_ = strip_mono(num_, shared);
    den_ = strip_mono(den_, shared);
  }

  if (!den_.is_monomial() && !num_.is_monomial()) {
    // Exact-division fast paths before the polynomial gcd.
    bool reduced = false;
    try {
      Poly q = num_.divide_exact(den_);
      num_ = std::move(q);
      den_ = Poly(Int(1));
      reduced = true;
    } catch (const Sl3Error&) {
    }
    if (!reduced) {
      try {
        Poly q = den_.divide_exact(num_);
        den_ = std::move(q);
        num_ = Poly(Int(1));
        reduced = true;
      } catch (const Sl3Error&) {
      }
    }
    if (!reduced) {
      Poly h = poly_gcd(num_, den_);
      if (!h.is_constant() || abs_int(h.content()) > 1) {
        num_ = num_.divide_exact(h);
        den_ = den_.divide_exact(h);
      }
    }
  }

  if (den_.lead_coeff() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

RationalExpr RationalExpr::operator+(const RationalExpr& o) const {
  return RationalExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalExpr RationalExpr::operator-(const RationalExpr& o) const {
  return RationalExpr(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalExpr RationalExpr::operator*(const RationalExpr& o) const {
  // Cross-reduce before multiplying so the final reduction stays cheap.
  RationalExpr a(num_, o.den_);
  RationalExpr b(o.num_, den_);
  return RationalExpr(a.num_ * b.num_, a.den_ * b.den_);
}

RationalExpr RationalExpr::operator/(const RationalExpr& o) const {
  if (o.is_zero()) throw Sl3Error(ErrorCode::ZeroDivision, "division by zero expression");
  RationalExpr a(num_, o.num_);
  RationalExpr b(o.den_, den_);
  return RationalExpr(a.num_ * b.num_, a.den_ * b.den_);
}

Rat RationalExpr::eval(const std::unordered_map<uint32_t, Rat>& point) const {
  Rat d = den_.eval(point);
  if (d == 0) throw Sl3Error(ErrorCode::ZeroDivision, "denominator vanishes at evaluation point");
  Rat n = num_.eval(point);
  Rat r = n / d;
  r.canonicalize();
  return r;
}

std::string RationalExpr::str(const std::vector<std::string>& names) const {
  if (den_ == Poly(Int(1))) return num_.str(names);
  std::string n = num_.term_count() > 1 ? "(" + num_.str(names) + ")" : num_.str(names);
  std::string d = den_.term_count() > 1 ? "(" + den_.str(names) + ")" : den_.str(names);
  return n + " / " + d;
}

bool is_laurent(const RationalExpr& e, const std::vector<uint32_t>& cluster) {
  const Poly& d = e.den();
  if (!d.is_monomial()) return false;
  if (d.lead_coeff() != 1) return false;
  for (const auto& [v, exp] : d.lead_mono()) {
    (void)exp;
    if (std::find(cluster.begin(), cluster.end(), v) == cluster.end()) return false;
  }
  return true;
}

Quiver::Quiver(std::vector<QuiverVertex> verts) : verts_(std::move(verts)) {
  b_.assign(verts_.size(), std::vector<int>(verts_.size(), 0));
}

void Quiver::set_arrows(int x, int y, int m) {
  if (x < 0 || y < 0 || x >= size() || y >= size()) throw Sl3Error(ErrorCode::BadInput, "vertex out of range");
  if (x == y && m != 0) throw Sl3Error(ErrorCode::BadInput, "quiver loops are not allowed");
  if (x == y) return;
  b_[x][y] = m;
  b_[y][x] = -m;
}

bool Quiver::verts_same(const Quiver& o) const {
  if (verts_.size() != o.verts_.size()) return false;
  for (size_t i = 0; i < verts_.size(); ++i)
    if (verts_[i].name != o.verts_[i].name || verts_[i].frozen != o.verts_[i].frozen) return false;
  return true;
}

std::string Quiver::str() const {
  std::ostringstream os;
  for (int i = 0; i < size(); ++i) {
    os << i << ": " << verts_[i].name << (verts_[i].frozen ? " [frozen]" : "") << "\n";
  }
  for (int x = 0; x < size(); ++x)
    for (int y = 0; y < size(); ++y)
      if (b_[x][y] > 0) os << verts_[x].name << " -> " << verts_[y].name << " x" << b_[x][y] << "\n";
  return os.str();
}

Quiver mutate_quiver(const Quiver& q, int z) {
  if (z < 0 || z >= q.size()) throw Sl3Error(ErrorCode::BadInput, "mutation vertex out of range");
  if (q.vertex(z).frozen) throw Sl3Error(ErrorCode::FrozenVertex, "cannot mutate at frozen vertex " + q.vertex(z).name);
  Quiver out = q;
  int n = q.size();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == z || y == z || x == y) continue;
      if (q.vertex(x).frozen && q.vertex(y).frozen) continue;
      int a = q.arrows(x, z);
      int c = q.arrows(z, y);
      int delta = (std::abs(a) * c + a * std::abs(c)) / 2;
      if (delta != 0 && x < y) out.set_arrows(x, y, q.arrows(x, y) + delta);
    }
  }
  for (int x = 0; x < n; ++x) {
    if (x == z) continue;
    out.set_arrows(x, z, -q.arrows(x, z));
  }
  return out;
}

namespace {

// Per-vertex invariant used both as a pruning key and a compatibility check.
std::vector<std::pair<int, int>> vertex_signature(const Quiver& q, int v) {
  std::vector<std::pair<int, int>> sig;
  for (int u = 0; u < q.size(); ++u) {
    if (u == v) continue;
    int m = q.arrows(v, u);
    if (m != 0) sig.emplace_back(m, q.vertex(u).frozen ? 1 : 0);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

bool extend_iso(const Quiver& a, const Quiver& b, std::vector<int>& map, std::vector<bool>& used,
                const std::vector<std::vector<std::pair<int, int>>>& sigA,
                const std::vector<std::vector<std::pair<int, int>>>& sigB, int v) {
  int n = a.size();
  if (v == n) return true;
  for (int w = 0; w < n; ++w) {
    if (used[w]) continue;
    if (a.vertex(v).frozen != b.vertex(w).frozen) continue;
    if (sigA[v] != sigB[w]) continue;
    bool ok = true;
    for (int u = 0; u < v; ++u) {
      if (a.arrows(v, u) != b.arrows(w, map[u])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    map[v] = w;
    used[w] = true;
    if (extend_iso(a, b, map, used, sigA, sigB, v + 1)) return true;
    used[w] = false;
  }
  return false;
}

}  // namespace

bool quiver_isomorphic(const Quiver& a, const Quiver& b) {
  if (a.size() != b.size()) return false;
  int n = a.size();
  std::vector<std::vector<std::pair<int, int>>> sigA(n), sigB(n);
  for (int i = 0; i < n; ++i) {
    sigA[i] = vertex_signature(a, i);
    sigB[i] = vertex_signature(b, i);
  }
  auto multiA = sigA, multiB = sigB;
  std::sort(multiA.begin(), multiA.end());
  std::sort(multiB.begin(), multiB.end());
  if (multiA != multiB) return false;
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  return extend_iso(a, b, map, used, sigA, sigB, 0);
}

Seed Seed::initial(Quiver q, std::shared_ptr<VarPool> pool, const std::vector<std::string>& names) {
  if ((int)names.size() != q.size()) throw Sl3Error(ErrorCode::BadInput, "one name per vertex required");
  Seed s;
  s.quiver = std::move(q);
  s.pool = std::move(pool);
  for (const auto& n : names) s.vars.push_back(RationalExpr::symbol(s.pool->intern(n)));
  s.webs.assign(names.size(), std::nullopt);
  return s;
}

Seed mutate_seed(const Seed& s, int z) {
  if ((int)s.vars.size() != s.quiver.size()) throw Sl3Error(ErrorCode::BadInput, "seed variable count mismatch");
  Seed out = s;
  out.quiver = mutate_quiver(s.quiver, z);
  if (s.vars[z].is_zero()) throw Sl3Error(ErrorCode::ZeroDivision, "exchange at a vertex with zero variable");
  RationalExpr in = RationalExpr::constant(1);
  RationalExpr outp = RationalExpr::constant(1);
  for (int y = 0; y < s.quiver.size(); ++y) {
    int m = s.quiver.arrows(y, z);
    for (int k = 0; k < m; ++k) in = in * s.vars[y];
    for (int k = 0; k < -m; ++k) outp = outp * s.vars[y];
  }
  out.vars[z] = (in + outp) / s.vars[z];
  if (!out.webs.empty()) out.webs[z] = std::nullopt;
  return out;
}

}  // namespace sl3web
