#include "sl3web/poly.hpp"

#include <algorithm>
#include <set>

namespace sl3web {

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
  // Lex: scan variables in increasing id; a higher exponent on the earliest
  // differing variable makes the monomial larger. Missing variable = exp 0.
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    uint32_t va = i < a.size() ? a[i].first : UINT32_MAX;
    uint32_t vb = j < b.size() ? b[j].first : UINT32_MAX;
    if (va == vb) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second;
      ++i;
      ++j;
    } else if (va < vb) {
      return false;  // a has positive exp on an earlier var: a is larger
    } else {
      return true;
    }
  }
  return false;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    uint32_t va = i < a.size() ? a[i].first : UINT32_MAX;
    uint32_t vb = j < b.size() ? b[j].first : UINT32_MAX;
    if (va == vb) {
      r.emplace_back(va, a[i].second + b[j].second);
      ++i;
      ++j;
    } else if (va < vb) {
      r.push_back(a[i++]);
    } else {
      r.push_back(b[j++]);
    }
  }
  return r;
}

bool mono_divides(const Monomial& a, const Monomial& m) {
  size_t j = 0;
  for (const auto& [v, e] : a) {
    while (j < m.size() && m[j].first < v) ++j;
    if (j >= m.size() || m[j].first != v || m[j].second < e) return false;
  }
  return true;
}

Monomial mono_div(const Monomial& m, const Monomial& a) {
  Monomial r;
  size_t j = 0;
  for (const auto& [v, e] : m) {
    uint32_t sub = 0;
    while (j < a.size() && a[j].first < v) ++j;
    if (j < a.size() && a[j].first == v) sub = a[j].second;
    if (e > sub)
      r.emplace_back(v, e - sub);
    else if (e < sub)
      throw Sl3Error(ErrorCode::BadInput, "monomial division not exact");
  }
  return r;
}

std::string mono_str(const Monomial& m, const std::vector<std::string>& names) {
  if (m.empty()) return "1";
  std::string s;
  for (const auto& [v, e] : m) {
    if (!s.empty()) s += "*";
    s += v < names.size() ? names[v] : ("v" + std::to_string(v));
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

Poly Poly::var(uint32_t id, uint32_t exp, const Int& coeff) {
  Poly p;
  if (coeff != 0) {
    Monomial m;
    if (exp > 0) m.emplace_back(id, exp);
    p.terms_[m] = coeff;
  }
  return p;
}

const Monomial& Poly::lead_mono() const {
  if (terms_.empty()) throw Sl3Error(ErrorCode::BadInput, "lead_mono of zero");
  return terms_.rbegin()->first;
}

const Int& Poly::lead_coeff() const {
  if (terms_.empty()) throw Sl3Error(ErrorCode::BadInput, "lead_coeff of zero");
  return terms_.rbegin()->second;
}

void Poly::add_term(const Monomial& m, const Int& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(mono_mul(m1, m2), c1 * c2);
  return r;
}

Poly Poly::mul_term(const Monomial& m, const Int& c) const {
  Poly r;
  if (c == 0) return r;
  for (const auto& [m1, c1] : terms_) r.terms_[mono_mul(m1, m)] = c1 * c;
  return r;
}

Int Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Int(0) : it->second;
}

std::vector<uint32_t> Poly::variables() const {
  std::set<uint32_t> vs;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) vs.insert(v);
  return std::vector<uint32_t>(vs.begin(), vs.end());
}

uint32_t Poly::max_var() const {
  auto vs = variables();
  if (vs.empty()) throw Sl3Error(ErrorCode::BadInput, "max_var of constant");
  return vs.back();
}

int Poly::degree_in(uint32_t v) const {
  int d = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [mv, e] : m)
      if (mv == v) d = std::max(d, (int)e);
  return d;
}

long Poly::total_degree() const {
  long d = 0;
  for (const auto& [m, c] : terms_) {
    long t = 0;
    for (const auto& [v, e] : m) t += e;
    d = std::max(d, t);
  }
  return d;
}

Rat Poly::eval(const std::unordered_map<uint32_t, Rat>& point) const {
  Rat sum = 0;
  for (const auto& [m, c] : terms_) {
    Rat t(c);
    for (const auto& [v, e] : m) {
      auto it = point.find(v);
      if (it == point.end()) throw Sl3Error(ErrorCode::TypeMismatch, "unbound variable in eval");
      for (uint32_t k = 0; k < e; ++k) t *= it->second;
    }
    sum += t;
  }
  return sum;
}

Poly Poly::substitute(uint32_t v, const Poly& value) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    Monomial rest;
    uint32_t exp = 0;
    for (const auto& [mv, e] : m) {
      if (mv == v)
        exp = e;
      else
        rest.emplace_back(mv, e);
    }
    Poly t = Poly::var(0, 0, c).mul_term(rest, 1);
    for (uint32_t k = 0; k < exp; ++k) t = t * value;
    r = r + t;
  }
  return r;
}

Int Poly::content() const {
  Int g = 0;
  for (const auto& [m, c] : terms_) {
    Int a = abs(c);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) break;
  }
  if (g == 0) return 1;
  if (lead_coeff() < 0) g = -g;
  return g;
}

Poly Poly::primitive_part() const {
  if (is_zero()) return *this;
  Int c = content();
  Poly r;
  for (const auto& [m, co] : terms_) r.terms_[m] = co / c;
  return r;
}

Poly Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw Sl3Error(ErrorCode::ZeroDivision, "divide_exact by zero");
  Poly rem = *this;
  Poly quot;
  while (!rem.is_zero()) {
    const Monomial& lm = rem.lead_mono();
    if (!mono_divides(d.lead_mono(), lm))
      throw Sl3Error(ErrorCode::BadInput, "polynomial division not exact (monomial)");
    Int q = rem.lead_coeff() / d.lead_coeff();
    if (q * d.lead_coeff() != rem.lead_coeff())
      throw Sl3Error(ErrorCode::BadInput, "polynomial division not exact (coefficient)");
    Monomial qm = mono_div(lm, d.lead_mono());
    quot.add_term(qm, q);
    rem = rem - d.mul_term(qm, q);
  }
  return quot;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string s;
  // Print leading terms first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += (c < 0) ? " - " : " + ";
    }
    Int a = abs(c);
    if (a != 1 || m.empty()) {
      s += a.get_str();
      if (!m.empty()) s += "*";
    }
    if (!m.empty()) s += mono_str(m, names);
  }
  return s;
}

namespace {

// Univariate view of p in variable v: coefficients are polynomials in the
// remaining variables, indexed by degree.
std::vector<Poly> coeffs_in(const Poly& p, uint32_t v) {
  std::vector<Poly> cs(p.degree_in(v) + 1);
  for (const auto& [m, c] : p.terms()) {
    Monomial rest;
    uint32_t exp = 0;
    for (const auto& [mv, e] : m) {
      if (mv == v)
        exp = e;
      else
        rest.emplace_back(mv, e);
    }
    cs[exp].add_term(rest, c);
  }
  return cs;
}

Poly from_coeffs(const std::vector<Poly>& cs, uint32_t v) {
  Poly r;
  for (size_t d = 0; d < cs.size(); ++d) {
    Monomial vm;
    if (d > 0) vm.emplace_back(v, (uint32_t)d);
    r = r + cs[d].mul_term(vm, 1);
  }
  return r;
}

Poly poly_content_in(const Poly& p, uint32_t v) {
  Poly g;
  for (const Poly& c : coeffs_in(p, v))
    if (!c.is_zero()) g = poly_gcd(g, c);
  return g;
}

int deg(const std::vector<Poly>& cs) {
  for (int d = (int)cs.size() - 1; d >= 0; --d)
    if (!cs[d].is_zero()) return d;
  return -1;
}

// Pseudo-remainder of a by b in variable v (both as coefficient vectors).
std::vector<Poly> pseudo_rem(std::vector<Poly> a, const std::vector<Poly>& b, uint32_t v) {
  int db = deg(b);
  const Poly& lb = b[db];
  int da = deg(a);
  while (da >= db) {
    Poly la = a[da];
    // a = a*lb - la * x^{da-db} * b
    for (int i = 0; i <= da; ++i)
      if (!a[i].is_zero()) a[i] = a[i] * lb;
    for (int i = 0; i <= db; ++i)
      if (!b[i].is_zero()) a[i + da - db] = a[i + da - db] - la * b[i];
    int nd = deg(a);
    if (nd == da) throw Sl3Error(ErrorCode::BadInput, "pseudo_rem failed to reduce degree");
    da = nd;
    a.resize(std::max(0, da) + 1);
  }
  a.resize(std::max(0, da) + 1);
  return a;
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.is_zero() ? b : (b.lead_coeff() < 0 ? -b : b);
  if (b.is_zero()) return a.lead_coeff() < 0 ? -a : a;
  if (a.is_constant() || b.is_constant()) {
    Int ga = a.is_constant() ? (a.is_zero() ? Int(0) : abs(a.coeff(Monomial{}))) : abs(a.content());
    Int gb = b.is_constant() ? (b.is_zero() ? Int(0) : abs(b.coeff(Monomial{}))) : abs(b.content());
    Int g;
    mpz_gcd(g.get_mpz_t(), ga.get_mpz_t(), gb.get_mpz_t());
    return Poly(g);
  }
  uint32_t v = std::max(a.max_var(), b.max_var());

  Int ca = abs(a.content()), cb = abs(b.content());
  Int cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  Poly pa = a.primitive_part(), pb = b.primitive_part();

  Poly conta = poly_content_in(pa, v);
  Poly contb = poly_content_in(pb, v);
  Poly contg = poly_gcd(conta, contb);

  std::vector<Poly> u = coeffs_in(pa.divide_exact(conta), v);
  std::vector<Poly> w = coeffs_in(pb.divide_exact(contb), v);
  if (deg(u) < deg(w)) std::swap(u, w);

  // Primitive polynomial remainder sequence.
  while (true) {
    if (deg(w) < 0) break;
    std::vector<Poly> r = pseudo_rem(u, w, v);
    u = std::move(w);
    w = std::move(r);
    if (deg(w) < 0) break;
    // Make w primitive w.r.t. v to keep sizes bounded.
    Poly wp = from_coeffs(w, v);
    Poly c = poly_content_in(wp, v);
    w = coeffs_in(wp.divide_exact(c), v);
  }
  Poly g = from_coeffs(u, v);
  Poly gc = poly_content_in(g, v);
  g = g.divide_exact(gc).primitive_part();
  Poly result = (contg * g).mul_term(Monomial{}, cg);
  if (!result.is_zero() && result.lead_coeff() < 0) result = -result;
  return result;
}

Poly reduce_by(const Poly& p, const std::vector<Poly>& divisors) {
  Poly r = p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Poly& d : divisors) {
      if (d.is_zero()) continue;
      const Monomial& lm = d.lead_mono();
      const Int& lc = d.lead_coeff();
      // Scan for any term divisible by lm, highest first.
      bool local = true;
      while (local) {
        local = false;
        for (auto it = r.terms().rbegin(); it != r.terms().rend(); ++it) {
          if (mono_divides(lm, it->first)) {
            Int q = it->second / lc;
            if (q * lc != it->second)
              throw Sl3Error(ErrorCode::BadInput, "reduce_by: divisor lead coeff must be a unit");
            r = r - d.mul_term(mono_div(it->first, lm), q);
            local = changed = true;
            break;
          }
        }
      }
    }
  }
  return r;
}

uint32_t VarPool::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  uint32_t id = (uint32_t)names_.size();
  names_.push_back(name);
  index_[name] = id;
  return id;
}

uint32_t VarPool::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Sl3Error(ErrorCode::BadInput, "unknown variable: " + name);
  return it->second;
}

bool VarPool::contains(const std::string& name) const { return index_.count(name) > 0; }

}  // namespace sl3web
