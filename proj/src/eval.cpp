#include "sl3web/eval.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sl3web {

namespace {

// Beyond this many labels even the numeric sum (3^width terms) is hopeless.
constexpr int kNumericWidthCap = 32;
constexpr int kParallelMinWidth = 9;

// ---------------------------------------------------------------------------
// Labeling model. Fragments are the maximal pieces of strands between plugs;
// a crossing lets both transit strands keep their labels, so the fragments
// meeting at opposite crossing ports share one label class.

struct LabelModel {
  int classes = 0;
  std::vector<std::array<int, 3>> vertexTriples;  // label classes at vertex slots, cw
  std::vector<std::pair<int, int>> pointEnds;     // (class, point id)
  struct PlugUse {
    int cut;
    bool with;
    int before, after;  // classes entering / leaving the plug along the strand
  };
  std::vector<PlugUse> plugUses;
  long freeLoops = 0;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

LabelModel build_model(const Diagram& d) {
  std::vector<int> edgeBase(d.edges.size(), -1), loopBase(d.loops.size(), -1);
  int nf = 0;
  for (size_t e = 0; e < d.edges.size(); ++e)
    if (d.edges[e].alive) {
      edgeBase[e] = nf;
      nf += (int)d.edges[e].plugs.size() + 1;
    }
  long plugless = 0;
  for (size_t l = 0; l < d.loops.size(); ++l) {
    if (!d.loops[l].alive) continue;
    if (d.loops[l].plugs.empty()) {
      ++plugless;
      continue;
    }
    loopBase[l] = nf;
    nf += (int)d.loops[l].plugs.size();
  }

  auto endFrag = [&](int e, int end) {
    return edgeBase[e] + (end == 0 ? 0 : (int)d.edges[e].plugs.size());
  };

  UnionFind uf(nf);
  for (const auto& x : d.crossings) {
    if (!x.alive) continue;
    for (int p = 0; p < 2; ++p) {
      auto [e1, n1] = x.slots[p];
      auto [e2, n2] = x.slots[p + 2];
      if (e1 >= 0 && e2 >= 0) uf.unite(endFrag(e1, n1), endFrag(e2, n2));
    }
  }

  std::vector<int> cls(nf, -1);
  LabelModel m;
  for (int f = 0; f < nf; ++f) {
    int r = uf.find(f);
    if (cls[r] < 0) cls[r] = m.classes++;
    cls[f] = cls[r];
  }
  m.freeLoops = d.freeLoops + plugless;

  for (const auto& v : d.vertices) {
    if (!v.alive) continue;
    // The permutation sign reads the rotation counterclockwise, i.e. slot
    // order reversed; pinned by the annulus tripod, whose invariant
    // <x, Xx, y> must contain the term -x1^2 y2 X31.
    static constexpr int kReading[3] = {0, 2, 1};
    std::array<int, 3> t{};
    for (int s = 0; s < 3; ++s) {
      const auto& slot = v.slots[kReading[s]];
      t[s] = cls[endFrag(slot.first, slot.second)];
    }
    m.vertexTriples.push_back(t);
  }
  for (size_t e = 0; e < d.edges.size(); ++e) {
    const auto& E = d.edges[e];
    if (!E.alive) continue;
    if (E.a.kind == EndRef::PointEnd) m.pointEnds.push_back({cls[endFrag((int)e, 0)], E.a.id});
    if (E.b.kind == EndRef::PointEnd) m.pointEnds.push_back({cls[endFrag((int)e, 1)], E.b.id});
    for (size_t t = 0; t < E.plugs.size(); ++t) {
      const auto& q = d.plugs[E.plugs[t]];
      m.plugUses.push_back({q.cut, q.with_sense, cls[edgeBase[e] + (int)t],
                            cls[edgeBase[e] + (int)t + 1]});
    }
  }
  for (size_t l = 0; l < d.loops.size(); ++l) {
    const auto& L = d.loops[l];
    if (!L.alive || L.plugs.empty()) continue;
    int ml = (int)L.plugs.size();
    // Fragment t runs from plug t to plug t+1 along the orientation, so plug t
    // sits between fragments t-1 and t.
    for (int t = 0; t < ml; ++t) {
      const auto& q = d.plugs[L.plugs[t]];
      m.plugUses.push_back({q.cut, q.with_sense, cls[loopBase[l] + (t - 1 + ml) % ml],
                            cls[loopBase[l] + t]});
    }
  }
  return m;
}

void require_ready(const Diagram& d, const Assignment& a) {
  Violations v = d.validate();
  if (!v.empty()) {
    std::string msg = v[0].where + ": " + v[0].message;
    if (v.size() > 1) msg += " (+" + std::to_string(v.size() - 1) + " more)";
    throw Sl3Error(ErrorCode::Unvalidated, msg);
  }
  const SurfaceContext& ctx = *d.ctx;
  if (a.points.size() != ctx.pointColor.size() || a.cuts.size() != ctx.cuts.cuts.size())
    throw Sl3Error(ErrorCode::TypeMismatch,
                   "assignment has " + std::to_string(a.points.size()) + " point triples and " +
                       std::to_string(a.cuts.size()) + " matrices, surface needs " +
                       std::to_string(ctx.pointColor.size()) + " and " +
                       std::to_string(ctx.cuts.cuts.size()));
}

long long pow3(int k) {
  long long n = 1;
  for (int i = 0; i < k; ++i) n *= 3;
  return n;
}

// Labelings are enumerated lexicographically: class 0 is the most significant
// digit of the index. Exact rationals make the summation order irrelevant.
void decode(long long idx, std::vector<int>& lab) {
  for (int c = (int)lab.size() - 1; c >= 0; --c) {
    lab[c] = (int)(idx % 3);
    idx /= 3;
  }
}

bool advance(std::vector<int>& lab) {
  for (int c = (int)lab.size() - 1; c >= 0; --c) {
    if (++lab[c] < 3) return true;
    lab[c] = 0;
  }
  return false;
}

Rat sum_range(const LabelModel& m, const Assignment& a, const std::vector<Mat3>& plugMat,
              long long lo, long long hi) {
  std::vector<int> lab(m.classes, 0);
  decode(lo, lab);
  Rat sum = 0;
  Rat term;
  for (long long idx = lo; idx < hi; ++idx) {
    int sign = 1;
    for (const auto& t : m.vertexTriples) {
      sign *= epsilon3(lab[t[0]], lab[t[1]], lab[t[2]]);
      if (sign == 0) break;
    }
    if (sign != 0) {
      term = sign;
      for (const auto& [c, p] : m.pointEnds) term *= a.points[p][lab[c]];
      for (size_t i = 0; i < m.plugUses.size(); ++i)
        term *= plugMat[i][lab[m.plugUses[i].before]][lab[m.plugUses[i].after]];
      sum += term;
    }
    advance(lab);
  }
  return sum;
}

Rat evaluate_impl(const Diagram& d, const Assignment& a, bool allowParallel) {
  require_ready(d, a);
  LabelModel m = build_model(d);
  if (m.classes > kNumericWidthCap)
    throw Sl3Error(ErrorCode::SizeLimit, "labeling space has 3^" + std::to_string(m.classes) +
                                             " entries; refusing to enumerate");
  std::vector<Mat3> plugMat;
  plugMat.reserve(m.plugUses.size());
  for (const auto& u : m.plugUses)
    plugMat.push_back(u.with ? a.cuts[u.cut] : adjugate3(a.cuts[u.cut]));

  const long long N = pow3(m.classes);
  Rat total = 0;
#ifdef _OPENMP
  if (allowParallel && m.classes >= kParallelMinWidth) {
    int blocks = std::max(1, 4 * omp_get_max_threads());
    if ((long long)blocks > N) blocks = (int)N;
    const long long chunk = (N + blocks - 1) / blocks;
    std::vector<Rat> part(blocks);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < blocks; ++b)
      part[b] = sum_range(m, a, plugMat, b * chunk, std::min(N, (b + 1) * chunk));
    for (const Rat& p : part) total += p;
  } else {
    total = sum_range(m, a, plugMat, 0, N);
  }
#else
  (void)allowParallel;
  total = sum_range(m, a, plugMat, 0, N);
#endif
  for (long i = 0; i < m.freeLoops; ++i) total *= 3;
  return total;
}

// ---------------------------------------------------------------------------
// Symbolic path.

struct VarLayout {
  int npoints, ncuts;
  int pvar(int p, int i0) const { return 3 * p + i0; }
  int cvar(int k, int i0, int j0) const { return 3 * npoints + 9 * k + 3 * i0 + j0; }
  int total() const { return 3 * npoints + 9 * ncuts; }
};

VarLayout layout_of(const SurfaceContext& ctx) {
  return VarLayout{(int)ctx.pointColor.size(), (int)ctx.cuts.cuts.size()};
}

using TermMap = std::map<std::vector<int>, Int>;

void accumulate(TermMap& into, const std::vector<int>& expo, const Int& c) {
  auto it = into.find(expo);
  if (it == into.end()) {
    if (c != 0) into.emplace(expo, c);
    return;
  }
  it->second += c;
  if (it->second == 0) into.erase(it);
}

// One labeling contributes sign * (point vars) * (X entries for plugs going
// with the cut) * (2-term adjugate expansions for plugs going against).
void symbolic_range(const LabelModel& m, const VarLayout& L, long long lo, long long hi,
                    TermMap& acc) {
  std::vector<int> lab(m.classes, 0);
  decode(lo, lab);
  std::vector<std::pair<Int, std::vector<int>>> expanded, next;
  for (long long idx = lo; idx < hi; ++idx) {
    int sign = 1;
    for (const auto& t : m.vertexTriples) {
      sign *= epsilon3(lab[t[0]], lab[t[1]], lab[t[2]]);
      if (sign == 0) break;
    }
    if (sign != 0) {
      std::vector<int> base(L.total(), 0);
      std::vector<std::pair<int, std::pair<int, int>>> against;
      for (const auto& [c, p] : m.pointEnds) ++base[L.pvar(p, lab[c])];
      for (const auto& u : m.plugUses) {
        if (u.with)
          ++base[L.cvar(u.cut, lab[u.before], lab[u.after])];
        else
          against.push_back({u.cut, {lab[u.before], lab[u.after]}});
      }
      expanded.clear();
      expanded.push_back({Int(sign), base});
      for (const auto& [k, ij] : against) {
        // adj(X)_{ij} = X_{j+1,i+1} X_{j+2,i+2} - X_{j+1,i+2} X_{j+2,i+1},
        // indices cyclic mod 3 (matches adjugate3).
        int i0 = ij.first, j0 = ij.second;
        int r0 = (j0 + 1) % 3, r1 = (j0 + 2) % 3, c0 = (i0 + 1) % 3, c1 = (i0 + 2) % 3;
        next.clear();
        for (const auto& [coef, expo] : expanded) {
          std::vector<int> pos = expo;
          ++pos[L.cvar(k, r0, c0)];
          ++pos[L.cvar(k, r1, c1)];
          next.push_back({coef, std::move(pos)});
          std::vector<int> neg = expo;
          ++neg[L.cvar(k, r0, c1)];
          ++neg[L.cvar(k, r1, c0)];
          next.push_back({-coef, std::move(neg)});
        }
        expanded.swap(next);
      }
      for (auto& [coef, expo] : expanded) accumulate(acc, expo, coef);
    }
    advance(lab);
  }
}

// Lex normal form modulo det X^(k) = 1 for every cut: any monomial divisible
// by the full diagonal X11 X22 X33 is rewritten through the determinant
// expansion (all replacement monomials are lexicographically smaller, so this
// terminates). Two diagrams define the same invariant function exactly when
// their normal forms coincide, since each det X^(k) - 1 is a Groebner basis
// of its ideal and the cuts use disjoint variables.
void reduce_unimodular(TermMap& terms, const VarLayout& L) {
  if (L.ncuts == 0) return;
  // det X - X11 X22 X33, entries flattened as 3*i + j with signs
  static const int kRest[5][4] = {
      {-1, 0, 5, 7}, {-1, 1, 3, 8}, {+1, 1, 5, 6}, {+1, 2, 3, 7}, {-1, 2, 4, 6}};
  bool again = true;
  while (again) {
    again = false;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      int hit = -1;
      for (int k = 0; k < L.ncuts && hit < 0; ++k)
        if (it->first[L.cvar(k, 0, 0)] > 0 && it->first[L.cvar(k, 1, 1)] > 0 &&
            it->first[L.cvar(k, 2, 2)] > 0)
          hit = k;
      if (hit < 0) continue;
      std::vector<int> base = it->first;
      Int coef = it->second;
      terms.erase(it);
      --base[L.cvar(hit, 0, 0)];
      --base[L.cvar(hit, 1, 1)];
      --base[L.cvar(hit, 2, 2)];
      accumulate(terms, base, coef);
      for (const auto& r : kRest) {
        std::vector<int> e = base;
        ++e[L.cvar(hit, r[1] / 3, r[1] % 3)];
        ++e[L.cvar(hit, r[2] / 3, r[2] % 3)];
        ++e[L.cvar(hit, r[3] / 3, r[3] % 3)];
        accumulate(terms, e, Int(-r[0]) * coef);
      }
      again = true;
      break;
    }
  }
}

InvariantPolynomial symbolic_impl(const Diagram& d, int sizeLimit) {
  Violations v = d.validate();
  if (!v.empty())
    throw Sl3Error(ErrorCode::Unvalidated, v[0].where + ": " + v[0].message);
  LabelModel m = build_model(d);
  if (m.classes > sizeLimit)
    throw Sl3Error(ErrorCode::SizeLimit,
                   "diagram has " + std::to_string(m.classes) + " label fragments, limit " +
                       std::to_string(sizeLimit));
  VarLayout L = layout_of(*d.ctx);
  InvariantPolynomial poly = zero_polynomial(*d.ctx);
  const long long N = pow3(m.classes);
#ifdef _OPENMP
  if (m.classes >= kParallelMinWidth) {
    int blocks = std::max(1, 2 * omp_get_max_threads());
    if ((long long)blocks > N) blocks = (int)N;
    const long long chunk = (N + blocks - 1) / blocks;
    std::vector<TermMap> part(blocks);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < blocks; ++b)
      symbolic_range(m, L, b * chunk, std::min(N, (b + 1) * chunk), part[b]);
    for (const auto& pm : part)
      for (const auto& [expo, coef] : pm) accumulate(poly.terms, expo, coef);
  } else {
    symbolic_range(m, L, 0, N, poly.terms);
  }
#else
  symbolic_range(m, L, 0, N, poly.terms);
#endif
  if (m.freeLoops > 0) {
    Int f = 1;
    for (long i = 0; i < m.freeLoops; ++i) f *= 3;
    for (auto& [expo, coef] : poly.terms) coef *= f;
  }
  reduce_unimodular(poly.terms, L);
  return poly;
}

bool same_shape(const SurfaceContext& a, const SurfaceContext& b) {
  return a.pointColor == b.pointColor && a.cuts.cuts.size() == b.cuts.cuts.size();
}

}  // namespace

// ---------------------------------------------------------------------------

Violations validate_assignment(const SurfaceContext& ctx, const Assignment& a) {
  Violations out;
  if (a.points.size() != ctx.pointColor.size())
    out.push_back({"assignment", "expected " + std::to_string(ctx.pointColor.size()) +
                                     " point triples, got " + std::to_string(a.points.size())});
  if (a.cuts.size() != ctx.cuts.cuts.size())
    out.push_back({"assignment", "expected " + std::to_string(ctx.cuts.cuts.size()) +
                                     " cut matrices, got " + std::to_string(a.cuts.size())});
  for (size_t k = 0; k < a.cuts.size(); ++k) {
    Rat det = det3(a.cuts[k]);
    if (det != 1)
      out.push_back({"cut " + std::to_string(k),
                     "matrix determinant is " + format_rat(det) + ", expected exactly 1"});
  }
  return out;
}

Mat3 random_unimodular(uint64_t seed, int magnitude, int shears) {
  if (magnitude < 1) throw Sl3Error(ErrorCode::BadInput, "magnitude must be at least 1");
  if (shears < 0) throw Sl3Error(ErrorCode::BadInput, "shear count must be nonnegative");
  Rng rng(seed);
  Mat3 mat = identity3();
  for (int s = 0; s < shears; ++s) {
    int i = (int)rng.int_in(0, 2);
    int j = (int)rng.int_in(0, 1);
    if (j >= i) ++j;
    int64_t t = 0;
    while (t == 0) t = rng.int_in(-magnitude, magnitude);
    // Left-multiply by the elementary shear E_{ij}(t): row i += t * row j.
    for (int c = 0; c < 3; ++c) mat[i][c] += Rat(t) * mat[j][c];
  }
  return mat;
}

Assignment random_assignment(const SurfaceContext& ctx, uint64_t seed, int magnitude) {
  Rng rng(seed);
  Assignment a;
  for (size_t p = 0; p < ctx.pointColor.size(); ++p) a.points.push_back(rng.vec3(magnitude));
  for (size_t k = 0; k < ctx.cuts.cuts.size(); ++k)
    a.cuts.push_back(random_unimodular(rng.raw(), magnitude));
  return a;
}

std::vector<std::string> invariant_variables(const SurfaceContext& ctx) {
  std::vector<std::string> vars;
  for (size_t p = 0; p < ctx.pointColor.size(); ++p) {
    const char* stem = ctx.pointColor[p] == Color::Black ? "x" : "y";
    for (int i = 1; i <= 3; ++i)
      vars.push_back(stem + std::to_string(p) + "_" + std::to_string(i));
  }
  for (size_t k = 0; k < ctx.cuts.cuts.size(); ++k)
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        vars.push_back("X" + std::to_string(k) + "_" + std::to_string(i) + std::to_string(j));
  return vars;
}

int point_variable(const SurfaceContext& ctx, int point, int i) {
  if (point < 0 || point >= (int)ctx.pointColor.size() || i < 1 || i > 3)
    throw Sl3Error(ErrorCode::BadInput, "no such point variable");
  return layout_of(ctx).pvar(point, i - 1);
}

int cut_variable(const SurfaceContext& ctx, int cut, int i, int j) {
  if (cut < 0 || cut >= (int)ctx.cuts.cuts.size() || i < 1 || i > 3 || j < 1 || j > 3)
    throw Sl3Error(ErrorCode::BadInput, "no such cut variable");
  return layout_of(ctx).cvar(cut, i - 1, j - 1);
}

void InvariantPolynomial::add_term(const std::vector<int>& expo, const Int& c) {
  if ((int)expo.size() != (int)vars.size())
    throw Sl3Error(ErrorCode::TypeMismatch, "exponent vector length does not match variables");
  accumulate(terms, expo, c);
}

void InvariantPolynomial::add_scaled(const InvariantPolynomial& p, const Int& c) {
  if (vars != p.vars)
    throw Sl3Error(ErrorCode::TypeMismatch, "polynomials live over different variable sets");
  if (c == 0) return;
  for (const auto& [expo, coef] : p.terms) accumulate(terms, expo, coef * c);
}

Int InvariantPolynomial::coefficient(const std::map<std::string, int>& monomial) const {
  std::vector<int> expo(vars.size(), 0);
  for (const auto& [name, e] : monomial) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end())
      throw Sl3Error(ErrorCode::BadInput, "unknown variable '" + name + "'");
    expo[it - vars.begin()] = e;
  }
  auto it = terms.find(expo);
  return it == terms.end() ? Int(0) : it->second;
}

Rat InvariantPolynomial::substitute(const Assignment& a) const {
  if ((int)a.points.size() != npoints || (int)a.cuts.size() != ncuts)
    throw Sl3Error(ErrorCode::TypeMismatch, "assignment shape does not match the polynomial");
  auto value = [&](int v) -> const Rat& {
    if (v < 3 * npoints) return a.points[v / 3][v % 3];
    int t = v - 3 * npoints;
    return a.cuts[t / 9][(t % 9) / 3][t % 3];
  };
  Rat total = 0;
  for (const auto& [expo, coef] : terms) {
    Rat term(coef);
    for (size_t v = 0; v < expo.size(); ++v)
      for (int e = 0; e < expo[v]; ++e) term *= value((int)v);
    total += term;
  }
  return total;
}

std::string InvariantPolynomial::to_string() const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [expo, coef] : terms) {
    Int c = coef;
    if (first) {
      if (c < 0) {
        out << "-";
        c = -c;
      }
    } else {
      out << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    bool hasVar = false;
    std::ostringstream vpart;
    for (size_t v = 0; v < expo.size(); ++v) {
      if (expo[v] == 0) continue;
      if (hasVar) vpart << "*";
      vpart << vars[v];
      if (expo[v] > 1) vpart << "^" << expo[v];
      hasVar = true;
    }
    if (!hasVar)
      out << c.get_str();
    else if (c == 1)
      out << vpart.str();
    else
      out << c.get_str() << "*" << vpart.str();
  }
  return out.str();
}

InvariantPolynomial zero_polynomial(const SurfaceContext& ctx) {
  InvariantPolynomial p;
  p.vars = invariant_variables(ctx);
  p.npoints = (int)ctx.pointColor.size();
  p.ncuts = (int)ctx.cuts.cuts.size();
  return p;
}

int labeling_width(const Diagram& d) { return build_model(d).classes; }

Rat evaluate(const Diagram& d, const Assignment& a) { return evaluate_impl(d, a, true); }

Rat evaluate_serial(const Diagram& d, const Assignment& a) { return evaluate_impl(d, a, false); }

InvariantPolynomial evaluate_symbolic(const Diagram& d, int sizeLimit) {
  return symbolic_impl(d, sizeLimit);
}

Rat evaluate(const DiagramCombination& c, const Assignment& a) {
  Rat total = 0;
  for (const auto& term : c) {
    if (term.coeff == 0) continue;
    total += Rat((long)term.coeff) * evaluate(term.web, a);
  }
  return total;
}

InvariantPolynomial evaluate_symbolic(const SurfaceContext& ctx, const DiagramCombination& c,
                                      int sizeLimit) {
  InvariantPolynomial sum = zero_polynomial(ctx);
  for (const auto& term : c) {
    if (!same_shape(ctx, *term.web.ctx))
      throw Sl3Error(ErrorCode::BadInput, "combination mixes different surfaces");
    if (term.coeff == 0) continue;
    sum.add_scaled(evaluate_symbolic(term.web, sizeLimit), Int((long)term.coeff));
  }
  return sum;
}

bool semantically_equal(const DiagramCombination& c1, const DiagramCombination& c2,
                        EqualityConfidence* confidence, int sizeLimit, int samples,
                        int magnitude) {
  const SurfaceContext* ctx = nullptr;
  for (const auto& t : c1) ctx = t.web.ctx.get();
  if (!ctx)
    for (const auto& t : c2) ctx = t.web.ctx.get();
  if (!ctx) {
    if (confidence) *confidence = EqualityConfidence::Exact;
    return true;
  }
  for (const auto& t : c1)
    if (!same_shape(*ctx, *t.web.ctx))
      throw Sl3Error(ErrorCode::BadInput, "combinations live over different surfaces");
  for (const auto& t : c2)
    if (!same_shape(*ctx, *t.web.ctx))
      throw Sl3Error(ErrorCode::BadInput, "combinations live over different surfaces");

  bool small = true;
  for (const auto& t : c1) small = small && labeling_width(t.web) <= sizeLimit;
  for (const auto& t : c2) small = small && labeling_width(t.web) <= sizeLimit;
  if (small) {
    if (confidence) *confidence = EqualityConfidence::Exact;
    return evaluate_symbolic(*ctx, c1, sizeLimit) == evaluate_symbolic(*ctx, c2, sizeLimit);
  }
  if (confidence) *confidence = EqualityConfidence::Sampled;
  for (int t = 0; t < samples; ++t) {
    Assignment a = random_assignment(*ctx, 0x51d3eb01ULL + 0x9e3779b97f4a7c15ULL * t, magnitude);
    if (evaluate(c1, a) != evaluate(c2, a)) return false;
  }
  return true;
}

}  // namespace sl3web
