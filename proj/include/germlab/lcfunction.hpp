#pragma once

// Locally constant compactly supported Q-valued functions on sl2(F), stored
// as finite rational combinations of indicators of cosets Y + g_{x,n}.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "germlab/decide.hpp"
#include "germlab/errors.hpp"
#include "germlab/qutil.hpp"
#include "germlab/sl2.hpp"
#include "germlab/tree.hpp"

namespace germlab {

/// Condition val(ka a + kb b + kc c + k0) >= threshold on X = (a, b, c).
struct LinearCondition {
  mpq_class ka, kb, kc, k0;
  long threshold = 0;

  mpq_class operator()(const QSl2& x) const { return ka * x.a + kb * x.b + kc * x.c + k0; }
};

struct CosetCell {
  QSl2 center;
  LatticeDescriptor lattice;

  bool contains(const QSl2& x, long p) const { return lattice.contains(x - center, p); }
  bool operator==(const CosetCell&) const = default;

  /// The three conditions cutting out the cell: Ad(g_x^{-1})(X - Y) in p^n sl2(O).
  std::array<LinearCondition, 3> conditions() const {
    const mpq_class& x = lattice.vertex.x;
    const long m = lattice.vertex.m;
    const long n = lattice.level;
    std::array<LinearCondition, 3> out{
        LinearCondition{1, 0, -x, 0, n},
        LinearCondition{2 * x, 1, -x * x, 0, n + m},
        LinearCondition{0, 0, 1, 0, n - m},
    };
    for (auto& cond : out) cond.k0 = -(cond.ka * center.a + cond.kb * center.b + cond.kc * center.c);
    return out;
  }

  /// Smallest N with p^N sl2(O) inside the lattice.
  long required_level(long p) const {
    const long vx = lattice.vertex.x == 0 ? 0 : std::min(0L, vp(lattice.vertex.x, p));
    const long n = lattice.level, m = lattice.vertex.m;
    return std::max({n - vx, n + m - 2 * vx, n - m});
  }

  /// Smallest M with the cell inside p^{-M} sl2(O).
  long support_bound(long p) const {
    long low = kValInf;
    for (const auto* e : {&center.a, &center.b, &center.c})
      if (*e != 0) low = std::min(low, vp(*e, p));
    for (const auto& g : lattice.generators(p))
      for (const auto* e : {&g.a, &g.b, &g.c})
        if (*e != 0) low = std::min(low, vp(*e, p));
    return low == kValInf ? 0 : -low;
  }

  /// Same set with the canonical center (reduced in the vertex frame).
  CosetCell canonical(long p) const {
    QMat2 g = lattice.basis(p);
    QSl2 y = conjugate(g.inverse(), center);
    const long n = lattice.level;
    y = {reduce_coset(y.a, n, p), reduce_coset(y.b, n, p), reduce_coset(y.c, n, p)};
    return {conjugate(g, y), lattice};
  }

  std::string to_string() const { return format_matrix(center) + " + " + lattice.to_string(); }
};

inline bool cell_less(const CosetCell& x, const CosetCell& y) {
  if (!(x.lattice == y.lattice)) return x.lattice < y.lattice;
  if (x.center.a != y.center.a) return x.center.a < y.center.a;
  if (x.center.b != y.center.b) return x.center.b < y.center.b;
  return x.center.c < y.center.c;
}

class LCFunction {
 public:
  struct Term {
    mpq_class coeff;
    CosetCell cell;
    bool operator==(const Term&) const = default;
  };

  explicit LCFunction(long p = 5) : p_(p) {}

  static LCFunction indicator(const CosetCell& cell, long p) {
    LCFunction f(p);
    f.terms_.push_back({1, cell});
    return f;
  }
  static LCFunction indicator(const QSl2& center, const LatticeDescriptor& lattice, long p) {
    return indicator(CosetCell{center, lattice}, p);
  }
  /// Indicator of p^n sl2(O).
  static LCFunction ball(long n, long p) { return indicator(QSl2{0, 0, 0}, {TreeVertex::base(), n}, p); }

  long prime() const { return p_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  LCFunction& add_term(const mpq_class& coeff, const CosetCell& cell) {
    if (coeff != 0) terms_.push_back({coeff, cell});
    return *this;
  }

  mpq_class evaluate(const QSl2& x) const {
    mpq_class s = 0;
    for (const auto& t : terms_)
      if (t.cell.contains(x, p_)) s += t.coeff;
    return s;
  }
  mpq_class evaluate(const Sl2Element& x) const {
    if (!x.is_exact()) throw InsufficientPrecision("evaluate needs exact entries");
    return evaluate(x.rational());
  }
  mpq_class operator()(const QSl2& x) const { return evaluate(x); }

  /// f is invariant under translation by p^level() sl2(O).
  long level() const {
    long n = LONG_MIN;
    for (const auto& t : terms_) n = std::max(n, t.cell.required_level(p_));
    return terms_.empty() ? 0 : n;
  }
  /// supp f lies in p^{-support_bound()} sl2(O).
  long support_bound() const {
    long m = LONG_MIN;
    for (const auto& t : terms_) m = std::max(m, t.cell.support_bound(p_));
    return terms_.empty() ? 0 : m;
  }

  /// Identical cells merged, zero coefficients dropped, deterministic order.
  LCFunction normalized() const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_) ts.push_back({t.coeff, t.cell.canonical(p_)});
    std::stable_sort(ts.begin(), ts.end(), [](const Term& x, const Term& y) { return cell_less(x.cell, y.cell); });
    LCFunction out(p_);
    for (auto& t : ts) {
      if (!out.terms_.empty() && out.terms_.back().cell == t.cell) out.terms_.back().coeff += t.coeff;
      else out.terms_.push_back(t);
    }
    std::erase_if(out.terms_, [](const Term& t) { return t.coeff == 0; });
    return out;
  }

  /// Disjoint refinement into maximal cubes Z + p^k sl2(O) at the base vertex.
  /// Two functions are equal iff their canonical forms are identical.
  LCFunction canonicalize() const {
    LCFunction base = normalized();
    LCFunction out(p_);
    if (base.terms_.empty()) return out;
    std::vector<std::array<LinearCondition, 3>> conds;
    for (const auto& t : base.terms_) conds.push_back(t.cell.conditions());
    std::vector<std::size_t> active(base.terms_.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
    long root = -base.support_bound();
    auto v = refine(base, conds, QSl2{0, 0, 0}, root, active, mpq_class(0), out.terms_);
    if (v && *v != 0) out.terms_.push_back({*v, CosetCell{{0, 0, 0}, {TreeVertex::base(), root}}});
    return out;
  }

  bool is_zero() const { return canonicalize().terms_.empty(); }

  /// X -> f(X + shift).
  LCFunction translated(const QSl2& shift) const {
    LCFunction out(p_);
    for (const auto& t : terms_) out.terms_.push_back({t.coeff, {t.cell.center - shift, t.cell.lattice}});
    return out;
  }

  /// X -> f(Ad(g) X).
  LCFunction conjugated(const QMat2& g) const {
    LCFunction out(p_);
    QMat2 gi = g.inverse();
    for (const auto& t : terms_)
      out.terms_.push_back(
          {t.coeff, {conjugate(gi, t.cell.center), {act(gi, t.cell.lattice.vertex, p_), t.cell.lattice.level}}});
    return out;
  }

  LCFunction& operator+=(const LCFunction& o) {
    check_prime(o);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  friend LCFunction operator+(LCFunction x, const LCFunction& y) { return x += y; }
  friend LCFunction operator*(const mpq_class& s, const LCFunction& f) {
    LCFunction out(f.p_);
    if (s == 0) return out;
    for (const auto& t : f.terms_) out.terms_.push_back({s * t.coeff, t.cell});
    return out;
  }
  friend LCFunction operator-(const LCFunction& x, const LCFunction& y) { return x + mpq_class(-1) * y; }
  friend bool operator==(const LCFunction& x, const LCFunction& y) {
    return x.p_ == y.p_ && x.terms_ == y.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += " + ";
      s += germlab::to_string(terms_[i].coeff) + "*1[" + terms_[i].cell.to_string() + "]";
    }
    return s;
  }

 private:
  long p_;
  std::vector<Term> terms_;

  void check_prime(const LCFunction& o) const {
    if (o.p_ != p_) throw std::invalid_argument("functions over different primes");
  }

  static Tri decide_cube(const LinearCondition& c, const QSl2& z, long k, long p) {
    long v0 = vp(c(z), p);
    long mu = kValInf;
    for (const auto* e : {&c.ka, &c.kb, &c.kc})
      if (*e != 0) mu = std::min(mu, vp(*e, p) + k);
    if (v0 >= c.threshold && mu >= c.threshold) return Tri::In;
    if (v0 < c.threshold && v0 < mu) return Tri::Out;
    return Tri::Unknown;
  }

  // Returns the constant value on the cube, or nullopt after emitting leaves.
  std::optional<mpq_class> refine(const LCFunction& base, const std::vector<std::array<LinearCondition, 3>>& conds,
                                  const QSl2& z, long k, const std::vector<std::size_t>& active,
                                  const mpq_class& offset, std::vector<Term>& out) const {
    mpq_class value = offset;
    std::vector<std::size_t> unknown;
    for (auto i : active) {
      bool all_in = true, any_out = false;
      for (const auto& c : conds[i]) {
        Tri t = decide_cube(c, z, k, p_);
        if (t == Tri::Out) {
          any_out = true;
          break;
        }
        if (t == Tri::Unknown) all_in = false;
      }
      if (any_out) continue;
      if (all_in) value += base.terms_[i].coeff;
      else unknown.push_back(i);
    }
    if (unknown.empty()) return value;
    mpq_class step = qpow(p_, k);
    std::vector<std::optional<mpq_class>> child_values;
    std::vector<QSl2> child_centers;
    std::vector<Term> child_leaves;
    child_values.reserve(static_cast<std::size_t>(p_ * p_ * p_));
    for (long i = 0; i < p_; ++i)
      for (long j = 0; j < p_; ++j)
        for (long l = 0; l < p_; ++l) {
          QSl2 child{z.a + step * i, z.b + step * j, z.c + step * l};
          auto v = refine(base, conds, child, k + 1, unknown, value, child_leaves);
          child_values.push_back(v);
          child_centers.push_back(child);
        }
    bool uniform = child_values.front().has_value();
    for (const auto& v : child_values) uniform = uniform && v && *v == *child_values.front();
    if (uniform) return child_values.front();
    for (std::size_t i = 0; i < child_values.size(); ++i)
      if (child_values[i] && *child_values[i] != 0)
        out.push_back({*child_values[i], CosetCell{child_centers[i], {TreeVertex::base(), k + 1}}});
    out.insert(out.end(), child_leaves.begin(), child_leaves.end());
    return std::nullopt;
  }
};

inline LCFunction indicator(const CosetCell& cell, long p) { return LCFunction::indicator(cell, p); }

inline mpq_class evaluate(const LCFunction& f, const QSl2& x) { return f.evaluate(x); }

/// f_c(X) = f(c X).
inline LCFunction dilate(const LCFunction& f, const mpq_class& c) {
  if (c == 0) throw DivisionByZero("dilate by zero");
  const long p = f.prime();
  const long vc = vp(c, p);
  LCFunction out(p);
  mpq_class ci = 1 / c;
  for (const auto& t : f.terms())
    out.add_term(t.coeff, {ci * t.cell.center, {t.cell.lattice.vertex, t.cell.lattice.level - vc}});
  return out;
}

inline LCFunction dilate(const LCFunction& f, const PadicScalar& c) { return dilate(f, c.rational()); }

/// q^d f - f_zeta with f_zeta(X) = f(zeta^2 X).
inline LCFunction h_combination(const LCFunction& f, int d) {
  if (d != 0 && d != 2) throw std::invalid_argument("h_combination: d must be 0 or 2");
  const long p = f.prime();
  return mpq_class(zpow(p, d)) * f - dilate(f, mpq_class(p * p));
}

inline bool is_invariant_under(const LCFunction& f, const LatticeDescriptor& lattice) {
  const long p = f.prime();
  auto gens = lattice.generators(p);
  // Fast path: every cell's lattice already contains the translation lattice.
  bool all_contain = true;
  for (const auto& t : f.terms()) {
    for (const auto& g : gens) all_contain = all_contain && t.cell.lattice.contains(g, p);
    if (!all_contain) break;
  }
  if (all_contain) return true;
  for (const auto& g : gens)
    if (!(f - f.translated(g)).is_zero()) return false;
  return true;
}

/// Member of the depth-r proxy family with its invariance certificate.
struct ProxyFunction {
  LCFunction f;
  LatticeDescriptor invariance;  // f is invariant under translation by this lattice
  long r = 0;
  std::string id;

  bool verify_certificate() const { return is_invariant_under(f, invariance); }
};

/// Indicators 1_{Y + g_{x, r+1}} for every center Y and vertex x.
inline std::vector<ProxyFunction> depth_r_family(long r, const std::vector<QSl2>& centers,
                                                 const std::vector<TreeVertex>& points, long p) {
  std::vector<ProxyFunction> out;
  for (const auto& x : points)
    for (const auto& y : centers) {
      LatticeDescriptor lat{x, r + 1};
      out.push_back({LCFunction::indicator(y, lat, p), lat, r,
                     "1[" + format_matrix(y) + "+" + lat.to_string() + "]"});
    }
  return out;
}

/// Dilation of a certified function; the certificate level moves by -val(c).
inline ProxyFunction dilate(const ProxyFunction& f, const mpq_class& c) {
  long vc = vp(c, f.f.prime());
  LatticeDescriptor lat{f.invariance.vertex, f.invariance.level - vc};
  return {dilate(f.f, c), lat, lat.level - 1, "dilate(" + f.id + "," + to_string(c) + ")"};
}

namespace detail {

inline Tri neg_det_positive_on(const QuadPoly& poly, std::vector<mpq_class> center, long radius, long p, int depth) {
  std::vector<long> rad(3, radius);
  Tri t = decide(poly, center, rad, 1, p);
  if (t != Tri::Unknown) return t;
  if (depth > 12) throw InsufficientPrecision("support check did not resolve");
  mpq_class step = qpow(p, radius);
  bool all_in = true;
  for (long i = 0; i < p; ++i)
    for (long j = 0; j < p; ++j)
      for (long l = 0; l < p; ++l) {
        std::vector<mpq_class> c{center[0] + step * i, center[1] + step * j, center[2] + step * l};
        Tri s = neg_det_positive_on(poly, c, radius + 1, p, depth + 1);
        if (s == Tri::Out) return Tri::Out;
        if (s == Tri::Unknown) return Tri::Unknown;
        all_in = all_in && s == Tri::In;
      }
  return all_in ? Tri::In : Tri::Unknown;
}

}  // namespace detail

/// Whether every element of the cell is topologically nilpotent.
inline bool cell_in_g_nil(const CosetCell& cell, long p) {
  auto g = cell.lattice.generators(p);
  const QSl2& y = cell.center;
  QuadPoly poly(3);
  poly.c = y.neg_det();
  for (int i = 0; i < 3; ++i) {
    poly.lin[i] = 2 * y.a * g[i].a + y.b * g[i].c + y.c * g[i].b;
    poly.quad[i][i] = g[i].a * g[i].a + g[i].b * g[i].c;
    for (int j = i + 1; j < 3; ++j) poly.quad[i][j] = 2 * g[i].a * g[j].a + g[i].b * g[j].c + g[j].b * g[i].c;
  }
  return detail::neg_det_positive_on(poly, {0, 0, 0}, 0, p, 0) == Tri::In;
}

/// The group-side function f o cayley^{-1} on topologically unipotent elements.
class PulledBackFunction {
 public:
  explicit PulledBackFunction(LCFunction f) : f_(std::move(f)) {
    for (const auto& t : f_.terms())
      if (!cell_in_g_nil(t.cell, f_.prime()))
        throw OutsideDomain("support of " + t.cell.to_string() + " leaves the topologically nilpotent set");
  }
  const LCFunction& lie_algebra_function() const { return f_; }
  mpq_class evaluate(const GroupElement& g) const { return f_.evaluate(cayley_inv(g)); }

 private:
  LCFunction f_;
};

inline PulledBackFunction phi_pullback_support(const LCFunction& f) { return PulledBackFunction(f); }

}  // namespace germlab
