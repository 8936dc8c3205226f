#pragma once

// The Bruhat-Tits tree of SL2(Q_p).
//
// Vertex (m, x), x in F / p^m O, is the homothety class of the lattice
// g_v O^2 with g_v = [[p^m, x], [0, 1]]. Every lattice class has exactly one
// such representative. The Moy-Prasad lattice at a vertex is
//   g_{v,n} = Ad(g_v)(p^n sl2(O)) = p^n (sl2 intersected with End(g_v O^2)).

#include <gmpxx.h>

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "germlab/errors.hpp"
#include "germlab/qutil.hpp"
#include "germlab/sl2.hpp"

namespace germlab {

/// Canonical representative of x + p^m O: an element of Z[1/p] in [0, p^m).
inline mpq_class reduce_coset(const mpq_class& x, long m, long p) {
  long v = vp(x, p);
  if (v >= m) return 0;
  long e = v < 0 ? -v : 0;
  mpq_class y = x * qpow(p, e);
  mpq_class r(mod_pk(y, p, m + e), zpow(p, e));
  r.canonicalize();
  return r;
}

struct TreeVertex {
  long m = 0;
  mpq_class x = 0;

  bool operator==(const TreeVertex& o) const { return m == o.m && x == o.x; }
  bool operator<(const TreeVertex& o) const { return m != o.m ? m < o.m : x < o.x; }
  std::string to_string() const { return "(" + std::to_string(m) + "," + germlab::to_string(x) + ")"; }

  static TreeVertex base() { return {0, 0}; }
  static TreeVertex make(long m, const mpq_class& x, long p) { return {m, reduce_coset(x, m, p)}; }

  QMat2 basis(long p) const { return {qpow(p, m), x, 0, 1}; }
};

inline TreeVertex parse_vertex(const std::string& text, long p) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') throw ParseError("bad vertex '" + text + "'");
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("bad vertex '" + text + "'");
  long m = 0;
  try {
    m = std::stol(s.substr(1, comma - 1));
  } catch (const std::exception&) {
    throw ParseError("bad vertex '" + text + "'");
  }
  return TreeVertex::make(m, parse_rational(s.substr(comma + 1, s.size() - comma - 2)), p);
}

/// Vertex of the lattice class M O^2 (M invertible).
inline TreeVertex vertex_from_matrix(QMat2 g, long p) {
  if (g.det() == 0) throw DivisionByZero("singular lattice basis");
  // Column operations over GL2(O) clear the lower-left entry.
  if (g.m10 != 0) {
    if (g.m11 == 0 || vp(g.m11, p) > vp(g.m10, p)) {
      std::swap(g.m00, g.m01);
      std::swap(g.m10, g.m11);
    }
    mpq_class t = g.m10 / g.m11;
    g.m00 -= t * g.m01;
    g.m10 = 0;
  }
  mpq_class alpha = g.m00 / g.m11;
  mpq_class beta = g.m01 / g.m11;
  return TreeVertex::make(vp(alpha, p), beta, p);
}

inline TreeVertex act(const QMat2& g, const TreeVertex& v, long p) { return vertex_from_matrix(g * v.basis(p), p); }

inline TreeVertex act(const GroupElement& g, const TreeVertex& v) {
  if (!g.is_exact()) throw InsufficientPrecision("act: group element must be exact");
  return act(g.rational(), v, g.p());
}

inline std::vector<TreeVertex> neighbors(const TreeVertex& v, long p) {
  std::vector<TreeVertex> out;
  out.reserve(static_cast<std::size_t>(p + 1));
  mpq_class step = qpow(p, v.m);
  for (long j = 0; j < p; ++j) out.push_back(TreeVertex::make(v.m + 1, v.x + step * j, p));
  out.push_back(TreeVertex::make(v.m - 1, v.x, p));
  return out;
}

/// Graph distance, from the elementary divisors of g_v^{-1} g_w.
inline long distance(const TreeVertex& v, const TreeVertex& w, long p) {
  QMat2 h = v.basis(p).inverse() * w.basis(p);
  long d1 = std::min({vp(h.m00, p), vp(h.m01, p), vp(h.m10, p), vp(h.m11, p)});
  long d2 = vp(h.det(), p) - d1;
  return d2 - d1;
}

inline std::vector<TreeVertex> ball(const TreeVertex& center, long radius, long p) {
  if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
  std::vector<TreeVertex> out{center};
  std::set<TreeVertex> seen{center};
  std::size_t frontier_begin = 0;
  for (long r = 0; r < radius; ++r) {
    std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i)
      for (auto& w : neighbors(out[i], p))
        if (seen.insert(w).second) out.push_back(w);
    frontier_begin = frontier_end;
  }
  return out;
}

inline long ball_size(long radius, long p) {
  if (radius == 0) return 1;
  mpz_class s = 1 + (p + 1) * (zpow(p, radius) - 1) / (p - 1);
  return s.get_si();
}

/// Largest n with X in g_{v,n}; kValInf for X = 0.
inline long max_level(const TreeVertex& v, const QSl2& x, long p) {
  mpq_class e1 = x.a - v.x * x.c;
  mpq_class e2 = 2 * x.a * v.x + x.b - x.c * v.x * v.x;
  long l1 = vp(e1, p);
  long l2 = vp(e2, p);
  long l3 = vp(x.c, p);
  long best = l1;
  if (l2 != kValInf) best = std::min(best, l2 - v.m);
  if (l3 != kValInf) best = std::min(best, l3 + v.m);
  return best;
}

/// The lattice g_{v,n}.
struct LatticeDescriptor {
  TreeVertex vertex;
  long level = 0;

  QMat2 basis(long p) const { return vertex.basis(p); }
  bool contains(const QSl2& x, long p) const { return max_level(vertex, x, p) >= level; }
  bool operator==(const LatticeDescriptor&) const = default;
  bool operator<(const LatticeDescriptor& o) const {
    return vertex == o.vertex ? level < o.level : vertex < o.vertex;
  }
  std::string to_string() const { return "g_{" + vertex.to_string() + "," + std::to_string(level) + "}"; }

  /// O-basis of the lattice as elements of sl2: p^n Ad(g_v) of H, E, F.
  std::array<QSl2, 3> generators(long p) const {
    QMat2 g = basis(p);
    mpq_class s = qpow(p, level);
    return {s * conjugate(g, QSl2{1, 0, 0}), s * conjugate(g, QSl2{0, 1, 0}), s * conjugate(g, QSl2{0, 0, 1})};
  }
};

inline LatticeDescriptor mp_lattice(const TreeVertex& v, long n) { return {v, n}; }

inline bool contains(const LatticeDescriptor& lattice, const Sl2Element& x) {
  if (!x.is_exact()) {
    // Entries known to absolute precision A decide membership when the
    // conjugated entries' thresholds stay below A.
    throw InsufficientPrecision("lattice membership needs exact entries");
  }
  return lattice.contains(x.rational(), x.prime());
}

inline long depth_via_tree(const QSl2& x, long radius, long p) {
  if (x.is_zero()) throw std::invalid_argument("depth_via_tree: X must be nonzero");
  long best = LONG_MIN;
  for (const auto& v : ball(TreeVertex::base(), radius, p)) best = std::max(best, max_level(v, x, p));
  return best;
}

inline long depth_via_tree(const Sl2Element& x, long radius) { return depth_via_tree(x.rational(), radius, x.prime()); }

/// Index of the apartment vertex closest to v (for the diagonal torus).
inline long apartment_projection(const TreeVertex& v, long p) { return v.x == 0 ? v.m : vp(v.x, p); }

struct TreeCount {
  mpq_class value;
  long radius = 0;
  std::vector<TreeVertex> vertices;
};

/// Counts vertices w in the SL2-orbit of the base vertex with X in g_{w,n}.
/// For split tori (X must be diagonal) the count is taken over a fundamental
/// domain of the translation diag(p, 1/p), i.e. apartment columns 0 and 1.
inline TreeCount tree_count_oracle(const QSl2& x, long n, long radius, long p) {
  mpq_class d = x.neg_det();
  if (d == 0) throw NotRegular("tree_count_oracle: element is not regular semisimple");
  bool split = square_class_of(d, p) == SquareClass::One;
  if (split && (x.b != 0 || x.c != 0))
    throw std::invalid_argument("tree_count_oracle: split elements must be given in diagonal form");
  TreeCount out;
  out.radius = radius;
  TreeVertex base = TreeVertex::base();
  for (const auto& w : ball(base, radius, p)) {
    if (w.m % 2 != 0) continue;
    if (split) {
      long j = apartment_projection(w, p);
      if (j != 0 && j != 1) continue;
    }
    if (max_level(w, x, p) < n) continue;
    if (distance(base, w, p) >= radius)
      throw BallTooSmall("fixed set reaches the boundary of the radius-" + std::to_string(radius) + " ball");
    out.vertices.push_back(w);
  }
  out.value = static_cast<long>(out.vertices.size());
  return out;
}

}  // namespace germlab
