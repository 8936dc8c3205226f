#pragma once

// Shalika germs of sl2 and the checks built on them.
//
// Germs are read off by solving I_X(f_i) = sum_O j_O(X) I_O(f_i) exactly over
// a basis of test functions. With the orbital normalization of ss_orbital the
// substitution identity I_{z^2 X}(f) = I_X(f_z) gives j_O(z^2 X) = q^{dim O}
// j_O(X); the Harish-Chandra form |c|^{dim N - dim O} holds for the germs
// rescaled by |u(X)| (rationalized as q^{-floor(val(-det)/2)}).

#include <gmpxx.h>

#include <array>
#include <string>
#include <vector>

#include "germlab/errors.hpp"
#include "germlab/lcfunction.hpp"
#include "germlab/linalg.hpp"
#include "germlab/orbital.hpp"
#include "germlab/qutil.hpp"
#include "germlab/sl2.hpp"
#include "germlab/tree.hpp"

namespace germlab {

struct GermTable {
  QSl2 x;
  long p = 5;
  /// Germs in the orbital normalization, indexed by OrbitLabel::index().
  NilpotentVector j;
  std::vector<std::string> provenance;
  /// z^2-steps taken to reach the validity range during extraction.
  long deepened = 0;

  /// q^{-floor(val(-det)/2)} j: the Harish-Chandra normalized germs.
  NilpotentVector hc() const {
    NilpotentVector out = j;
    mpq_class s = 1 / ss_normalization(x.neg_det(), p);
    for (auto& v : out) v *= s;
    return out;
  }

  mpq_class expand(const NilpotentVector& nil) const {
    mpq_class s = 0;
    for (std::size_t i = 0; i < j.size(); ++i) s += j[i] * nil[i];
    return s;
  }
};

struct ExpansionRow {
  std::string f_id;
  std::string x_id;
  std::string torus;
  mpq_class depth;
  long r = 0;
  mpq_class lhs, rhs, residual;
  bool pass = false;
  /// Shallow X paired with a fine f; a nonzero residual is expected, not a failure.
  bool contrast = false;
};

using ExpansionReport = std::vector<ExpansionRow>;

struct NamedFunction {
  std::string id;
  LCFunction f;
  long r = 0;  // proxy depth
};

inline mpq_class element_depth(const QSl2& x, long p) {
  mpq_class d(vp(x.neg_det(), p), 2);
  d.canonicalize();
  return d;
}

inline std::string torus_name(const QSl2& x, long p) {
  return name(torus_kind_of(square_class_of(x.neg_det(), p)));
}

/// Representative nilpotent ((0, lambda), (0, 0)) of a regular orbit.
inline QSl2 nilpotent_rep(SquareClass cls, long p) { return QSl2{0, class_representative(cls, p), 0}; }

/// 1_{sl2(O)}, its z^2-dilate and 1_{n_l + g_{v0,2}} for the four classes l.
inline std::vector<NamedFunction> default_basis(long p) {
  std::vector<NamedFunction> out;
  LCFunction ball = LCFunction::ball(0, p);
  out.push_back({"1[sl2(O)]", ball, -1});
  out.push_back({"dilate(1[sl2(O)],p^2)", dilate(ball, qpow(p, 2)), -3});
  for (SquareClass c : kAllSquareClasses)
    out.push_back({std::string("1[n_") + name(c) + "+g_{(0,0),2}]",
                   LCFunction::indicator(nilpotent_rep(c, p), mp_lattice(TreeVertex::base(), 2), p), 1});
  return out;
}

inline linalg::Matrix nilpotent_matrix(const std::vector<NilpotentVector>& rows) {
  linalg::Matrix a;
  for (const auto& v : rows) a.emplace_back(v.begin(), v.end());
  return a;
}

namespace detail {

inline GermTable solve_germs(const QSl2& x, const std::vector<NamedFunction>& basis,
                             const std::vector<NilpotentVector>& nil) {
  const long p = basis.front().f.prime();
  linalg::Row rhs;
  for (const auto& b : basis) rhs.push_back(ss_orbital(x, b.f).value);
  auto sol = linalg::solve(nilpotent_matrix(nil), rhs, 5);
  if (linalg::rank(nilpotent_matrix(nil)) < 5)
    throw RankDeficient("basis separates only " + std::to_string(linalg::rank(nilpotent_matrix(nil))) +
                        " of the five nilpotent orbits");
  if (sol.status == linalg::SolveStatus::Inconsistent)
    throw InconsistentSystem("germ system inconsistent at " + format_matrix(x));
  GermTable t;
  t.x = x;
  t.p = p;
  for (std::size_t i = 0; i < 5; ++i) t.j[i] = sol.x[i];
  for (const auto& b : basis) t.provenance.push_back(b.id);
  return t;
}

}  // namespace detail

/// Germ table at the point z^{2k} X.
inline GermTable homogeneity_extend(const GermTable& t, long k) {
  GermTable out = t;
  out.x = qpow(t.p, 2 * k) * t.x;
  for (const auto& label : all_orbit_labels())
    out.j[static_cast<std::size_t>(label.index())] *= qpow(t.p, k * label.dim());
  out.deepened = t.deepened;
  return out;
}

/// Exact germs at a regular semisimple X. X is first moved to depth at least
/// max proxy depth + 1 by z^2-scaling; an inconsistent system deepens further
/// (up to max_deepen extra steps). The table is transported back to X.
inline GermTable extract_germs(const QSl2& x, const std::vector<NamedFunction>& basis, long max_deepen = 4) {
  if (basis.empty()) throw RankDeficient("empty basis");
  const long p = basis.front().f.prime();
  if (x.neg_det() == 0) throw NotRegular("germs need a regular semisimple point");
  std::vector<NilpotentVector> nil;
  for (const auto& b : basis) nil.push_back(nilpotent_vector(b.f));
  long need = LONG_MIN;
  for (const auto& b : basis) need = std::max(need, b.r + 1);
  long k = 0;
  QSl2 y = x;
  while (element_depth(y, p) < need) {
    y = qpow(p, 2) * y;
    ++k;
  }
  for (long extra = 0;; ++extra) {
    try {
      GermTable t = detail::solve_germs(y, basis, nil);
      GermTable back = homogeneity_extend(t, -k);
      back.x = x;
      back.deepened = k;
      return back;
    } catch (const InconsistentSystem&) {
      if (extra >= max_deepen) throw;
      y = qpow(p, 2) * y;
      ++k;
    }
  }
}

inline GermTable extract_germs(const QSl2& x, long p) { return extract_germs(x, default_basis(p)); }

/// Residuals of held-out functions against a germ table.
inline std::vector<mpq_class> germ_residuals(const GermTable& t, const std::vector<NamedFunction>& held_out) {
  std::vector<mpq_class> out;
  for (const auto& f : held_out) out.push_back(ss_orbital(t.x, f.f).value - t.expand(nilpotent_vector(f.f)));
  return out;
}

struct HrOmegaResult {
  /// One member per label with nilpotent vector exactly the unit vector e_O.
  std::vector<NamedFunction> members;
  /// Combinations of the pool with vanishing nilpotent vector.
  std::vector<NamedFunction> kernel;
  std::size_t rank = 0;
  std::size_t pool_size = 0;
};

inline NamedFunction combine(const std::vector<NamedFunction>& pool, const linalg::Row& c, const std::string& id) {
  const long p = pool.front().f.prime();
  LCFunction f(p);
  long r = LONG_MAX;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (c[i] == 0) continue;
    f += c[i] * pool[i].f;
    r = std::min(r, pool[i].r);
  }
  return {id, f.normalized(), r == LONG_MAX ? 0 : r};
}

/// For a label O: a combination of the pool whose nilpotent vector is e_O.
inline NamedFunction construct_Hr_Omega(const OrbitLabel& label, const std::vector<NamedFunction>& pool,
                                        const std::vector<NilpotentVector>& nil) {
  linalg::Matrix a = linalg::transpose(nilpotent_matrix(nil), 5);
  linalg::Row e(5, 0);
  e[static_cast<std::size_t>(label.index())] = 1;
  auto sol = linalg::solve(a, e, pool.size());
  if (sol.status == linalg::SolveStatus::Inconsistent)
    throw PoolDeficient("pool cannot isolate " + label.to_string());
  return combine(pool, sol.x, "H(" + label.to_string() + ")");
}

inline HrOmegaResult construct_Hr(const std::vector<NamedFunction>& pool) {
  if (pool.empty()) throw PoolDeficient("empty pool");
  std::vector<NilpotentVector> nil;
  for (const auto& f : pool) nil.push_back(nilpotent_vector(f.f));
  HrOmegaResult out;
  out.pool_size = pool.size();
  linalg::Matrix a = linalg::transpose(nilpotent_matrix(nil), 5);
  out.rank = linalg::rank(a);
  if (out.rank < 5) throw PoolDeficient("pool spans only " + std::to_string(out.rank) + " nilpotent directions");
  for (const auto& label : all_orbit_labels()) out.members.push_back(construct_Hr_Omega(label, pool, nil));
  auto sol = linalg::solve(a, linalg::Row(5, 0), pool.size());
  for (std::size_t i = 0; i < sol.kernel.size(); ++i)
    out.kernel.push_back(combine(pool, sol.kernel[i], "ker" + std::to_string(i)));
  return out;
}

/// q^{dim O} I_X(f) == I_{z^2 X}(f).
inline bool verify_scaling(const OrbitLabel& label, const LCFunction& f, const QSl2& x) {
  const long p = f.prime();
  mpq_class lhs = qpow(p, label.dim()) * ss_orbital(x, f).value;
  mpq_class rhs = ss_orbital(qpow(p, 2) * x, f).value;
  return lhs == rhs;
}

struct ClaimRow {
  std::string h_id;
  std::string x_id;
  mpq_class value;
  bool nilpotent_zero = false;
  bool pass = false;
};

/// I_X(h) for every h with vanishing nilpotent vector built from the pool:
/// the kernel combinations and q^d f - f_z for f in H_r(O).
inline std::vector<ClaimRow> verify_claim(const std::vector<NamedFunction>& pool, const std::vector<QSl2>& grid) {
  HrOmegaResult hr = construct_Hr(pool);
  std::vector<NamedFunction> hs = hr.kernel;
  for (std::size_t i = 0; i < hr.members.size(); ++i) {
    const auto label = all_orbit_labels()[i];
    const auto& m = hr.members[i];
    hs.push_back({"h(" + m.id + ")", h_combination(m.f, label.dim()), m.r - 2});
  }
  std::vector<ClaimRow> out;
  for (const auto& h : hs) {
    NilpotentVector nv = nilpotent_vector(h.f);
    bool zero = true;
    for (const auto& v : nv) zero = zero && v == 0;
    for (const auto& x : grid) {
      ClaimRow row;
      row.h_id = h.id;
      row.x_id = format_matrix(x);
      row.nilpotent_zero = zero;
      row.value = ss_orbital(x, h.f).value;
      row.pass = zero && row.value == 0;
      out.push_back(std::move(row));
    }
  }
  return out;
}

/// Residuals of the germ expansion with germs extracted deep and carried to X
/// by homogeneity. Points shallower than a function's proxy depth are tagged
/// as contrast rows.
inline ExpansionReport verify_theorem(const std::vector<NamedFunction>& family, const std::vector<QSl2>& grid,
                                      const std::vector<NamedFunction>& basis) {
  ExpansionReport out;
  std::vector<NilpotentVector> nil;
  for (const auto& f : family) nil.push_back(nilpotent_vector(f.f));
  const long p = family.front().f.prime();
  for (const auto& x : grid) {
    GermTable t = extract_germs(x, basis);
    for (std::size_t i = 0; i < family.size(); ++i) {
      ExpansionRow row;
      row.f_id = family[i].id;
      row.x_id = format_matrix(x);
      row.torus = torus_name(x, p);
      row.depth = element_depth(x, p);
      row.r = family[i].r;
      row.lhs = ss_orbital(x, family[i].f).value;
      row.rhs = t.expand(nil[i]);
      row.residual = row.lhs - row.rhs;
      row.pass = row.residual == 0;
      row.contrast = row.depth < family[i].r;
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace germlab
