#pragma once

// Independent cross-checks for the orbital engine.
//
// brute_force_cell_oracle counts residue points on a uniform grid: the
// Gelfand-Leray measure of the fiber {a^2 + bc = D} is the limit of
// q^k vol{X : val(a^2 + bc - D) >= k}, and that volume is an exact count of
// grid cells once the grid resolves both the tube and f. Nilpotent orbits are
// done shell by shell (X = p^s X' with X' primitive), with the shells past
// the point where f is constant summed in closed form.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "germlab/errors.hpp"
#include "germlab/lcfunction.hpp"
#include "germlab/orbital.hpp"
#include "germlab/padic.hpp"
#include "germlab/qutil.hpp"
#include "germlab/sl2.hpp"
#include "germlab/tree.hpp"

namespace germlab {

namespace detail {

using i128 = __int128;

inline std::int64_t ipow(long p, long e) {
  std::int64_t r = 1;
  for (long i = 0; i < e; ++i) r *= p;
  return r;
}

inline long ival(std::int64_t x, long p, long cap) {
  if (x == 0) return cap;
  long v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

inline std::int64_t imod(i128 x, std::int64_t m) {
  i128 r = x % m;
  return static_cast<std::int64_t>(r < 0 ? r + m : r);
}

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  mpz_class r;
  mpz_class az(static_cast<long>(a)), mz(static_cast<long>(m));
  if (mpz_invert(r.get_mpz_t(), az.get_mpz_t(), mz.get_mpz_t()) == 0)
    throw std::logic_error("mod_inverse: not invertible");
  return r.get_si();
}

// A cell condition rewritten for integral coordinates Y = p^shift X:
// val(ka a + kb b + kc c + k0) >= threshold with integer data mod p^threshold.
struct GridCondition {
  std::int64_t ka = 0, kb = 0, kc = 0, k0 = 0, modulus = 1;
  bool always = false, never = false;
  long threshold = 0;

  bool holds(std::int64_t a, std::int64_t b, std::int64_t c) const {
    if (always) return true;
    if (never) return false;
    i128 s = static_cast<i128>(ka) * a + static_cast<i128>(kb) * b + static_cast<i128>(kc) * c + k0;
    return imod(s, modulus) == 0;
  }
};

struct GridTerm {
  mpq_class coeff;
  std::array<GridCondition, 3> conds;
};

// Conditions on X = p^{-shift} Y, Y integral.
inline std::vector<GridTerm> compile_grid(const LCFunction& f, long shift, long& needed, long p) {
  std::vector<GridTerm> out;
  needed = 0;
  for (const auto& t : f.terms()) {
    GridTerm g;
    g.coeff = t.coeff;
    auto lin = t.cell.conditions();
    for (int i = 0; i < 3; ++i) {
      const auto& L = lin[i];
      // L(X) = p^{-shift}(ka a' + kb b' + kc c') + k0.  Multiply through by p^{shift}.
      mpq_class k0 = L.k0 * qpow(p, shift);
      long e = std::min({vp(L.ka, p), vp(L.kb, p), vp(L.kc, p), vp(k0, p)});
      long thr = L.threshold + shift;
      GridCondition& c = g.conds[i];
      if (e == kValInf) {
        c.always = true;
        continue;
      }
      mpq_class s = qpow(p, -e);
      thr -= e;
      if (thr <= 0) {
        c.always = true;
        continue;
      }
      c.threshold = thr;
      c.modulus = ipow(p, thr);
      auto red = [&](const mpq_class& x) -> std::int64_t {
        mpz_class r = mod_pk(x * s, p, thr);
        return r.get_si();
      };
      c.ka = red(L.ka);
      c.kb = red(L.kb);
      c.kc = red(L.kc);
      c.k0 = red(k0);
      needed = std::max(needed, thr);
    }
    out.push_back(std::move(g));
  }
  return out;
}

// Per-term hit counts; the rational weights are applied once at the end.
struct GridTally {
  const std::vector<GridTerm>* terms = nullptr;
  std::vector<std::int64_t> hits;
  std::int64_t plain = 0;

  explicit GridTally(const std::vector<GridTerm>* t) : terms(t), hits(t ? t->size() : 0, 0) {}

  void add(std::int64_t a, std::int64_t b, std::int64_t c) {
    if (!terms) {
      ++plain;
      return;
    }
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const auto& t = (*terms)[i];
      if (t.conds[0].holds(a, b, c) && t.conds[1].holds(a, b, c) && t.conds[2].holds(a, b, c)) ++hits[i];
    }
  }

  mpq_class total() const {
    if (!terms) return mpq_class(static_cast<long>(plain));
    mpq_class s = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) s += (*terms)[i].coeff * mpq_class(static_cast<long>(hits[i]));
    return s;
  }
};

constexpr double kGridLimit = 2.0e8;

inline void check_grid(long p, long e) {
  double pts = 1;
  for (long i = 0; i < 2 * e; ++i) pts *= static_cast<double>(p);
  if (pts > kGridLimit)
    throw GridTooLarge("grid of " + std::to_string(p) + "^" + std::to_string(2 * e) + " points exceeds the limit");
}

// Visits every Y in (Z/p^E)^3 with val(a^2 + bc - target) >= k, enumerating
// (a, b) and solving for c.
template <class Visit>
void tube_visit(long p, long E, long k, const mpz_class& target, Visit&& visit) {
  const std::int64_t P = ipow(p, E), Pk = ipow(p, k);
  const std::int64_t t = mpz_class(target % mpz_class(static_cast<long>(Pk))).get_si();
  for (std::int64_t a = 0; a < P; ++a) {
    for (std::int64_t b = 0; b < P; ++b) {
      std::int64_t rhs = imod(static_cast<i128>(t) - static_cast<i128>(a) * a, Pk);
      long w = ival(b % Pk, p, k);
      if (w >= k) {
        if (rhs != 0) continue;
        for (std::int64_t c = 0; c < P; ++c) visit(a, b, c);
        continue;
      }
      std::int64_t pw = ipow(p, w);
      if (rhs % pw != 0) continue;
      std::int64_t m = Pk / pw;
      std::int64_t c0 = imod(static_cast<i128>(rhs / pw) * mod_inverse((b / pw) % m, m), m);
      for (std::int64_t c = c0; c < P; c += m) visit(a, b, c);
    }
  }
}

// b = p^{-shift} y is read off y mod p^E (or -c when b vanishes there, which
// has the same class on the fiber).  Returns false when both vanish; the class
// of b then depends only on (val y - shift) mod 2 and the leading digit.
struct BKey {
  int parity = 0;
  std::int64_t digit = 0;
};

inline bool grid_b_key(std::int64_t b, std::int64_t c, long shift, long E, long p, BKey& key) {
  std::int64_t P = ipow(p, E);
  std::int64_t y = b % P;
  if (y == 0) y = imod(-static_cast<i128>(c), P);
  if (y == 0) return false;
  long w = ival(y, p, E);
  key.digit = (y / ipow(p, w)) % p;
  long e = w - shift;
  key.parity = static_cast<int>(((e % 2) + 2) % 2);
  return true;
}

// allowed[parity][digit] for a class predicate on b.
template <class Pred>
std::array<std::vector<char>, 2> b_table(long p, Pred&& pred) {
  std::array<std::vector<char>, 2> t{std::vector<char>(p, 0), std::vector<char>(p, 0)};
  for (int par = 0; par < 2; ++par)
    for (long d = 1; d < p; ++d) t[par][d] = pred(mpq_class(d) * qpow(p, par)) ? 1 : 0;
  return t;
}

// Smallest s with f constant on p^s sl2(O); f = f(0) there.
inline long constancy_radius(const LCFunction& f) {
  const long p = f.prime();
  long s1 = LONG_MIN;
  for (const auto& t : f.terms()) {
    auto lin = t.cell.conditions();
    bool zero_in = t.cell.contains(QSl2{0, 0, 0}, p);
    long need = zero_in ? LONG_MIN : LONG_MAX;
    for (const auto& L : lin) {
      long vk = std::min({vp(L.ka, p), vp(L.kb, p), vp(L.kc, p)});
      long v0 = vp(L.k0, p);
      if (zero_in) {
        need = std::max(need, L.threshold - vk);
      } else if (v0 < L.threshold) {
        need = std::min(need, v0 - vk + 1);
      }
    }
    s1 = std::max(s1, need);
  }
  return s1 == LONG_MIN ? 0 : s1;
}

}  // namespace detail

/// Grid-count orbital integral of f over the orbit of a regular semisimple X,
/// with the same normalization as ss_orbital.
inline mpq_class brute_force_cell_oracle(const QSl2& x, const LCFunction& f, long refine) {
  using namespace detail;
  const long p = f.prime();
  if (p > 7) throw GridTooLarge("brute force oracle is limited to p <= 7");
  FiberTarget target = fiber_target(x, p);
  const LCFunction g = f.normalized();
  if (g.empty()) return 0;
  const long M = std::max(g.support_bound(), 0L);
  const long vd = vp(target.neg_det, p);
  if (vd < -2 * M) return 0;
  const long k = std::max({vd + 1, g.level() + (vd + 1) / 2 + 1, 1L});
  long needed = 0;
  auto terms = compile_grid(g, M, needed, p);
  const long E = std::max(k + 2 * M, needed) + refine;
  check_grid(p, E);
  const mpz_class tgt = mod_pk(target.neg_det * qpow(p, 2 * M), p, k + 2 * M);
  auto allowed = b_table(p, [&](const mpq_class& b) { return target.allows_b(b, p); });
  GridTally tally(&terms);
  tube_visit(p, E, k + 2 * M, tgt, [&](std::int64_t a, std::int64_t b, std::int64_t c) {
    if (target.kind == OrbitKind::Elliptic) {
      BKey key;
      if (!grid_b_key(b, c, M, E, p, key))
        throw std::logic_error("brute_force_cell_oracle: b and c both vanish on an elliptic fiber");
      if (!allowed[key.parity][key.digit]) return;
    }
    tally.add(a, b, c);
  });
  const mpq_class count = tally.total();
  // Cells of Y = p^M X have X-volume q^{3M - 3E}; the tube has X-width q^{-k}.
  mpq_class value = count * qpow(p, k - 3 * E + 3 * M);
  return ss_normalization(target.neg_det, p) * value;
}

/// Grid-count nilpotent orbital integral.
inline mpq_class brute_force_cell_oracle(const OrbitLabel& label, const LCFunction& f, long refine) {
  using namespace detail;
  const long p = f.prime();
  if (p > 7) throw GridTooLarge("brute force oracle is limited to p <= 7");
  const LCFunction g = f.normalized();
  if (label.zero) return g.evaluate(QSl2{0, 0, 0});
  if (g.empty()) return 0;
  const long M = std::max(g.support_bound(), 0L);
  const long s1 = std::max(detail::constancy_radius(g), -M);

  // Shell volume of primitive cone points X' with class(b') = mu, f = 1.
  auto shell = [&](long s, const std::vector<GridTerm>* terms, long E, long k) -> mpq_class {
    check_grid(p, E);
    SquareClass want = label.cls * (s % 2 == 0 ? SquareClass::One : SquareClass::Pi);
    auto allowed = b_table(p, [&](const mpq_class& b) { return square_class_of(b, p) == want; });
    GridTally tally(terms);
    tube_visit(p, E, k, mpz_class(0), [&](std::int64_t a, std::int64_t b, std::int64_t c) {
      if (a % p == 0 && b % p == 0 && c % p == 0) return;
      BKey key;
      if (!grid_b_key(b, c, 0, E, p, key) || !allowed[key.parity][key.digit]) return;
      tally.add(a, b, c);
    });
    const mpq_class count = tally.total();
    // X = p^s X': da db/|b| scales by q^{-s}.
    return count * qpow(p, k - 3 * E - s);
  };

  mpq_class total = 0;
  for (long s = -M; s < s1; ++s) {
    long needed = 0;
    auto terms = compile_grid(g, -s, needed, p);
    long k = std::max(1L, g.level() - s + 1);
    long E = std::max(k, needed) + refine;
    total += shell(s, &terms, E, k);
  }
  const mpq_class f0 = g.evaluate(QSl2{0, 0, 0});
  if (f0 != 0) {
    // Shells s >= s1 have f = f(0); their volumes repeat with period 2 and ratio q^{-2}.
    mpq_class q2 = mpq_class(1, p * p);
    total += f0 * (shell(s1, nullptr, 1 + refine, 1) + shell(s1 + 1, nullptr, 1 + refine, 1)) / (1 - q2);
  }
  return total;
}

/// ss_orbital / tree count on the reference element of each torus type, n = 0.
inline mpq_class tree_calibration_constant(TorusKind kind, long p, long radius = 4) {
  QSl2 x;
  const long eps = smallest_nonsquare(p);
  switch (kind) {
    case TorusKind::Split: x = {1, 0, 0}; break;
    case TorusKind::Unramified: x = {0, 1, eps}; break;
    case TorusKind::RamifiedPi: x = {0, 1, p}; break;
    case TorusKind::RamifiedEpsPi: x = {0, 1, eps * p}; break;
  }
  auto count = tree_count_oracle(x, 0, radius, p);
  auto integral = ss_orbital(x, LCFunction::ball(0, p));
  return integral.value / count.value;
}

}  // namespace germlab
