#pragma once

// Small helpers on GMP rationals viewed as elements of Q_p.

#include <gmpxx.h>

#include <cctype>
#include <climits>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "germlab/errors.hpp"

namespace germlab {

/// Valuation of exact zero.
inline constexpr long kValInf = LONG_MAX;

inline const mpz_class& zpow(long p, long e) {
  // Per-prime cache of p^e.  Deque and node-based map keep earlier references
  // valid while the table grows.
  thread_local std::unordered_map<long, std::deque<mpz_class>> tables;
  if (e < 0) throw std::invalid_argument("zpow: negative exponent");
  auto& table = tables[p];
  if (table.empty()) table.emplace_back(1);
  while (static_cast<long>(table.size()) <= e) table.push_back(table.back() * p);
  return table[static_cast<std::size_t>(e)];
}

inline mpq_class qpow(long p, long e) {
  if (e >= 0) return mpq_class(zpow(p, e));
  mpq_class r(mpz_class(1), zpow(p, -e));
  return r;
}

inline long vp(const mpz_class& z, long p) {
  if (z == 0) return kValInf;
  if (mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(p)) == 0) return 0;
  mpz_class t;
  return static_cast<long>(
      mpz_remove(t.get_mpz_t(), z.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

inline long vp(const mpq_class& q, long p) {
  if (q == 0) return kValInf;
  return vp(q.get_num(), p) - vp(q.get_den(), p);
}

/// q / p^vp(q); zero maps to zero.
inline mpq_class unit_part(const mpq_class& q, long p) {
  if (q == 0) return q;
  mpq_class r = q * qpow(p, -vp(q, p));
  r.canonicalize();
  return r;
}

/// Representative in [0, p^k) of a p-integral rational modulo p^k.
inline mpz_class mod_pk(const mpq_class& x, long p, long k) {
  if (k <= 0) return 0;
  const mpz_class& m = zpow(p, k);
  if (vp(x, p) < 0) throw std::domain_error("mod_pk: rational is not p-integral");
  mpz_class den = x.get_den();
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  mpz_class r = (x.get_num() * inv) % m;
  if (r < 0) r += m;
  return r;
}

inline long residue(const mpq_class& unit, long p) {
  return mpz_class(mod_pk(unit, p, 1)).get_si();
}

/// Legendre symbol (a/p) of an integer a, p an odd prime.
inline int legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  return mpz_legendre(mpz_class(a).get_mpz_t(), mpz_class(p).get_mpz_t());
}

inline bool is_prime(long p) {
  if (p < 2) return false;
  return mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30) > 0;
}

/// Smallest positive integer that is a nonsquare unit mod p.
inline long smallest_nonsquare(long p) {
  for (long e = 2; e < p; ++e)
    if (legendre(e, p) == -1) return e;
  throw std::invalid_argument("no nonsquare residue");
}

inline mpq_class parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  if (s.empty()) throw ParseError("empty rational");
  // Accept "p^k" shorthand for prime powers, e.g. "5^-2" or "-5^3".
  auto caret = s.find('^');
  try {
    if (caret != std::string::npos) {
      bool neg = s[0] == '-';
      long base = std::stol(s.substr(neg ? 1 : 0, caret - (neg ? 1 : 0)));
      long e = std::stol(s.substr(caret + 1));
      mpq_class r = qpow(base, e);
      return neg ? mpq_class(-r) : r;
    }
    for (char ch : s)
      if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
        throw ParseError("bad rational '" + text + "'");
    mpq_class r(s, 10);
    if (r.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("bad rational '" + text + "'");
  }
}

inline std::string to_string(const mpq_class& q) { return q.get_str(10); }

}  // namespace germlab
