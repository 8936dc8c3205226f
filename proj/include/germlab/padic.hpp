#pragma once

// Elements of Q_p with tracked relative precision.
//
// A known scalar stands for the coset p^v * u + p^(v+n) O with u a unit whose
// leading digit is nonzero, so the valuation is always exact. Scalars built
// from rationals also carry the rational itself; operations between two such
// scalars stay exact and never lose digits.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>

#include "germlab/errors.hpp"
#include "germlab/qutil.hpp"

namespace germlab {

struct FieldConfig {
  long p = 5;
  long digits = 12;  // N_work

  void validate() const {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
    if (digits < 4) throw std::invalid_argument("working precision must be at least 4 digits");
  }
  long q() const { return p; }
  long eps() const { return smallest_nonsquare(p); }
};

enum class SquareClass { One = 0, Eps = 1, Pi = 2, EpsPi = 3 };

inline constexpr SquareClass kAllSquareClasses[] = {SquareClass::One, SquareClass::Eps,
                                                    SquareClass::Pi, SquareClass::EpsPi};

/// Klein four-group product.
inline SquareClass operator*(SquareClass a, SquareClass b) {
  return static_cast<SquareClass>(static_cast<int>(a) ^ static_cast<int>(b));
}

inline const char* name(SquareClass c) {
  switch (c) {
    case SquareClass::One: return "One";
    case SquareClass::Eps: return "Eps";
    case SquareClass::Pi: return "Pi";
    case SquareClass::EpsPi: return "EpsPi";
  }
  return "?";
}

inline SquareClass square_class_from_name(const std::string& s) {
  for (auto c : kAllSquareClasses)
    if (s == name(c)) return c;
  throw ParseError("unknown square class '" + s + "'");
}

/// Canonical rational representative: 1, eps, p, eps*p.
inline mpq_class class_representative(SquareClass c, long p) {
  long e = smallest_nonsquare(p);
  switch (c) {
    case SquareClass::One: return 1;
    case SquareClass::Eps: return e;
    case SquareClass::Pi: return p;
    case SquareClass::EpsPi: return e * p;
  }
  return 1;
}

/// Square class of a nonzero rational.
inline SquareClass square_class_of(const mpq_class& x, long p) {
  if (x == 0) throw std::domain_error("square class of zero");
  long v = vp(x, p);
  int eps_bit = legendre(residue(unit_part(x, p), p), p) == 1 ? 0 : 1;
  int pi_bit = (v % 2 + 2) % 2;
  return static_cast<SquareClass>(eps_bit | (pi_bit << 1));
}

/// Quadratic extension F(sqrt d), d running over the nontrivial square classes.
struct QuadExtDescriptor {
  SquareClass disc = SquareClass::Eps;
  bool ramified() const { return disc != SquareClass::Eps; }
  bool operator==(const QuadExtDescriptor&) const = default;
};

/// Hilbert symbol (a, b)_p for nonzero rationals, p odd.
inline int hilbert_symbol(const mpq_class& a, const mpq_class& b, long p) {
  long alpha = vp(a, p), beta = vp(b, p);
  long u = residue(unit_part(a, p), p), w = residue(unit_part(b, p), p);
  int sign = 1;
  if ((alpha % 2 != 0) && (beta % 2 != 0) && ((p - 1) / 2) % 2 != 0) sign = -sign;
  if (beta % 2 != 0) sign *= legendre(u, p);
  if (alpha % 2 != 0) sign *= legendre(w, p);
  return sign;
}

class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar zero(long p) {
    PadicScalar s;
    s.p_ = p;
    s.zero_ = true;
    s.exact_ = mpq_class(0);
    return s;
  }

  /// Exact image of a rational; n = cfg.digits unit digits are materialized.
  static PadicScalar from_rational(const mpq_class& x, long p, long digits) {
    if (x == 0) return zero(p);
    PadicScalar s;
    s.p_ = p;
    s.v_ = vp(x, p);
    s.n_ = digits;
    s.unit_ = mod_pk(unit_part(x, p), p, digits);
    s.exact_ = x;
    return s;
  }
  static PadicScalar from_rational(const mpq_class& x, const FieldConfig& cfg) {
    return from_rational(x, cfg.p, cfg.digits);
  }
  static PadicScalar from_rational(long num, long den, const FieldConfig& cfg) {
    if (den == 0) throw DivisionByZero("scalar_from_rational: zero denominator");
    mpq_class x(num, den);
    x.canonicalize();
    return from_rational(x, cfg);
  }

  /// The coset of x known only to `digits` relative digits (no exact shadow).
  static PadicScalar approx(const mpq_class& x, long p, long digits) {
    if (x == 0) throw InsufficientPrecision("approx: zero has no finite-precision coset");
    PadicScalar s = from_rational(x, p, digits);
    s.exact_.reset();
    return s;
  }

  static PadicScalar from_digits(long p, long v, const mpz_class& unit, long n) {
    PadicScalar s;
    s.p_ = p;
    s.v_ = v;
    s.n_ = n;
    s.unit_ = unit % zpow(p, n);
    if (s.unit_ < 0) s.unit_ += zpow(p, n);
    if (n <= 0 || s.unit_ % p == 0) throw std::invalid_argument("from_digits: leading digit must be nonzero");
    return s;
  }

  long prime() const { return p_; }
  bool is_exact_zero() const { return zero_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<mpq_class>& exact() const { return exact_; }
  long valuation() const { return zero_ ? kValInf : v_; }
  long precision() const { return zero_ ? kValInf : n_; }
  /// Absolute precision v + n; infinite for exact scalars.
  long absolute_precision() const {
    if (exact_) return kValInf;
    return v_ + n_;
  }
  const mpz_class& unit() const { return unit_; }
  long digit(long i) const {
    if (zero_ || i >= n_) return 0;
    mpz_class d = (unit_ / zpow(p_, i)) % p_;
    return d.get_si();
  }
  long leading_digit() const { return digit(0); }

  /// p^v * unit, the canonical rational point of the coset.
  mpq_class representative() const {
    if (zero_) return 0;
    if (exact_) return *exact_;
    return mpq_class(unit_) * qpow(p_, v_);
  }

  /// Rational value; throws unless the scalar is exact.
  const mpq_class& rational() const {
    if (!exact_) throw InsufficientPrecision("scalar is only known to finite precision");
    return *exact_;
  }

  /// x mod p^k of (this * p^(-shift)), which must be p-integral to that precision.
  mpz_class residue_mod(long shift, long k) const {
    if (k <= 0) return 0;
    if (zero_) return 0;
    if (exact_) return mod_pk(*exact_ * qpow(p_, -shift), p_, k);
    long rel = v_ - shift;
    if (rel < 0) throw std::domain_error("residue_mod: not integral at this shift");
    if (rel + n_ < k) throw InsufficientPrecision("residue_mod: digits exhausted");
    mpz_class r = (unit_ * zpow(p_, rel)) % zpow(p_, k);
    return r;
  }

  std::string serialize() const {
    if (zero_) return "0";
    std::ostringstream os;
    os << p_ << "^" << v_ << " * (";
    for (long i = 0; i < n_; ++i) {
      if (i) os << " + ";
      os << digit(i);
      if (i == 1) os << "*" << p_;
      if (i > 1) os << "*" << p_ << "^" << i;
    }
    os << ") mod " << p_ << "^" << (v_ + n_);
    return os.str();
  }

  /// Rational when exact, otherwise the digit serialization.
  std::string to_string() const { return exact_ ? germlab::to_string(*exact_) : serialize(); }

  /// True when the two cosets intersect (agreement on all shared digits).
  friend bool agrees(const PadicScalar& x, const PadicScalar& y) {
    if (x.exact_ && y.exact_) return *x.exact_ == *y.exact_;
    long a = std::min(x.absolute_precision(), y.absolute_precision());
    if (x.zero_ || y.zero_) {
      const PadicScalar& o = x.zero_ ? y : x;
      return o.zero_ || o.valuation() >= a;
    }
    long low = std::min(x.v_, y.v_);
    if (a <= low) return true;
    return x.residue_mod(low, a - low) == y.residue_mod(low, a - low);
  }

  friend bool operator==(const PadicScalar& x, const PadicScalar& y) {
    if (x.p_ != y.p_ || x.zero_ != y.zero_) return false;
    if (x.zero_) return true;
    if (x.exact_.has_value() != y.exact_.has_value()) return false;
    if (x.exact_) return *x.exact_ == *y.exact_;
    return x.v_ == y.v_ && x.n_ == y.n_ && x.unit_ == y.unit_;
  }

 private:
  long p_ = 0;
  bool zero_ = false;
  long v_ = 0;
  long n_ = 0;
  mpz_class unit_;
  std::optional<mpq_class> exact_;

  friend PadicScalar add(const PadicScalar&, const PadicScalar&);
  friend PadicScalar mul(const PadicScalar&, const PadicScalar&);
  friend PadicScalar div(const PadicScalar&, const PadicScalar&);
  friend PadicScalar neg(const PadicScalar&);
};

inline void require_same_prime(const PadicScalar& x, const PadicScalar& y) {
  if (x.prime() != y.prime()) throw std::invalid_argument("scalars over different primes");
}

inline PadicScalar neg(const PadicScalar& x) {
  if (x.zero_) return x;
  PadicScalar r = x;
  r.unit_ = (zpow(x.p_, x.n_) - x.unit_) % zpow(x.p_, x.n_);
  if (r.exact_) r.exact_ = -*x.exact_;
  return r;
}

inline PadicScalar add(const PadicScalar& x, const PadicScalar& y) {
  require_same_prime(x, y);
  if (x.zero_) return y;
  if (y.zero_) return x;
  const long p = x.p_;
  if (x.exact_ && y.exact_) {
    mpq_class s = *x.exact_ + *y.exact_;
    return PadicScalar::from_rational(s, p, std::min(x.n_, y.n_));
  }
  long a = std::min(x.absolute_precision(), y.absolute_precision());
  long low = std::min(x.v_, y.v_);
  if (a <= low) throw InsufficientPrecision("add: no digits survive alignment");
  mpz_class m = zpow(p, a - low);
  mpz_class s = (x.residue_mod(low, a - low) + y.residue_mod(low, a - low)) % m;
  if (s == 0) throw InsufficientPrecision("add: all known digits cancel");
  long extra = vp(s, p);
  PadicScalar r;
  r.p_ = p;
  r.v_ = low + extra;
  r.n_ = a - r.v_;
  r.unit_ = (s / zpow(p, extra)) % zpow(p, r.n_);
  return r;
}

inline PadicScalar sub(const PadicScalar& x, const PadicScalar& y) { return add(x, neg(y)); }

inline PadicScalar mul(const PadicScalar& x, const PadicScalar& y) {
  require_same_prime(x, y);
  if (x.zero_) return x;
  if (y.zero_) return y;
  const long p = x.p_;
  if (x.exact_ && y.exact_)
    return PadicScalar::from_rational(*x.exact_ * *y.exact_, p, std::min(x.n_, y.n_));
  long n = std::min(x.exact_ ? kValInf : x.n_, y.exact_ ? kValInf : y.n_);
  PadicScalar r;
  r.p_ = p;
  r.v_ = x.v_ + y.v_;
  r.n_ = n;
  r.unit_ = (x.residue_mod(x.v_, n) * y.residue_mod(y.v_, n)) % zpow(p, n);
  return r;
}

inline PadicScalar div(const PadicScalar& x, const PadicScalar& y) {
  require_same_prime(x, y);
  if (y.zero_) throw DivisionByZero("division by exact zero");
  if (x.zero_) return x;
  const long p = x.p_;
  if (x.exact_ && y.exact_)
    return PadicScalar::from_rational(*x.exact_ / *y.exact_, p, std::min(x.n_, y.n_));
  long n = std::min(x.exact_ ? kValInf : x.n_, y.exact_ ? kValInf : y.n_);
  mpz_class m = zpow(p, n);
  mpz_class inv;
  mpz_class yu = y.residue_mod(y.v_, n);
  mpz_invert(inv.get_mpz_t(), yu.get_mpz_t(), m.get_mpz_t());
  PadicScalar r;
  r.p_ = p;
  r.v_ = x.v_ - y.v_;
  r.n_ = n;
  r.unit_ = (x.residue_mod(x.v_, n) * inv) % m;
  return r;
}

inline PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) { return add(x, y); }
inline PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return sub(x, y); }
inline PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) { return mul(x, y); }
inline PadicScalar operator/(const PadicScalar& x, const PadicScalar& y) { return div(x, y); }
inline PadicScalar operator-(const PadicScalar& x) { return neg(x); }

enum class ArithOp { Add, Sub, Mul, Div };

inline PadicScalar arith(const PadicScalar& x, const PadicScalar& y, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return add(x, y);
    case ArithOp::Sub: return sub(x, y);
    case ArithOp::Mul: return mul(x, y);
    case ArithOp::Div: return div(x, y);
  }
  return x;
}

inline long valuation(const PadicScalar& x) { return x.valuation(); }

inline PadicScalar scalar_from_rational(long num, long den, const FieldConfig& cfg) {
  return PadicScalar::from_rational(num, den, cfg);
}

inline SquareClass square_class(const PadicScalar& x) {
  if (x.is_exact_zero()) throw std::domain_error("square class of zero");
  if (x.is_exact()) return square_class_of(*x.exact(), x.prime());
  if (x.precision() < 2) throw InsufficientPrecision("square_class needs two known digits");
  long p = x.prime();
  int eps_bit = legendre(x.leading_digit(), p) == 1 ? 0 : 1;
  int pi_bit = static_cast<int>((x.valuation() % 2 + 2) % 2);
  return static_cast<SquareClass>(eps_bit | (pi_bit << 1));
}

namespace detail {

/// Exact square root of a nonnegative rational when it exists.
inline std::optional<mpq_class> rational_sqrt(const mpq_class& x) {
  if (x < 0) return std::nullopt;
  if (mpz_perfect_square_p(x.get_num().get_mpz_t()) == 0 ||
      mpz_perfect_square_p(x.get_den().get_mpz_t()) == 0)
    return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num().get_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den().get_mpz_t());
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Square root on the canonical branch (residue of the unit root in
/// {1, ..., (p-1)/2}); nullopt when x is not a square.
inline std::optional<PadicScalar> padic_sqrt(const PadicScalar& x) {
  if (x.is_exact_zero()) throw std::domain_error("padic_sqrt of zero");
  if (square_class(x) != SquareClass::One) return std::nullopt;
  const long p = x.prime();
  const long n = x.precision();
  long r0 = 0;
  long u0 = x.leading_digit();
  for (long r = 1; r <= (p - 1) / 2; ++r)
    if ((r * r - u0) % p == 0) r0 = r;
  if (x.is_exact()) {
    if (auto s = detail::rational_sqrt(*x.exact())) {
      mpq_class root = *s;
      if (residue(unit_part(root, p), p) != r0) root = -root;
      return PadicScalar::from_rational(root, p, n);
    }
  }
  // Newton iteration doubles the number of correct digits each step.
  mpz_class m = zpow(p, n);
  mpz_class u = x.residue_mod(x.valuation(), n);
  mpz_class y = r0;
  for (long k = 1; k < n; k *= 2) {
    mpz_class inv;
    mpz_class two_y = 2 * y;
    mpz_invert(inv.get_mpz_t(), two_y.get_mpz_t(), m.get_mpz_t());
    y = (y - (y * y - u) * inv) % m;
    if (y < 0) y += m;
  }
  return PadicScalar::from_digits(p, x.valuation() / 2, y, n);
}

/// Whether x is a norm from the quadratic extension described by ext.
inline bool is_norm(const QuadExtDescriptor& ext, const PadicScalar& x) {
  if (x.is_exact_zero()) throw std::domain_error("is_norm of zero");
  const long p = x.prime();
  if (!x.is_exact() && x.precision() < 1) throw InsufficientPrecision("is_norm needs a leading digit");
  mpq_class xr = x.is_exact() ? *x.exact() : mpq_class(x.leading_digit()) * qpow(p, x.valuation());
  return hilbert_symbol(class_representative(ext.disc, p), xr, p) == 1;
}

/// Norm test on a rational (used by the integration engine).
inline bool is_norm(const QuadExtDescriptor& ext, const mpq_class& x, long p) {
  return hilbert_symbol(class_representative(ext.disc, p), x, p) == 1;
}

}  // namespace germlab
