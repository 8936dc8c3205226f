#pragma once

// The Lie algebra sl2(F), the group SL2(F), and the invariants of adjoint
// orbits: torus type, orbit tags, depth, and the Cayley transform.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "germlab/errors.hpp"
#include "germlab/padic.hpp"
#include "germlab/qutil.hpp"

namespace germlab {

/// Trace-zero matrix ((a, b), (c, -a)) with exact rational entries.
struct QSl2 {
  mpq_class a, b, c;

  /// -det = a^2 + bc.
  mpq_class neg_det() const { return a * a + b * c; }
  friend QSl2 operator+(const QSl2& x, const QSl2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
  friend QSl2 operator-(const QSl2& x, const QSl2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
  friend QSl2 operator*(const mpq_class& s, const QSl2& x) { return {s * x.a, s * x.b, s * x.c}; }
  bool operator==(const QSl2&) const = default;
  bool is_zero() const { return a == 0 && b == 0 && c == 0; }
};

/// Rational 2x2 matrix [[m00, m01], [m10, m11]].
struct QMat2 {
  mpq_class m00 = 1, m01 = 0, m10 = 0, m11 = 1;

  mpq_class det() const { return m00 * m11 - m01 * m10; }
  QMat2 inverse() const {
    mpq_class d = det();
    if (d == 0) throw DivisionByZero("singular matrix");
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
  }
  friend QMat2 operator*(const QMat2& x, const QMat2& y) {
    return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
            x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
  }
  bool operator==(const QMat2&) const = default;

  static QMat2 identity() { return {}; }
  static QMat2 diag(const mpq_class& x, const mpq_class& y) { return {x, 0, 0, y}; }
  static QMat2 upper(const mpq_class& t) { return {1, t, 0, 1}; }
  static QMat2 lower(const mpq_class& t) { return {1, 0, t, 1}; }
};

/// g X g^{-1}.
inline QSl2 conjugate(const QMat2& g, const QSl2& x) {
  QMat2 gi = g.inverse();
  QMat2 xm{x.a, x.b, x.c, -x.a};
  QMat2 r = g * xm * gi;
  return {(r.m00 - r.m11) / 2, r.m01, r.m10};
}

class Sl2Element {
 public:
  Sl2Element() = default;
  Sl2Element(PadicScalar a, PadicScalar b, PadicScalar c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_.prime() != b_.prime() || a_.prime() != c_.prime())
      throw std::invalid_argument("entries over different primes");
  }

  static Sl2Element from_rational(const QSl2& x, const FieldConfig& cfg) {
    return {PadicScalar::from_rational(x.a, cfg), PadicScalar::from_rational(x.b, cfg),
            PadicScalar::from_rational(x.c, cfg)};
  }
  static Sl2Element from_rational(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                  const FieldConfig& cfg) {
    return from_rational(QSl2{a, b, c}, cfg);
  }

  const PadicScalar& a() const { return a_; }
  const PadicScalar& b() const { return b_; }
  const PadicScalar& c() const { return c_; }
  long prime() const { return a_.prime(); }
  long digits() const {
    long n = kValInf;
    for (const auto* e : {&a_, &b_, &c_})
      if (!e->is_exact_zero()) n = std::min(n, e->precision());
    return n == kValInf ? 12 : n;
  }

  bool is_exact() const { return a_.is_exact() && b_.is_exact() && c_.is_exact(); }
  bool is_exact_zero() const { return a_.is_exact_zero() && b_.is_exact_zero() && c_.is_exact_zero(); }

  QSl2 rational() const { return {a_.rational(), b_.rational(), c_.rational()}; }

  PadicScalar det() const { return -(a_ * a_ + b_ * c_); }
  /// a^2 + bc, the square of the eigenvalue.
  PadicScalar neg_det() const { return a_ * a_ + b_ * c_; }

  Sl2Element scaled(const PadicScalar& s) const { return {s * a_, s * b_, s * c_}; }

  std::string to_string() const {
    return "[[" + a_.to_string() + "," + b_.to_string() + "],[" + c_.to_string() + "," +
           (-a_).to_string() + "]]";
  }

  friend bool operator==(const Sl2Element& x, const Sl2Element& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_;
  }
  friend bool agrees(const Sl2Element& x, const Sl2Element& y) {
    return agrees(x.a_, y.a_) && agrees(x.b_, y.b_) && agrees(x.c_, y.c_);
  }

 private:
  PadicScalar a_, b_, c_;
};

/// Element of SL2(F); the determinant is checked on construction.
class GroupElement {
 public:
  GroupElement(PadicScalar m00, PadicScalar m01, PadicScalar m10, PadicScalar m11)
      : m_{std::move(m00), std::move(m01), std::move(m10), std::move(m11)} {
    PadicScalar d = m_[0] * m_[3] - m_[1] * m_[2];
    if (!agrees(d, PadicScalar::from_rational(1, p(), 1)))
      throw std::invalid_argument("group element must have determinant 1");
  }

  static GroupElement from_rational(const QMat2& g, const FieldConfig& cfg) {
    if (g.det() != 1) throw std::invalid_argument("group element must have determinant 1");
    return {PadicScalar::from_rational(g.m00, cfg), PadicScalar::from_rational(g.m01, cfg),
            PadicScalar::from_rational(g.m10, cfg), PadicScalar::from_rational(g.m11, cfg)};
  }
  static GroupElement identity(const FieldConfig& cfg) { return from_rational(QMat2::identity(), cfg); }

  const PadicScalar& operator()(int i, int j) const { return m_[2 * i + j]; }
  long p() const { return m_[0].prime(); }
  bool is_exact() const {
    for (const auto& e : m_)
      if (!e.is_exact()) return false;
    return true;
  }
  QMat2 rational() const {
    return {m_[0].rational(), m_[1].rational(), m_[2].rational(), m_[3].rational()};
  }
  /// Adjugate, which is the inverse because det = 1.
  GroupElement inverse() const { return GroupElement(m_[3], -m_[1], -m_[2], m_[0], 0); }

  friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
    return GroupElement(x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0), x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1),
                        x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0), x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1));
  }
  friend bool agrees(const GroupElement& x, const GroupElement& y) {
    for (int i = 0; i < 4; ++i)
      if (!agrees(x.m_[i], y.m_[i])) return false;
    return true;
  }
  std::string to_string() const {
    return "[[" + m_[0].to_string() + "," + m_[1].to_string() + "],[" + m_[2].to_string() + "," +
           m_[3].to_string() + "]]";
  }

 private:
  GroupElement(PadicScalar m00, PadicScalar m01, PadicScalar m10, PadicScalar m11, int)
      : m_{std::move(m00), std::move(m01), std::move(m10), std::move(m11)} {}
  std::array<PadicScalar, 4> m_;
};

/// An element of P: the zero orbit or a regular nilpotent orbit.
struct OrbitLabel {
  bool zero = true;
  SquareClass cls = SquareClass::One;

  static OrbitLabel Zero() { return {true, SquareClass::One}; }
  static OrbitLabel Regular(SquareClass c) { return {false, c}; }

  int dim() const { return zero ? 0 : 2; }
  /// Position in the fixed enumeration Zero, Regular(One), Regular(Eps), ...
  int index() const { return zero ? 0 : 1 + static_cast<int>(cls); }
  std::string to_string() const { return zero ? "Zero" : std::string("Regular(") + name(cls) + ")"; }
  bool operator==(const OrbitLabel& o) const { return zero == o.zero && (zero || cls == o.cls); }
  bool operator<(const OrbitLabel& o) const { return index() < o.index(); }
};

inline std::array<OrbitLabel, 5> all_orbit_labels() {
  return {OrbitLabel::Zero(), OrbitLabel::Regular(SquareClass::One), OrbitLabel::Regular(SquareClass::Eps),
          OrbitLabel::Regular(SquareClass::Pi), OrbitLabel::Regular(SquareClass::EpsPi)};
}

inline OrbitLabel orbit_label_from_string(const std::string& s) {
  if (s == "Zero" || s == "0") return OrbitLabel::Zero();
  std::string inner = s;
  if (inner.rfind("Regular(", 0) == 0 && inner.back() == ')') inner = inner.substr(8, inner.size() - 9);
  return OrbitLabel::Regular(square_class_from_name(inner));
}

struct SpectralConstants {
  static constexpr int dim_nilpotent_cone = 2;
};

enum class TorusKind { Split, Unramified, RamifiedPi, RamifiedEpsPi };

inline const char* name(TorusKind t) {
  switch (t) {
    case TorusKind::Split: return "split";
    case TorusKind::Unramified: return "unramified";
    case TorusKind::RamifiedPi: return "ramified-Pi";
    case TorusKind::RamifiedEpsPi: return "ramified-EpsPi";
  }
  return "?";
}

inline TorusKind torus_kind_of(SquareClass neg_det_class) {
  switch (neg_det_class) {
    case SquareClass::One: return TorusKind::Split;
    case SquareClass::Eps: return TorusKind::Unramified;
    case SquareClass::Pi: return TorusKind::RamifiedPi;
    case SquareClass::EpsPi: return TorusKind::RamifiedEpsPi;
  }
  return TorusKind::Split;
}

struct RegularSS {
  TorusKind torus = TorusKind::Split;
  /// Set for elliptic tori.
  std::optional<QuadExtDescriptor> ext;
  /// Elliptic tori: whether b (or -c when b = 0) is a norm. Always true for split tori.
  bool ss_tag = true;
  /// Eigenvalue for split tori; elliptic eigenvalues live in the extension.
  std::optional<PadicScalar> u;
  /// -det X = u^2.
  PadicScalar neg_det;

  bool split() const { return torus == TorusKind::Split; }
};

struct Nilpotent {
  OrbitLabel label;
};

struct ZeroElt {};

using ElementClass = std::variant<RegularSS, Nilpotent, ZeroElt>;

namespace detail {

inline SquareClass nilpotent_tag(const Sl2Element& x) {
  return x.b().is_exact_zero() ? square_class(-x.c()) : square_class(x.b());
}

}  // namespace detail

inline ElementClass classify(const Sl2Element& x) {
  if (x.is_exact_zero()) return ZeroElt{};
  PadicScalar d;
  try {
    d = x.neg_det();
  } catch (const InsufficientPrecision&) {
    throw AmbiguousNilpotent("determinant vanishes to working precision: " + x.to_string());
  }
  if (d.is_exact_zero()) return Nilpotent{OrbitLabel::Regular(detail::nilpotent_tag(x))};
  RegularSS r;
  r.neg_det = d;
  SquareClass cls = square_class(d);
  r.torus = torus_kind_of(cls);
  if (cls == SquareClass::One) {
    r.u = padic_sqrt(d);
  } else {
    r.ext = QuadExtDescriptor{cls};
    r.ss_tag = x.b().is_exact_zero() ? is_norm(*r.ext, -x.c()) : is_norm(*r.ext, x.b());
  }
  return r;
}

inline bool is_regular_semisimple(const ElementClass& c) { return std::holds_alternative<RegularSS>(c); }

/// Depth of an element: a half-integer, or "deep" (at least every r) for
/// nilpotent and zero elements.
struct Depth {
  bool deep = false;
  mpq_class value = 0;

  static Depth Deep() { return {true, 0}; }
  bool at_least(const mpq_class& r) const { return deep || value >= r; }
  bool greater_than(const mpq_class& r) const { return deep || value > r; }
  bool operator==(const Depth& o) const { return deep == o.deep && (deep || value == o.value); }
  std::string to_string() const { return deep ? "deep" : germlab::to_string(value); }
};

inline Depth depth(const Sl2Element& x) {
  ElementClass c = classify(x);
  if (const auto* ss = std::get_if<RegularSS>(&c)) {
    mpq_class d(ss->neg_det.valuation(), 2);
    d.canonicalize();
    return {false, d};
  }
  return Depth::Deep();
}

inline bool in_g_r(const Sl2Element& x, const mpq_class& r, bool strict = false) {
  Depth d = depth(x);
  return strict ? d.greater_than(r) : d.at_least(r);
}

inline bool is_top_nilpotent(const Sl2Element& x) {
  if (x.is_exact_zero()) return true;
  PadicScalar d;
  try {
    d = x.det();
  } catch (const InsufficientPrecision&) {
    throw InsufficientPrecision("determinant undecidable for " + x.to_string());
  }
  return d.is_exact_zero() || d.valuation() > 0;
}

/// Ad(g) X = g X g^{-1}, with the a-entry rebuilt so the trace stays zero.
inline Sl2Element ad(const GroupElement& g, const Sl2Element& x) {
  GroupElement gi = g.inverse();
  const PadicScalar &a = x.a(), &b = x.b(), &c = x.c();
  PadicScalar na = -a;
  // (gX)
  PadicScalar t00 = g(0, 0) * a + g(0, 1) * c, t01 = g(0, 0) * b + g(0, 1) * na;
  PadicScalar t10 = g(1, 0) * a + g(1, 1) * c, t11 = g(1, 0) * b + g(1, 1) * na;
  PadicScalar r00 = t00 * gi(0, 0) + t01 * gi(1, 0), r01 = t00 * gi(0, 1) + t01 * gi(1, 1);
  PadicScalar r10 = t10 * gi(0, 0) + t11 * gi(1, 0), r11 = t10 * gi(0, 1) + t11 * gi(1, 1);
  PadicScalar half = PadicScalar::from_rational(mpq_class(1, 2), x.prime(), x.digits());
  return {(r00 - r11) * half, r01, r10};
}

/// Cayley transform (1 + X/2)(1 - X/2)^{-1}, defined on topologically nilpotent X.
inline GroupElement cayley(const Sl2Element& x) {
  if (!is_top_nilpotent(x)) throw OutsideDomain("cayley: element is not topologically nilpotent");
  const long p = x.prime();
  const long n = x.digits();
  auto one = PadicScalar::from_rational(1, p, n);
  auto half = PadicScalar::from_rational(mpq_class(1, 2), p, n);
  PadicScalar ha = x.a() * half, hb = x.b() * half, hc = x.c() * half;
  // (1 - X/2)^{-1} = adj / det with det = 1 + det(X)/4.
  PadicScalar det = one - ha * ha - hb * hc;
  PadicScalar i00 = (one + ha) / det, i01 = hb / det, i10 = hc / det, i11 = (one - ha) / det;
  PadicScalar p00 = one + ha, p01 = hb, p10 = hc, p11 = one - ha;
  return GroupElement(p00 * i00 + p01 * i10, p00 * i01 + p01 * i11, p10 * i00 + p11 * i10,
                      p10 * i01 + p11 * i11);
}

/// Inverse Cayley transform 2 (g - 1)(g + 1)^{-1} on topologically unipotent g.
inline Sl2Element cayley_inv(const GroupElement& g) {
  const long p = g.p();
  long n = 12;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!g(i, j).is_exact_zero()) n = std::min(n, g(i, j).precision());
  auto one = PadicScalar::from_rational(1, p, n);
  auto two = PadicScalar::from_rational(2, p, n);
  PadicScalar tr = g(0, 0) + g(1, 1);
  PadicScalar dp = tr + two;  // det(g + 1) = 2 + tr g
  if (dp.is_exact_zero() || dp.valuation() != 0)
    throw OutsideDomain("cayley_inv: g + 1 is not invertible over O");
  PadicScalar m00 = g(0, 0) - one, m01 = g(0, 1), m10 = g(1, 0), m11 = g(1, 1) - one;
  // (g + 1)^{-1} = adj(g + 1) / det(g + 1)
  PadicScalar j00 = (g(1, 1) + one) / dp, j01 = -g(0, 1) / dp, j10 = -g(1, 0) / dp, j11 = (g(0, 0) + one) / dp;
  PadicScalar r00 = two * (m00 * j00 + m01 * j10);
  PadicScalar r01 = two * (m00 * j01 + m01 * j11);
  PadicScalar r10 = two * (m10 * j00 + m11 * j10);
  PadicScalar r11 = two * (m10 * j01 + m11 * j11);
  auto half = PadicScalar::from_rational(mpq_class(1, 2), p, n);
  Sl2Element x((r00 - r11) * half, r01, r10);
  if (!is_top_nilpotent(x)) throw OutsideDomain("cayley_inv: g is not topologically unipotent");
  return x;
}

/// Random element of SL2(Z[1/p]) as a product of elementary matrices whose
/// off-diagonal entries are k / p^j with |k| <= size_bound, j <= size_bound.
inline QMat2 random_sl2(std::mt19937_64& rng, long p, long size_bound) {
  std::uniform_int_distribution<long> num(-size_bound, size_bound);
  std::uniform_int_distribution<long> ex(-size_bound, size_bound);
  auto entry = [&] {
    mpq_class t = mpq_class(num(rng)) * qpow(p, ex(rng) / 2);
    return t;
  };
  QMat2 g = QMat2::upper(entry()) * QMat2::lower(entry()) * QMat2::upper(entry());
  long k = ex(rng) / 2;
  return g * QMat2::diag(qpow(p, k), qpow(p, -k));
}

inline Sl2Element random_conjugate(const Sl2Element& x, std::uint64_t seed, long size_bound) {
  std::mt19937_64 rng(seed);
  QMat2 g = random_sl2(rng, x.prime(), size_bound);
  FieldConfig cfg{x.prime(), x.digits()};
  return ad(GroupElement::from_rational(g, cfg), x);
}

/// Description of a regular semisimple orbit representative.
struct SemisimpleSpec {
  TorusKind torus = TorusKind::Split;
  /// Split: the eigenvalue u. Elliptic: the value of -det (must lie in the torus class).
  mpq_class value;
};

inline Sl2Element standard_representative(const OrbitLabel& label, const FieldConfig& cfg) {
  if (label.zero) return Sl2Element::from_rational(0, 0, 0, cfg);
  return Sl2Element::from_rational(0, class_representative(label.cls, cfg.p), 0, cfg);
}

inline Sl2Element standard_representative(const SemisimpleSpec& spec, const FieldConfig& cfg) {
  if (spec.value == 0) throw SpecMismatch("semisimple representative needs a nonzero parameter");
  if (spec.torus == TorusKind::Split) return Sl2Element::from_rational(spec.value, 0, 0, cfg);
  if (torus_kind_of(square_class_of(spec.value, cfg.p)) != spec.torus)
    throw SpecMismatch("-det " + to_string(spec.value) + " is not in the class of the requested torus");
  return Sl2Element::from_rational(0, 1, spec.value, cfg);
}

/// Parses "0", "diag(u,-u)" or "[[a,b],[c,-a]]" with rational entries.
inline QSl2 parse_matrix(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s == "0") return {0, 0, 0};
  auto split_commas = [](const std::string& body) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : body) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    out.push_back(cur);
    return out;
  };
  if (s.rfind("diag(", 0) == 0 && s.back() == ')') {
    auto parts = split_commas(s.substr(5, s.size() - 6));
    if (parts.size() != 2) throw ParseError("diag needs two entries: " + text);
    mpq_class u = parse_rational(parts[0]), w = parse_rational(parts[1]);
    if (u + w != 0) throw ParseError("diag entries must sum to zero: " + text);
    return {u, 0, 0};
  }
  if (s.size() > 4 && s.rfind("[[", 0) == 0 && s.substr(s.size() - 2) == "]]") {
    std::string body;
    for (char ch : s.substr(2, s.size() - 4))
      if (ch != '[' && ch != ']') body.push_back(ch);
    auto parts = split_commas(body);
    if (parts.size() != 4) throw ParseError("matrix needs four entries: " + text);
    QSl2 x{parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2])};
    if (parse_rational(parts[3]) != -x.a) throw ParseError("matrix must have trace zero: " + text);
    return x;
  }
  throw ParseError("unrecognized matrix '" + text + "'");
}

inline std::string format_matrix(const QSl2& x) {
  return "[[" + to_string(x.a) + "," + to_string(x.b) + "],[" + to_string(x.c) + "," +
         to_string(mpq_class(-x.a)) + "]]";
}

}  // namespace germlab
