#pragma once

// Exact orbital integrals on sl2(Q_p).
//
// A regular orbit lies in the fiber {a^2 + bc = D}, D = -det X. The invariant
// measure on the fiber is the Gelfand-Leray form, written da db/|b| in the
// chart (a, b) and da dc/|c| in the chart (a, c). The fiber is cut into
// strata by s = the larger of b, c (in absolute value):
//   chart B: val b = v, val(D - a^2) >= 2v      (so val c >= v)
//   chart C: val c = v, val(D - a^2) >= 2v + 1  (so val b > v)
// In each stratum the integrand is decided exactly on p-adic polydiscs in
// (a, s) by recursive subdivision. Far strata form a geometric series whose
// ratio depends only on the orbit type; the tail is accepted only after two
// further period-2 strata reproduce the predicted ratio exactly.

#include <gmpxx.h>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "germlab/decide.hpp"
#include "germlab/errors.hpp"
#include "germlab/lcfunction.hpp"
#include "germlab/padic.hpp"
#include "germlab/qutil.hpp"
#include "germlab/sl2.hpp"
#include "germlab/tree.hpp"

namespace germlab {

struct Normalization {
  static std::string fingerprint() {
    return "dg:vol(SL2(O))=1;dt:vol(T_c)=1;ss:q^floor(val(-det)/2)*da.db/|b|;"
           "Zero:delta_0;Regular(l):da.db/|b| on {bc=-a^2, b in l}";
  }
};

struct IntegralResult {
  mpq_class value;
  long v0 = 0;
  /// Per-stratum sums S(v) for v = v_min .. v0 + 4 (chart B + chart C).
  long v_min = 0;
  std::vector<mpq_class> strata;
  mpq_class ratio;       // period-2 ratio of the geometric tail
  mpq_class tail_value;  // sum over strata beyond v0
  bool certificate = false;

  std::string tail() const {
    return "rho=" + to_string(ratio) + ";tail=" + to_string(tail_value);
  }
};

enum class OrbitKind { Split, Elliptic, Nilpotent };

/// The fiber piece integrated over: D = -det together with the class
/// restriction on b that selects one SL2-orbit.
struct FiberTarget {
  mpq_class neg_det;
  OrbitKind kind = OrbitKind::Split;
  std::optional<QuadExtDescriptor> ext;  // elliptic
  bool tag = true;                       // elliptic: b is a norm
  SquareClass nil_class = SquareClass::One;

  bool allows_b(const mpq_class& b, long p) const {
    switch (kind) {
      case OrbitKind::Split: return true;
      case OrbitKind::Elliptic: return is_norm(*ext, b, p) == tag;
      case OrbitKind::Nilpotent: return square_class_of(b, p) == nil_class;
    }
    return false;
  }
};

inline FiberTarget fiber_target(const QSl2& x, long p) {
  FiberTarget t;
  t.neg_det = x.neg_det();
  if (t.neg_det == 0) throw NotRegular("element " + format_matrix(x) + " is not regular semisimple");
  SquareClass cls = square_class_of(t.neg_det, p);
  if (cls == SquareClass::One) {
    t.kind = OrbitKind::Split;
  } else {
    t.kind = OrbitKind::Elliptic;
    t.ext = QuadExtDescriptor{cls};
    t.tag = x.b != 0 ? is_norm(*t.ext, x.b, p) : is_norm(*t.ext, mpq_class(-x.c), p);
  }
  return t;
}

inline FiberTarget fiber_target(const OrbitLabel& label) {
  FiberTarget t;
  t.neg_det = 0;
  t.kind = OrbitKind::Nilpotent;
  t.nil_class = label.cls;
  return t;
}

/// q^floor(val(-det)/2), the factor turning the Gelfand-Leray integral into
/// one that scales covariantly: I(zeta^2 X, f) = I(X, f_zeta).
inline mpq_class ss_normalization(const mpq_class& neg_det, long p) {
  long v = vp(neg_det, p);
  long h = v >= 0 ? v / 2 : -((-v + 1) / 2);
  return qpow(p, h);
}

namespace detail {

// s * L(a, b, c) written as a polynomial in (a, s); the a-linear term vanishes.
struct ChartCondition {
  mpq_class c00, c01, c20, c11, c02;
  long v20 = kValInf, v11 = kValInf, v02 = kValInf;
  long threshold = 0;  // before adding the stratum valuation

  void finish(long p) {
    v20 = vp(c20, p);
    v11 = vp(c11, p);
    v02 = vp(c02, p);
  }
};

struct ChartTerm {
  mpq_class coeff;
  std::array<ChartCondition, 3> conds;
};

struct NodePowers {
  mpq_class a2, as, s2;
};

class FiberIntegrator {
 public:
  FiberIntegrator(const LCFunction& f, FiberTarget target)
      : p_(f.prime()), target_(std::move(target)), f_(f.normalized()) {
    for (int chart = 0; chart < 2; ++chart) {
      auto& out = terms_[chart];
      for (const auto& t : f_.terms()) {
        ChartTerm ct;
        ct.coeff = t.coeff;
        auto lin = t.cell.conditions();
        for (int i = 0; i < 3; ++i) {
          const auto& L = lin[i];
          ChartCondition& c = ct.conds[i];
          // chart 0: s = b, c = (D - a^2)/s.  chart 1: s = c, b = (D - a^2)/s.
          const mpq_class& k_s = chart == 0 ? L.kb : L.kc;
          const mpq_class& k_t = chart == 0 ? L.kc : L.kb;
          c.c00 = k_t * target_.neg_det;
          c.c01 = L.k0;
          c.c20 = -k_t;
          c.c11 = L.ka;
          c.c02 = k_s;
          c.threshold = L.threshold;
          c.finish(p_);
        }
        out.push_back(std::move(ct));
      }
    }
    region_.c00 = target_.neg_det;
    region_.c01 = 0;
    region_.c20 = -1;
    region_.c11 = 0;
    region_.c02 = 0;
    region_.finish(p_);
    support_ = f_.support_bound();
  }

  long support_bound() const { return support_; }

  /// Sum over both charts of the stratum with val s = v.
  mpq_class stratum(long v) const {
    if (f_.empty()) return 0;
    mpq_class total = 0;
    for (int chart = 0; chart < 2; ++chart) {
      std::vector<Active> active;
      for (std::size_t i = 0; i < terms_[chart].size(); ++i) active.push_back({i, 0b111});
      for (long d = 1; d < p_; ++d) {
        mpq_class s0 = mpq_class(d) * qpow(p_, v);
        mpq_class b_value = chart == 0 ? s0 : mpq_class(-s0);
        if (!target_.allows_b(b_value, p_)) continue;
        long region_threshold = chart == 0 ? 2 * v : 2 * v + 1;
        total += node(chart, v, region_threshold, 0, -support_, s0, v + 1, active, false, 0);
      }
    }
    return total;
  }

 private:
  struct Active {
    std::size_t term;
    unsigned undecided;  // bit i set: condition i not yet known to hold
  };

  long p_;
  FiberTarget target_;
  LCFunction f_;
  std::array<std::vector<ChartTerm>, 2> terms_;
  ChartCondition region_;
  long support_ = 0;

  Tri decide(const ChartCondition& c, long threshold, const mpq_class& a0, long alpha, const mpq_class& s0,
             long beta, const NodePowers& pw, long& mu_a, long& mu_s) const {
    mpq_class val = c.c00 + c.c01 * s0 + c.c20 * pw.a2 + c.c11 * pw.as + c.c02 * pw.s2;
    long v0 = vp(val, p_);
    mpq_class ga = 2 * c.c20 * a0 + c.c11 * s0;
    mpq_class gs = c.c01 + c.c11 * a0 + 2 * c.c02 * s0;
    long vga = vp(ga, p_), vgs = vp(gs, p_);
    auto add = [](long x, long y) { return x == kValInf ? kValInf : x + y; };
    long cross = add(c.v11, alpha + beta);
    mu_a = std::min({add(vga, alpha), add(c.v20, 2 * alpha), cross});
    mu_s = std::min({add(vgs, beta), add(c.v02, 2 * beta), cross});
    long mu = std::min(mu_a, mu_s);
    if (v0 >= threshold && mu >= threshold) return Tri::In;
    if (v0 < threshold && v0 < mu) return Tri::Out;
    return Tri::Unknown;
  }

  mpq_class node(int chart, long v, long region_threshold, const mpq_class& a0, long alpha, const mpq_class& s0,
                 long beta, const std::vector<Active>& active, bool region_in, const mpq_class& offset) const {
    NodePowers pw{a0 * a0, a0 * s0, s0 * s0};
    long best_a = kValInf, best_s = kValInf;
    long mu_a = 0, mu_s = 0;
    if (!region_in) {
      Tri r = decide(region_, region_threshold, a0, alpha, s0, beta, pw, mu_a, mu_s);
      if (r == Tri::Out) return 0;
      if (r == Tri::In) {
        region_in = true;
      } else {
        best_a = std::min(best_a, mu_a);
        best_s = std::min(best_s, mu_s);
      }
    }
    mpq_class value = offset;
    std::vector<Active> next;
    next.reserve(active.size());
    for (const auto& act : active) {
      const ChartTerm& term = terms_[chart][act.term];
      unsigned undecided = act.undecided;
      bool out = false;
      long la = kValInf, ls = kValInf;
      for (int i = 0; i < 3 && !out; ++i) {
        if (!(undecided & (1u << i))) continue;
        const ChartCondition& c = term.conds[i];
        Tri t = decide(c, c.threshold + v, a0, alpha, s0, beta, pw, mu_a, mu_s);
        if (t == Tri::Out) out = true;
        else if (t == Tri::In) undecided &= ~(1u << i);
        else {
          la = std::min(la, mu_a);
          ls = std::min(ls, mu_s);
        }
      }
      if (out) continue;
      if (undecided == 0) {
        value += term.coeff;
      } else {
        next.push_back({act.term, undecided});
        best_a = std::min(best_a, la);
        best_s = std::min(best_s, ls);
      }
    }
    if (next.empty()) {
      if (value == 0) return 0;
      if (region_in) return value * qpow(p_, v - alpha - beta);
    }
    bool split_a = best_a <= best_s;
    mpq_class total = 0;
    if (split_a) {
      mpq_class step = qpow(p_, alpha);
      for (long d = 0; d < p_; ++d)
        total += node(chart, v, region_threshold, a0 + step * d, alpha + 1, s0, beta, next, region_in, value);
    } else {
      mpq_class step = qpow(p_, beta);
      for (long d = 0; d < p_; ++d)
        total += node(chart, v, region_threshold, a0, alpha, s0 + step * d, beta + 1, next, region_in, value);
    }
    return total;
  }
};

inline IntegralResult integrate_fiber(const LCFunction& f, const FiberTarget& target, const mpq_class& factor) {
  const long p = f.prime();
  FiberIntegrator integrator(f, target);
  IntegralResult res;
  res.v_min = -integrator.support_bound();
  long half_val = 0;
  if (target.kind != OrbitKind::Nilpotent) {
    long vd = vp(target.neg_det, p);
    half_val = vd >= 0 ? vd / 2 : -((-vd + 1) / 2);
    // Strata with val s < val(D)/2 cannot meet the fiber inside chart B or C.
    res.v_min = std::min(res.v_min, half_val);
  }
  const mpq_class q2 = mpq_class(1) / (p * p);
  switch (target.kind) {
    case OrbitKind::Split: res.ratio = q2 * q2; break;
    case OrbitKind::Nilpotent: res.ratio = q2; break;
    case OrbitKind::Elliptic: res.ratio = 0; break;
  }
  long v0 = f.level() + 2 * std::abs(half_val) + integrator.support_bound() + 2;
  v0 = std::max(v0, res.v_min + 2);
  if (target.kind != OrbitKind::Nilpotent) v0 = std::max(v0, half_val + 2);
  for (long v = res.v_min; v <= v0 + 4; ++v) res.strata.push_back(integrator.stratum(v));
  for (int attempt = 0; attempt < 6; ++attempt) {
    auto S = [&](long v) -> const mpq_class& { return res.strata[static_cast<std::size_t>(v - res.v_min)]; };
    if (S(v0 + 3) == res.ratio * S(v0 + 1) && S(v0 + 4) == res.ratio * S(v0 + 2)) {
      mpq_class head = 0;
      for (long v = res.v_min; v <= v0; ++v) head += S(v);
      res.tail_value = (S(v0 + 1) + S(v0 + 2)) / (1 - res.ratio);
      res.value = factor * (head + res.tail_value);
      res.v0 = v0;
      res.certificate = true;
      return res;
    }
    v0 += 2;
    for (long v = v0 + 3; v <= v0 + 4; ++v) res.strata.push_back(integrator.stratum(v));
  }
  throw TailUnstable("geometric tail not confirmed up to stratum " + std::to_string(v0 + 4));
}

}  // namespace detail

/// Lie-algebra orbital integral of f over the SL2-orbit of a regular semisimple X.
inline IntegralResult ss_orbital(const QSl2& x, const LCFunction& f) {
  FiberTarget t = fiber_target(x, f.prime());
  return detail::integrate_fiber(f, t, ss_normalization(t.neg_det, f.prime()));
}

inline IntegralResult ss_orbital(const Sl2Element& x, const LCFunction& f) {
  if (!x.is_exact()) throw InsufficientPrecision("ss_orbital needs exact entries");
  if (!is_regular_semisimple(classify(x))) throw NotRegular("element " + x.to_string() + " is not regular semisimple");
  return ss_orbital(x.rational(), f);
}

inline IntegralResult nilpotent_orbital(const OrbitLabel& label, const LCFunction& f) {
  if (label.zero) {
    IntegralResult r;
    r.value = f.evaluate(QSl2{0, 0, 0});
    r.certificate = true;
    r.ratio = 0;
    return r;
  }
  return detail::integrate_fiber(f, fiber_target(label), mpq_class(1));
}

/// The five nilpotent orbital integrals, indexed by OrbitLabel::index().
using NilpotentVector = std::array<mpq_class, 5>;

inline NilpotentVector nilpotent_vector(const LCFunction& f) {
  NilpotentVector out;
  for (const auto& label : all_orbit_labels())
    out[static_cast<std::size_t>(label.index())] = nilpotent_orbital(label, f).value;
  return out;
}

}  // namespace germlab
