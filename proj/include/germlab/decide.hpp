#pragma once

// Exact decisions of the form "val P >= T on a whole polydisc" for
// polynomials of degree <= 2 with rational coefficients.

#include <gmpxx.h>

#include <vector>

#include "germlab/qutil.hpp"

namespace germlab {

enum class Tri { In, Out, Unknown };

/// P(y) = c + sum l_i y_i + sum_{i<=j} q_ij y_i y_j in k variables.
struct QuadPoly {
  mpq_class c;
  std::vector<mpq_class> lin;
  std::vector<std::vector<mpq_class>> quad;  // upper triangular, quad[i][j] for i <= j

  explicit QuadPoly(std::size_t k = 0) : c(0), lin(k, 0), quad(k, std::vector<mpq_class>(k, 0)) {}
  std::size_t arity() const { return lin.size(); }

  mpq_class operator()(const std::vector<mpq_class>& y) const {
    mpq_class r = c;
    for (std::size_t i = 0; i < y.size(); ++i) {
      r += lin[i] * y[i];
      for (std::size_t j = i; j < y.size(); ++j) r += quad[i][j] * y[i] * y[j];
    }
    return r;
  }
};

/// Decides val(P(z + p^e s)) >= threshold for all s in O^k.
/// Out means val(P) < threshold everywhere on the polydisc.
inline Tri decide(const QuadPoly& poly, const std::vector<mpq_class>& center, const std::vector<long>& radius,
                  long threshold, long p) {
  const std::size_t k = poly.arity();
  mpq_class value = poly(center);
  long v0 = vp(value, p);
  long mu = kValInf;
  for (std::size_t i = 0; i < k; ++i) {
    mpq_class g = poly.lin[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) g += 2 * poly.quad[i][i] * center[i];
      else if (j > i) g += poly.quad[i][j] * center[j];
      else g += poly.quad[j][i] * center[j];
    }
    long vg = vp(g, p);
    if (vg != kValInf) mu = std::min(mu, vg + radius[i]);
    for (std::size_t j = i; j < k; ++j) {
      long vq = vp(poly.quad[i][j], p);
      if (vq != kValInf) mu = std::min(mu, vq + radius[i] + radius[j]);
    }
  }
  if (v0 >= threshold && mu >= threshold) return Tri::In;
  if (v0 < threshold && v0 < mu) return Tri::Out;
  return Tri::Unknown;
}

}  // namespace germlab
