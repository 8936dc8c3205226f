#pragma once

// Standard families, grids and cases shared by the command line and the
// acceptance runner.

#include <gmpxx.h>

#include <random>
#include <string>
#include <vector>

#include "germlab/germ.hpp"
#include "germlab/lcfunction.hpp"
#include "germlab/oracle.hpp"
#include "germlab/orbital.hpp"
#include "germlab/sl2.hpp"
#include "germlab/tree.hpp"

namespace germlab::suites {

inline std::vector<QSl2> proxy_centers(long p) {
  const mpq_class eps = smallest_nonsquare(p);
  return {
      QSl2{0, 0, 0},
      QSl2{0, 1, 0},
      QSl2{0, eps, 0},
      QSl2{0, mpq_class(1, p), 0},
      QSl2{0, eps / p, 0},
      QSl2{0, 0, 1},
      QSl2{1, 0, 0},
  };
}

inline std::vector<TreeVertex> proxy_vertices(long p) {
  return {TreeVertex::base(), TreeVertex::make(1, 0, p), TreeVertex::make(-1, 0, p)};
}

/// Depth-r proxy family as named functions.
inline std::vector<NamedFunction> proxy_family(long r, long p) {
  std::vector<NamedFunction> out;
  for (const auto& pf : depth_r_family(r, proxy_centers(p), proxy_vertices(p), p)) out.push_back({pf.id, pf.f, r});
  return out;
}

/// Pool for H_r(O): the proxy family restricted to the base and (1,0) vertices.
inline std::vector<NamedFunction> proxy_pool(long r, long p) {
  std::vector<TreeVertex> verts{TreeVertex::base(), TreeVertex::make(1, 0, p)};
  std::vector<QSl2> centers = proxy_centers(p);
  centers.resize(5);
  std::vector<NamedFunction> out;
  for (const auto& pf : depth_r_family(r, centers, verts, p)) out.push_back({pf.id, pf.f, r});
  return out;
}

/// Regular points of depth r, r + 1/2, r + 1, r + 3/2, r + 2 over all torus types.
inline std::vector<QSl2> regular_grid(long r, long p) {
  const mpq_class eps = smallest_nonsquare(p);
  const mpq_class pr = qpow(p, r);
  const mpq_class p2r = qpow(p, 2 * r);
  return {
      // split
      QSl2{pr, 0, 0},
      QSl2{2 * pr, 0, 0},
      QSl2{pr * p, 0, 0},
      QSl2{pr * p * p, 0, 0},
      // unramified, both orbits in the stable class
      QSl2{0, pr, eps * pr},
      QSl2{0, pr * p, eps * pr / p},
      QSl2{0, pr * p, eps * pr * p},
      // ramified
      QSl2{0, 1, p2r * p},
      QSl2{0, eps, eps * p2r * p},
      QSl2{0, 1, eps * p2r * p},
      QSl2{0, eps, p2r * p},
      QSl2{0, 1, p2r * p * p * p},
  };
}

inline std::vector<QSl2> filter_depth(const std::vector<QSl2>& grid, long r, long p, bool strict) {
  std::vector<QSl2> out;
  for (const auto& x : grid) {
    mpq_class d = element_depth(x, p);
    if (strict ? d > r : d >= r) out.push_back(x);
  }
  return out;
}

/// Assorted test functions: balls, Moy-Prasad indicators, nilpotent cosets and
/// signed combinations.
inline std::vector<NamedFunction> test_functions(long p) {
  std::vector<NamedFunction> out;
  auto ind = [&](const QSl2& y, long m, long n) {
    return LCFunction::indicator(y, mp_lattice(TreeVertex::make(m, 0, p), n), p);
  };
  const mpq_class eps = smallest_nonsquare(p);
  out.push_back({"ball0", LCFunction::ball(0, p), -1});
  out.push_back({"ball1", LCFunction::ball(1, p), 0});
  out.push_back({"ball-1", LCFunction::ball(-1, p), -2});
  out.push_back({"mp(1,0):1", ind({0, 0, 0}, 1, 1), 0});
  out.push_back({"mp(-1,0):0", ind({0, 0, 0}, -1, 0), -1});
  out.push_back({"nilOne:1", ind({0, 1, 0}, 0, 1), 0});
  out.push_back({"nilEps:1", ind({0, eps, 0}, 0, 1), 0});
  out.push_back({"nilPi:2", ind({0, p, 0}, 0, 2), 1});
  out.push_back({"lower:1", ind({0, 0, 1}, 0, 1), 0});
  out.push_back({"diag:1", ind({1, 0, 0}, 0, 1), 0});
  LCFunction mix = LCFunction::ball(0, p);
  mix += mpq_class(-3, 2) * ind({0, 1, 0}, 0, 1);
  mix += mpq_class(2) * ind({0, 0, 0}, 1, 1);
  out.push_back({"mix", mix, 0});
  return out;
}

}  // namespace germlab::suites
