#pragma once

// Exact Gaussian elimination over Q.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

namespace germlab::linalg {

using Row = std::vector<mpq_class>;
using Matrix = std::vector<Row>;

struct Echelon {
  Matrix m;                          // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

/// Reduced row echelon form; pivots are chosen as the first nonzero entry
/// so the result is deterministic.
inline Echelon rref(Matrix m, std::size_t cols) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t pick = row;
    while (pick < m.size() && m[pick][col] == 0) ++pick;
    if (pick == m.size()) continue;
    std::swap(m[row], m[pick]);
    mpq_class inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      mpq_class factor = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= factor * m[row][c];
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.m = std::move(m);
  return e;
}

inline std::size_t rank(const Matrix& a) {
  if (a.empty()) return 0;
  return rref(a, a.front().size()).pivots.size();
}

enum class SolveStatus { Unique, Underdetermined, Inconsistent };

struct Solution {
  SolveStatus status = SolveStatus::Inconsistent;
  Row x;                 // a particular solution (free variables set to 0)
  std::size_t rank = 0;
  std::vector<Row> kernel;
};

/// Solves a x = b for a with the given number of columns.
inline Solution solve(const Matrix& a, const Row& b, std::size_t cols) {
  Matrix aug;
  aug.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Row r = a[i];
    r.push_back(b[i]);
    aug.push_back(std::move(r));
  }
  Echelon e = rref(aug, cols);
  Solution s;
  s.rank = e.pivots.size();
  for (std::size_t i = s.rank; i < e.m.size(); ++i)
    if (e.m[i][cols] != 0) {
      s.status = SolveStatus::Inconsistent;
      return s;
    }
  s.x.assign(cols, 0);
  for (std::size_t i = 0; i < s.rank; ++i) s.x[e.pivots[i]] = e.m[i][cols];
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Row k(cols, 0);
    k[free] = 1;
    for (std::size_t i = 0; i < s.rank; ++i) k[e.pivots[i]] = -e.m[i][free];
    s.kernel.push_back(std::move(k));
  }
  s.status = s.rank == cols ? SolveStatus::Unique : SolveStatus::Underdetermined;
  return s;
}

inline Matrix transpose(const Matrix& a, std::size_t cols) {
  Matrix t(cols, Row(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
  return t;
}

}  // namespace germlab::linalg
