#pragma once

#include <optional>
#include <vector>

#include "spinorbit/expr.hpp"

namespace spinorbit {

// Dense exact linear algebra over the Gaussian rationals, sized for the
// engine's small systems (basis expansions, ansatz dimension counts).
struct GaussMatrix {
  std::vector<std::vector<GaussRat>> rows;

  std::size_t nrows() const { return rows.size(); }
  std::size_t ncols() const { return rows.empty() ? 0 : rows[0].size(); }
};

// Row-reduces in place; returns pivot column indices.
inline std::vector<std::size_t> row_reduce(GaussMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.ncols() && r < m.nrows(); ++c) {
    std::size_t sel = r;
    while (sel < m.nrows() && m.rows[sel][c].is_zero()) ++sel;
    if (sel == m.nrows()) continue;
    std::swap(m.rows[sel], m.rows[r]);
    GaussRat inv = m.rows[r][c].inverse();
    for (auto& v : m.rows[r]) v = v * inv;
    for (std::size_t k = 0; k < m.nrows(); ++k) {
      if (k == r || m.rows[k][c].is_zero()) continue;
      GaussRat f = m.rows[k][c];
      for (std::size_t j = 0; j < m.ncols(); ++j)
        m.rows[k][j] = m.rows[k][j] - f * m.rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(GaussMatrix m) { return row_reduce(m).size(); }

inline std::size_t kernel_dimension(GaussMatrix m) {
  return m.ncols() - rank(std::move(m));
}

// Solves A x = b exactly; returns nullopt when inconsistent. Free variables
// are set to zero.
inline std::optional<std::vector<GaussRat>> solve(GaussMatrix a,
                                                  std::vector<GaussRat> b) {
  const std::size_t n = a.nrows(), cols = a.ncols();
  for (std::size_t k = 0; k < n; ++k) a.rows[k].push_back(b[k]);
  GaussMatrix aug = std::move(a);
  auto pivots = row_reduce(aug);
  // inconsistent if a pivot landed in the augmented column
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  std::vector<GaussRat> x(cols, GaussRat(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.rows[k][cols];
  return x;
}

}  // namespace spinorbit
