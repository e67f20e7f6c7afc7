#include "ergodograph/linalg.hpp"

#include <stdexcept>

namespace ergodograph {

std::vector<std::size_t> row_reduce(RationalMatrix& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational inv = Rational(1) / rows[r][c];
    for (std::size_t k = c; k < cols; ++k) rows[r][k] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const Rational f = rows[i][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rational_rank(RationalMatrix rows) { return row_reduce(rows).size(); }

std::optional<std::vector<Rational>> solve_linear(const RationalMatrix& a,
                                                  const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_linear: row count mismatch");
  const std::size_t n = a.empty() ? 0 : a.front().size();
  RationalMatrix aug;
  aug.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != n) throw std::invalid_argument("solve_linear: ragged matrix");
    auto row = a[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  const auto pivots = row_reduce(aug);
  std::vector<Rational> s(n);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == n) return std::nullopt;
    s[pivots[r]] = aug[r][n];
  }
  return s;
}

}  // namespace ergodograph
