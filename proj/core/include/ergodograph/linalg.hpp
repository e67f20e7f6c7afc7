#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ergodograph/rational.hpp"

namespace ergodograph {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Reduced row echelon form computed in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& rows);

/// Rank over the rationals.
std::size_t rational_rank(RationalMatrix rows);

/// One solution of A s = b, with every free variable set to zero, or
/// nullopt when the system is inconsistent. A is given row by row.
std::optional<std::vector<Rational>> solve_linear(const RationalMatrix& a,
                                                  const std::vector<Rational>& b);

}  // namespace ergodograph
