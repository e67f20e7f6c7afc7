#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ergodograph/flows.hpp"
#include "ergodograph/graph.hpp"
#include "ergodograph/linalg.hpp"

namespace ergodograph {

struct PrivateEdgeReport {
  std::vector<Circuit> circuits;
  /// Lowest edge of circuits[i] lying on no other circuit, if any.
  std::vector<std::optional<EdgeId>> private_edges;

  /// True iff every circuit owns a private edge.
  bool independent() const;
};

PrivateEdgeReport private_edge_report(const Graph& g, std::size_t cap);
PrivateEdgeReport private_edge_report(const Graph& g, std::vector<Circuit> circuits);

/// Rank of circulations over the rationals. All must share a host.
std::size_t rational_rank(std::span<const Circulation> vectors);

/// Indicator vectors of circuits as rows of an edge-indexed matrix.
RationalMatrix circuit_matrix(const Graph& g, std::span<const Circuit> circuits);

/// Coefficients s(c), c != c0, with c0 = sum s(c) c.
using DependencyExpression = std::vector<std::pair<std::size_t, Rational>>;

/// For circuits[target]: nullopt when it owns a private edge, otherwise an
/// exact solution listing nonzero coefficients by circuit index. Throws
/// InfeasibleSystem if no solution exists, which contradicts theory.
std::optional<DependencyExpression> express_dependency(const Graph& g,
                                                       std::span<const Circuit> circuits,
                                                       std::size_t target);

/// Circuit indices forming a basis of the span, chosen greedily in order:
/// a circuit is kept when it raises the rank of those kept before it.
std::vector<std::size_t> select_basis(const Graph& g, std::span<const Circuit> circuits);

/// Looks for s >= 0 with sum_j s_j columns[j] = target by enumerating
/// basic solutions (column subsets of full column rank). Exponential in the
/// column count; intended for small checks. Returns a solution or nullopt.
std::optional<std::vector<Rational>> nonnegative_solution(const RationalMatrix& columns,
                                                          const std::vector<Rational>& target);

}  // namespace ergodograph
