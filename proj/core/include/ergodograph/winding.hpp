#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergodograph/graph.hpp"
#include "ergodograph/rational.hpp"
#include "ergodograph/tower.hpp"

namespace ergodograph {

/// Integer multiplicities m_n(i,j) with which circuit i of G_{n+1} treads
/// circuit j of G_n, together with the circuit periods.
struct WindingMatrix {
  std::size_t level = 0;  ///< n
  std::vector<std::vector<std::int64_t>> entries;
  std::vector<std::int64_t> row_periods;  ///< l_{n+1}(i)
  std::vector<std::int64_t> col_periods;  ///< l_n(j)
  /// True when the level-n system is linearly dependent, so other valid
  /// matrices exist.
  bool representation_dependent = false;

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return col_periods.size(); }
  /// sum_j m(i,j) l_n(j) == l_{n+1}(i) for every row.
  bool period_consistent() const;
};

/// m-bar(i,j) = l_n(j) / l_{n+1}(i) * m(i,j); rows sum to one.
struct NormalizedWinding {
  std::vector<std::vector<Rational>> entries;

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return entries.empty() ? 0 : entries.front().size(); }
  Rational min_entry() const;
  bool row_stochastic() const;
};

/// Throws std::logic_error if the normalized rows fail to sum to one.
NormalizedWinding normalize(const WindingMatrix& m);

struct Winding {
  WindingMatrix counts;
  NormalizedWinding normalized;
};

/// Winding of phi_n against the circuit systems `upper` (circuits of
/// G_{n+1}, the rows) and `lower` (circuits of G_n, the columns). Each
/// pushforward is first split greedily; if that produces a circuit outside
/// `lower`, the exact system over `lower` is solved instead. Throws
/// NonIntegralDecomposition when neither yields nonnegative integers.
Winding compute_winding(const CoverTower& t, std::size_t n, std::span<const Circuit> upper,
                        std::span<const Circuit> lower, std::size_t cap);

/// Same, over the full circuit sets of both levels.
Winding compute_winding(const CoverTower& t, std::size_t n, std::size_t cap);

struct ContractionStep {
  std::vector<Rational> y;
  Rational x_norm;
  Rational y_norm;
  Rational factor;  ///< 1 - t epsilon
  bool mean_zero_preserved = false;
  bool bound_holds = false;
};

/// y = x M-bar for a mean-zero row vector x, with the bound
/// |y| <= (1 - t eps)|x| checked exactly. Throws NotMeanZero.
ContractionStep contraction_step(std::span<const Rational> x, const NormalizedWinding& m);

struct CertificateRow {
  std::size_t level = 0;  ///< i
  std::size_t d = 0;      ///< column count d_i
  Rational eps;           ///< min entry of M-bar_i
  Rational factor;        ///< 1 - d_i eps_i
  Rational running;       ///< product so far
};

struct Certificate {
  std::size_t n = 0;
  std::size_t depth = 0;
  std::vector<CertificateRow> rows;
  Rational product;
  Rational base_diameter;      ///< diam(Delta_n) over normalized circuits
  Rational bound;              ///< base_diameter * product
  Rational measured_diameter;  ///< simplex_diameter(t, depth, n)
  bool consistent = false;     ///< measured <= bound
  bool full_systems = true;    ///< full circuit sets were used at every level
  std::string note;
};

/// Finite-depth contraction certificate for levels n..depth. Throws
/// NotApplicable when some M-bar_i has a zero entry.
Certificate certify_unique_ergodicity(const CoverTower& t, std::size_t n, std::size_t depth,
                                      std::size_t cap);

/// Same with explicit circuit systems: systems[k] lists circuit indices of
/// G_{n+k} for k in [0, depth - n].
Certificate certify_unique_ergodicity(const CoverTower& t, std::size_t n, std::size_t depth,
                                      const std::vector<std::vector<std::size_t>>& systems,
                                      std::size_t cap);

}  // namespace ergodograph
