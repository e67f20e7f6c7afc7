#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ergodograph/cover.hpp"
#include "ergodograph/flows.hpp"
#include "ergodograph/graph.hpp"
#include "ergodograph/rational.hpp"

namespace ergodograph {

/// Levels and vertex maps as read from a file, before any validation.
/// maps[k] sends level k+1 to level k; levels[0] should be the singleton.
struct TowerData {
  std::vector<GraphPtr> levels;
  std::vector<std::vector<VertexId>> maps;
};

struct TowerReport {
  bool singleton_head = true;
  bool chained = true;  ///< one map per consecutive pair, each total
  std::vector<ValidationReport> graphs;
  std::vector<std::optional<CoverReport>> covers;  ///< empty when the map is malformed
  std::vector<std::string> problems;               ///< human-readable, first failures

  bool valid() const { return problems.empty(); }
};

TowerReport validate_tower(const TowerData& data);

/// G_0 <- G_1 <- ... <- G_N with every cover validated and G_0 the
/// singleton graph.
class CoverTower {
 public:
  /// Throws ValidationError carrying the first problem of validate_tower.
  explicit CoverTower(TowerData data);
  CoverTower(const CoverTower&) = delete;
  CoverTower& operator=(const CoverTower&) = delete;
  CoverTower(CoverTower&&) = default;
  CoverTower& operator=(CoverTower&&) = default;

  /// N, the deepest level.
  std::size_t top() const noexcept { return levels_.size() - 1; }
  const Graph& level(std::size_t n) const { return *levels_.at(n); }
  const GraphPtr& level_ptr(std::size_t n) const { return levels_.at(n); }
  /// phi_n : G_{n+1} -> G_n.
  const Cover& cover(std::size_t n) const { return covers_.at(n); }
  const std::vector<Cover>& covers() const noexcept { return covers_; }

  /// Vertex map of phi_{m,n} (identity when m == n), not revalidated.
  std::vector<VertexId> composite_map(std::size_t m, std::size_t n) const;
  /// phi_{m,n} as a validated cover.
  Cover composite(std::size_t m, std::size_t n) const;

  /// C(G_n), enumerated once and cached. Throws CapExceeded if the level
  /// has more than `cap` circuits.
  const std::vector<Circuit>& circuits(std::size_t n, std::size_t cap) const;

  TowerData data() const;

 private:
  std::vector<GraphPtr> levels_;
  std::vector<Cover> covers_;
  mutable std::unique_ptr<std::mutex> cache_mutex_ = std::make_unique<std::mutex>();
  mutable std::map<std::size_t, std::shared_ptr<const std::vector<Circuit>>> circuit_cache_;
};

/// xi_{m,n}(c~) for every circuit c of G_m, in circuit order. Points may
/// coincide; the hull of the list is xi_{m,n}(Delta_m). With m == n these
/// are the normalized circuits of G_n.
std::vector<Circulation> simplex_image(const CoverTower& t, std::size_t m, std::size_t n,
                                       std::size_t cap);

/// Largest pairwise L1 distance.
Rational diameter(const std::vector<Circulation>& points);

Rational simplex_diameter(const CoverTower& t, std::size_t m, std::size_t n, std::size_t cap);

/// xi_{m,n} applied to an arbitrary circulation on G_m.
Circulation xi(const CoverTower& t, std::size_t m, std::size_t n, const Circulation& x);

enum class MinimalityMode { edges, vertices, walks };

struct MinimalityRow {
  std::size_t m = 0;
  bool pass = true;
  /// Failing circuit (as a vertex list) or walk at level m; empty on pass.
  std::string witness;
  /// Index of the failing circuit of G_m, edges and vertices modes only.
  std::optional<std::size_t> witness_circuit;
  /// How many edges (or vertices) of G_n the witness misses.
  std::size_t missing = 0;
};

struct MinimalityResult {
  std::size_t n = 0;
  std::size_t m_max = 0;
  MinimalityMode mode = MinimalityMode::edges;
  std::size_t walk_length = 0;
  std::vector<MinimalityRow> rows;
  /// Least N such that every m in [N, m_max] passes.
  std::optional<std::size_t> passing_from;
  /// Set when the first witness spans an invariant proper subgraph at
  /// every level from n to the top: its preimages are unions of whole
  /// weakly connected components.
  bool structural_witness = false;
};

MinimalityResult minimality_scan(const CoverTower& t, std::size_t n, std::size_t m_max,
                                 MinimalityMode mode, std::size_t walk_length, std::size_t cap);

struct CandidateCluster {
  /// Circuit indices of G_{m_hi} whose images fall in the cluster.
  std::vector<std::size_t> members;
  /// Image of the first member.
  Circulation representative;
  /// For each m in [m_lo, m_hi]: circuits of G_m occurring in the
  /// decomposition of some member's pushforward to G_m.
  std::vector<std::vector<std::size_t>> trajectory;
};

struct CandidateReport {
  std::size_t n = 0, m_lo = 0, m_hi = 0;
  Rational tol;
  std::vector<Circulation> points;  ///< simplex_image(t, m_hi, n)
  std::vector<CandidateCluster> clusters;
  /// Circuits of G_{m_hi} whose image lies within tol of the segment
  /// joining the representatives of two clusters other than its own.
  std::vector<std::size_t> between;
};

/// Single-linkage clustering of the image points at L1 tolerance `tol`.
/// Evidence about ergodic measures, not proof.
CandidateReport ergodic_candidates(const CoverTower& t, std::size_t n, std::size_t m_lo,
                                   std::size_t m_hi, const Rational& tol, std::size_t cap);

/// Single-linkage clusters of points at tolerance tol, each listed in
/// increasing index order, clusters ordered by their first index.
std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Circulation>& points,
                                                     const Rational& tol);

/// Exact L1 distance from p to the segment [a, b].
Rational l1_distance_to_segment(const Circulation& p, const Circulation& a, const Circulation& b);

/// Finite shadows mu_k and circuit expressions of a measure.
struct MeasurePrefix {
  std::map<std::size_t, Circulation> shadows;
  /// level -> (circuit index of that level, coefficient)
  std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> expressions;
};

/// Shadow at level k: the stored one, or else xi of the deepest
/// expression at or below the top. Throws MissingExpression if neither exists.
Circulation prefix_shadow(const CoverTower& t, const MeasurePrefix& prefix, std::size_t k,
                          std::size_t cap);

/// Checks compatibility xi_{m,n}(mu_m) = mu_n for every stored pair and
/// that expressions are nonnegative with unit sum and reproduce their
/// level's shadow. Returns the first problem, or nullopt.
std::optional<std::string> check_prefix(const CoverTower& t, const MeasurePrefix& prefix,
                                        std::size_t cap);

/// Total coefficient of expression circuits at level `deep` whose image
/// at level `base` is within eps of mu_base. Throws MissingExpression.
Rational ergodic_mass_ratio(const CoverTower& t, const MeasurePrefix& prefix, std::size_t base,
                            std::size_t deep, const Rational& eps, std::size_t cap);

struct ErgodicBound {
  std::size_t k = 0;  ///< smallest supplied circuit-system size
  std::optional<std::size_t> refined;  ///< k - l when candidates are supplied
  std::string annotation;
};

/// k = min(system_sizes); with candidates, l = |between| gives k - l.
ErgodicBound ergodic_count_upper_bound(const std::vector<std::size_t>& system_sizes,
                                       const CandidateReport* candidates = nullptr);

}  // namespace ergodograph
