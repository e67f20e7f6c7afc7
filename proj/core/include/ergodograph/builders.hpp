#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ergodograph/rational.hpp"
#include "ergodograph/tower.hpp"

namespace ergodograph {

/// G_n is the directed cycle of length base^n for n = 0..levels, each
/// cover wrapping base times. Vertices are zero-padded integers.
CoverTower build_odometer(std::size_t levels, std::size_t base);

/// Two hub-to-hub segment pairs plus a return path, levels 1..levels.
///
/// Level n has hubs v1, v2, v3; segments a1, b1 (v1 -> v2) and a2, b2
/// (v2 -> v3) of common length L_n and a path d (v3 -> v1) of length D_n.
/// Circuits: a = a1 a2 d, b = b1 b2 d, c = a1 b2 d, c' = b1 a2 d. The cover
/// to level n sends every hub to v1 and routes a1, a2 along a^p b, b1, b2
/// along a b^p and d along c c', with p = p[n-1]. Throws InvalidSchedule
/// unless p has levels-1 entries, all >= 1, L1 >= 2 and D1 >= 1, or when a
/// level would exceed 32-bit vertex ids.
CoverTower build_example_63(std::size_t levels, const std::vector<std::uint64_t>& p,
                            std::uint64_t L1 = 2, std::uint64_t D1 = 1);

/// Segment lengths (L_n, D_n) for n = 1..levels under the schedule.
std::vector<std::pair<std::uint64_t, std::uint64_t>> example_63_lengths(
    std::size_t levels, const std::vector<std::uint64_t>& p, std::uint64_t L1, std::uint64_t D1);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct TreeTypeSpec {
  /// Periods of the level-1 circuits.
  std::vector<std::uint64_t> periods;
  /// windings[k] has one row per circuit of level k+2 and one column per
  /// circuit of level k+1; every entry >= 1. The tower has
  /// windings.size() + 1 levels above the singleton.
  std::vector<IntMatrix> windings;
  /// parents[k][i] is the tree parent of circuit i at level k+1 and must be
  /// smaller than i; entry 0 is ignored. Missing levels use the chain
  /// i -> i-1.
  std::vector<std::vector<std::size_t>> parents;
};

/// Circuits that meet pairwise in at most one vertex, arranged as a tree.
///
/// Circuit i of level n+1 follows a closed walk in G_n: a depth-first tour
/// of the level-n circuit tree that laps circuit j m(i,j) times, entering
/// children on the first lap only. A parent and child are joined by
/// merging one position of each whose images leave along the same edge, so
/// the cover is +directional. Throws UnroutableRequest when no such pair
/// is left, ValidationError on malformed specs.
CoverTower build_tree_type(const TreeTypeSpec& spec);

/// Integer multiplicities K * target with K the least common multiple of
/// the denominators. With equal periods on each level the resulting
/// normalized winding is exactly `target`. Throws ValidationError unless
/// target is row-stochastic with positive entries.
IntMatrix winding_for_target(const std::vector<std::vector<Rational>>& target);

}  // namespace ergodograph
