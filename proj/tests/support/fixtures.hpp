#pragma once

// Random inputs shared by unit and acceptance tests.

#include <algorithm>
#include <random>

#include "ergodograph/builders.hpp"

namespace fixtures {

// One draw, possibly unroutable.
inline ergodograph::TreeTypeSpec draw_tree_spec(std::mt19937_64& rng, std::size_t levels,
                                                  std::size_t max_circuits, std::int64_t max_entry,
                                                  std::uint64_t max_period = 3) {
  ergodograph::TreeTypeSpec spec;
  std::size_t d = 1 + rng() % max_circuits;
  std::vector<std::size_t> parents(d, 0), degree(d, 0);
  for (std::size_t i = 1; i < d; ++i) {
    parents[i] = rng() % i;
    ++degree[i];
    ++degree[parents[i]];
  }
  // Every circuit keeps at least one vertex of its own.
  for (std::size_t i = 0; i < d; ++i) {
    spec.periods.push_back(std::max<std::uint64_t>(2 + rng() % (max_period - 1), degree[i] + 1));
  }
  spec.parents.push_back(parents);
  for (std::size_t k = 1; k < levels; ++k) {
    const std::size_t rows = 1 + rng() % max_circuits;
    ergodograph::IntMatrix m(rows, std::vector<std::int64_t>(d));
    for (auto& row : m)
      for (auto& x : row) x = 1 + static_cast<std::int64_t>(rng() % max_entry);
    spec.windings.push_back(std::move(m));
    std::vector<std::size_t> ps(rows, 0);
    for (std::size_t i = 1; i < rows; ++i) ps[i] = rng() % i;
    spec.parents.push_back(ps);
    d = rows;
  }
  return spec;
}

// Tree-type spec with up to max_circuits circuits per level and positive
// windings in [1, max_entry]; `levels` counts levels above the singleton.
// Draws until the builder can route every tree connection.
inline ergodograph::TreeTypeSpec random_tree_spec(std::mt19937_64& rng, std::size_t levels,
                                                  std::size_t max_circuits, std::int64_t max_entry,
                                                  std::uint64_t max_period = 3) {
  for (;;) {
    auto spec = draw_tree_spec(rng, levels, max_circuits, max_entry, max_period);
    try {
      (void)ergodograph::build_tree_type(spec);
      return spec;
    } catch (const ergodograph::UnroutableRequest&) {
    }
  }
}

}  // namespace fixtures
