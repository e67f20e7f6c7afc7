#pragma once

// Independent reference computations for tests. Nothing here calls the
// algorithms under test; graphs are plain adjacency lists over 0..n-1 and
// arithmetic uses mpq_class directly.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ergodograph/graph.hpp"

namespace oracle {

using Adj = std::vector<std::vector<int>>;
using Cycle = std::vector<int>;

struct SmallGraph {
  int n = 0;
  std::set<std::pair<int, int>> edges;

  Adj adjacency() const {
    Adj adj(n);
    for (auto [u, v] : edges) adj[u].push_back(v);
    return adj;
  }
  bool surjective() const {
    std::vector<int> in(n, 0), out(n, 0);
    for (auto [u, v] : edges) {
      ++out[u];
      ++in[v];
    }
    for (int v = 0; v < n; ++v) {
      if (!in[v] || !out[v]) return false;
    }
    return true;
  }
};

inline std::string vname(int v) {
  std::ostringstream s;
  s << 'v' << std::setw(2) << std::setfill('0') << v;
  return s.str();
}

// Names sort in numeric order, so vertex ids equal the oracle indices.
inline ergodograph::Graph to_graph(const SmallGraph& g, std::string name = "G") {
  std::vector<std::string> vs;
  for (int v = 0; v < g.n; ++v) vs.push_back(vname(v));
  std::vector<std::pair<std::string, std::string>> es;
  for (auto [u, v] : g.edges) es.emplace_back(vname(u), vname(v));
  return ergodograph::Graph::from_names(std::move(name), vs, es);
}

inline std::shared_ptr<const ergodograph::Graph> to_graph_ptr(const SmallGraph& g) {
  return std::make_shared<const ergodograph::Graph>(to_graph(g));
}

// Random edge set, then patch every vertex lacking an in- or out-edge.
inline SmallGraph random_graph(std::mt19937_64& rng, int n, double density) {
  SmallGraph g;
  g.n = n;
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (coin(rng)) g.edges.insert({u, v});
    }
  }
  for (int v = 0; v < n; ++v) {
    bool in = false, out = false;
    for (auto [a, b] : g.edges) {
      in |= b == v;
      out |= a == v;
    }
    if (!out) g.edges.insert({v, pick(rng)});
    if (!in) g.edges.insert({pick(rng), v});
  }
  return g;
}

// All edge subsets on n vertices that form a surjective relation.
inline std::vector<SmallGraph> all_valid_graphs(int n) {
  std::vector<SmallGraph> out;
  const int slots = n * n;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
    SmallGraph g;
    g.n = n;
    for (int k = 0; k < slots; ++k) {
      if (mask >> k & 1) g.edges.insert({k / n, k % n});
    }
    if (g.surjective()) out.push_back(std::move(g));
  }
  return out;
}

// Simple cycles by plain DFS: each cycle is found from its least vertex,
// visiting only larger vertices.
inline std::set<Cycle> brute_force_cycles(const SmallGraph& g) {
  const Adj adj = g.adjacency();
  std::set<Cycle> found;
  std::vector<int> path;
  std::vector<char> on(g.n, 0);
  std::function<void(int, int)> dfs = [&](int s, int u) {
    for (int v : adj[u]) {
      if (v == s) found.insert(path);
      if (v > s && !on[v]) {
        on[v] = 1;
        path.push_back(v);
        dfs(s, v);
        path.pop_back();
        on[v] = 0;
      }
    }
  };
  for (int s = 0; s < g.n; ++s) {
    path = {s};
    on[s] = 1;
    dfs(s, s);
    on[s] = 0;
  }
  return found;
}

// Number of walks of length l from v.
inline std::uint64_t walk_count(const Adj& adj, int v, int l) {
  std::vector<std::uint64_t> ways(adj.size(), 0);
  ways[v] = 1;
  for (int step = 0; step < l; ++step) {
    std::vector<std::uint64_t> next(adj.size(), 0);
    for (std::size_t u = 0; u < adj.size(); ++u) {
      for (int w : adj[u]) next[w] += ways[u];
    }
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto x : ways) total += x;
  return total;
}

// Cover conditions checked pair by pair over the raw edge lists.
struct CoverFlags {
  bool homomorphism = true;
  bool edge_surjective = true;
  bool plus_directional = true;
};

inline CoverFlags cover_flags(const SmallGraph& src, const SmallGraph& tgt, const std::vector<int>& f) {
  CoverFlags r;
  std::set<std::pair<int, int>> image;
  for (auto [u, v] : src.edges) {
    if (!tgt.edges.count({f[u], f[v]})) r.homomorphism = false;
    image.insert({f[u], f[v]});
  }
  r.edge_surjective = std::includes(image.begin(), image.end(), tgt.edges.begin(), tgt.edges.end());
  for (auto [u, v] : src.edges) {
    for (auto [u2, v2] : src.edges) {
      if (u == u2 && f[v] != f[v2]) r.plus_directional = false;
    }
  }
  return r;
}

// Two-measure example tower with L1, D1 and schedule p. Pushing a level-(n+1) circuit down
// one level: a -> (2p+1) a + 3 b, b -> 3 a + (2p+1) b, c and c' -> (p+2)(a+b),
// after rewriting c + c' = a + b. All four circuits of a level share one
// period, so normalized images follow the same weights over 2p+4.
struct E63Point {
  mpq_class alpha;  // weight on the level-1 normalized a; 1 - alpha on b
};

// Level-1 images of the normalized a, c, c', b of level m >= 2, in that order.
// Each image is alpha * a~ + (1 - alpha) * b~ at level 1.
inline std::vector<E63Point> e63_images_at_level1(const std::vector<std::uint64_t>& p, std::size_t m) {
  mpq_class aa = 1, ba = 0;  // alpha of the images of a_m and b_m at the current level
  for (std::size_t level = m; level > 1; --level) {
    const mpq_class pp = p.at(level - 2);
    const mpq_class den = 2 * pp + 4;
    const mpq_class stay = (2 * pp + 1) / den, swap = mpq_class(3) / den;
    // a_level expressed at level-1 is stay*a + swap*b; compose with what we have
    // by applying the one-level matrix to the current coordinates.
    const mpq_class na = aa * stay + (1 - aa) * swap;
    const mpq_class nb = ba * stay + (1 - ba) * swap;
    aa = na;
    ba = nb;
  }
  const mpq_class mid = (aa + ba) / 2;
  return {{aa}, {mid}, {mid}, {ba}};
}

// L1 distance between the level-1 normalized a and b: they share only d.
inline mpq_class e63_ab_distance(std::uint64_t L1, std::uint64_t D1) {
  mpq_class q(4 * static_cast<long>(L1), static_cast<long>(2 * L1 + D1));
  q.canonicalize();
  return q;
}

// Segment length L_n and return-path length D_n for n = 1..levels.
inline std::vector<std::pair<mpz_class, mpz_class>> e63_lengths(const std::vector<std::uint64_t>& p,
                                                                std::size_t levels, std::uint64_t L1,
                                                                std::uint64_t D1) {
  std::vector<std::pair<mpz_class, mpz_class>> out{{L1, D1}};
  for (std::size_t n = 1; n < levels; ++n) {
    const auto& [L, D] = out.back();
    const mpz_class period = 2 * L + D;
    out.push_back({(p.at(n - 1) + 1) * period, 2 * period});
  }
  return out;
}

// L1 distance between the normalized a_n and b_n.
inline mpq_class e63_ab_distance_at(const std::vector<std::uint64_t>& p, std::size_t n, std::uint64_t L1 = 2,
                                    std::uint64_t D1 = 1) {
  const auto [L, D] = e63_lengths(p, n, L1, D1).back();
  mpq_class q(mpz_class(4 * L), mpz_class(2 * L + D));
  q.canonicalize();
  return q;
}

inline mpq_class e63_diameter_at_level1(const std::vector<std::uint64_t>& p, std::size_t m,
                                        std::uint64_t L1 = 2, std::uint64_t D1 = 1) {
  const auto pts = e63_images_at_level1(p, m);
  mpq_class gap = pts.front().alpha - pts.back().alpha;
  if (gap < 0) gap = -gap;
  return gap * e63_ab_distance(L1, D1);
}

}  // namespace oracle
