#include "ergodograph/builders.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ergodograph/errors.hpp"

namespace ergodograph {

namespace {

int digits(std::uint64_t largest) { return static_cast<int>(std::to_string(largest).size()); }

std::string padded(std::uint64_t value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::string level_name(std::size_t n) { return "G" + std::to_string(n); }

GraphPtr singleton_ptr() { return std::make_shared<const Graph>(Graph::singleton()); }

std::vector<VertexId> all_to_zero(std::size_t count) { return std::vector<VertexId>(count, 0); }

}  // namespace

CoverTower build_odometer(std::size_t levels, std::size_t base) {
  if (levels < 1) throw std::invalid_argument("odometer needs at least one level");
  if (base < 2) throw std::invalid_argument("odometer base must be >= 2");
  TowerData data;
  data.levels.push_back(singleton_ptr());
  std::uint64_t previous = 1;
  for (std::size_t n = 1; n <= levels; ++n) {
    if (previous > std::numeric_limits<VertexId>::max() / base) {
      throw std::invalid_argument("odometer level exceeds 32-bit vertex ids");
    }
    const std::uint64_t length = previous * base;
    VertexNames::Builder builder;
    builder.add_range("", 0, length, digits(length - 1));
    VertexNames names = std::move(builder).finish();
    std::vector<Edge> edges;
    edges.reserve(length);
    std::vector<VertexId> map(length);
    for (std::uint64_t k = 0; k < length; ++k) {
      edges.push_back({static_cast<VertexId>(k), static_cast<VertexId>((k + 1) % length)});
      map[k] = static_cast<VertexId>(k % previous);
    }
    data.levels.push_back(std::make_shared<const Graph>(level_name(n), std::move(names), std::move(edges)));
    data.maps.push_back(std::move(map));
    previous = length;
  }
  return CoverTower(std::move(data));
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> example_63_lengths(
    std::size_t levels, const std::vector<std::uint64_t>& p, std::uint64_t L1, std::uint64_t D1) {
  if (levels < 1) throw InvalidSchedule("need at least one level");
  if (L1 < 2) throw InvalidSchedule("L1 must be >= 2 so parallel segments have interior vertices");
  if (D1 < 1) throw InvalidSchedule("D1 must be >= 1");
  if (p.size() != levels - 1) {
    throw InvalidSchedule("schedule needs " + std::to_string(levels - 1) + " entries, got " +
                          std::to_string(p.size()));
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out{{L1, D1}};
  constexpr std::uint64_t limit = std::numeric_limits<VertexId>::max();
  for (std::size_t n = 1; n < levels; ++n) {
    if (p[n - 1] < 1) throw InvalidSchedule("schedule entries must be >= 1");
    const auto [L, D] = out.back();
    const std::uint64_t loop = 2 * L + D;
    if (loop > limit || p[n - 1] + 1 > limit / loop) {
      throw InvalidSchedule("level " + std::to_string(n + 1) + " exceeds 32-bit vertex ids");
    }
    const std::uint64_t next_l = (p[n - 1] + 1) * loop;
    const std::uint64_t next_d = 2 * loop;
    if (4 * next_l + next_d > limit) {
      throw InvalidSchedule("level " + std::to_string(n + 1) + " exceeds 32-bit vertex ids");
    }
    out.emplace_back(next_l, next_d);
  }
  return out;
}

namespace {

// Vertex layout of one level of the two-hub construction.
struct HubLevel {
  std::uint64_t L, D;
  VertexId interior(int segment, std::uint64_t k) const {  // segment 0..3 = a1,a2,b1,b2; k >= 1
    return static_cast<VertexId>(segment * (L - 1) + k - 1);
  }
  VertexId d(std::uint64_t k) const { return static_cast<VertexId>(4 * (L - 1) + k - 1); }
  VertexId hub(int i) const { return static_cast<VertexId>(4 * (L - 1) + (D - 1) + i); }
  std::uint64_t vertex_count() const { return 4 * (L - 1) + (D - 1) + 3; }

  VertexNames names() const {
    const int w = digits(L - 1);
    VertexNames::Builder b;
    b.add_range("a1.", 1, L - 1, w).add_range("a2.", 1, L - 1, w);
    b.add_range("b1.", 1, L - 1, w).add_range("b2.", 1, L - 1, w);
    b.add_range("d.", 1, D - 1, digits(D > 1 ? D - 1 : 1));
    b.add("v1").add("v2").add("v3");
    return std::move(b).finish();
  }

  // Closed walk from v1 around the circuit using segments s1 then s2.
  std::vector<VertexId> loop(int s1, int s2) const {
    std::vector<VertexId> w;
    w.reserve(2 * L + D);
    w.push_back(hub(0));
    for (std::uint64_t k = 1; k < L; ++k) w.push_back(interior(s1, k));
    w.push_back(hub(1));
    for (std::uint64_t k = 1; k < L; ++k) w.push_back(interior(s2, k));
    w.push_back(hub(2));
    for (std::uint64_t k = 1; k < D; ++k) w.push_back(d(k));
    return w;
  }
};

}  // namespace

CoverTower build_example_63(std::size_t levels, const std::vector<std::uint64_t>& p,
                            std::uint64_t L1, std::uint64_t D1) {
  const auto lengths = example_63_lengths(levels, p, L1, D1);
  TowerData data;
  data.levels.push_back(singleton_ptr());
  std::optional<HubLevel> below;
  for (std::size_t n = 1; n <= levels; ++n) {
    const HubLevel here{lengths[n - 1].first, lengths[n - 1].second};
    std::vector<Edge> edges;
    edges.reserve(4 * here.L + here.D);
    std::vector<VertexId> map(here.vertex_count(), 0);

    // Route a path of `count` edges from hub `from` to hub `to`; interior
    // vertex k goes to route[k] when a route is given.
    auto path = [&](VertexId from, VertexId to, std::uint64_t count, auto vertex,
                    const std::vector<VertexId>* route) {
      VertexId prev = from;
      for (std::uint64_t k = 1; k < count; ++k) {
        const VertexId v = vertex(k);
        edges.push_back({prev, v});
        if (route) map[v] = (*route)[k];
        prev = v;
      }
      edges.push_back({prev, to});
    };

    std::vector<VertexId> route_a, route_b, route_d;
    if (below) {
      const auto a = below->loop(0, 1), b = below->loop(2, 3);
      const auto c = below->loop(0, 3), c2 = below->loop(2, 1);
      const std::uint64_t pn = p[n - 2];
      for (std::uint64_t r = 0; r < pn; ++r) route_a.insert(route_a.end(), a.begin(), a.end());
      route_a.insert(route_a.end(), b.begin(), b.end());
      route_b.insert(route_b.end(), a.begin(), a.end());
      for (std::uint64_t r = 0; r < pn; ++r) route_b.insert(route_b.end(), b.begin(), b.end());
      route_d.insert(route_d.end(), c.begin(), c.end());
      route_d.insert(route_d.end(), c2.begin(), c2.end());
      for (int i = 0; i < 3; ++i) map[here.hub(i)] = below->hub(0);
    }
    const std::vector<VertexId>* ra = below ? &route_a : nullptr;
    const std::vector<VertexId>* rb = below ? &route_b : nullptr;
    const std::vector<VertexId>* rd = below ? &route_d : nullptr;
    path(here.hub(0), here.hub(1), here.L, [&](std::uint64_t k) { return here.interior(0, k); }, ra);
    path(here.hub(1), here.hub(2), here.L, [&](std::uint64_t k) { return here.interior(1, k); }, ra);
    path(here.hub(0), here.hub(1), here.L, [&](std::uint64_t k) { return here.interior(2, k); }, rb);
    path(here.hub(1), here.hub(2), here.L, [&](std::uint64_t k) { return here.interior(3, k); }, rb);
    path(here.hub(2), here.hub(0), here.D, [&](std::uint64_t k) { return here.d(k); }, rd);
    route_a.clear();
    route_a.shrink_to_fit();
    route_b.clear();
    route_b.shrink_to_fit();

    data.levels.push_back(
        std::make_shared<const Graph>(level_name(n), here.names(), std::move(edges)));
    data.maps.push_back(std::move(map));
    below = here;
  }
  return CoverTower(std::move(data));
}

namespace {

struct Link {
  std::size_t pos;    // position in this circuit
  std::size_t other;  // neighbouring circuit
  std::size_t other_pos;
};

// One level of a tree-type tower under construction.
struct TreeLevel {
  std::vector<std::vector<VertexId>> cycles;  // circuit -> position -> vertex id
  std::vector<std::vector<Link>> links;       // sorted by pos
};

std::vector<std::size_t> parents_for(const TreeTypeSpec& spec, std::size_t level_index,
                                     std::size_t count) {
  std::vector<std::size_t> parent(count, 0);
  if (level_index < spec.parents.size() && !spec.parents[level_index].empty()) {
    const auto& given = spec.parents[level_index];
    if (given.size() != count) {
      throw ValidationError("parents for level " + std::to_string(level_index + 1) + " need " +
                            std::to_string(count) + " entries");
    }
    for (std::size_t i = 1; i < count; ++i) {
      if (given[i] >= i) {
        throw ValidationError("tree parent of circuit " + std::to_string(i) +
                              " must have a smaller index");
      }
      parent[i] = given[i];
    }
  } else {
    for (std::size_t i = 1; i < count; ++i) parent[i] = i - 1;
  }
  return parent;
}

// Assigns vertex ids for circuits of the given periods with the given
// merges, names them and returns the level graph plus the id table.
struct Merge {
  std::size_t parent, parent_pos, child, child_pos;
};

std::pair<GraphPtr, TreeLevel> assemble(std::size_t n, const std::vector<std::uint64_t>& periods,
                                        const std::vector<Merge>& merges) {
  const std::size_t d = periods.size();
  std::vector<std::vector<char>> merged(d);
  for (std::size_t i = 0; i < d; ++i) merged[i].assign(periods[i], 0);
  for (const auto& m : merges) {
    merged[m.parent][m.parent_pos] = 1;
    merged[m.child][m.child_pos] = 1;
  }
  const int index_width = digits(d - 1);
  VertexNames::Builder names;
  TreeLevel level;
  level.cycles.resize(d);
  level.links.resize(d);
  std::uint64_t next_id = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const std::string prefix = "c" + padded(i, index_width) + ".";
    const int w = digits(periods[i] - 1);
    level.cycles[i].assign(periods[i], 0);
    std::uint64_t k = 0;
    bool owns_one = false;
    while (k < periods[i]) {
      if (merged[i][k]) {
        ++k;
        continue;
      }
      const std::uint64_t start = k;
      while (k < periods[i] && !merged[i][k]) {
        level.cycles[i][k] = static_cast<VertexId>(next_id++);
        ++k;
      }
      names.add_range(prefix, start, k - start, w);
      owns_one = true;
    }
    if (!owns_one) {
      throw UnroutableRequest("circuit has no position left that is not a connecting vertex",
                              prefix + "*");
    }
  }
  std::vector<Merge> ordered = merges;
  std::sort(ordered.begin(), ordered.end(), [](const Merge& a, const Merge& b) {
    return std::tie(a.parent, a.parent_pos) < std::tie(b.parent, b.parent_pos);
  });
  for (const auto& m : ordered) {
    names.add("x" + padded(m.parent, index_width) + "." +
              padded(m.parent_pos, digits(periods[m.parent] - 1)));
    const auto id = static_cast<VertexId>(next_id++);
    level.cycles[m.parent][m.parent_pos] = id;
    level.cycles[m.child][m.child_pos] = id;
    level.links[m.parent].push_back({m.parent_pos, m.child, m.child_pos});
    level.links[m.child].push_back({m.child_pos, m.parent, m.parent_pos});
  }
  for (auto& l : level.links) {
    std::sort(l.begin(), l.end(), [](const Link& a, const Link& b) { return a.pos < b.pos; });
  }
  if (next_id > std::numeric_limits<VertexId>::max()) {
    throw ValidationError("tree-type level exceeds 32-bit vertex ids");
  }
  std::vector<Edge> edges;
  for (const auto& cyc : level.cycles) {
    for (std::size_t k = 0; k < cyc.size(); ++k) edges.push_back({cyc[k], cyc[(k + 1) % cyc.size()]});
  }
  auto g = std::make_shared<const Graph>(level_name(n), std::move(names).finish(), std::move(edges));
  return {std::move(g), std::move(level)};
}

// Appends the vertices visited after leaving position `start` of circuit j,
// ending back at `start`.
void tour(const TreeLevel& level, const std::vector<std::int64_t>& laps, std::size_t j,
          std::size_t start, std::size_t from, std::vector<VertexId>& out) {
  const auto& cyc = level.cycles[j];
  const std::size_t p = cyc.size();
  for (std::int64_t lap = 0; lap < laps[j]; ++lap) {
    for (std::size_t k = 1; k <= p; ++k) {
      const std::size_t pos = (start + k) % p;
      out.push_back(cyc[pos]);
      if (lap != 0) continue;
      for (const Link& l : level.links[j]) {
        if (l.pos == pos && l.other != from) tour(level, laps, l.other, l.other_pos, j, out);
      }
    }
  }
}

}  // namespace

CoverTower build_tree_type(const TreeTypeSpec& spec) {
  if (spec.periods.empty()) throw ValidationError("tree-type spec needs at least one circuit");
  for (auto p : spec.periods) {
    if (p < 1) throw ValidationError("circuit periods must be >= 1");
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  TowerData data;
  data.levels.push_back(singleton_ptr());

  // Level 1: join each child at its first free position to its parent's.
  std::size_t d = spec.periods.size();
  auto parent = parents_for(spec, 0, d);
  std::vector<std::uint64_t> next_free(d, 0);
  std::vector<Merge> merges;
  for (std::size_t i = 1; i < d; ++i) {
    const std::size_t pp = parent[i];
    merges.push_back({pp, next_free[pp]++, i, next_free[i]++});
    if (next_free[pp] > spec.periods[pp] || next_free[i] > spec.periods[i]) {
      throw UnroutableRequest("circuit too short for its tree connections",
                              "c" + padded(next_free[pp] > spec.periods[pp] ? pp : i, digits(d - 1)));
    }
  }
  auto [graph, level] = assemble(1, spec.periods, merges);
  data.maps.push_back(all_to_zero(graph->vertex_count()));
  data.levels.push_back(graph);

  for (std::size_t k = 0; k < spec.windings.size(); ++k) {
    const IntMatrix& w = spec.windings[k];
    const std::size_t rows = w.size();
    if (rows == 0) throw ValidationError("winding request with no rows");
    for (const auto& row : w) {
      if (row.size() != d) {
        throw ValidationError("winding request " + std::to_string(k) + " needs " +
                              std::to_string(d) + " columns");
      }
      for (auto x : row) {
        if (x < 1) throw ValidationError("requested multiplicities must be >= 1");
      }
    }
    const std::size_t n = k + 2;

    std::vector<std::vector<VertexId>> walks(rows);
    std::vector<std::uint64_t> periods(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      auto& walk = walks[i];
      walk.push_back(level.cycles[0][0]);
      tour(level, w[i], 0, 0, kNone, walk);
      walk.pop_back();
      periods[i] = walk.size();
    }

    parent = parents_for(spec, n - 1, rows);
    std::vector<std::vector<char>> used(rows);
    for (std::size_t i = 0; i < rows; ++i) used[i].assign(periods[i], 0);
    merges.clear();
    const Graph& below = *data.levels.back();
    for (std::size_t i = 1; i < rows; ++i) {
      const std::size_t pp = parent[i];
      auto edge_at = [&](std::size_t c, std::size_t t) {
        const auto& wk = walks[c];
        return below.edge_id(wk[t], wk[(t + 1) % wk.size()]);
      };
      std::unordered_map<EdgeId, std::vector<std::size_t>> child_positions;
      for (std::size_t t = 0; t < periods[i]; ++t) {
        if (!used[i][t]) child_positions[edge_at(i, t)].push_back(t);
      }
      bool done = false;
      for (std::size_t t = 0; t < periods[pp] && !done; ++t) {
        if (used[pp][t]) continue;
        auto it = child_positions.find(edge_at(pp, t));
        if (it == child_positions.end()) continue;
        const std::size_t s = it->second.front();
        used[pp][t] = used[i][s] = 1;
        merges.push_back({pp, t, i, s});
        done = true;
      }
      if (!done) {
        throw UnroutableRequest("no free pair of positions leaves along a common edge",
                                "c" + padded(pp, digits(rows - 1)) + " at level " + std::to_string(n));
      }
    }
    auto [g, next_level] = assemble(n, periods, merges);
    std::vector<VertexId> map(g->vertex_count());
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t t = 0; t < periods[i]; ++t) map[next_level.cycles[i][t]] = walks[i][t];
    }
    data.levels.push_back(g);
    data.maps.push_back(std::move(map));
    level = std::move(next_level);
    d = rows;
  }
  return CoverTower(std::move(data));
}

IntMatrix winding_for_target(const std::vector<std::vector<Rational>>& target) {
  if (target.empty()) throw ValidationError("empty target matrix");
  mpz_class k = 1;
  for (const auto& row : target) {
    if (row.size() != target.front().size()) throw ValidationError("ragged target matrix");
    Rational sum;
    for (const auto& x : row) {
      if (x.sign() <= 0) throw ValidationError("target entries must be positive");
      sum += x;
      mpz_lcm(k.get_mpz_t(), k.get_mpz_t(), x.raw().get_den_mpz_t());
    }
    if (!(sum == Rational(1))) throw ValidationError("target rows must sum to 1");
  }
  IntMatrix out;
  const Rational scale{mpq_class(k)};
  for (const auto& row : target) {
    std::vector<std::int64_t> r;
    for (const auto& x : row) r.push_back((x * scale).to_int64());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ergodograph
