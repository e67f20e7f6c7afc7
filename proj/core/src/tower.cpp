#include "ergodograph/tower.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ergodograph/errors.hpp"

namespace ergodograph {

namespace {

bool is_singleton(const Graph& g) {
  return g.vertex_count() == 1 && g.edge_count() == 1 && g.find_edge(0, 0).has_value();
}

std::string level_name(std::size_t k) { return "level " + std::to_string(k); }

bool map_in_range(const std::vector<VertexId>& map, std::size_t source_size,
                  std::size_t target_size) {
  return map.size() == source_size &&
         std::all_of(map.begin(), map.end(), [&](VertexId v) { return v < target_size; });
}

}  // namespace

TowerReport validate_tower(const TowerData& data) {
  TowerReport report;
  if (data.levels.empty() || !is_singleton(*data.levels[0])) {
    report.singleton_head = false;
    report.problems.push_back("level 0 is not the singleton graph");
  }
  for (std::size_t k = 0; k < data.levels.size(); ++k) {
    report.graphs.push_back(validate_graph(*data.levels[k]));
    const auto& r = report.graphs.back();
    if (!r.valid()) {
      std::string what = level_name(k) + ": ";
      if (!r.missing_in.empty()) what += "vertex " + r.missing_in.front() + " has no in-edge";
      else what += "vertex " + r.missing_out.front() + " has no out-edge";
      report.problems.push_back(what);
    }
  }
  if (data.levels.size() != data.maps.size() + 1) {
    report.chained = false;
    report.problems.push_back("expected one vertex map per consecutive pair of levels");
  }
  for (std::size_t k = 0; k < data.maps.size(); ++k) {
    if (k + 1 >= data.levels.size() ||
        !map_in_range(data.maps[k], data.levels[k + 1]->vertex_count(),
                      data.levels[k]->vertex_count())) {
      report.chained = false;
      report.covers.emplace_back(std::nullopt);
      report.problems.push_back("map " + std::to_string(k + 1) + " is not a total vertex map");
      continue;
    }
    GraphHom h(data.levels[k + 1], data.levels[k], data.maps[k]);
    report.covers.emplace_back(validate_cover(h));
    if (!report.covers.back()->valid()) {
      report.problems.push_back("map " + std::to_string(k + 1) + ": " +
                                report.covers.back()->summary(h.source(), h.target()));
    }
  }
  return report;
}

CoverTower::CoverTower(TowerData data) {
  if (data.levels.empty() || !is_singleton(*data.levels[0])) {
    throw ValidationError("level 0 is not the singleton graph");
  }
  if (data.levels.size() != data.maps.size() + 1) {
    throw ValidationError("expected one vertex map per consecutive pair of levels");
  }
  for (std::size_t k = 0; k < data.levels.size(); ++k) {
    const auto r = validate_graph(*data.levels[k]);
    if (!r.valid()) {
      throw ValidationError(level_name(k) + " is not a surjective relation");
    }
  }
  levels_ = std::move(data.levels);
  covers_.reserve(data.maps.size());
  for (std::size_t k = 0; k < data.maps.size(); ++k) {
    covers_.emplace_back(GraphHom(levels_[k + 1], levels_[k], std::move(data.maps[k])));
  }
}

std::vector<VertexId> CoverTower::composite_map(std::size_t m, std::size_t n) const {
  if (m < n || m > top()) throw std::out_of_range("composite_map: need n <= m <= top");
  if (m == n) {
    std::vector<VertexId> id(level(m).vertex_count());
    std::iota(id.begin(), id.end(), VertexId{0});
    return id;
  }
  std::vector<VertexId> map = covers_[m - 1].vmap();
  for (std::size_t k = m - 1; k-- > n;) {
    const auto& step = covers_[k].vmap();
    for (VertexId& v : map) v = step[v];
  }
  return map;
}

Cover CoverTower::composite(std::size_t m, std::size_t n) const {
  if (m <= n || m > top()) throw std::out_of_range("composite: need n < m <= top");
  return compose_covers(std::span<const Cover>(covers_.data() + n, m - n));
}

const std::vector<Circuit>& CoverTower::circuits(std::size_t n, std::size_t cap) const {
  std::shared_ptr<const std::vector<Circuit>> found;
  {
    std::lock_guard lock(*cache_mutex_);
    auto it = circuit_cache_.find(n);
    if (it != circuit_cache_.end()) found = it->second;
  }
  if (!found) {
    auto fresh = std::make_shared<const std::vector<Circuit>>(enumerate_circuits(level(n), cap));
    std::lock_guard lock(*cache_mutex_);
    found = circuit_cache_.try_emplace(n, std::move(fresh)).first->second;
  }
  if (found->size() > cap) throw CapExceeded("enumerate_circuits", cap);
  return *found;
}

TowerData CoverTower::data() const {
  TowerData out;
  out.levels = levels_;
  for (const auto& c : covers_) out.maps.push_back(c.vmap());
  return out;
}

std::vector<Circulation> simplex_image(const CoverTower& t, std::size_t m, std::size_t n,
                                       std::size_t cap) {
  if (m < n || m > t.top()) throw std::out_of_range("simplex_image: need n <= m <= top");
  const auto& circuits = t.circuits(m, cap);
  const auto map = t.composite_map(m, n);
  std::vector<Circulation> out;
  out.reserve(circuits.size());
  for (const auto& c : circuits) {
    const auto counts = circuit_image_counts(t.level(n), map, c);
    out.push_back(from_counts(t.level_ptr(n), counts, Rational(1, static_cast<long>(c.period()))));
  }
  return out;
}

Rational diameter(const std::vector<Circulation>& points) {
  Rational best;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      Rational d = l1_distance(points[i], points[j]);
      if (d > best) best = std::move(d);
    }
  }
  return best;
}

Rational simplex_diameter(const CoverTower& t, std::size_t m, std::size_t n, std::size_t cap) {
  return diameter(simplex_image(t, m, n, cap));
}

Circulation xi(const CoverTower& t, std::size_t m, std::size_t n, const Circulation& x) {
  if (x.size() != t.level(m).edge_count()) throw std::invalid_argument("xi: x is not on level m");
  if (m == n) return x;
  const auto map = t.composite_map(m, n);
  const Graph& gm = t.level(m);
  const Graph& gn = t.level(n);
  Circulation y(t.level_ptr(n));
  for (VertexId u = 0; u < gm.vertex_count(); ++u) {
    EdgeId e = gm.first_out_edge(u);
    for (VertexId v : gm.successors(u)) {
      if (!x[e].is_zero()) y.add(gn.edge_id(map[u], map[v]), x[e]);
      ++e;
    }
  }
  return y;
}

namespace {

// Image walks of every length-l walk of G_m, grouped by image.
std::vector<std::vector<VertexId>> projected_images(const Graph& gm, const Graph& gn,
                                                    const std::vector<VertexId>& map,
                                                    std::size_t length, std::size_t cap) {
  std::map<std::vector<VertexId>, std::vector<VertexId>> frontier;
  for (VertexId v = 0; v < gm.vertex_count(); ++v) frontier[{map[v]}].push_back(v);
  (void)gn;
  for (std::size_t step = 0; step < length; ++step) {
    std::map<std::vector<VertexId>, std::vector<VertexId>> next;
    for (const auto& [prefix, ends] : frontier) {
      for (VertexId u : ends) {
        for (VertexId w : gm.successors(u)) {
          std::vector<VertexId> key = prefix;
          key.push_back(map[w]);
          auto [it, inserted] = next.try_emplace(std::move(key));
          if (inserted && next.size() > cap) throw CapExceeded("minimality walk images", cap);
          it->second.push_back(w);
        }
      }
    }
    for (auto& [prefix, ends] : next) {
      std::sort(ends.begin(), ends.end());
      ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<VertexId>> out;
  for (auto& [prefix, ends] : frontier) out.push_back(prefix);
  return out;
}

// Is the edge set `image` of G_n lifted to a union of weakly connected
// components at every level k in [n, top]?
bool invariant_at_every_level(const CoverTower& t, std::size_t n, const std::vector<char>& image) {
  for (std::size_t k = n; k <= t.top(); ++k) {
    const Graph& gk = t.level(k);
    const Graph& gn = t.level(n);
    const auto map = t.composite_map(k, n);
    std::vector<char> touched(gk.vertex_count(), 0);
    std::vector<char> inside(gk.edge_count(), 0);
    for (VertexId u = 0; u < gk.vertex_count(); ++u) {
      EdgeId e = gk.first_out_edge(u);
      for (VertexId v : gk.successors(u)) {
        if (image[gn.edge_id(map[u], map[v])]) {
          inside[e] = 1;
          touched[u] = touched[v] = 1;
        }
        ++e;
      }
    }
    for (VertexId u = 0; u < gk.vertex_count(); ++u) {
      EdgeId e = gk.first_out_edge(u);
      for (VertexId v : gk.successors(u)) {
        if (!inside[e] && (touched[u] || touched[v])) return false;
        ++e;
      }
    }
  }
  return true;
}

}  // namespace

MinimalityResult minimality_scan(const CoverTower& t, std::size_t n, std::size_t m_max,
                                 MinimalityMode mode, std::size_t walk_length, std::size_t cap) {
  if (!(n < m_max && m_max <= t.top())) {
    throw std::out_of_range("minimality_scan: need n < m_max <= top");
  }
  if (mode == MinimalityMode::walks && walk_length == 0) {
    throw std::invalid_argument("minimality_scan: walk length must be >= 1");
  }
  MinimalityResult result;
  result.n = n;
  result.m_max = m_max;
  result.mode = mode;
  result.walk_length = walk_length;
  const Graph& gn = t.level(n);
  std::optional<std::vector<char>> first_witness;

  for (std::size_t m = n + 1; m <= m_max; ++m) {
    const Graph& gm = t.level(m);
    const auto map = t.composite_map(m, n);
    MinimalityRow row;
    row.m = m;
    auto record = [&](std::vector<char> edges_hit) {
      if (!first_witness) first_witness = std::move(edges_hit);
    };
    if (mode == MinimalityMode::walks) {
      for (const auto& image : projected_images(gm, gn, map, walk_length, cap)) {
        std::vector<char> hit(gn.edge_count(), 0);
        std::size_t covered = 0;
        for (std::size_t i = 0; i + 1 < image.size(); ++i) {
          const EdgeId e = gn.edge_id(image[i], image[i + 1]);
          if (!hit[e]) {
            hit[e] = 1;
            ++covered;
          }
        }
        if (covered < gn.edge_count()) {
          row.pass = false;
          row.missing = gn.edge_count() - covered;
          row.witness = format_walk(gn, image);
          record(std::move(hit));
          break;
        }
      }
    } else {
      const auto& circuits = t.circuits(m, cap);
      const std::size_t want = mode == MinimalityMode::edges ? gn.edge_count() : gn.vertex_count();
      for (std::size_t i = 0; i < circuits.size(); ++i) {
        const Circuit& c = circuits[i];
        std::vector<char> hit_edges(gn.edge_count(), 0);
        std::vector<char> hit_vertices(gn.vertex_count(), 0);
        std::size_t covered = 0;
        for (std::size_t k = 0; k < c.period(); ++k) {
          if (mode == MinimalityMode::edges) {
            const EdgeId e = gn.edge_id(map[c[k]], map[c.next(k)]);
            if (!hit_edges[e]) ++covered;
            hit_edges[e] = 1;
          } else {
            if (!hit_vertices[map[c[k]]]) ++covered;
            hit_vertices[map[c[k]]] = 1;
            hit_edges[gn.edge_id(map[c[k]], map[c.next(k)])] = 1;
          }
        }
        if (covered < want) {
          row.pass = false;
          row.missing = want - covered;
          row.witness_circuit = i;
          row.witness = format_walk(gm, c.vertices());
          record(std::move(hit_edges));
          break;
        }
      }
    }
    result.rows.push_back(std::move(row));
  }

  for (std::size_t i = result.rows.size(); i-- > 0;) {
    if (!result.rows[i].pass) break;
    result.passing_from = result.rows[i].m;
  }
  if (first_witness) result.structural_witness = invariant_at_every_level(t, n, *first_witness);
  return result;
}

std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Circulation>& points,
                                                     const Rational& tol) {
  const std::size_t k = points.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (l1_distance(points[i], points[j]) <= tol) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < k; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

Rational l1_distance_to_segment(const Circulation& p, const Circulation& a, const Circulation& b) {
  if (p.size() != a.size() || p.size() != b.size()) {
    throw std::invalid_argument("l1_distance_to_segment: points on different graphs");
  }
  // f(t) = sum |p - a - t (b - a)| is convex; its minimiser over the reals is
  // a weighted median of the per-edge breakpoints, then clamped to [0, 1].
  std::vector<std::pair<Rational, Rational>> knots;  // (breakpoint, weight)
  Rational total;
  for (std::size_t e = 0; e < p.size(); ++e) {
    const Rational d = b[e] - a[e];
    if (d.is_zero()) continue;
    knots.emplace_back((p[e] - a[e]) / d, abs(d));
    total += abs(d);
  }
  Rational t;
  if (!knots.empty()) {
    std::sort(knots.begin(), knots.end());
    Rational acc;
    for (const auto& [point, weight] : knots) {
      acc += weight;
      if (acc * Rational(2) >= total) {
        t = point;
        break;
      }
    }
    if (t < Rational(0)) t = 0;
    if (t > Rational(1)) t = 1;
  }
  Rational sum;
  for (std::size_t e = 0; e < p.size(); ++e) sum += abs(p[e] - a[e] - t * (b[e] - a[e]));
  return sum;
}

namespace {

std::size_t circuit_index(const std::vector<Circuit>& circuits, const Circuit& c) {
  auto it = std::lower_bound(circuits.begin(), circuits.end(), c);
  if (it == circuits.end() || !(*it == c)) throw std::logic_error("circuit missing from C(G)");
  return static_cast<std::size_t>(it - circuits.begin());
}

}  // namespace

CandidateReport ergodic_candidates(const CoverTower& t, std::size_t n, std::size_t m_lo,
                                   std::size_t m_hi, const Rational& tol, std::size_t cap) {
  if (!(n < m_lo && m_lo <= m_hi && m_hi <= t.top())) {
    throw std::out_of_range("ergodic_candidates: need n < m_lo <= m_hi <= top");
  }
  CandidateReport report;
  report.n = n;
  report.m_lo = m_lo;
  report.m_hi = m_hi;
  report.tol = tol;
  report.points = simplex_image(t, m_hi, n, cap);
  const auto groups = single_linkage(report.points, tol);
  const auto& top_circuits = t.circuits(m_hi, cap);

  for (const auto& members : groups) {
    CandidateCluster cluster{members, report.points[members.front()], {}};
    cluster.trajectory.resize(m_hi - m_lo + 1);
    cluster.trajectory.back() = members;
    report.clusters.push_back(std::move(cluster));
  }
  for (std::size_t m = m_lo; m < m_hi; ++m) {
    const auto map = t.composite_map(m_hi, m);
    const auto& level_circuits = t.circuits(m, cap);
    for (auto& cluster : report.clusters) {
      auto& slot = cluster.trajectory[m - m_lo];
      for (std::size_t i : cluster.members) {
        auto counts = circuit_image_counts(t.level(m), map, top_circuits[i]);
        for (const auto& term : decompose_counts(t.level(m), std::move(counts), cap)) {
          slot.push_back(circuit_index(level_circuits, term.circuit));
        }
      }
      std::sort(slot.begin(), slot.end());
      slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
    }
  }

  std::vector<std::size_t> cluster_of(report.points.size());
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    for (std::size_t i : report.clusters[k].members) cluster_of[i] = k;
  }
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    bool found = false;
    for (std::size_t a = 0; a < report.clusters.size() && !found; ++a) {
      for (std::size_t b = a + 1; b < report.clusters.size() && !found; ++b) {
        if (a == cluster_of[i] || b == cluster_of[i]) continue;
        found = l1_distance_to_segment(report.points[i], report.clusters[a].representative,
                                       report.clusters[b].representative) <= tol;
      }
    }
    if (found) report.between.push_back(i);
  }
  return report;
}

namespace {

Circulation expression_image(const CoverTower& t, const std::vector<std::pair<std::size_t, Rational>>& expr,
                             std::size_t level, std::size_t target, std::size_t cap) {
  const auto& circuits = t.circuits(level, cap);
  const auto map = t.composite_map(level, target);
  Circulation out(t.level_ptr(target));
  for (const auto& [index, s] : expr) {
    if (index >= circuits.size()) {
      throw MissingExpression("expression at level " + std::to_string(level) +
                              " names circuit " + std::to_string(index) + " which does not exist");
    }
    const auto counts = circuit_image_counts(t.level(target), map, circuits[index]);
    out += from_counts(t.level_ptr(target), counts,
                       s * Rational(1, static_cast<long>(circuits[index].period())));
  }
  return out;
}

}  // namespace

Circulation prefix_shadow(const CoverTower& t, const MeasurePrefix& prefix, std::size_t k,
                          std::size_t cap) {
  if (k > t.top()) throw std::out_of_range("prefix_shadow: level above the top");
  if (auto it = prefix.shadows.find(k); it != prefix.shadows.end()) return it->second;
  for (auto it = prefix.shadows.upper_bound(k); it != prefix.shadows.end(); ++it) {
    if (it->first <= t.top()) return xi(t, it->first, k, it->second);
  }
  for (auto it = prefix.expressions.rbegin(); it != prefix.expressions.rend(); ++it) {
    if (it->first >= k && it->first <= t.top()) {
      return expression_image(t, it->second, it->first, k, cap);
    }
  }
  throw MissingExpression("no shadow or expression determines level " + std::to_string(k));
}

std::optional<std::string> check_prefix(const CoverTower& t, const MeasurePrefix& prefix,
                                        std::size_t cap) {
  for (const auto& [k, mu] : prefix.shadows) {
    if (k > t.top()) return "shadow at level " + std::to_string(k) + " is above the top";
    if (mu.size() != t.level(k).edge_count()) {
      return "shadow at level " + std::to_string(k) + " has the wrong edge count";
    }
    if (!mu.is_probability()) {
      return "shadow at level " + std::to_string(k) + " is not an invariant probability vector";
    }
  }
  for (auto a = prefix.shadows.begin(); a != prefix.shadows.end(); ++a) {
    for (auto b = std::next(a); b != prefix.shadows.end(); ++b) {
      if (!(xi(t, b->first, a->first, b->second) == a->second)) {
        return "shadows at levels " + std::to_string(a->first) + " and " +
               std::to_string(b->first) + " are not compatible";
      }
    }
  }
  for (const auto& [k, expr] : prefix.expressions) {
    if (k > t.top()) return "expression at level " + std::to_string(k) + " is above the top";
    Rational sum;
    for (const auto& [index, s] : expr) {
      if (s.sign() < 0) return "expression at level " + std::to_string(k) + " has a negative coefficient";
      sum += s;
    }
    if (!(sum == Rational(1))) {
      return "expression at level " + std::to_string(k) + " does not sum to 1";
    }
    for (const auto& [j, mu] : prefix.shadows) {
      if (j <= k && !(expression_image(t, expr, k, j, cap) == mu)) {
        return "expression at level " + std::to_string(k) + " does not reproduce the shadow at level " +
               std::to_string(j);
      }
    }
  }
  return std::nullopt;
}

Rational ergodic_mass_ratio(const CoverTower& t, const MeasurePrefix& prefix, std::size_t base,
                            std::size_t deep, const Rational& eps, std::size_t cap) {
  if (!(base < deep && deep <= t.top())) {
    throw std::out_of_range("ergodic_mass_ratio: need base < deep <= top");
  }
  auto it = prefix.expressions.find(deep);
  if (it == prefix.expressions.end()) {
    throw MissingExpression("no circuit expression at level " + std::to_string(deep));
  }
  const Circulation mu = prefix_shadow(t, prefix, base, cap);
  const auto& circuits = t.circuits(deep, cap);
  const auto map = t.composite_map(deep, base);
  Rational ratio;
  for (const auto& [index, s] : it->second) {
    if (index >= circuits.size()) {
      throw MissingExpression("expression names circuit " + std::to_string(index) +
                              " which does not exist");
    }
    const auto counts = circuit_image_counts(t.level(base), map, circuits[index]);
    const Circulation image = from_counts(t.level_ptr(base), counts,
                                          Rational(1, static_cast<long>(circuits[index].period())));
    if (l1_distance(mu, image) <= eps) ratio += s;
  }
  return ratio;
}

ErgodicBound ergodic_count_upper_bound(const std::vector<std::size_t>& system_sizes,
                                       const CandidateReport* candidates) {
  if (system_sizes.empty()) throw std::invalid_argument("no circuit-system sizes supplied");
  ErgodicBound bound;
  bound.k = *std::min_element(system_sizes.begin(), system_sizes.end());
  if (candidates) {
    const std::size_t l = candidates->between.size();
    if (l > 0 && l < bound.k) {
      bound.refined = bound.k - l;
      bound.annotation = std::to_string(l) + " circuit images lie within " + candidates->tol.str() +
                         " of a segment between two other clusters at depth " +
                         std::to_string(candidates->m_hi) + " (finite-depth evidence)";
    } else {
      bound.annotation = "no circuit image lies between two other clusters at depth " +
                         std::to_string(candidates->m_hi);
    }
  }
  return bound;
}

}  // namespace ergodograph
