#include <doctest.h>

#include <queue>
#include <random>

#include "ergodograph/builders.hpp"
#include "ergodograph/errors.hpp"
#include "ergodograph/flows.hpp"
#include "ergodograph/tower.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ergodograph;

namespace {

const std::vector<std::uint64_t> kP{2, 4, 8, 16};

const CoverTower& e63_tower() {
  static const CoverTower t = build_example_63(5, kP);
  return t;
}

mpq_class raw_l1(const Circulation& a, const Circulation& b) {
  mpq_class s = 0;
  for (std::size_t e = 0; e < a.size(); ++e) s += abs(a[e].raw() - b[e].raw());
  return s;
}

// Components of the graph joining points at L1 distance <= tol.
std::size_t component_count(const std::vector<Circulation>& pts, const mpq_class& tol) {
  std::vector<int> seen(pts.size(), 0);
  std::size_t count = 0;
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (std::size_t v = 0; v < pts.size(); ++v) {
        if (!seen[v] && raw_l1(pts[u], pts[v]) <= tol) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
  }
  return count;
}

CoverTower two_loops() {
  TowerData d;
  const auto s = std::make_shared<const Graph>(Graph::singleton());
  const auto g = std::make_shared<const Graph>(Graph::from_names("L", {"a", "b"}, {{"a", "a"}, {"b", "b"}}));
  d.levels = {s, g, g};
  d.maps = {{0, 0}, {0, 1}};
  return CoverTower(std::move(d));
}

MeasurePrefix midpoint_prefix(std::size_t deep, std::vector<std::size_t> circuits) {
  MeasurePrefix prefix;
  std::vector<std::pair<std::size_t, Rational>> e;
  for (auto i : circuits) e.emplace_back(i, Rational(1, 2));
  prefix.expressions[deep] = e;
  return prefix;
}

}  // namespace

TEST_SUITE("tower") {

TEST_CASE("builder towers validate") {
  CHECK(validate_tower(build_odometer(6, 2).data()).valid());
  CHECK(validate_tower(e63_tower().data()).valid());
}

TEST_CASE("a non-+directional map is reported with its conflicting pair") {
  TowerData d;
  const auto s = std::make_shared<const Graph>(Graph::singleton());
  const auto g = std::make_shared<const Graph>(
      Graph::from_names("B", {"h", "x", "y"}, {{"h", "x"}, {"h", "y"}, {"x", "h"}, {"y", "h"}}));
  d.levels = {s, g, g};
  d.maps = {{0, 0, 0}, {0, 1, 2}};
  const auto r = validate_tower(d);
  CHECK_FALSE(r.valid());
  REQUIRE(r.covers.size() == 2);
  REQUIRE(r.covers[1].has_value());
  CHECK_FALSE(r.covers[1]->plus_directional);
  CHECK_FALSE(r.covers[1]->conflicts.empty());
  CHECK_THROWS_AS(CoverTower{std::move(d)}, ValidationError);
}

TEST_CASE("a tower without a singleton head is invalid") {
  TowerData d;
  const auto g = std::make_shared<const Graph>(Graph::from_names("L", {"a", "b"}, {{"a", "b"}, {"b", "a"}}));
  d.levels = {g};
  CHECK_FALSE(validate_tower(d).singleton_head);
}

TEST_CASE("simplex images: odometer singletons and the head point") {
  const CoverTower od = build_odometer(4, 3);
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t n = 0; n < m; ++n) {
      CHECK(simplex_image(od, m, n, 10).size() == 1);
      CHECK(simplex_diameter(od, m, n, 10) == Rational(0));
    }
  const auto& t = e63_tower();
  const auto head = simplex_image(t, 3, 0, 10);
  for (const auto& x : head) {
    REQUIRE(x.size() == 1);
    CHECK(x[0] == Rational(1));
  }
  const auto pts = simplex_image(t, 2, 1, 10);
  CHECK(pts.size() == 4);
  for (const auto& x : pts) CHECK(x.is_probability());
}

TEST_CASE("example diameters at level 1 match the closed form") {
  const auto& t = e63_tower();
  Rational prev;
  for (std::size_t m = 2; m <= t.top(); ++m) {
    const Rational d = simplex_diameter(t, m, 1, 10);
    CHECK(d.raw() == oracle::e63_diameter_at_level1(kP, m));
    if (m > 2) CHECK(d < prev);
    CHECK(d > Rational(1, 10));
    prev = d;
  }
  CHECK(simplex_diameter(t, 2, 1, 10) == Rational(2, 5));
  CHECK(simplex_diameter(t, 5, 1, 10) == Rational(7, 60));
}

TEST_CASE("example images lie on the a-b segment as the closed form predicts") {
  const auto& t = e63_tower();
  const auto g = t.level_ptr(1);
  const auto a = normalized_circuit(g, t.circuits(1, 10)[0]);
  const auto b = normalized_circuit(g, t.circuits(1, 10)[3]);
  for (std::size_t m = 2; m <= 4; ++m) {
    const auto pts = simplex_image(t, m, 1, 10);
    const auto want = oracle::e63_images_at_level1(kP, m);
    for (std::size_t i = 0; i < 4; ++i) {
      const Rational alpha(want[i].alpha);
      CHECK(pts[i] == alpha * a + (Rational(1) - alpha) * b);
    }
  }
}

TEST_CASE("deeper images lie in the hull of shallower ones") {
  std::mt19937_64 rng(59);
  std::vector<CoverTower> towers;
  towers.push_back(build_example_63(4, {2, 4, 8}));
  for (int k = 0; k < 4; ++k) towers.push_back(build_tree_type(fixtures::random_tree_spec(rng, 4, 3, 2)));
  for (const auto& t : towers) {
    for (std::size_t n = 0; n + 2 <= t.top(); ++n) {
      for (std::size_t m = n + 1; m < t.top(); ++m) {
        const auto shallow = simplex_image(t, m, n, 1000);
        const auto deep = simplex_image(t, m + 1, n, 1000);
        const auto& cm = t.circuits(m, 1000);
        const auto& cdeep = t.circuits(m + 1, 1000);
        for (std::size_t i = 0; i < deep.size(); ++i) {
          const auto mid = pushforward(t.cover(m), normalized_circuit(t.level_ptr(m + 1), cdeep[i]));
          Rational total;
          Circulation hull_point(t.level_ptr(n));
          for (const auto& term : decompose_circulation(mid, 1000)) {
            const auto j = static_cast<std::size_t>(std::find(cm.begin(), cm.end(), term.circuit) - cm.begin());
            REQUIRE(j < cm.size());
            const Rational w = term.coefficient * Rational(static_cast<long>(term.circuit.period()));
            total += w;
            hull_point += w * shallow[j];
          }
          CHECK(total == Rational(1));
          CHECK(hull_point == deep[i]);
        }
        CHECK(diameter(deep) <= diameter(shallow));
      }
    }
  }
}

TEST_CASE("xi composes along the tower") {
  const auto& t = e63_tower();
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 2 + rng() % 3;  // up to level 4
    const std::size_t j = 1 + rng() % (k - 1);
    const std::size_t i = rng() % j;
    const auto& cs = t.circuits(k, 10);
    Circulation x(t.level_ptr(k));
    for (const auto& c : cs) x += Rational(static_cast<long>(rng() % 5), 7) * normalized_circuit(t.level_ptr(k), c);
    CHECK(xi(t, j, i, xi(t, k, j, x)) == xi(t, k, i, x));
  }
}

TEST_CASE("edge frequencies of closed walks are invariant and decompose") {
  const auto& t = e63_tower();
  const Graph& g = t.level(2);
  const auto gp = t.level_ptr(2);
  const VertexId hub = *g.find_vertex("v1");
  std::size_t closed = 0;
  for (std::size_t len : {40u, 80u, 120u}) {
    for (const auto& w : walks_from(g, hub, len, 1000)) {
      if (w.vertices.back() != hub) continue;
      ++closed;
      Circulation x(gp);
      for (std::size_t k = 0; k + 1 < w.vertices.size(); ++k)
        x.add(g.edge_id(w.vertices[k], w.vertices[k + 1]), Rational(1, static_cast<long>(len)));
      CHECK(x.is_probability());
      Circulation back(gp);
      for (const auto& term : decompose_circulation(x, 1000)) back += term.coefficient * circuit_vector(gp, term.circuit);
      CHECK(back == x);
    }
  }
  CHECK(closed >= 4);
}

TEST_CASE("minimality: example and odometer pass in edges mode") {
  const auto& t = e63_tower();
  for (std::size_t n = 1; n < t.top(); ++n) {
    const auto r = minimality_scan(t, n, t.top(), MinimalityMode::edges, 0, 100);
    for (const auto& row : r.rows) CHECK(row.pass);
    CHECK(r.passing_from == n + 1);
  }
  const CoverTower od = build_odometer(5, 2);
  for (std::size_t n = 0; n < 5; ++n) {
    for (auto mode : {MinimalityMode::edges, MinimalityMode::vertices}) {
      const auto r = minimality_scan(od, n, 5, mode, 0, 100);
      for (const auto& row : r.rows) CHECK(row.pass);
    }
  }
  const auto w = minimality_scan(od, 1, 5, MinimalityMode::walks, 2, 100);
  for (const auto& row : w.rows) CHECK(row.pass);
  const auto short_walks = minimality_scan(od, 2, 5, MinimalityMode::walks, 2, 100);
  for (const auto& row : short_walks.rows) CHECK_FALSE(row.pass);
}

TEST_CASE("minimality: two disjoint loops fail with a structural one-loop witness") {
  const CoverTower t = two_loops();
  const auto r = minimality_scan(t, 1, 2, MinimalityMode::edges, 0, 100);
  REQUIRE(r.rows.size() == 1);
  CHECK_FALSE(r.rows[0].pass);
  REQUIRE(r.rows[0].witness_circuit.has_value());
  CHECK(r.rows[0].missing == 1);
  CHECK(r.structural_witness);
  CHECK_FALSE(r.passing_from.has_value());
}

TEST_CASE("minimality: edges pass implies vertices pass") {
  std::mt19937_64 rng(67);
  for (int k = 0; k < 12; ++k) {
    const CoverTower t = build_tree_type(fixtures::random_tree_spec(rng, 4, 3, 2));
    for (std::size_t n = 0; n < t.top(); ++n) {
      const auto e = minimality_scan(t, n, t.top(), MinimalityMode::edges, 0, 1000);
      const auto v = minimality_scan(t, n, t.top(), MinimalityMode::vertices, 0, 1000);
      for (std::size_t i = 0; i < e.rows.size(); ++i)
        if (e.rows[i].pass) CHECK(v.rows[i].pass);
    }
  }
}

TEST_CASE("single linkage matches connected components") {
  std::mt19937_64 rng(71);
  const auto& t = e63_tower();
  const auto g = t.level_ptr(1);
  const auto& cs = t.circuits(1, 10);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Circulation> pts;
    for (int k = 0; k < 6; ++k) {
      Circulation x(g);
      for (const auto& c : cs) x += Rational(static_cast<long>(rng() % 4), 1) * normalized_circuit(g, c);
      if (x.total().is_zero()) x = normalized_circuit(g, cs[0]);
      x *= Rational(1) / x.total();
      pts.push_back(x);
    }
    const Rational tol(static_cast<long>(rng() % 6), 10);
    const auto clusters = single_linkage(pts, tol);
    CHECK(clusters.size() == component_count(pts, tol.raw()));
  }
}

TEST_CASE("point-to-segment distance matches breakpoint evaluation") {
  std::mt19937_64 rng(73);
  const auto& t = e63_tower();
  const auto g = t.level_ptr(2);
  const auto& cs = t.circuits(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Circulation> v;
    for (int k = 0; k < 3; ++k) {
      Circulation x(g);
      for (const auto& c : cs) x += Rational(static_cast<long>(rng() % 5), 1) * normalized_circuit(g, c);
      if (x.total().is_zero()) x = normalized_circuit(g, cs[1]);
      v.push_back(x);
    }
    const Circulation &p = v[0], &a = v[1], &b = v[2];
    // The distance is piecewise linear in s; its minimum sits at 0, 1 or a kink.
    std::vector<mpq_class> candidates{0, 1};
    for (std::size_t e = 0; e < p.size(); ++e) {
      const mpq_class slope = b[e].raw() - a[e].raw();
      if (slope == 0) continue;
      const mpq_class s = (p[e].raw() - a[e].raw()) / slope;
      if (s > 0 && s < 1) candidates.push_back(s);
    }
    mpq_class best = -1;
    for (const auto& s : candidates) {
      mpq_class d = 0;
      for (std::size_t e = 0; e < p.size(); ++e) d += abs(p[e].raw() - a[e].raw() - s * (b[e].raw() - a[e].raw()));
      if (best < 0 || d < best) best = d;
    }
    CHECK(l1_distance_to_segment(p, a, b).raw() == best);
  }
}

TEST_CASE("candidates: odometer has one cluster") {
  const CoverTower od = build_odometer(4, 2);
  CHECK(ergodic_candidates(od, 1, 2, 4, Rational(1, 10), 10).clusters.size() == 1);
}

TEST_CASE("candidates: example clusters follow the closed-form distances") {
  const auto& t = e63_tower();
  // Depth 5: a-b gap 7/60, so c and c' sit 7/120 from each end.
  const auto loose = ergodic_candidates(t, 1, 2, 5, Rational(1, 10), 10);
  CHECK(loose.clusters.size() == 1);
  const auto tight = ergodic_candidates(t, 1, 2, 5, Rational(1, 20), 10);
  REQUIRE(tight.clusters.size() == 3);
  CHECK(tight.clusters[0].members == std::vector<std::size_t>{0});
  CHECK(tight.clusters[1].members == std::vector<std::size_t>{1, 2});
  CHECK(tight.clusters[2].members == std::vector<std::size_t>{3});
  CHECK(tight.between == std::vector<std::size_t>{1, 2});
  // The c/c' cluster is the midpoint of the other two.
  const auto& pts = tight.points;
  CHECK(pts[1] == Rational(1, 2) * (pts[0] + pts[3]));
  for (std::size_t m = 2; m <= 5; ++m) {
    const auto pm = simplex_image(t, m, 1, 10);
    std::vector<Circulation> oracle_pts(pm.begin(), pm.end());
    for (const auto& tol : {mpq_class(1, 10), mpq_class(1, 20), mpq_class(1, 50)}) {
      const auto r = ergodic_candidates(t, 1, std::max<std::size_t>(2, m - 1), m, Rational(tol), 10);
      // Gap between the ends from the closed form, midpoint at half of it.
      const mpq_class gap = oracle::e63_diameter_at_level1(kP, m);
      const std::size_t want = gap / 2 > tol ? 3 : 1;
      CHECK(r.clusters.size() == want);
      CHECK(component_count(oracle_pts, tol) == want);
    }
  }
}

TEST_CASE("candidates: uniquely ergodic tree-type tower collapses to one cluster") {
  TreeTypeSpec spec;
  spec.periods = {3, 3};
  spec.windings = {{{2, 1}, {1, 2}}, {{2, 1}, {1, 2}}, {{2, 1}, {1, 2}}};
  const CoverTower t = build_tree_type(spec);
  const Rational d = simplex_diameter(t, 4, 1, 100);
  const auto r = ergodic_candidates(t, 1, 2, 4, d, 100);
  CHECK(r.clusters.size() == 1);
}

TEST_CASE("ergodic count bounds") {
  CHECK(ergodic_count_upper_bound({1, 1, 1}).k == 1);
  const auto& t = e63_tower();
  const auto report = ergodic_candidates(t, 1, 2, 5, Rational(1, 20), 10);
  const auto b = ergodic_count_upper_bound({4, 4, 4, 4}, &report);
  CHECK(b.k == 4);
  REQUIRE(b.refined.has_value());
  CHECK(*b.refined == 2);
  CHECK_FALSE(b.annotation.empty());
  CHECK(ergodic_count_upper_bound({3, 3}).k == 3);
  CHECK_FALSE(ergodic_count_upper_bound({3, 3}).refined.has_value());
}

TEST_CASE("mass ratio: odometer") {
  const CoverTower od = build_odometer(3, 2);
  MeasurePrefix prefix;
  prefix.expressions[3] = {{0, Rational(1)}};
  for (const auto& eps : {Rational(0), Rational(1, 5)}) CHECK(ergodic_mass_ratio(od, prefix, 1, 3, eps, 10) == Rational(1));
}

TEST_CASE("mass ratio: midpoint measure in the example") {
  const auto& t = e63_tower();
  const auto cc = midpoint_prefix(5, {1, 2});
  const auto ab = midpoint_prefix(5, {0, 3});
  CHECK_FALSE(check_prefix(t, cc, 10).has_value());
  CHECK_FALSE(check_prefix(t, ab, 10).has_value());
  // Both expressions give the same shadow.
  for (std::size_t k = 0; k <= 5; ++k) CHECK(prefix_shadow(t, cc, k, 10) == prefix_shadow(t, ab, k, 10));
  const Rational eps(1, 5);
  CHECK(ergodic_mass_ratio(t, cc, 4, 5, eps, 10) == Rational(1));
  CHECK(ergodic_mass_ratio(t, ab, 4, 5, eps, 10) == Rational(0));
  // Closed form: the a image sits (2p+1)/(2p+4) - 1/2 of the a-b gap from the midpoint.
  const mpq_class gap = oracle::e63_ab_distance_at(kP, 4);
  const mpq_class off = (mpq_class(33, 36) - mpq_class(1, 2)) * gap;
  const auto img = simplex_image(t, 5, 4, 10);
  CHECK(l1_distance(prefix_shadow(t, ab, 4, 10), img[0]).raw() == off);
  // At the shallowest level the a and b images are still close to the midpoint.
  CHECK(ergodic_mass_ratio(t, ab, 1, 5, eps, 10) == Rational(1));
}

TEST_CASE("mass ratio needs an expression at the deep level") {
  const auto& t = e63_tower();
  const auto cc = midpoint_prefix(5, {1, 2});
  CHECK_THROWS_AS(ergodic_mass_ratio(t, cc, 1, 4, Rational(1, 5), 10), MissingExpression);
}

TEST_CASE("prefix compatibility failures are reported") {
  const auto& t = e63_tower();
  MeasurePrefix prefix = midpoint_prefix(3, {1, 2});
  prefix.shadows.emplace(1, normalized_circuit(t.level_ptr(1), t.circuits(1, 10)[0]));
  CHECK(check_prefix(t, prefix, 10).has_value());
}

}  // TEST_SUITE
