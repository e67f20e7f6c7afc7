#include <doctest.h>

#include <random>

#include "ergodograph/builders.hpp"
#include "ergodograph/errors.hpp"
#include "ergodograph/flows.hpp"
#include "ergodograph/tower.hpp"
#include "oracles.hpp"

using namespace ergodograph;

namespace {

const CoverTower& e63_tower() {
  static const CoverTower t = build_example_63(4, {2, 4, 8});
  return t;
}

GraphPtr figure_eight() {
  return std::make_shared<const Graph>(
      Graph::from_names("F", {"h", "x", "y"}, {{"h", "x"}, {"x", "h"}, {"h", "y"}, {"y", "h"}}));
}

// Reference sum of s(c) c built edge by edge from vertex sequences.
std::vector<mpq_class> reference_sum(const Graph& g, const std::vector<CircuitTerm>& terms) {
  std::vector<mpq_class> out(g.edge_count());
  for (const auto& t : terms) {
    const auto vs = t.circuit.vertices();
    for (std::size_t k = 0; k < vs.size(); ++k) {
      out[*g.find_edge(vs[k], vs[(k + 1) % vs.size()])] += t.coefficient.raw();
    }
  }
  return out;
}

std::vector<mpq_class> raw(const Circulation& x) {
  std::vector<mpq_class> out;
  for (const auto& w : x.weights()) out.push_back(w.raw());
  return out;
}

Circulation random_combination(std::mt19937_64& rng, const GraphPtr& g, const std::vector<Circuit>& cs,
                               bool rational) {
  Circulation x(g);
  for (const auto& c : cs) {
    if (rng() % 3 == 0) continue;
    const Rational s = rational ? Rational(static_cast<long>(1 + rng() % 7), static_cast<long>(1 + rng() % 5))
                                : Rational(static_cast<long>(rng() % 5));
    x += s * circuit_vector(g, c);
  }
  return x;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("rationals parse reduced and print as p/q") {
  CHECK(Rational::parse("3/6").str() == "1/2");
  CHECK(Rational::parse("4").str() == "4/1");
  CHECK(Rational::parse("-2/4").str() == "-1/2");
  CHECK(Rational::parse("0/7").str() == "0/1");
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1.5"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), ParseError);
  CHECK_THROWS_AS(Rational::parse(""), ParseError);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-1, 3) < Rational(0));
  CHECK(abs(Rational(-2, 3)) == Rational(2, 3));
}

TEST_CASE("circuit indicators balance at every vertex") {
  const auto& t = e63_tower();
  for (std::size_t n = 1; n <= t.top(); ++n) {
    for (const auto& c : t.circuits(n, 10)) {
      const auto r = kirchhoff_residual(circuit_vector(t.level_ptr(n), c));
      CHECK(std::all_of(r.begin(), r.end(), [](const Rational& x) { return x.is_zero(); }));
    }
  }
}

TEST_CASE("a single non-loop edge leaves +1 at its head and -1 at its tail") {
  const auto g = figure_eight();
  Circulation x(g);
  x.set(g->edge_id(*g->find_vertex("h"), *g->find_vertex("x")), Rational(1));
  const auto r = kirchhoff_residual(x);
  CHECK(r[*g->find_vertex("x")] == Rational(1));
  CHECK(r[*g->find_vertex("h")] == Rational(-1));
  CHECK(r[*g->find_vertex("y")] == Rational(0));
  CHECK_FALSE(x.is_invariant());
}

TEST_CASE("a + b - c - c' is the zero circulation at every level") {
  const auto& t = e63_tower();
  for (std::size_t n = 1; n <= t.top(); ++n) {
    const auto& cs = t.circuits(n, 10);
    REQUIRE(cs.size() == 4);
    const auto g = t.level_ptr(n);
    const Circulation z = circuit_vector(g, cs[0]) + circuit_vector(g, cs[3]) - circuit_vector(g, cs[1]) -
                          circuit_vector(g, cs[2]);
    CHECK(z == Circulation(g));
    CHECK(z.is_invariant());
  }
}

TEST_CASE("figure-eight decomposes into its two loops with the forced coefficients") {
  const auto g = figure_eight();
  const auto cs = enumerate_circuits(*g, 10);
  REQUIRE(cs.size() == 2);
  const Circulation x = Rational(1) * circuit_vector(g, cs[0]) + Rational(2) * circuit_vector(g, cs[1]);
  const auto terms = decompose_circulation(x, 100);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].circuit == cs[0]);
  CHECK(terms[0].coefficient == Rational(1));
  CHECK(terms[1].circuit == cs[1]);
  CHECK(terms[1].coefficient == Rational(2));
}

TEST_CASE("a + b on the example graph reconstructs exactly") {
  const auto& t = e63_tower();
  const auto g = t.level_ptr(1);
  const auto& cs = t.circuits(1, 10);
  const Circulation x = circuit_vector(g, cs[0]) + circuit_vector(g, cs[3]);
  const auto terms = decompose_circulation(x, 100);
  CHECK(reference_sum(*g, terms) == raw(x));
  for (const auto& term : terms) CHECK(term.coefficient.sign() > 0);
}

TEST_CASE("random nonnegative circuit combinations reconstruct exactly") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sg = oracle::random_graph(rng, 2 + trial % 5, 0.35);
    const auto g = oracle::to_graph_ptr(sg);
    const auto cs = enumerate_circuits(*g, 100000);
    const Circulation x = random_combination(rng, g, cs, trial % 2 == 1);
    const auto terms = decompose_circulation(x, 100000);
    CHECK(reference_sum(*g, terms) == raw(x));
    CHECK(terms.size() <= x.support_size());
    for (const auto& term : terms) CHECK(term.coefficient.sign() > 0);
  }
}

TEST_CASE("decomposition rejects negative or unbalanced input") {
  const auto g = figure_eight();
  const auto cs = enumerate_circuits(*g, 10);
  CHECK_THROWS_AS(decompose_circulation(Rational(-1) * circuit_vector(g, cs[0]), 10), NegativeWeight);
  Circulation x(g);
  x.set(0, Rational(1));
  CHECK_THROWS_AS(decompose_circulation(x, 10), NotInvariant);
  CHECK(decompose_circulation(Circulation(g), 10).empty());
}

TEST_CASE("integer count decomposition agrees with the rational one") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sg = oracle::random_graph(rng, 2 + trial % 5, 0.35);
    const auto g = oracle::to_graph_ptr(sg);
    const auto cs = enumerate_circuits(*g, 100000);
    const Circulation x = random_combination(rng, g, cs, false);
    EdgeCounts counts;
    for (const auto& w : x.weights()) counts.push_back(w.to_int64());
    const auto a = decompose_counts(*g, counts, 100000);
    const auto b = decompose_circulation(x, 100000);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].circuit == b[i].circuit);
      CHECK(Rational(static_cast<long>(a[i].multiplicity)) == b[i].coefficient);
    }
    CHECK(from_counts(g, counts, Rational(1)) == x);
  }
}

TEST_CASE("normalized circuits are probability vectors") {
  const auto s = std::make_shared<const Graph>(Graph::singleton());
  const auto loop = normalized_circuit(s, enumerate_circuits(*s, 1)[0]);
  CHECK(loop[0] == Rational(1));

  const auto& t = e63_tower();
  const auto g = t.level_ptr(1);
  const auto a = normalized_circuit(g, t.circuits(1, 10)[0]);
  CHECK(a.support_size() == 5);
  for (const auto& w : a.weights()) CHECK((w.is_zero() || w == Rational(1, 5)));
  for (std::size_t n = 1; n <= t.top(); ++n) {
    for (const auto& c : t.circuits(n, 10)) CHECK(normalized_circuit(t.level_ptr(n), c).is_probability());
  }
}

TEST_CASE("pushforward by the identity and by doubling") {
  const CoverTower t = build_odometer(2, 2);
  const auto g1 = t.level_ptr(1);
  const Circulation x = normalized_circuit(g1, enumerate_circuits(*g1, 1)[0]);
  CHECK(pushforward(Cover::identity(g1), x) == x);

  oracle::SmallGraph c4, c2;
  c4.n = 4;
  c2.n = 2;
  for (int v = 0; v < 4; ++v) c4.edges.insert({v, (v + 1) % 4});
  c2.edges = {{0, 1}, {1, 0}};
  const Cover phi(GraphHom(oracle::to_graph_ptr(c4), oracle::to_graph_ptr(c2), {0, 1, 0, 1}));
  const auto y = pushforward(phi, normalized_circuit(phi.source_ptr(), enumerate_circuits(phi.source(), 1)[0]));
  CHECK(y[0] == Rational(1, 2));
  CHECK(y[1] == Rational(1, 2));
}

TEST_CASE("pushforward of the normalized a is a convex combination of a and b") {
  const auto& t = e63_tower();
  const auto g1 = t.level_ptr(1);
  const auto& cs = t.circuits(1, 10);
  const auto img = pushforward(t.cover(1), normalized_circuit(t.level_ptr(2), t.circuits(2, 10)[0]));
  // p(1) = 2: weights (2p+1)/(2p+4) and 3/(2p+4).
  CHECK(img == Rational(5, 8) * normalized_circuit(g1, cs[0]) + Rational(3, 8) * normalized_circuit(g1, cs[3]));
}

TEST_CASE("pushforward is linear and preserves I and P") {
  const auto& t = e63_tower();
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 2;
    const std::size_t m = n + 1 + rng() % (t.top() - n);
    const Cover phi = t.composite(m, n);
    const auto g = t.level_ptr(m);
    const auto& cs = t.circuits(m, 10);
    const Circulation x = random_combination(rng, g, cs, true);
    const Circulation y = random_combination(rng, g, cs, true);
    const Rational alpha(static_cast<long>(rng() % 9) - 4, 3), beta(static_cast<long>(1 + rng() % 5), 7);
    CHECK(pushforward(phi, alpha * x + beta * y) == alpha * pushforward(phi, x) + beta * pushforward(phi, y));
    const Circulation px = pushforward(phi, x);
    CHECK(px.is_invariant());
    CHECK(px.total() == x.total());
    if (!x.total().is_zero()) {
      const Rational scale = Rational(1) / x.total();
      CHECK(pushforward(phi, scale * x).is_probability());
    }
    // Non-invariant input stays non-invariant after adding one stray edge weight.
    Circulation z = x;
    z.add(0, Rational(1));
    CHECK(pushforward(phi, z).total() == z.total());
  }
}

TEST_CASE("L1 norm and distance") {
  const auto g = figure_eight();
  const auto cs = enumerate_circuits(*g, 10);
  const auto a = normalized_circuit(g, cs[0]);
  const auto b = normalized_circuit(g, cs[1]);
  CHECK(l1_norm(a) == Rational(1));
  CHECK(l1_distance(a, b) == Rational(2));
  CHECK(l1_distance(a, a) == Rational(0));
}

TEST_CASE("normalized circuits span the probability simplex") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sg = oracle::random_graph(rng, 2 + trial % 4, 0.4);
    const auto g = oracle::to_graph_ptr(sg);
    const auto cs = enumerate_circuits(*g, 100000);
    Circulation x = random_combination(rng, g, cs, true);
    if (x.total().is_zero()) continue;
    x *= Rational(1) / x.total();
    REQUIRE(x.is_probability());
    // x = sum s(c) c = sum s(c) Per(c) c~, so the convex weights are s(c) Per(c).
    Rational weight;
    Circulation back(g);
    for (const auto& term : decompose_circulation(x, 100000)) {
      const Rational w = term.coefficient * Rational(static_cast<long>(term.circuit.period()));
      weight += w;
      back += w * normalized_circuit(g, term.circuit);
    }
    CHECK(weight == Rational(1));
    CHECK(back == x);
  }
}

}  // TEST_SUITE
