#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ergodograph/cover.hpp"
#include "ergodograph/graph.hpp"
#include "ergodograph/rational.hpp"

namespace ergodograph {

/// Exact rational weight on every edge of a host graph.
class Circulation {
 public:
  /// The zero vector on `host`.
  explicit Circulation(GraphPtr host);
  Circulation(GraphPtr host, std::vector<Rational> weights);

  const Graph& host() const noexcept { return *host_; }
  const GraphPtr& host_ptr() const noexcept { return host_; }

  const Rational& operator[](EdgeId e) const { return weights_[e]; }
  void set(EdgeId e, Rational value) { weights_[e] = std::move(value); }
  void add(EdgeId e, const Rational& value) { weights_[e] += value; }
  std::span<const Rational> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }

  Rational total() const;
  /// Member of M(G): no negative weight.
  bool is_nonnegative() const;
  /// Member of I(G): Kirchhoff balance at every vertex.
  bool is_invariant() const;
  /// Member of P(G): invariant, nonnegative, total weight 1.
  bool is_probability() const;
  std::size_t support_size() const;

  Circulation& operator+=(const Circulation& rhs);
  Circulation& operator-=(const Circulation& rhs);
  Circulation& operator*=(const Rational& s);
  friend Circulation operator+(Circulation a, const Circulation& b) { return a += b; }
  friend Circulation operator-(Circulation a, const Circulation& b) { return a -= b; }
  friend Circulation operator*(const Rational& s, Circulation a) { return a *= s; }
  friend bool operator==(const Circulation& a, const Circulation& b);

 private:
  void require_same_host(const Circulation& rhs) const;

  GraphPtr host_;
  std::vector<Rational> weights_;
};

/// Per vertex: incoming weight minus outgoing weight.
std::vector<Rational> kirchhoff_residual(const Circulation& x);

/// Indicator vector of a circuit: weight 1 on each of its edges.
Circulation circuit_vector(const GraphPtr& g, const Circuit& c);
/// Weight 1/Per(c) on each edge of c.
Circulation normalized_circuit(const GraphPtr& g, const Circuit& c);

struct CircuitTerm {
  Circuit circuit;
  Rational coefficient;
};

/// Writes x in I(G) ∩ M(G) as a positive combination of circuits.
///
/// Repeatedly: take the smallest positive weight (lowest edge id on ties),
/// follow positive edges forward from its terminal vertex taking the
/// lowest positive out-edge, close the first repeated vertex into a
/// circuit and subtract that circuit times its smallest weight. Terms for
/// the same circuit are merged and returned in circuit order. Throws
/// NegativeWeight or NotInvariant when x is outside the cone, and
/// CapExceeded after `cap` extraction steps.
std::vector<CircuitTerm> decompose_circulation(const Circulation& x, std::size_t cap);

/// (phi_* x)(e') = sum of x(e) over edges e with phi(e) = e'.
Circulation pushforward(const Cover& phi, const Circulation& x);

Rational l1_norm(const Circulation& x);
Rational l1_distance(const Circulation& a, const Circulation& b);

/// Integer edge weights, used where circuits are too long for rationals.
using EdgeCounts = std::vector<std::int64_t>;

struct CountTerm {
  Circuit circuit;
  std::int64_t multiplicity;
};

/// How often the image of each target edge is traversed by phi(c), for
/// a circuit c of phi's source.
EdgeCounts circuit_image_counts(const Cover& phi, const Circuit& c);
/// Same, with the composite given as a bare vertex map onto `target`.
EdgeCounts circuit_image_counts(const Graph& target, std::span<const VertexId> vmap,
                                const Circuit& c);

/// decompose_circulation over integer weights.
std::vector<CountTerm> decompose_counts(const Graph& g, EdgeCounts counts, std::size_t cap);

/// The circulation scale * counts on `g`.
Circulation from_counts(const GraphPtr& g, const EdgeCounts& counts, const Rational& scale);

}  // namespace ergodograph
