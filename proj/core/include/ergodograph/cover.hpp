#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ergodograph/graph.hpp"

namespace ergodograph {

/// A vertex map between two graphs. Nothing is checked on construction
/// beyond the map's size; see validate_cover.
class GraphHom {
 public:
  GraphHom(GraphPtr source, GraphPtr target, std::vector<VertexId> vmap);

  const Graph& source() const noexcept { return *source_; }
  const Graph& target() const noexcept { return *target_; }
  const GraphPtr& source_ptr() const noexcept { return source_; }
  const GraphPtr& target_ptr() const noexcept { return target_; }
  const std::vector<VertexId>& vmap() const noexcept { return vmap_; }
  VertexId operator()(VertexId v) const { return vmap_[v]; }

 private:
  GraphPtr source_;
  GraphPtr target_;
  std::vector<VertexId> vmap_;
};

struct CoverReport {
  bool total = true;  ///< every image is a vertex of the target
  bool homomorphism = true;
  bool edge_surjective = true;
  bool plus_directional = true;
  /// Source edges whose image is not a target edge.
  std::vector<Edge> non_edges;
  /// Target edges that nothing maps onto.
  std::vector<Edge> missed;
  /// Pairs (u,v), (u,v') of source edges with different terminal images.
  std::vector<std::pair<Edge, Edge>> conflicts;

  bool valid() const { return total && homomorphism && edge_surjective && plus_directional; }
  /// One-line summary naming the first counterexample of each failure.
  std::string summary(const Graph& source, const Graph& target) const;
};

/// Checks the three cover conditions. At most `max_witnesses`
/// counterexamples are kept per condition.
CoverReport validate_cover(const GraphHom& h, std::size_t max_witnesses = 16);

/// A validated cover.
class Cover {
 public:
  /// Throws ValidationError unless validate_cover passes.
  explicit Cover(GraphHom hom);

  static Cover identity(GraphPtr g);

  const Graph& source() const noexcept { return hom_.source(); }
  const Graph& target() const noexcept { return hom_.target(); }
  const GraphPtr& source_ptr() const noexcept { return hom_.source_ptr(); }
  const GraphPtr& target_ptr() const noexcept { return hom_.target_ptr(); }
  const GraphHom& hom() const noexcept { return hom_; }
  const std::vector<VertexId>& vmap() const noexcept { return hom_.vmap(); }
  VertexId operator()(VertexId v) const { return hom_(v); }

  /// Image of a source edge.
  EdgeId map_edge(EdgeId e) const;
  /// Image of every source edge, indexed by source edge id.
  std::vector<EdgeId> edge_map() const;

 private:
  GraphHom hom_;
};

/// Composite of a chain listed from the shallowest cover outward:
/// chain[0] : G_{n+1} -> G_n, ..., chain.back() : G_m -> G_{m-1}. The
/// result maps G_m to G_n and is revalidated. Throws EndpointMismatch when
/// consecutive covers do not share a graph, std::invalid_argument on an
/// empty chain.
Cover compose_covers(std::span<const Cover> chain);

/// Vertex-wise image of a walk.
Walk map_walk(const Cover& phi, const Walk& w);

/// The image set phi(W_v(G_m, l)) in lexicographic order. Works on sets of
/// source end vertices grouped by image prefix, so its cost tracks the
/// number of distinct images rather than the number of source walks.
/// Throws CapExceeded if more than `cap` distinct image prefixes appear.
std::vector<Walk> projected_walks(const Cover& phi, VertexId v, std::size_t length,
                                  std::size_t cap);

}  // namespace ergodograph
