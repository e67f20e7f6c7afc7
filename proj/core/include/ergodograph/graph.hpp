#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergodograph/names.hpp"

namespace ergodograph {

using EdgeId = std::uint32_t;

struct Edge {
  VertexId source = 0;
  VertexId target = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Finite directed graph whose edge set is a relation on its vertices.
///
/// Vertices are numbered in lexicographic order of their identifiers and
/// edges in lexicographic order of (source, target), so every derived
/// output is reproducible. Storage is compressed sparse rows. Whether the
/// relation is surjective is checked by validate_graph, not enforced here.
class Graph {
 public:
  Graph() = default;

  /// Edges may arrive in any order; duplicates collapse. Throws
  /// ValidationError for endpoints outside the vertex table.
  Graph(std::string name, VertexNames vertices, std::vector<Edge> edges);

  /// Convenience constructor from identifier strings. Throws
  /// ValidationError for duplicate vertices or undeclared endpoints.
  static Graph from_names(std::string name, std::vector<std::string> vertices,
                          const std::vector<std::pair<std::string, std::string>>& edges);

  /// The one-vertex graph ({0}, {(0,0)}) placed at the head of every tower.
  static Graph singleton();

  const std::string& name() const noexcept { return name_; }
  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::string vertex_name(VertexId v) const { return names_[v]; }
  std::optional<VertexId> find_vertex(std::string_view name) const { return names_.find(name); }
  const VertexNames& names() const noexcept { return names_; }

  std::span<const VertexId> successors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  EdgeId first_out_edge(VertexId v) const { return offsets_[v]; }
  std::size_t out_degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  Edge edge(EdgeId e) const;
  VertexId edge_target(EdgeId e) const { return targets_[e]; }
  std::optional<EdgeId> find_edge(VertexId source, VertexId target) const;
  /// Like find_edge but for callers that know the edge exists.
  EdgeId edge_id(VertexId source, VertexId target) const;

  std::vector<std::uint32_t> in_degrees() const;
  std::vector<Edge> edge_list() const;
  std::string edge_label(EdgeId e) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::string name_;
  VertexNames names_;
  std::vector<EdgeId> offsets_{0};
  std::vector<VertexId> targets_;
};

using GraphPtr = std::shared_ptr<const Graph>;

/// Result of checking the surjective-relation property.
struct ValidationReport {
  std::vector<std::string> missing_in;   ///< vertices that are no edge's terminal
  std::vector<std::string> missing_out;  ///< vertices that are no edge's initial
  std::vector<std::pair<std::string, std::string>> undeclared_edges;

  bool valid() const {
    return missing_in.empty() && missing_out.empty() && undeclared_edges.empty();
  }
};

ValidationReport validate_graph(const Graph& g);

/// Validates raw identifier lists before a Graph is built from them.
ValidationReport validate_graph(const std::vector<std::string>& vertices,
                                const std::vector<std::pair<std::string, std::string>>& edges);

/// A walk (v_0, ..., v_l) of length l >= 1.
struct Walk {
  std::vector<VertexId> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  friend auto operator<=>(const Walk&, const Walk&) = default;
};

/// Elementary directed cycle in canonical rotation: it starts at its
/// smallest vertex and does not repeat that vertex at the end.
class Circuit {
 public:
  Circuit() = default;
  /// Rotates a cyclic vertex sequence into canonical form. Throws
  /// std::invalid_argument if a vertex repeats.
  static Circuit canonical(std::vector<VertexId> cyclic);

  std::size_t period() const noexcept { return vertices_.size(); }
  std::span<const VertexId> vertices() const noexcept { return vertices_; }
  VertexId operator[](std::size_t k) const { return vertices_[k]; }
  /// Vertex following position k, wrapping around.
  VertexId next(std::size_t k) const { return vertices_[k + 1 == vertices_.size() ? 0 : k + 1]; }

  /// The closed walk (v_0, ..., v_{l-1}, v_0).
  Walk as_walk() const;

  friend auto operator<=>(const Circuit&, const Circuit&) = default;

 private:
  std::vector<VertexId> vertices_;
};

/// Throws ValidationError unless every step of `w` is an edge of `g`.
void check_walk(const Graph& g, const Walk& w);

/// Edge ids of a circuit in traversal order.
std::vector<EdgeId> circuit_edges(const Graph& g, const Circuit& c);

/// Elementary cycles of `g` in lexicographic order of their canonical
/// vertex sequences. Throws CapExceeded when more than `cap` exist.
std::vector<Circuit> enumerate_circuits(const Graph& g, std::size_t cap);

/// All walks of the given length starting at `start`, in lexicographic order.
std::vector<Walk> walks_from(const Graph& g, VertexId start, std::size_t length, std::size_t cap);

struct WalkImage {
  std::vector<VertexId> vertices;  ///< V(w), sorted, no duplicates
  std::vector<EdgeId> edges;       ///< E(w), sorted, no duplicates
};

WalkImage walk_image_sets(const Graph& g, const Walk& w);
WalkImage walk_image_sets(const Graph& g, const Circuit& c);

/// w + w' for walks with w.end == w'.start.
Walk concatenate(const Walk& first, const Walk& second);

/// Space-separated vertex identifiers.
std::string format_walk(const Graph& g, std::span<const VertexId> vertices);

}  // namespace ergodograph
