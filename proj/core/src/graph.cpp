#include "ergodograph/graph.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ergodograph/errors.hpp"

namespace ergodograph {

Graph::Graph(std::string name, VertexNames vertices, std::vector<Edge> edges)
    : name_(std::move(name)), names_(std::move(vertices)) {
  const std::size_t n = names_.size();
  if (edges.size() > std::numeric_limits<EdgeId>::max()) {
    throw ValidationError("too many edges for 32-bit edge ids");
  }
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.source >= n || e.target >= n) {
      throw ValidationError("edge endpoint outside the vertex table in graph '" + name_ + "'");
    }
    ++offsets_[e.source + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  targets_.resize(edges.size());
  {
    std::vector<EdgeId> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges) targets_[fill[e.source]++] = e.target;
  }
  edges.clear();
  edges.shrink_to_fit();

  // Sort each row and drop duplicate pairs; compact in place.
  EdgeId write = 0;
  EdgeId row_begin = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const EdgeId row_end = offsets_[v + 1];
    auto first = targets_.begin() + row_begin;
    auto last = targets_.begin() + row_end;
    if (row_end - row_begin > 1) std::sort(first, last);
    offsets_[v] = write;
    VertexId previous = 0;
    for (auto it = first; it != last; ++it) {
      if (it != first && *it == previous) continue;
      previous = *it;
      targets_[write++] = *it;
    }
    row_begin = row_end;
  }
  offsets_[n] = write;
  targets_.resize(write);
  targets_.shrink_to_fit();
}

Graph Graph::from_names(std::string name, std::vector<std::string> vertices,
                        const std::vector<std::pair<std::string, std::string>>& edges) {
  VertexNames table = VertexNames::from_names(std::move(vertices));
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [src, dst] : edges) {
    auto s = table.find(src);
    auto t = table.find(dst);
    if (!s || !t) {
      throw ValidationError("edge (" + src + ", " + dst + ") uses an undeclared vertex");
    }
    list.push_back({*s, *t});
  }
  return Graph(std::move(name), std::move(table), std::move(list));
}

Graph Graph::singleton() { return from_names("G0", {"0"}, {{"0", "0"}}); }

Edge Graph::edge(EdgeId e) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
  return {static_cast<VertexId>(it - offsets_.begin() - 1), targets_[e]};
}

std::optional<EdgeId> Graph::find_edge(VertexId source, VertexId target) const {
  if (source >= vertex_count()) return std::nullopt;
  const auto first = targets_.begin() + offsets_[source];
  const auto last = targets_.begin() + offsets_[source + 1];
  auto it = std::lower_bound(first, last, target);
  if (it == last || *it != target) return std::nullopt;
  return static_cast<EdgeId>(it - targets_.begin());
}

EdgeId Graph::edge_id(VertexId source, VertexId target) const {
  auto e = find_edge(source, target);
  if (!e) {
    throw ValidationError("(" + vertex_name(source) + ", " + vertex_name(target) +
                          ") is not an edge of " + name_);
  }
  return *e;
}

std::vector<std::uint32_t> Graph::in_degrees() const {
  std::vector<std::uint32_t> in(vertex_count(), 0);
  for (VertexId t : targets_) ++in[t];
  return in;
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId v = 0; v < vertex_count(); ++v) {
    for (VertexId t : successors(v)) out.push_back({v, t});
  }
  return out;
}

std::string Graph::edge_label(EdgeId e) const {
  const Edge ed = edge(e);
  return "(" + vertex_name(ed.source) + "," + vertex_name(ed.target) + ")";
}

bool operator==(const Graph& a, const Graph& b) {
  if (&a == &b) return true;
  return a.name_ == b.name_ && a.offsets_ == b.offsets_ && a.targets_ == b.targets_ &&
         a.names_ == b.names_;
}

ValidationReport validate_graph(const Graph& g) {
  ValidationReport report;
  const auto in = g.in_degrees();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (in[v] == 0) report.missing_in.push_back(g.vertex_name(v));
    if (g.out_degree(v) == 0) report.missing_out.push_back(g.vertex_name(v));
  }
  return report;
}

ValidationReport validate_graph(const std::vector<std::string>& vertices,
                                const std::vector<std::pair<std::string, std::string>>& edges) {
  ValidationReport report;
  std::set<std::string> declared(vertices.begin(), vertices.end());
  std::set<std::string> has_in;
  std::set<std::string> has_out;
  for (const auto& [src, dst] : edges) {
    if (!declared.count(src) || !declared.count(dst)) {
      report.undeclared_edges.emplace_back(src, dst);
      continue;
    }
    has_out.insert(src);
    has_in.insert(dst);
  }
  for (const auto& v : declared) {
    if (!has_in.count(v)) report.missing_in.push_back(v);
    if (!has_out.count(v)) report.missing_out.push_back(v);
  }
  return report;
}

Circuit Circuit::canonical(std::vector<VertexId> cyclic) {
  if (cyclic.empty()) throw std::invalid_argument("empty circuit");
  if (cyclic.size() < 64) {
    std::vector<VertexId> sorted(cyclic);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("circuit repeats a vertex");
    }
  } else {
    std::vector<bool> seen(*std::max_element(cyclic.begin(), cyclic.end()) + std::size_t{1});
    for (VertexId v : cyclic) {
      if (seen[v]) throw std::invalid_argument("circuit repeats a vertex");
      seen[v] = true;
    }
  }
  auto smallest = std::min_element(cyclic.begin(), cyclic.end());
  std::rotate(cyclic.begin(), smallest, cyclic.end());
  Circuit c;
  c.vertices_ = std::move(cyclic);
  return c;
}

Walk Circuit::as_walk() const {
  Walk w;
  w.vertices.reserve(vertices_.size() + 1);
  w.vertices.assign(vertices_.begin(), vertices_.end());
  w.vertices.push_back(vertices_.front());
  return w;
}

void check_walk(const Graph& g, const Walk& w) {
  if (w.vertices.size() < 2) throw ValidationError("a walk needs length >= 1");
  for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) {
    if (!g.find_edge(w.vertices[i], w.vertices[i + 1])) {
      throw ValidationError("walk step " + std::to_string(i) + " is not an edge of " + g.name());
    }
  }
}

std::vector<EdgeId> circuit_edges(const Graph& g, const Circuit& c) {
  std::vector<EdgeId> out;
  out.reserve(c.period());
  for (std::size_t k = 0; k < c.period(); ++k) out.push_back(g.edge_id(c[k], c.next(k)));
  return out;
}

std::vector<Walk> walks_from(const Graph& g, VertexId start, std::size_t length, std::size_t cap) {
  if (start >= g.vertex_count()) throw std::out_of_range("walk start is not a vertex");
  if (length == 0) throw std::invalid_argument("walk length must be >= 1");
  std::vector<Walk> out;
  // Iterative DFS; successors are sorted, so output is lexicographic.
  std::vector<VertexId> path{start};
  std::vector<std::size_t> cursor{0};
  while (!cursor.empty()) {
    const VertexId here = path.back();
    if (path.size() == length + 1) {
      if (out.size() == cap) throw CapExceeded("walks_from", out.size());
      out.push_back(Walk{path});
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    auto next = g.successors(here);
    std::size_t& k = cursor.back();
    if (k < next.size()) {
      path.push_back(next[k++]);
      cursor.push_back(0);
    } else {
      path.pop_back();
      cursor.pop_back();
    }
  }
  return out;
}

WalkImage walk_image_sets(const Graph& g, const Walk& w) {
  WalkImage image;
  image.vertices = w.vertices;
  for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) {
    image.edges.push_back(g.edge_id(w.vertices[i], w.vertices[i + 1]));
  }
  std::sort(image.vertices.begin(), image.vertices.end());
  image.vertices.erase(std::unique(image.vertices.begin(), image.vertices.end()),
                       image.vertices.end());
  std::sort(image.edges.begin(), image.edges.end());
  image.edges.erase(std::unique(image.edges.begin(), image.edges.end()), image.edges.end());
  return image;
}

WalkImage walk_image_sets(const Graph& g, const Circuit& c) {
  return walk_image_sets(g, c.as_walk());
}

Walk concatenate(const Walk& first, const Walk& second) {
  if (first.vertices.empty() || second.vertices.empty() ||
      first.vertices.back() != second.vertices.front()) {
    throw std::invalid_argument("walks do not connect");
  }
  Walk w = first;
  w.vertices.insert(w.vertices.end(), second.vertices.begin() + 1, second.vertices.end());
  return w;
}

std::string format_walk(const Graph& g, std::span<const VertexId> vertices) {
  std::string out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) out += ' ';
    out += g.vertex_name(vertices[i]);
  }
  return out;
}

}  // namespace ergodograph
