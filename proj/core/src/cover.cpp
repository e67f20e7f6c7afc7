#include "ergodograph/cover.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ergodograph/errors.hpp"

namespace ergodograph {

GraphHom::GraphHom(GraphPtr source, GraphPtr target, std::vector<VertexId> vmap)
    : source_(std::move(source)), target_(std::move(target)), vmap_(std::move(vmap)) {
  if (!source_ || !target_) throw std::invalid_argument("homomorphism needs both graphs");
  if (vmap_.size() != source_->vertex_count()) {
    throw ValidationError("vertex map is not total: " + std::to_string(vmap_.size()) + " of " +
                          std::to_string(source_->vertex_count()) + " vertices mapped");
  }
}

std::string CoverReport::summary(const Graph& source, const Graph& target) const {
  auto name = [](const Graph& g, Edge e) {
    return "(" + g.vertex_name(e.source) + "," + g.vertex_name(e.target) + ")";
  };
  std::string out;
  auto add = [&out](const std::string& part) {
    if (!out.empty()) out += "; ";
    out += part;
  };
  if (!total) add("map sends a vertex outside the target");
  if (!homomorphism) {
    add("not a homomorphism" +
        (non_edges.empty() ? std::string() : ", e.g. " + name(source, non_edges.front())));
  }
  if (!edge_surjective) {
    add("not edge-surjective" +
        (missed.empty() ? std::string() : ", " + name(target, missed.front()) + " has no preimage"));
  }
  if (!plus_directional) {
    add("not +directional" +
        (conflicts.empty() ? std::string()
                           : ", " + name(source, conflicts.front().first) + " vs " +
                                 name(source, conflicts.front().second)));
  }
  return out.empty() ? "cover" : out;
}

CoverReport validate_cover(const GraphHom& h, std::size_t max_witnesses) {
  CoverReport report;
  const Graph& s = h.source();
  const Graph& t = h.target();
  for (VertexId img : h.vmap()) {
    if (img >= t.vertex_count()) {
      report.total = false;
      report.homomorphism = false;
      report.edge_surjective = false;
      return report;
    }
  }
  std::vector<char> hit(t.edge_count(), 0);
  for (VertexId u = 0; u < s.vertex_count(); ++u) {
    auto next = s.successors(u);
    const VertexId iu = h(u);
    for (VertexId v : next) {
      auto e = t.find_edge(iu, h(v));
      if (!e) {
        report.homomorphism = false;
        if (report.non_edges.size() < max_witnesses) report.non_edges.push_back({u, v});
      } else {
        hit[*e] = 1;
      }
      if (h(v) != h(next[0])) {
        report.plus_directional = false;
        if (report.conflicts.size() < max_witnesses) {
          report.conflicts.push_back({{u, next[0]}, {u, v}});
        }
      }
    }
  }
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    if (!hit[e]) {
      report.edge_surjective = false;
      if (report.missed.size() < max_witnesses) report.missed.push_back(t.edge(e));
    }
  }
  return report;
}

Cover::Cover(GraphHom hom) : hom_(std::move(hom)) {
  const CoverReport report = validate_cover(hom_, 1);
  if (!report.valid()) {
    throw ValidationError("map " + hom_.source().name() + " -> " + hom_.target().name() + ": " +
                          report.summary(hom_.source(), hom_.target()));
  }
}

Cover Cover::identity(GraphPtr g) {
  std::vector<VertexId> vmap(g->vertex_count());
  for (VertexId v = 0; v < vmap.size(); ++v) vmap[v] = v;
  return Cover(GraphHom(g, g, std::move(vmap)));
}

EdgeId Cover::map_edge(EdgeId e) const {
  const Edge ed = source().edge(e);
  return target().edge_id(hom_(ed.source), hom_(ed.target));
}

std::vector<EdgeId> Cover::edge_map() const {
  std::vector<EdgeId> out(source().edge_count());
  for (VertexId u = 0; u < source().vertex_count(); ++u) {
    EdgeId e = source().first_out_edge(u);
    for (VertexId v : source().successors(u)) out[e++] = target().edge_id(hom_(u), hom_(v));
  }
  return out;
}

namespace {
bool same_graph(const GraphPtr& a, const GraphPtr& b) { return a == b || *a == *b; }
}  // namespace

Cover compose_covers(std::span<const Cover> chain) {
  if (chain.empty()) throw std::invalid_argument("compose_covers needs at least one cover");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!same_graph(chain[i + 1].target_ptr(), chain[i].source_ptr())) {
      throw EndpointMismatch("cover " + std::to_string(i + 1) + " ends at " +
                             chain[i + 1].target().name() + " but cover " + std::to_string(i) +
                             " starts at " + chain[i].source().name());
    }
  }
  std::vector<VertexId> vmap = chain.back().vmap();
  for (std::size_t i = chain.size() - 1; i-- > 0;) {
    const auto& step = chain[i].vmap();
    for (VertexId& x : vmap) x = step[x];
  }
  return Cover(GraphHom(chain.back().source_ptr(), chain.front().target_ptr(), std::move(vmap)));
}

Walk map_walk(const Cover& phi, const Walk& w) {
  Walk out;
  out.vertices.reserve(w.vertices.size());
  for (VertexId v : w.vertices) out.vertices.push_back(phi(v));
  return out;
}

std::vector<Walk> projected_walks(const Cover& phi, VertexId v, std::size_t length,
                                  std::size_t cap) {
  const Graph& g = phi.source();
  if (v >= g.vertex_count()) throw std::out_of_range("start is not a vertex of the source");
  if (length == 0) throw std::invalid_argument("walk length must be >= 1");
  // image prefix -> sorted set of source vertices where some preimage walk ends
  std::map<std::vector<VertexId>, std::vector<VertexId>> frontier;
  frontier[{phi(v)}] = {v};
  for (std::size_t step = 0; step < length; ++step) {
    std::map<std::vector<VertexId>, std::vector<VertexId>> next;
    for (const auto& [prefix, ends] : frontier) {
      for (VertexId u : ends) {
        for (VertexId w : g.successors(u)) {
          std::vector<VertexId> key = prefix;
          key.push_back(phi(w));
          auto [it, inserted] = next.try_emplace(std::move(key));
          if (inserted && next.size() > cap) throw CapExceeded("projected_walks", cap);
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
  std::vector<Walk> out;
  out.reserve(frontier.size());
  for (auto& [prefix, ends] : frontier) out.push_back(Walk{prefix});
  return out;
}

}  // namespace ergodograph
