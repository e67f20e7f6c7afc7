#include "ergodograph/flows.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ergodograph/errors.hpp"

namespace ergodograph {

Circulation::Circulation(GraphPtr host) : host_(std::move(host)) {
  if (!host_) throw std::invalid_argument("circulation needs a host graph");
  weights_.resize(host_->edge_count());
}

Circulation::Circulation(GraphPtr host, std::vector<Rational> weights)
    : host_(std::move(host)), weights_(std::move(weights)) {
  if (!host_) throw std::invalid_argument("circulation needs a host graph");
  if (weights_.size() != host_->edge_count()) {
    throw std::invalid_argument("weight vector does not match the edge count");
  }
}

Rational Circulation::total() const {
  Rational sum;
  for (const auto& w : weights_) sum += w;
  return sum;
}

bool Circulation::is_nonnegative() const {
  return std::none_of(weights_.begin(), weights_.end(), [](const Rational& w) { return w.sign() < 0; });
}

bool Circulation::is_invariant() const {
  const auto residual = kirchhoff_residual(*this);
  return std::all_of(residual.begin(), residual.end(), [](const Rational& r) { return r.is_zero(); });
}

bool Circulation::is_probability() const {
  return is_nonnegative() && is_invariant() && total() == Rational(1);
}

std::size_t Circulation::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](const Rational& w) { return !w.is_zero(); }));
}

void Circulation::require_same_host(const Circulation& rhs) const {
  if (host_ != rhs.host_ && !(*host_ == *rhs.host_)) {
    throw std::invalid_argument("circulations live on different graphs");
  }
}

Circulation& Circulation::operator+=(const Circulation& rhs) {
  require_same_host(rhs);
  for (std::size_t e = 0; e < weights_.size(); ++e) weights_[e] += rhs.weights_[e];
  return *this;
}

Circulation& Circulation::operator-=(const Circulation& rhs) {
  require_same_host(rhs);
  for (std::size_t e = 0; e < weights_.size(); ++e) weights_[e] -= rhs.weights_[e];
  return *this;
}

Circulation& Circulation::operator*=(const Rational& s) {
  for (auto& w : weights_) w *= s;
  return *this;
}

bool operator==(const Circulation& a, const Circulation& b) {
  if (a.host_ != b.host_ && !(*a.host_ == *b.host_)) return false;
  return a.weights_ == b.weights_;
}

std::vector<Rational> kirchhoff_residual(const Circulation& x) {
  const Graph& g = x.host();
  std::vector<Rational> residual(g.vertex_count());
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    EdgeId e = g.first_out_edge(u);
    for (VertexId v : g.successors(u)) {
      residual[u] -= x[e];
      residual[v] += x[e];
      ++e;
    }
  }
  return residual;
}

Circulation circuit_vector(const GraphPtr& g, const Circuit& c) {
  Circulation x(g);
  for (EdgeId e : circuit_edges(*g, c)) x.set(e, 1);
  return x;
}

Circulation normalized_circuit(const GraphPtr& g, const Circuit& c) {
  Circulation x(g);
  const Rational w(1, static_cast<long>(c.period()));
  for (EdgeId e : circuit_edges(*g, c)) x.set(e, w);
  return x;
}

namespace {

int sign_of(const Rational& r) { return r.sign(); }
int sign_of(std::int64_t v) { return (v > 0) - (v < 0); }

template <class W>
std::vector<std::pair<Circuit, W>> decompose_impl(const Graph& g, std::vector<W>& x,
                                                  std::size_t cap, const char* what) {
  const std::size_t n = g.vertex_count();
  for (const auto& w : x) {
    if (sign_of(w) < 0) throw NegativeWeight(std::string(what) + ": negative edge weight");
  }
  {
    std::vector<W> residual(n, W{});
    for (VertexId u = 0; u < n; ++u) {
      EdgeId e = g.first_out_edge(u);
      for (VertexId v : g.successors(u)) {
        residual[u] -= x[e];
        residual[v] += x[e];
        ++e;
      }
    }
    for (VertexId v = 0; v < n; ++v) {
      if (sign_of(residual[v]) != 0) {
        throw NotInvariant(std::string(what) + ": balance fails at vertex " + g.vertex_name(v));
      }
    }
  }

  std::map<Circuit, W> merged;
  std::vector<std::int64_t> position(n, -1);
  std::vector<VertexId> path;
  std::size_t steps = 0;
  while (true) {
    std::optional<EdgeId> smallest;
    for (EdgeId e = 0; e < x.size(); ++e) {
      if (sign_of(x[e]) > 0 && (!smallest || x[e] < x[*smallest])) smallest = e;
    }
    if (!smallest) break;
    if (steps++ == cap) throw CapExceeded(what, cap);

    // Walk forward until a vertex repeats. Balance guarantees a positive
    // out-edge wherever positive weight arrives.
    path.clear();
    VertexId at = g.edge_target(*smallest);
    while (position[at] < 0) {
      position[at] = static_cast<std::int64_t>(path.size());
      path.push_back(at);
      EdgeId e = g.first_out_edge(at);
      const EdgeId end = e + static_cast<EdgeId>(g.out_degree(at));
      while (e < end && sign_of(x[e]) <= 0) ++e;
      if (e == end) throw std::logic_error("forward extension stalled on a balanced vector");
      at = g.edge_target(e);
    }
    const std::size_t begin = static_cast<std::size_t>(position[at]);
    std::vector<VertexId> cycle(path.begin() + static_cast<std::ptrdiff_t>(begin), path.end());
    for (VertexId v : path) position[v] = -1;

    Circuit c = Circuit::canonical(std::move(cycle));
    const auto edges = circuit_edges(g, c);
    W alpha = x[edges[0]];
    for (EdgeId e : edges) {
      if (x[e] < alpha) alpha = x[e];
    }
    for (EdgeId e : edges) x[e] -= alpha;
    auto [it, inserted] = merged.try_emplace(std::move(c), alpha);
    if (!inserted) it->second += alpha;
  }
  return {std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end())};
}

}  // namespace

std::vector<CircuitTerm> decompose_circulation(const Circulation& x, std::size_t cap) {
  std::vector<Rational> work(x.weights().begin(), x.weights().end());
  auto terms = decompose_impl(x.host(), work, cap, "decompose_circulation");
  std::vector<CircuitTerm> out;
  out.reserve(terms.size());
  for (auto& [c, w] : terms) out.push_back({std::move(c), std::move(w)});
  return out;
}

std::vector<CountTerm> decompose_counts(const Graph& g, EdgeCounts counts, std::size_t cap) {
  if (counts.size() != g.edge_count()) throw std::invalid_argument("count vector size mismatch");
  auto terms = decompose_impl(g, counts, cap, "decompose_counts");
  std::vector<CountTerm> out;
  out.reserve(terms.size());
  for (auto& [c, w] : terms) out.push_back({std::move(c), w});
  return out;
}

Circulation pushforward(const Cover& phi, const Circulation& x) {
  if (x.host_ptr() != phi.source_ptr() && !(x.host() == phi.source())) {
    throw std::invalid_argument("circulation does not live on the cover's source");
  }
  Circulation y(phi.target_ptr());
  const auto emap = phi.edge_map();
  for (EdgeId e = 0; e < emap.size(); ++e) {
    if (!x[e].is_zero()) y.add(emap[e], x[e]);
  }
  return y;
}

Rational l1_norm(const Circulation& x) {
  Rational sum;
  for (const auto& w : x.weights()) sum += abs(w);
  return sum;
}

Rational l1_distance(const Circulation& a, const Circulation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("circulations live on different graphs");
  Rational sum;
  for (std::size_t e = 0; e < a.size(); ++e) sum += abs(a[e] - b[e]);
  return sum;
}

EdgeCounts circuit_image_counts(const Graph& target, std::span<const VertexId> vmap,
                                const Circuit& c) {
  EdgeCounts counts(target.edge_count(), 0);
  const std::size_t p = c.period();
  for (std::size_t k = 0; k < p; ++k) {
    ++counts[target.edge_id(vmap[c[k]], vmap[c.next(k)])];
  }
  return counts;
}

EdgeCounts circuit_image_counts(const Cover& phi, const Circuit& c) {
  return circuit_image_counts(phi.target(), phi.vmap(), c);
}

Circulation from_counts(const GraphPtr& g, const EdgeCounts& counts, const Rational& scale) {
  if (counts.size() != g->edge_count()) throw std::invalid_argument("count vector size mismatch");
  Circulation x(g);
  for (EdgeId e = 0; e < counts.size(); ++e) {
    if (counts[e] != 0) x.set(e, scale * Rational(static_cast<long>(counts[e])));
  }
  return x;
}

}  // namespace ergodograph
