#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ergodograph/errors.hpp"
#include "ergodograph/graph.hpp"

namespace ergodograph {
namespace {

// A maximal path whose interior vertices have in- and out-degree 1.
struct Chain {
  std::uint32_t from;  // local node index
  std::uint32_t to;
  std::vector<VertexId> body;  // from-vertex followed by the interior vertices
};

// Strongly connected components of the subgraph induced by `alive`.
std::vector<std::vector<std::uint32_t>> strong_components(
    const std::vector<std::vector<std::uint32_t>>& adj, const std::vector<char>& alive) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  std::uint32_t counter = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!alive[root] || index[root] != kUnset) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < adj[f.v].size()) {
        const std::uint32_t w = adj[f.v][f.next++];
        if (!alive[w]) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

class Enumerator {
 public:
  Enumerator(const Graph& g, std::size_t cap) : g_(g), cap_(cap) {}

  std::vector<Circuit> run() {
    const std::size_t n = g_.vertex_count();
    const auto in = g_.in_degrees();
    std::vector<std::uint32_t> local(n, UINT32_MAX);
    for (VertexId v = 0; v < n; ++v) {
      if (!(in[v] == 1 && g_.out_degree(v) == 1)) {
        local[v] = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(v);
      }
    }
    std::vector<char> visited(n, 0);
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      visited[nodes_[i]] = 1;
      for (VertexId next : g_.successors(nodes_[i])) {
        Chain chain{i, 0, {nodes_[i]}};
        VertexId at = next;
        while (local[at] == UINT32_MAX) {
          visited[at] = 1;
          chain.body.push_back(at);
          at = g_.successors(at)[0];
        }
        chain.to = local[at];
        chains_.push_back(std::move(chain));
      }
    }
    // Vertices never reached from a branch node lie on isolated cycles.
    for (VertexId v = 0; v < n; ++v) {
      if (visited[v] || local[v] != UINT32_MAX) continue;
      std::vector<VertexId> cycle;
      VertexId at = v;
      do {
        visited[at] = 1;
        cycle.push_back(at);
        at = g_.successors(at)[0];
      } while (at != v);
      emit(std::move(cycle));
    }
    johnson();
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void emit(std::vector<VertexId> cyclic) {
    if (out_.size() >= cap_) throw CapExceeded("enumerate_circuits", out_.size());
    out_.push_back(Circuit::canonical(std::move(cyclic)));
  }

  // Expands a node cycle into every choice of parallel chains.
  void expand(const std::vector<std::uint32_t>& node_cycle) {
    const std::size_t k = node_cycle.size();
    std::vector<const std::vector<std::uint32_t>*> options(k);
    for (std::size_t i = 0; i < k; ++i) {
      options[i] = &parallel_[pair_key(node_cycle[i], node_cycle[(i + 1) % k])];
    }
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      std::vector<VertexId> cyclic;
      for (std::size_t i = 0; i < k; ++i) {
        const auto& body = chains_[(*options[i])[pick[i]]].body;
        cyclic.insert(cyclic.end(), body.begin(), body.end());
      }
      emit(std::move(cyclic));
      std::size_t i = 0;
      while (i < k && ++pick[i] == options[i]->size()) pick[i++] = 0;
      if (i == k) break;
    }
  }

  static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    return (std::uint64_t{a} << 32) | b;
  }

  void johnson() {
    const std::uint32_t m = static_cast<std::uint32_t>(nodes_.size());
    if (m == 0) return;
    std::vector<std::vector<std::uint32_t>> adj(m);
    for (std::uint32_t c = 0; c < chains_.size(); ++c) {
      auto& slot = parallel_[pair_key(chains_[c].from, chains_[c].to)];
      if (slot.empty()) adj[chains_[c].from].push_back(chains_[c].to);
      slot.push_back(c);
    }
    std::vector<char> alive(m, 1);
    for (std::uint32_t v = 0; v < m; ++v) {
      if (parallel_.count(pair_key(v, v))) expand({v});
      std::erase(adj[v], v);
    }

    std::vector<char> blocked(m, 0);
    std::vector<std::vector<std::uint32_t>> b_sets(m);
    std::vector<char> closed(m, 0);
    auto pending = strong_components(adj, alive);
    while (!pending.empty()) {
      std::vector<std::uint32_t> scc = std::move(pending.back());
      pending.pop_back();
      if (scc.size() < 2) continue;
      std::vector<char> in_scc(m, 0);
      for (auto v : scc) in_scc[v] = 1;
      const std::uint32_t start = scc.front();

      for (auto v : scc) {
        blocked[v] = 0;
        closed[v] = 0;
        b_sets[v].clear();
      }
      struct Frame {
        std::uint32_t v;
        std::size_t next;
      };
      std::vector<std::uint32_t> path{start};
      std::vector<Frame> stack{{start, 0}};
      blocked[start] = 1;
      while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& nbrs = adj[f.v];
        bool descended = false;
        while (f.next < nbrs.size()) {
          const std::uint32_t w = nbrs[f.next++];
          if (!in_scc[w]) continue;
          if (w == start) {
            expand(path);
            for (auto p : path) closed[p] = 1;
          } else if (!blocked[w]) {
            path.push_back(w);
            closed[w] = 0;
            blocked[w] = 1;
            stack.push_back({w, 0});
            descended = true;
            break;
          }
        }
        if (descended) continue;
        const std::uint32_t v = stack.back().v;
        if (closed[v]) {
          unblock(v, blocked, b_sets);
        } else {
          for (auto w : adj[v]) {
            if (in_scc[w] && std::find(b_sets[w].begin(), b_sets[w].end(), v) == b_sets[w].end()) {
              b_sets[w].push_back(v);
            }
          }
        }
        stack.pop_back();
        path.pop_back();
      }
      alive.assign(m, 0);
      for (auto v : scc) alive[v] = 1;
      alive[start] = 0;
      auto sub = strong_components(adj, alive);
      for (auto& c : sub) pending.push_back(std::move(c));
    }
  }

  static void unblock(std::uint32_t v, std::vector<char>& blocked,
                      std::vector<std::vector<std::uint32_t>>& b_sets) {
    std::vector<std::uint32_t> todo{v};
    while (!todo.empty()) {
      const std::uint32_t u = todo.back();
      todo.pop_back();
      if (!blocked[u]) continue;
      blocked[u] = 0;
      todo.insert(todo.end(), b_sets[u].begin(), b_sets[u].end());
      b_sets[u].clear();
    }
  }

  const Graph& g_;
  std::size_t cap_;
  std::vector<VertexId> nodes_;
  std::vector<Chain> chains_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> parallel_;
  std::vector<Circuit> out_;
};

}  // namespace

std::vector<Circuit> enumerate_circuits(const Graph& g, std::size_t cap) {
  return Enumerator(g, cap).run();
}

}  // namespace ergodograph
