#include "ergodograph/independence.hpp"

#include <algorithm>
#include <stdexcept>

#include "ergodograph/errors.hpp"

namespace ergodograph {

bool PrivateEdgeReport::independent() const {
  return std::all_of(private_edges.begin(), private_edges.end(),
                     [](const auto& e) { return e.has_value(); });
}

PrivateEdgeReport private_edge_report(const Graph& g, std::size_t cap) {
  return private_edge_report(g, enumerate_circuits(g, cap));
}

PrivateEdgeReport private_edge_report(const Graph& g, std::vector<Circuit> circuits) {
  PrivateEdgeReport report;
  std::vector<std::uint32_t> tally(g.edge_count(), 0);
  std::vector<std::vector<EdgeId>> edges;
  edges.reserve(circuits.size());
  for (const auto& c : circuits) {
    edges.push_back(circuit_edges(g, c));
    for (EdgeId e : edges.back()) ++tally[e];
  }
  for (auto& list : edges) {
    std::sort(list.begin(), list.end());
    auto it = std::find_if(list.begin(), list.end(), [&](EdgeId e) { return tally[e] == 1; });
    report.private_edges.push_back(it == list.end() ? std::nullopt : std::optional<EdgeId>(*it));
  }
  report.circuits = std::move(circuits);
  return report;
}

std::size_t rational_rank(std::span<const Circulation> vectors) {
  RationalMatrix rows;
  rows.reserve(vectors.size());
  for (const auto& x : vectors) {
    if (x.size() != vectors.front().size()) {
      throw std::invalid_argument("rational_rank: vectors live on different graphs");
    }
    rows.emplace_back(x.weights().begin(), x.weights().end());
  }
  return rational_rank(std::move(rows));
}

RationalMatrix circuit_matrix(const Graph& g, std::span<const Circuit> circuits) {
  RationalMatrix rows(circuits.size(), std::vector<Rational>(g.edge_count()));
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    for (EdgeId e : circuit_edges(g, circuits[i])) rows[i][e] = 1;
  }
  return rows;
}

std::optional<DependencyExpression> express_dependency(const Graph& g,
                                                       std::span<const Circuit> circuits,
                                                       std::size_t target) {
  if (target >= circuits.size()) throw std::out_of_range("express_dependency: bad circuit index");
  std::vector<std::vector<EdgeId>> edges;
  std::vector<std::uint32_t> tally(g.edge_count(), 0);
  for (const auto& c : circuits) {
    edges.push_back(circuit_edges(g, c));
    for (EdgeId e : edges.back()) ++tally[e];
  }
  for (EdgeId e : edges[target]) {
    if (tally[e] == 1) return std::nullopt;
  }

  // One equation per edge touched by any circuit; columns are the others.
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    if (i != target) others.push_back(i);
  }
  std::vector<std::int64_t> row_of(g.edge_count(), -1);
  std::size_t used = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (tally[e] > 0) row_of[e] = static_cast<std::int64_t>(used++);
  }
  RationalMatrix a(used, std::vector<Rational>(others.size()));
  std::vector<Rational> b(used);
  for (std::size_t j = 0; j < others.size(); ++j) {
    for (EdgeId e : edges[others[j]]) a[static_cast<std::size_t>(row_of[e])][j] = 1;
  }
  for (EdgeId e : edges[target]) b[static_cast<std::size_t>(row_of[e])] = 1;
  auto s = solve_linear(a, b);
  if (!s) throw InfeasibleSystem("circuit has no private edge yet is not a combination of the others");
  DependencyExpression out;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (!(*s)[j].is_zero()) out.emplace_back(others[j], (*s)[j]);
  }
  return out;
}

std::vector<std::size_t> select_basis(const Graph& g, std::span<const Circuit> circuits) {
  const RationalMatrix all = circuit_matrix(g, circuits);
  std::vector<std::size_t> basis;
  RationalMatrix kept;
  for (std::size_t i = 0; i < all.size(); ++i) {
    kept.push_back(all[i]);
    if (rational_rank(kept) == kept.size()) {
      basis.push_back(i);
    } else {
      kept.pop_back();
    }
  }
  return basis;
}

std::optional<std::vector<Rational>> nonnegative_solution(const RationalMatrix& columns,
                                                          const std::vector<Rational>& target) {
  const std::size_t k = columns.size();
  const std::size_t rows = target.size();
  if (k > 20) throw std::invalid_argument("nonnegative_solution: too many columns to enumerate");
  // Every feasible system has a basic feasible solution, whose support is
  // a set of linearly independent columns.
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (1u << j)) chosen.push_back(j);
    }
    RationalMatrix a(rows, std::vector<Rational>(chosen.size()));
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      for (std::size_t r = 0; r < rows; ++r) a[r][j] = columns[chosen[j]][r];
    }
    if (!chosen.empty()) {
      RationalMatrix t(chosen.size());
      for (std::size_t j = 0; j < chosen.size(); ++j) t[j] = columns[chosen[j]];
      if (rational_rank(t) != chosen.size()) continue;
    }
    auto s = solve_linear(a, target);
    if (!s) continue;
    if (std::any_of(s->begin(), s->end(), [](const Rational& r) { return r.sign() < 0; })) continue;
    std::vector<Rational> full(k);
    for (std::size_t j = 0; j < chosen.size(); ++j) full[chosen[j]] = (*s)[j];
    return full;
  }
  return std::nullopt;
}

}  // namespace ergodograph
