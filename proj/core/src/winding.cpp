#include "ergodograph/winding.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ergodograph/errors.hpp"
#include "ergodograph/flows.hpp"
#include "ergodograph/linalg.hpp"

namespace ergodograph {

bool WindingMatrix::period_consistent() const {
  for (std::size_t i = 0; i < rows(); ++i) {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < cols(); ++j) sum += entries[i][j] * col_periods[j];
    if (sum != row_periods[i]) return false;
  }
  return true;
}

Rational NormalizedWinding::min_entry() const {
  if (entries.empty() || entries.front().empty()) throw std::logic_error("empty winding matrix");
  Rational best = entries[0][0];
  for (const auto& row : entries) {
    for (const auto& x : row) {
      if (x < best) best = x;
    }
  }
  return best;
}

bool NormalizedWinding::row_stochastic() const {
  for (const auto& row : entries) {
    Rational sum;
    for (const auto& x : row) {
      if (x.sign() < 0) return false;
      sum += x;
    }
    if (!(sum == Rational(1))) return false;
  }
  return true;
}

NormalizedWinding normalize(const WindingMatrix& m) {
  NormalizedWinding out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Rational> row;
    row.reserve(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row.push_back(Rational(static_cast<long>(m.col_periods[j])) *
                    Rational(static_cast<long>(m.entries[i][j])) /
                    Rational(static_cast<long>(m.row_periods[i])));
    }
    out.entries.push_back(std::move(row));
  }
  if (!out.row_stochastic()) throw std::logic_error("normalized winding is not row-stochastic");
  return out;
}

namespace {

// Edges of G_n grouped by which circuits of the system contain them. Two
// edges in the same group must carry the same weight in any combination.
struct SignatureSystem {
  std::map<std::vector<std::uint32_t>, std::vector<EdgeId>> groups;
  std::vector<EdgeId> uncovered;
};

SignatureSystem signatures(const Graph& g, std::span<const Circuit> lower) {
  std::vector<std::vector<std::uint32_t>> sig(g.edge_count());
  for (std::uint32_t j = 0; j < lower.size(); ++j) {
    for (EdgeId e : circuit_edges(g, lower[j])) sig[e].push_back(j);
  }
  SignatureSystem out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (sig[e].empty()) {
      out.uncovered.push_back(e);
    } else {
      out.groups[std::move(sig[e])].push_back(e);
    }
  }
  return out;
}

std::vector<std::int64_t> solve_row(const SignatureSystem& sys, std::size_t cols,
                                    const EdgeCounts& counts, std::size_t row) {
  auto fail = [row](const std::string& why) {
    return NonIntegralDecomposition("pushforward of circuit " + std::to_string(row) + " " + why);
  };
  for (EdgeId e : sys.uncovered) {
    if (counts[e] != 0) throw fail("uses an edge outside the circuit system");
  }
  RationalMatrix a;
  std::vector<Rational> b;
  for (const auto& [sig, edges] : sys.groups) {
    for (EdgeId e : edges) {
      if (counts[e] != counts[edges.front()]) throw fail("is not a combination of the system");
    }
    std::vector<Rational> eq(cols);
    for (auto j : sig) eq[j] = 1;
    a.push_back(std::move(eq));
    b.emplace_back(static_cast<long>(counts[edges.front()]));
  }
  auto s = solve_linear(a, b);
  if (!s) throw fail("is not a combination of the system");
  std::vector<std::int64_t> out;
  for (const auto& x : *s) {
    if (!x.is_integer() || x.sign() < 0) {
      throw fail("needs coefficient " + x.str() + ", not a nonnegative integer");
    }
    out.push_back(x.to_int64());
  }
  return out;
}

}  // namespace

Winding compute_winding(const CoverTower& t, std::size_t n, std::span<const Circuit> upper,
                        std::span<const Circuit> lower, std::size_t cap) {
  if (n >= t.top()) throw std::out_of_range("compute_winding: need n < top");
  const Graph& gn = t.level(n);
  const Cover& phi = t.cover(n);
  if (lower.empty() || upper.empty()) throw std::invalid_argument("empty circuit system");

  std::map<Circuit, std::size_t> column_of;
  for (std::size_t j = 0; j < lower.size(); ++j) column_of.emplace(lower[j], j);
  std::optional<SignatureSystem> sys;

  Winding w;
  WindingMatrix& m = w.counts;
  m.level = n;
  for (const auto& c : lower) m.col_periods.push_back(static_cast<std::int64_t>(c.period()));
  for (std::size_t i = 0; i < upper.size(); ++i) {
    const Circuit& c = upper[i];
    m.row_periods.push_back(static_cast<std::int64_t>(c.period()));
    EdgeCounts counts = circuit_image_counts(gn, phi.vmap(), c);
    std::vector<std::int64_t> row(lower.size(), 0);
    bool greedy_ok = true;
    for (const auto& term : decompose_counts(gn, counts, cap)) {
      auto it = column_of.find(term.circuit);
      if (it == column_of.end()) {
        greedy_ok = false;
        break;
      }
      row[it->second] += term.multiplicity;
    }
    if (!greedy_ok) {
      if (!sys) sys = signatures(gn, lower);
      row = solve_row(*sys, lower.size(), counts, i);
    }
    m.entries.push_back(std::move(row));
  }
  if (!m.period_consistent()) throw std::logic_error("winding rows violate period consistency");

  if (!sys) sys = signatures(gn, lower);
  RationalMatrix distinct;
  for (const auto& [sig, edges] : sys->groups) {
    std::vector<Rational> r(lower.size());
    for (auto j : sig) r[j] = 1;
    distinct.push_back(std::move(r));
  }
  m.representation_dependent = rational_rank(std::move(distinct)) < lower.size();
  w.normalized = normalize(m);
  return w;
}

Winding compute_winding(const CoverTower& t, std::size_t n, std::size_t cap) {
  return compute_winding(t, n, t.circuits(n + 1, cap), t.circuits(n, cap), cap);
}

ContractionStep contraction_step(std::span<const Rational> x, const NormalizedWinding& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("contraction_step: x has the wrong length");
  Rational sum;
  for (const auto& v : x) sum += v;
  if (!sum.is_zero()) throw NotMeanZero("contraction_step: entries of x sum to " + sum.str());
  ContractionStep out;
  out.y.assign(m.cols(), Rational());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out.y[j] += x[i] * m.entries[i][j];
  }
  Rational ysum;
  for (const auto& v : x) out.x_norm += abs(v);
  for (const auto& v : out.y) {
    out.y_norm += abs(v);
    ysum += v;
  }
  out.factor = Rational(1) - Rational(static_cast<long>(m.cols())) * m.min_entry();
  out.mean_zero_preserved = ysum.is_zero();
  out.bound_holds = out.y_norm <= out.factor * out.x_norm;
  return out;
}

namespace {

std::vector<Circuit> pick(const std::vector<Circuit>& all, const std::vector<std::size_t>& idx) {
  std::vector<Circuit> out;
  for (std::size_t i : idx) {
    if (i >= all.size()) throw std::out_of_range("circuit system names a missing circuit");
    out.push_back(all[i]);
  }
  return out;
}

}  // namespace

Certificate certify_unique_ergodicity(const CoverTower& t, std::size_t n, std::size_t depth,
                                      const std::vector<std::vector<std::size_t>>& systems,
                                      std::size_t cap) {
  if (!(n < depth && depth <= t.top())) throw std::out_of_range("certify: need n < depth <= top");
  if (systems.size() != depth - n + 1) {
    throw std::invalid_argument("certify: need one circuit system per level from n to depth");
  }
  Certificate cert;
  cert.n = n;
  cert.depth = depth;
  cert.product = 1;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    if (systems[k].size() != t.circuits(n + k, cap).size()) cert.full_systems = false;
  }
  for (std::size_t i = n; i < depth; ++i) {
    const auto upper = pick(t.circuits(i + 1, cap), systems[i + 1 - n]);
    const auto lower = pick(t.circuits(i, cap), systems[i - n]);
    const Winding w = compute_winding(t, i, upper, lower, cap);
    CertificateRow row;
    row.level = i;
    row.d = w.normalized.cols();
    row.eps = w.normalized.min_entry();
    if (row.eps.is_zero()) {
      throw NotApplicable("normalized winding at level " + std::to_string(i) + " has a zero entry");
    }
    row.factor = Rational(1) - Rational(static_cast<long>(row.d)) * row.eps;
    cert.product *= row.factor;
    row.running = cert.product;
    cert.rows.push_back(std::move(row));
  }
  std::vector<Circulation> base;
  for (std::size_t j : systems[0]) {
    base.push_back(normalized_circuit(t.level_ptr(n), t.circuits(n, cap).at(j)));
  }
  cert.base_diameter = diameter(base);
  cert.bound = cert.base_diameter * cert.product;
  cert.measured_diameter = simplex_diameter(t, depth, n, cap);
  cert.consistent = cert.measured_diameter <= cert.bound;
  cert.note = "finite bound only: the product over levels " + std::to_string(n) + ".." +
              std::to_string(depth - 1) +
              " is certified; vanishing of the infinite product is not claimed";
  if (!cert.full_systems) {
    cert.note += "; assumes the supplied circuit systems express all invariant measures";
  }
  return cert;
}

Certificate certify_unique_ergodicity(const CoverTower& t, std::size_t n, std::size_t depth,
                                      std::size_t cap) {
  if (!(n < depth && depth <= t.top())) throw std::out_of_range("certify: need n < depth <= top");
  std::vector<std::vector<std::size_t>> systems;
  for (std::size_t k = n; k <= depth; ++k) {
    std::vector<std::size_t> all(t.circuits(k, cap).size());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    systems.push_back(std::move(all));
  }
  return certify_unique_ergodicity(t, n, depth, systems, cap);
}

}  // namespace ergodograph
