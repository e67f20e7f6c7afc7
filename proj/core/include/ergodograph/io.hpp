#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ergodograph/flows.hpp"
#include "ergodograph/graph.hpp"
#include "ergodograph/tower.hpp"

namespace ergodograph {

/// A graph block exactly as written: identifiers are not yet resolved.
struct GraphText {
  std::string name = "G";
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
};

/// Reads `# comment`, `name <id>`, `vertex <id>` and `edge <src> <dst>`
/// lines. Throws ParseError on anything else.
GraphText parse_graph_text(std::istream& in);

/// Resolves identifiers. Throws ValidationError on duplicate vertices or
/// undeclared endpoints.
Graph build_graph(const GraphText& text);

Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

struct TowerText {
  std::map<std::size_t, GraphText> levels;
  /// source level -> (source vertex, target vertex) lines
  std::map<std::size_t, std::vector<std::pair<std::string, std::string>>> maps;
};

/// Reads `level <k> {` ... `}` graph blocks and `map <k> <src> <dst>`
/// lines, where map k sends level k to level k-1.
TowerText parse_tower_text(std::istream& in);

/// Resolves a tower file. Level 0 defaults to the singleton and map 1 to
/// the constant map when absent. Throws ValidationError when levels are
/// missing, identifiers are unknown or a vertex is mapped twice; a vertex
/// left unmapped yields a short map that validate_tower reports.
TowerData build_tower_data(const TowerText& text);

CoverTower read_tower(std::istream& in);
/// Writes levels 1..N and maps 2..N; level 0 and map 1 are implied.
void write_tower(std::ostream& out, const CoverTower& t);

/// Lines `<src> <dst> <p>/<q>`; omitted edges are zero.
Circulation read_circulation(std::istream& in, const GraphPtr& host);
/// Nonzero weights in edge order.
void write_circulation(std::ostream& out, const Circulation& x);

/// `level <k>` starts a block of circulation lines for mu_k; `express <k>`
/// starts a block of `circuit <index> <p>/<q>` lines.
MeasurePrefix read_prefix(std::istream& in, const CoverTower& t);
void write_prefix(std::ostream& out, const MeasurePrefix& prefix);

}  // namespace ergodograph
