#include "ergodograph/io.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "ergodograph/errors.hpp"

namespace ergodograph {

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::size_t parse_index(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  if (text.empty()) throw ParseError(line, "expected a non-negative integer");
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw ParseError(line, "expected a non-negative integer, got '" + std::string(text) + "'");
    value = value * 10 + static_cast<std::size_t>(ch - '0');
    if (value > (1ull << 40)) throw ParseError(line, "integer out of range");
  }
  return value;
}

Rational parse_weight(std::string_view text, std::size_t line) {
  try {
    return Rational::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(line, e.what());
  }
}

void expect_count(const std::vector<std::string_view>& t, std::size_t n, std::size_t line) {
  if (t.size() != n) {
    throw ParseError(line, "'" + std::string(t[0]) + "' takes " + std::to_string(n - 1) + " argument(s)");
  }
}

// Handles one graph-block line; returns false if the directive is unknown.
bool graph_line(GraphText& g, const std::vector<std::string_view>& t, std::size_t line) {
  if (t[0] == "name") {
    expect_count(t, 2, line);
    g.name = std::string(t[1]);
  } else if (t[0] == "vertex") {
    expect_count(t, 2, line);
    g.vertices.emplace_back(t[1]);
  } else if (t[0] == "edge") {
    expect_count(t, 3, line);
    g.edges.emplace_back(std::string(t[1]), std::string(t[2]));
  } else {
    return false;
  }
  return true;
}

}  // namespace

GraphText parse_graph_text(std::istream& in) {
  GraphText g;
  std::string buffer;
  std::size_t line = 0;
  while (std::getline(in, buffer)) {
    ++line;
    const auto t = tokens(buffer);
    if (t.empty()) continue;
    if (!graph_line(g, t, line)) throw ParseError(line, "unknown directive '" + std::string(t[0]) + "'");
  }
  return g;
}

Graph build_graph(const GraphText& text) {
  return Graph::from_names(text.name, text.vertices, text.edges);
}

Graph read_graph(std::istream& in) { return build_graph(parse_graph_text(in)); }

void write_graph(std::ostream& out, const Graph& g) {
  out << "name " << g.name() << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << "vertex " << g.vertex_name(v) << '\n';
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    const std::string src = g.vertex_name(u);
    for (VertexId v : g.successors(u)) out << "edge " << src << ' ' << g.vertex_name(v) << '\n';
  }
}

TowerText parse_tower_text(std::istream& in) {
  TowerText t;
  std::string buffer;
  std::size_t line = 0;
  GraphText* open = nullptr;
  while (std::getline(in, buffer)) {
    ++line;
    const auto tok = tokens(buffer);
    if (tok.empty()) continue;
    if (open) {
      if (tok.size() == 1 && tok[0] == "}") {
        open = nullptr;
      } else if (!graph_line(*open, tok, line)) {
        throw ParseError(line, "unknown directive '" + std::string(tok[0]) + "' inside a level block");
      }
      continue;
    }
    if (tok[0] == "level") {
      if (tok.size() != 3 || tok[2] != "{") throw ParseError(line, "expected 'level <k> {'");
      const std::size_t k = parse_index(tok[1], line);
      auto [it, inserted] = t.levels.try_emplace(k);
      if (!inserted) throw ParseError(line, "level " + std::to_string(k) + " defined twice");
      it->second.name = "G" + std::to_string(k);
      open = &it->second;
    } else if (tok[0] == "map") {
      expect_count(tok, 4, line);
      const std::size_t k = parse_index(tok[1], line);
      if (k == 0) throw ParseError(line, "map levels start at 1");
      t.maps[k].emplace_back(std::string(tok[2]), std::string(tok[3]));
    } else {
      throw ParseError(line, "unknown directive '" + std::string(tok[0]) + "'");
    }
  }
  if (open) throw ParseError(line, "unterminated level block");
  return t;
}

TowerData build_tower_data(const TowerText& text) {
  TowerData data;
  std::size_t top = 0;
  if (!text.levels.empty()) top = text.levels.rbegin()->first;
  for (std::size_t k = 0; k <= top; ++k) {
    auto it = text.levels.find(k);
    if (it == text.levels.end()) {
      if (k == 0) {
        data.levels.push_back(std::make_shared<const Graph>(Graph::singleton()));
        continue;
      }
      throw ValidationError("level " + std::to_string(k) + " is missing");
    }
    data.levels.push_back(std::make_shared<const Graph>(build_graph(it->second)));
  }
  for (const auto& [k, lines] : text.maps) {
    if (k > top) throw ValidationError("map " + std::to_string(k) + " has no source level");
  }
  for (std::size_t k = 1; k <= top; ++k) {
    const Graph& source = *data.levels[k];
    const Graph& target = *data.levels[k - 1];
    auto it = text.maps.find(k);
    if (it == text.maps.end()) {
      if (k == 1 && target.vertex_count() == 1) {
        data.maps.emplace_back(source.vertex_count(), 0);
        continue;
      }
      throw ValidationError("map " + std::to_string(k) + " is missing");
    }
    constexpr VertexId kUnset = std::numeric_limits<VertexId>::max();
    std::vector<VertexId> map(source.vertex_count(), kUnset);
    for (const auto& [src, dst] : it->second) {
      auto s = source.find_vertex(src);
      auto d = target.find_vertex(dst);
      if (!s) throw ValidationError("map " + std::to_string(k) + ": unknown vertex " + src);
      if (!d) throw ValidationError("map " + std::to_string(k) + ": unknown vertex " + dst);
      if (map[*s] != kUnset) {
        throw ValidationError("map " + std::to_string(k) + ": vertex " + src + " mapped twice");
      }
      map[*s] = *d;
    }
    if (std::find(map.begin(), map.end(), kUnset) != map.end()) {
      // Leave a short map so validate_tower reports it as not total.
      map.pop_back();
    }
    data.maps.push_back(std::move(map));
  }
  return data;
}

CoverTower read_tower(std::istream& in) { return CoverTower(build_tower_data(parse_tower_text(in))); }

void write_tower(std::ostream& out, const CoverTower& t) {
  for (std::size_t k = 1; k <= t.top(); ++k) {
    const Graph& g = t.level(k);
    out << "level " << k << " {\n";
    write_graph(out, g);
    out << "}\n";
  }
  for (std::size_t k = 2; k <= t.top(); ++k) {
    const Graph& source = t.level(k);
    const Graph& target = t.level(k - 1);
    const auto& vmap = t.cover(k - 1).vmap();
    for (VertexId v = 0; v < source.vertex_count(); ++v) {
      out << "map " << k << ' ' << source.vertex_name(v) << ' ' << target.vertex_name(vmap[v]) << '\n';
    }
  }
}

namespace {

void circulation_line(Circulation& x, const std::vector<std::string_view>& t, std::size_t line,
                      std::vector<char>& seen) {
  if (t.size() != 3) throw ParseError(line, "expected '<src> <dst> <p>/<q>'");
  const Graph& g = x.host();
  auto s = g.find_vertex(t[0]);
  auto d = g.find_vertex(t[1]);
  if (!s || !d) throw ValidationError("line " + std::to_string(line) + ": unknown vertex");
  auto e = g.find_edge(*s, *d);
  if (!e) {
    throw ValidationError("line " + std::to_string(line) + ": (" + std::string(t[0]) + ", " +
                          std::string(t[1]) + ") is not an edge");
  }
  if (seen[*e]) throw ParseError(line, "edge weight given twice");
  seen[*e] = 1;
  x.set(*e, parse_weight(t[2], line));
}

}  // namespace

Circulation read_circulation(std::istream& in, const GraphPtr& host) {
  Circulation x(host);
  std::vector<char> seen(host->edge_count(), 0);
  std::string buffer;
  std::size_t line = 0;
  while (std::getline(in, buffer)) {
    ++line;
    const auto t = tokens(buffer);
    if (t.empty()) continue;
    circulation_line(x, t, line, seen);
  }
  return x;
}

void write_circulation(std::ostream& out, const Circulation& x) {
  const Graph& g = x.host();
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    EdgeId e = g.first_out_edge(u);
    for (VertexId v : g.successors(u)) {
      if (!x[e].is_zero()) {
        out << g.vertex_name(u) << ' ' << g.vertex_name(v) << ' ' << x[e].str() << '\n';
      }
      ++e;
    }
  }
}

MeasurePrefix read_prefix(std::istream& in, const CoverTower& t) {
  MeasurePrefix prefix;
  std::string buffer;
  std::size_t line = 0;
  enum class Block { none, shadow, expression } block = Block::none;
  std::size_t level = 0;
  Circulation* shadow = nullptr;
  std::vector<char> seen;
  while (std::getline(in, buffer)) {
    ++line;
    const auto tok = tokens(buffer);
    if (tok.empty()) continue;
    if (tok[0] == "level" || tok[0] == "express") {
      expect_count(tok, 2, line);
      level = parse_index(tok[1], line);
      if (level > t.top()) throw ValidationError("prefix level " + std::to_string(level) + " is above the top");
      if (tok[0] == "level") {
        auto [it, inserted] = prefix.shadows.try_emplace(level, t.level_ptr(level));
        if (!inserted) throw ParseError(line, "level block repeated");
        shadow = &it->second;
        seen.assign(t.level(level).edge_count(), 0);
        block = Block::shadow;
      } else {
        auto [it, inserted] = prefix.expressions.try_emplace(level);
        if (!inserted) throw ParseError(line, "express block repeated");
        block = Block::expression;
      }
      continue;
    }
    switch (block) {
      case Block::none:
        throw ParseError(line, "expected 'level <k>' or 'express <k>'");
      case Block::shadow:
        circulation_line(*shadow, tok, line, seen);
        break;
      case Block::expression:
        if (tok[0] != "circuit" || tok.size() != 3) throw ParseError(line, "expected 'circuit <index> <p>/<q>'");
        prefix.expressions[level].emplace_back(parse_index(tok[1], line), parse_weight(tok[2], line));
        break;
    }
  }
  return prefix;
}

void write_prefix(std::ostream& out, const MeasurePrefix& prefix) {
  for (const auto& [k, mu] : prefix.shadows) {
    out << "level " << k << '\n';
    write_circulation(out, mu);
  }
  for (const auto& [k, expr] : prefix.expressions) {
    out << "express " << k << '\n';
    for (const auto& [index, s] : expr) out << "circuit " << index << ' ' << s.str() << '\n';
  }
}

}  // namespace ergodograph
