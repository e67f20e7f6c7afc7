#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ergodograph/builders.hpp"
#include "ergodograph/errors.hpp"
#include "ergodograph/independence.hpp"
#include "ergodograph/io.hpp"
#include "ergodograph/tower.hpp"
#include "ergodograph/winding.hpp"

namespace ergodograph::cli {

namespace {

constexpr std::size_t kDefaultCap = 100000;

// Unreadable input file.
class InputError : public Error {
 public:
  using Error::Error;
};

std::size_t cap_from_env() {
  const char* raw = std::getenv("ERGODOGRAPH_CAP");
  if (!raw || !*raw) return kDefaultCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) throw ParseError("ERGODOGRAPH_CAP must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

GraphPtr load_graph(const std::string& path) {
  auto in = open_in(path);
  return std::make_shared<const Graph>(read_graph(in));
}

CoverTower load_tower(const std::string& path) {
  auto in = open_in(path);
  return read_tower(in);
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("expected a comma-separated list of non-negative integers, got '" + text + "'");
    }
    out.push_back(std::stoull(item));
  }
  return out;
}

// Rows separated by ';', entries by ','.
std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<std::string> cells;
    std::stringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string circuit_id(std::size_t i) { return "c" + std::to_string(i); }

struct Context {
  std::ostream& out;
  std::size_t cap = kDefaultCap;
  bool approx = false;

  // Exact value, followed by a decimal column when --approx is set.
  std::string q(const Rational& r) const {
    if (!approx) return r.str();
    std::ostringstream s;
    s << r.str() << "\t~" << std::setprecision(12) << r.to_double();
    return s.str();
  }
};

std::string expression_text(std::size_t target, const DependencyExpression& expr) {
  std::string s = circuit_id(target) + " =";
  bool first = true;
  for (const auto& [index, coef] : expr) {
    const bool negative = coef.sign() < 0;
    const Rational mag = abs(coef);
    if (first) {
      s += negative ? " -" : "";
    } else {
      s += negative ? " -" : " +";
    }
    s += " ";
    if (!(mag == Rational(1))) s += mag.str() + " ";
    s += circuit_id(index);
    first = false;
  }
  return s;
}

// ---- commands ----

int cmd_validate_graph(const Context& ctx, const std::string& path) {
  auto in = open_in(path);
  const GraphText text = parse_graph_text(in);
  ValidationReport r = validate_graph(text.vertices, text.edges);
  std::optional<std::string> problem;
  try {
    (void)build_graph(text);
  } catch (const ValidationError& e) {
    problem = e.what();
  }
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& x : items) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  ctx.out << "graph\t" << text.name << '\n';
  ctx.out << "vertices\t" << text.vertices.size() << '\n';
  ctx.out << "edges\t" << text.edges.size() << '\n';
  if (!r.missing_in.empty()) ctx.out << "missing_in\t" << join(r.missing_in) << '\n';
  if (!r.missing_out.empty()) ctx.out << "missing_out\t" << join(r.missing_out) << '\n';
  if (!r.undeclared_edges.empty()) {
    std::vector<std::string> pairs;
    for (const auto& [a, b] : r.undeclared_edges) pairs.push_back("(" + a + "," + b + ")");
    ctx.out << "undeclared\t" << join(pairs) << '\n';
  }
  if (problem && r.undeclared_edges.empty()) ctx.out << "problem\t" << *problem << '\n';
  const bool ok = r.valid() && !problem;
  ctx.out << "result\t" << (ok ? "valid" : "invalid") << '\n';
  return ok ? kOk : kValidationFailure;
}

int cmd_validate_tower(const Context& ctx, const std::string& path) {
  auto in = open_in(path);
  const TowerText text = parse_tower_text(in);
  for (const auto& [k, g] : text.levels) {
    const auto r = validate_graph(g.vertices, g.edges);
    if (!r.undeclared_edges.empty()) {
      const auto& [a, b] = r.undeclared_edges.front();
      ctx.out << "problem\tlevel " << k << ": edge (" << a << "," << b << ") uses an undeclared vertex\n";
      ctx.out << "result\tinvalid\n";
      return kValidationFailure;
    }
  }
  TowerData data;
  try {
    data = build_tower_data(text);
  } catch (const ValidationError& e) {
    ctx.out << "problem\t" << e.what() << '\n' << "result\tinvalid\n";
    return kValidationFailure;
  }
  const TowerReport report = validate_tower(data);
  ctx.out << "level\tvertices\tedges\tgraph\tcover\n";
  for (std::size_t k = 0; k < data.levels.size(); ++k) {
    ctx.out << k << '\t' << data.levels[k]->vertex_count() << '\t' << data.levels[k]->edge_count()
            << '\t' << (report.graphs[k].valid() ? "ok" : "invalid") << '\t';
    if (k == 0) {
      ctx.out << "-";
    } else if (k - 1 < report.covers.size() && report.covers[k - 1]) {
      const auto& c = *report.covers[k - 1];
      ctx.out << (c.valid() ? "ok" : "invalid");
      if (!c.plus_directional && !c.conflicts.empty()) {
        const auto& [e1, e2] = c.conflicts.front();
        const Graph& g = *data.levels[k];
        ctx.out << "\tconflict (" << g.vertex_name(e1.source) << "," << g.vertex_name(e1.target)
                << ") (" << g.vertex_name(e2.source) << "," << g.vertex_name(e2.target) << ")";
      }
    } else {
      ctx.out << "invalid";
    }
    ctx.out << '\n';
  }
  for (const auto& p : report.problems) ctx.out << "problem\t" << p << '\n';
  ctx.out << "result\t" << (report.valid() ? "valid" : "invalid") << "\tup to depth "
          << data.levels.size() - 1 << '\n';
  return report.valid() ? kOk : kValidationFailure;
}

int cmd_circuits(const Context& ctx, const std::string& path) {
  const GraphPtr g = load_graph(path);
  const auto circuits = enumerate_circuits(*g, ctx.cap);
  ctx.out << "id\tperiod\tvertices\n";
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    ctx.out << circuit_id(i) << '\t' << circuits[i].period() << '\t'
            << format_walk(*g, circuits[i].vertices()) << '\n';
  }
  ctx.out << "count\t" << circuits.size() << '\n';
  return kOk;
}

int cmd_decompose(const Context& ctx, const std::string& graph_path, const std::string& flow_path) {
  const GraphPtr g = load_graph(graph_path);
  auto in = open_in(flow_path);
  const Circulation x = read_circulation(in, g);
  const auto terms = decompose_circulation(x, ctx.cap);
  Circulation sum(g);
  ctx.out << "term\tcoefficient\tperiod\tvertices\n";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    ctx.out << 't' << i << '\t' << ctx.q(terms[i].coefficient) << '\t' << terms[i].circuit.period()
            << '\t' << format_walk(*g, terms[i].circuit.vertices()) << '\n';
    sum += terms[i].coefficient * circuit_vector(g, terms[i].circuit);
  }
  ctx.out << "support\t" << x.support_size() << '\n';
  ctx.out << "reconstructs\t" << (sum == x ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_simplex(const Context& ctx, const std::string& path, std::size_t from, std::size_t to,
                bool diameter_only) {
  const CoverTower t = load_tower(path);
  const auto points = simplex_image(t, from, to, ctx.cap);
  if (!diameter_only) {
    const Graph& g = t.level(to);
    ctx.out << "circuit\tsrc\tdst\tweight\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (VertexId u = 0; u < g.vertex_count(); ++u) {
        EdgeId e = g.first_out_edge(u);
        for (VertexId v : g.successors(u)) {
          if (!points[i][e].is_zero()) {
            ctx.out << circuit_id(i) << '\t' << g.vertex_name(u) << '\t' << g.vertex_name(v) << '\t'
                    << ctx.q(points[i][e]) << '\n';
          }
          ++e;
        }
      }
    }
  }
  ctx.out << "diameter\t" << ctx.q(diameter(points)) << '\n';
  return kOk;
}

int cmd_minimality(const Context& ctx, const std::string& path, std::size_t n, std::size_t m_max,
                   const std::string& mode_text) {
  MinimalityMode mode;
  std::size_t length = 0;
  if (mode_text == "edges") {
    mode = MinimalityMode::edges;
  } else if (mode_text == "vertices") {
    mode = MinimalityMode::vertices;
  } else if (mode_text.rfind("walks:", 0) == 0) {
    mode = MinimalityMode::walks;
    const auto v = parse_list(mode_text.substr(6));
    if (v.size() != 1 || v[0] == 0) throw ParseError("walks mode needs a positive length, e.g. walks:3");
    length = v[0];
  } else {
    throw ParseError("mode must be edges, vertices or walks:L");
  }
  const CoverTower t = load_tower(path);
  const auto r = minimality_scan(t, n, m_max, mode, length, ctx.cap);
  ctx.out << "m\tpass\tmissing\twitness\n";
  for (const auto& row : r.rows) {
    ctx.out << row.m << '\t' << (row.pass ? "yes" : "no") << '\t' << row.missing << '\t';
    if (row.pass) {
      ctx.out << '-';
    } else {
      if (row.witness_circuit) ctx.out << circuit_id(*row.witness_circuit) << ": ";
      ctx.out << row.witness;
    }
    ctx.out << '\n';
  }
  ctx.out << "passing_from\t" << (r.passing_from ? std::to_string(*r.passing_from) : "-") << '\n';
  const bool failed = std::any_of(r.rows.begin(), r.rows.end(), [](const auto& x) { return !x.pass; });
  ctx.out << "witness\t" << (!failed ? "none" : r.structural_witness ? "structural" : "evidence") << '\n';
  ctx.out << "scope\tup to depth " << m_max << '\n';
  return kOk;
}

int cmd_independence(const Context& ctx, const std::string& path) {
  const GraphPtr g = load_graph(path);
  const auto circuits = enumerate_circuits(*g, ctx.cap);
  const auto report = private_edge_report(*g, circuits);
  ctx.out << "circuit\tstatus\tprivate_edge\tdependency\n";
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const auto& pe = report.private_edges[i];
    ctx.out << circuit_id(i) << '\t' << (pe ? "independent" : "dependent") << '\t'
            << (pe ? g->edge_label(*pe) : "-") << '\t';
    if (pe) {
      ctx.out << '-';
    } else {
      ctx.out << expression_text(i, *express_dependency(*g, circuits, i));
    }
    ctx.out << '\n';
  }
  const std::size_t rank = rational_rank(circuit_matrix(*g, circuits));
  ctx.out << "rank\t" << rank << '\n';
  ctx.out << "circuits\t" << circuits.size() << '\n';
  ctx.out << "system\t" << (report.independent() ? "independent" : "dependent") << '\n';
  std::string basis;
  for (auto i : select_basis(*g, circuits)) basis += (basis.empty() ? "" : " ") + circuit_id(i);
  ctx.out << "basis\t" << basis << '\n';
  return kOk;
}

std::vector<std::size_t> parse_system(const std::string& text) {
  std::vector<std::size_t> out;
  for (auto v : parse_list(text)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

int cmd_winding(const Context& ctx, const std::string& path, std::size_t level,
                const std::string& system) {
  const CoverTower t = load_tower(path);
  std::vector<Circuit> upper = t.circuits(level + 1, ctx.cap);
  std::vector<Circuit> lower = t.circuits(level, ctx.cap);
  std::vector<std::size_t> rows(upper.size()), cols(lower.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  if (!system.empty()) {
    rows = cols = parse_system(system);
    std::vector<Circuit> u, l;
    for (auto i : rows) u.push_back(upper.at(i));
    for (auto j : cols) l.push_back(lower.at(j));
    upper = std::move(u);
    lower = std::move(l);
  }
  const Winding w = compute_winding(t, level, upper, lower, ctx.cap);
  ctx.out << "# rows: circuits of level " << level + 1 << "; columns: circuits of level " << level << '\n';
  ctx.out << "matrix\tm";
  for (auto j : cols) ctx.out << '\t' << circuit_id(j);
  ctx.out << "\tperiod\n";
  for (std::size_t i = 0; i < w.counts.rows(); ++i) {
    ctx.out << circuit_id(rows[i]);
    for (auto x : w.counts.entries[i]) ctx.out << '\t' << x;
    ctx.out << '\t' << w.counts.row_periods[i] << '\n';
  }
  ctx.out << "period";
  for (auto p : w.counts.col_periods) ctx.out << '\t' << p;
  ctx.out << '\n';
  ctx.out << "matrix\tmbar";
  for (auto j : cols) ctx.out << '\t' << circuit_id(j);
  ctx.out << '\n';
  for (std::size_t i = 0; i < w.normalized.rows(); ++i) {
    ctx.out << circuit_id(rows[i]);
    for (const auto& x : w.normalized.entries[i]) ctx.out << '\t' << x.str();
    ctx.out << '\n';
  }
  ctx.out << "epsilon\t" << ctx.q(w.normalized.min_entry()) << '\n';
  ctx.out << "representation\t" << (w.counts.representation_dependent ? "dependent" : "unique") << '\n';
  return kOk;
}

int cmd_certify(const Context& ctx, const std::string& path, std::size_t n, std::size_t depth,
                const std::string& system) {
  const CoverTower t = load_tower(path);
  Certificate cert;
  if (system.empty()) {
    cert = certify_unique_ergodicity(t, n, depth, ctx.cap);
  } else {
    std::vector<std::vector<std::size_t>> systems(depth - n + 1, parse_system(system));
    cert = certify_unique_ergodicity(t, n, depth, systems, ctx.cap);
  }
  ctx.out << "i\td_i\teps_i\tfactor\trunning\n";
  for (const auto& row : cert.rows) {
    ctx.out << row.level << '\t' << row.d << '\t' << row.eps.str() << '\t' << row.factor.str() << '\t'
            << ctx.q(row.running) << '\n';
  }
  ctx.out << "product\t" << ctx.q(cert.product) << '\n';
  ctx.out << "base_diameter\t" << ctx.q(cert.base_diameter) << '\n';
  ctx.out << "bound\t" << ctx.q(cert.bound) << '\n';
  ctx.out << "measured_diameter\t" << ctx.q(cert.measured_diameter) << '\n';
  ctx.out << "consistent\t" << (cert.consistent ? "yes" : "no") << '\n';
  ctx.out << "systems\t" << (cert.full_systems ? "full" : "restricted") << '\n';
  ctx.out << "note\t" << cert.note << '\n';
  return kOk;
}

int cmd_mass_ratio(const Context& ctx, const std::string& tower_path, const std::string& prefix_path,
                   std::size_t base, std::size_t deep, const std::string& eps_text) {
  const Rational eps = Rational::parse(eps_text);
  const CoverTower t = load_tower(tower_path);
  auto in = open_in(prefix_path);
  const MeasurePrefix prefix = read_prefix(in, t);
  if (auto problem = check_prefix(t, prefix, ctx.cap)) throw ValidationError(*problem);
  const Rational ratio = ergodic_mass_ratio(t, prefix, base, deep, eps, ctx.cap);
  const Circulation mu = prefix_shadow(t, prefix, base, ctx.cap);
  const auto images = simplex_image(t, deep, base, ctx.cap);
  auto it = prefix.expressions.find(deep);
  ctx.out << "circuit\tcoefficient\tdistance\twithin\n";
  for (const auto& [index, s] : it->second) {
    const Rational d = l1_distance(mu, images.at(index));
    ctx.out << circuit_id(index) << '\t' << s.str() << '\t' << ctx.q(d) << '\t' << (d <= eps ? "yes" : "no")
            << '\n';
  }
  ctx.out << "mass_ratio\t" << ctx.q(ratio) << '\n';
  return kOk;
}

int cmd_candidates(const Context& ctx, const std::string& path, std::size_t n, std::size_t m_lo,
                   std::size_t m_hi, const std::string& tol_text) {
  const Rational tol = Rational::parse(tol_text);
  const CoverTower t = load_tower(path);
  const auto report = ergodic_candidates(t, n, m_lo, m_hi, tol, ctx.cap);
  ctx.out << "cluster\tmembers\ttrajectory\n";
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    const auto& c = report.clusters[k];
    std::string members, trajectory;
    for (auto i : c.members) members += (members.empty() ? "" : " ") + circuit_id(i);
    for (std::size_t m = m_lo; m <= m_hi; ++m) {
      trajectory += (m == m_lo ? "" : " | ") + std::to_string(m) + ":";
      for (auto i : c.trajectory[m - m_lo]) trajectory += " " + circuit_id(i);
    }
    ctx.out << 'k' << k << '\t' << members << '\t' << trajectory << '\n';
  }
  std::string between;
  for (auto i : report.between) between += (between.empty() ? "" : " ") + circuit_id(i);
  ctx.out << "between\t" << (between.empty() ? "-" : between) << '\n';
  std::vector<std::size_t> sizes;
  for (std::size_t m = m_lo; m <= m_hi; ++m) sizes.push_back(t.circuits(m, ctx.cap).size());
  const auto bound = ergodic_count_upper_bound(sizes, &report);
  ctx.out << "bound\t" << bound.k << '\n';
  ctx.out << "refined_bound\t" << (bound.refined ? std::to_string(*bound.refined) : "-") << '\n';
  ctx.out << "annotation\t" << bound.annotation << '\n';
  ctx.out << "scope\tevidence up to depth " << m_hi << '\n';
  return kOk;
}

int write_built(const Context& ctx, const CoverTower& t, const std::string& path) {
  {
    auto out = open_out(path);
    write_tower(out, t);
    if (!out) throw InputError("failed writing '" + path + "'");
  }
  ctx.out << "level\tvertices\tedges\n";
  for (std::size_t k = 0; k <= t.top(); ++k) {
    ctx.out << k << '\t' << t.level(k).vertex_count() << '\t' << t.level(k).edge_count() << '\n';
  }
  ctx.out << "written\t" << path << '\n';
  return kOk;
}

int cmd_extract(const Context& ctx, const std::string& path, std::size_t level, const std::string& out_path) {
  const CoverTower t = load_tower(path);
  auto out = open_out(out_path);
  write_graph(out, t.level(level));
  ctx.out << "written\t" << out_path << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of graph-cover towers", "ergodograph"};
  app.require_subcommand(1);
  app.fallthrough();
  bool approx = false;
  std::size_t cap_flag = 0;
  app.add_flag("--approx", approx, "Add a decimal column next to exact values (non-authoritative)");
  app.add_option("--cap", cap_flag, "Enumeration cap (default: ERGODOGRAPH_CAP or 100000)");

  std::string graph, tower, flow, prefix, mode = "edges", eps, tol, system, out_path;
  std::size_t from = 0, to = 0, n = 0, m = 0, mmax = 0, depth = 0, level = 0;
  bool diameter_only = false;

  auto* validate = app.add_subcommand("validate", "Check a graph or a cover tower");
  auto* vg = validate->add_option("--graph", graph, "Graph file");
  auto* vt = validate->add_option("--tower", tower, "Tower file");
  vg->excludes(vt);

  auto* circuits = app.add_subcommand("circuits", "Enumerate circuits of a graph");
  circuits->add_option("--graph", graph)->required();

  auto* decompose = app.add_subcommand("decompose", "Split a circulation into circuits");
  decompose->add_option("--graph", graph)->required();
  decompose->add_option("--flow", flow)->required();

  auto* simplex = app.add_subcommand("simplex", "Images of normalized circuits between levels");
  simplex->add_option("--tower", tower)->required();
  simplex->add_option("--from", from, "Deep level m")->required();
  simplex->add_option("--to", to, "Base level n")->required();
  simplex->add_flag("--diameter", diameter_only, "Print only the L1 diameter");

  auto* minimality = app.add_subcommand("minimality", "Finite-depth minimality scan");
  minimality->add_option("--tower", tower)->required();
  minimality->add_option("--n", n)->required();
  minimality->add_option("--mmax", mmax)->required();
  minimality->add_option("--mode", mode, "edges, vertices or walks:L");

  auto* independence = app.add_subcommand("independence", "Private edges and circuit dependencies");
  independence->add_option("--graph", graph)->required();

  auto* winding = app.add_subcommand("winding", "Winding matrix of one cover");
  winding->add_option("--tower", tower)->required();
  winding->add_option("--level", level, "Level n of phi_n : G_{n+1} -> G_n")->required();
  winding->add_option("--system", system, "Circuit indices used at both levels, e.g. 0,3");

  auto* certify = app.add_subcommand("certify", "Contraction certificate for unique ergodicity");
  certify->add_option("--tower", tower)->required();
  certify->add_option("--n", n)->required();
  certify->add_option("--depth", depth)->required();
  certify->add_option("--system", system, "Circuit indices used at every level, e.g. 0,3");

  auto* mass = app.add_subcommand("mass-ratio", "Mass of expression circuits near a measure shadow");
  mass->add_option("--tower", tower)->required();
  mass->add_option("--prefix", prefix)->required();
  mass->add_option("--m", m, "Base level")->required();
  mass->add_option("--n", n, "Deep level carrying the expression")->required();
  mass->add_option("--eps", eps)->required();

  auto* candidates = app.add_subcommand("candidates", "Cluster circuit images as ergodic candidates");
  candidates->add_option("--tower", tower)->required();
  candidates->add_option("--n", n)->required();
  candidates->add_option("--from", from, "m_lo")->required();
  candidates->add_option("--to", to, "m_hi")->required();
  candidates->add_option("--tol", tol)->required();

  auto* extract = app.add_subcommand("extract", "Write one level of a tower as a graph file");
  extract->add_option("--tower", tower)->required();
  extract->add_option("--level", level)->required();
  extract->add_option("--out", out_path)->required();

  auto* build = app.add_subcommand("build", "Construct example towers");
  build->require_subcommand(1);
  std::size_t levels = 0, base = 2;
  std::string p_text, periods_text;
  std::uint64_t l1 = 2, d1 = 1;
  std::vector<std::string> windings, targets, parents;
  auto* odometer = build->add_subcommand("odometer", "Cycles of length base^n");
  odometer->add_option("--levels", levels)->required();
  odometer->add_option("--base", base);
  odometer->add_option("--out", out_path)->required();
  auto* ex63 = build->add_subcommand("example63", "Two ergodic measures, dependent circuits");
  ex63->add_option("--levels", levels)->required();
  ex63->add_option("--p", p_text, "Comma-separated schedule p(1),...,p(levels-1)");
  ex63->add_option("--L1", l1);
  ex63->add_option("--D1", d1);
  ex63->add_option("--out", out_path)->required();
  auto* tree = build->add_subcommand("treetype", "Circuits joined in a tree");
  tree->add_option("--periods", periods_text, "Level-1 circuit periods")->required();
  tree->add_option("--winding", windings, "Integer matrix per level, rows ';' entries ','");
  tree->add_option("--target", targets, "Row-stochastic rational matrix per level");
  tree->add_option("--parents", parents, "Tree parents per level, e.g. 0,0,1");
  tree->add_option("--out", out_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    Context ctx{out};
    ctx.approx = approx;
    ctx.cap = cap_flag > 0 ? cap_flag : cap_from_env();
    if (*validate) {
      if (!graph.empty()) return cmd_validate_graph(ctx, graph);
      if (!tower.empty()) return cmd_validate_tower(ctx, tower);
      throw ParseError("validate needs --graph or --tower");
    }
    if (*circuits) return cmd_circuits(ctx, graph);
    if (*decompose) return cmd_decompose(ctx, graph, flow);
    if (*simplex) return cmd_simplex(ctx, tower, from, to, diameter_only);
    if (*minimality) return cmd_minimality(ctx, tower, n, mmax, mode);
    if (*independence) return cmd_independence(ctx, graph);
    if (*winding) return cmd_winding(ctx, tower, level, system);
    if (*certify) return cmd_certify(ctx, tower, n, depth, system);
    if (*mass) return cmd_mass_ratio(ctx, tower, prefix, m, n, eps);
    if (*candidates) return cmd_candidates(ctx, tower, n, from, to, tol);
    if (*extract) return cmd_extract(ctx, tower, level, out_path);
    if (*odometer) return write_built(ctx, build_odometer(levels, base), out_path);
    if (*ex63) {
      return write_built(ctx, build_example_63(levels, p_text.empty() ? std::vector<std::uint64_t>{} : parse_list(p_text), l1, d1),
                         out_path);
    }
    if (*tree) {
      TreeTypeSpec spec;
      spec.periods = parse_list(periods_text);
      if (!windings.empty() && !targets.empty()) throw ParseError("use either --winding or --target");
      for (const auto& w : windings) {
        IntMatrix mat;
        for (const auto& row : parse_rows(w)) {
          std::vector<std::int64_t> r;
          for (const auto& cell : row) {
            const auto v = parse_list(cell);
            if (v.size() != 1) throw ParseError("bad winding entry '" + cell + "'");
            r.push_back(static_cast<std::int64_t>(v[0]));
          }
          mat.push_back(std::move(r));
        }
        spec.windings.push_back(std::move(mat));
      }
      for (const auto& target : targets) {
        std::vector<std::vector<Rational>> mat;
        for (const auto& row : parse_rows(target)) {
          std::vector<Rational> r;
          for (const auto& cell : row) r.push_back(Rational::parse(cell));
          mat.push_back(std::move(r));
        }
        spec.windings.push_back(winding_for_target(mat));
      }
      for (const auto& p : parents) spec.parents.push_back(parse_system(p));
      return write_built(ctx, build_tree_type(spec), out_path);
    }
    return kParseError;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace ergodograph::cli
