// Command-line surface for the zhyvot-lab library: graph templates and
// validation, special-state solving, field extensions, modular pairings,
// alpha tables, currents, and theta descriptors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "zhyvot/currents.hpp"
#include "zhyvot/io.hpp"
#include "zhyvot/modular.hpp"
#include "zhyvot/monomial.hpp"

using namespace zhyvot;

namespace {

struct CommonOpts {
  std::string graph_file;
  std::string template_name;
  unsigned size = 3;
  unsigned q = 3;
  unsigned depth = 4;
  std::string format = "table";
  std::string mode = "exact";
  double tolerance = 1e-10;
};

void add_graph_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--graph", opts.graph_file, "graph file (core + stubs form)");
  cmd->add_option("--template", opts.template_name,
                  "template name: genus1 | genus2_case1 | genus2_case2 | genus2_case3");
  cmd->add_option("--size", opts.size, "polygon size for genus1");
  cmd->add_option("--q", opts.q, "tree branching parameter (expanded valence q+1)");
  cmd->add_option("--depth", opts.depth, "tree truncation depth");
}

void add_output_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "table | records")
      ->check(CLI::IsMember({"table", "records"}));
  cmd->add_option("--mode", opts.mode, "exact | approximate")
      ->check(CLI::IsMember({"exact", "approximate"}));
  cmd->add_option("--tolerance", opts.tolerance, "tolerance for approximate mode");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_file);
  if (!out) throw StructuralError("cannot write '" + out_file + "'");
  out << text;
}

ZhyvotGraph resolve_graph(const CommonOpts& opts) {
  if (!opts.graph_file.empty()) return parse_graph(slurp(opts.graph_file));
  if (!opts.template_name.empty())
    return make_template(opts.template_name, opts.size, opts.q, opts.depth);
  throw StructuralError("need --graph or --template");
}

NumericMode mode_of(const CommonOpts& opts) {
  if (opts.mode == "approximate" && opts.tolerance <= 0)
    throw StructuralError("approximate mode needs --tolerance > 0");
  return opts.mode == "exact" ? NumericMode::Exact : NumericMode::Approximate;
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

std::vector<EdgeId> parse_edge_list(const std::string& text) {
  std::vector<EdgeId> out;
  for (long v : parse_long_list(text)) {
    if (v < 0) throw StructuralError("edge ids are non-negative");
    out.push_back(static_cast<EdgeId>(v));
  }
  return out;
}

// Weight file, or the uniform polygon family when only lambda is given.
SpecialWeight resolve_weight(const ZhyvotGraph& g, const std::string& weight_file,
                             const std::string& lambda_text) {
  if (!weight_file.empty()) {
    WeightDocument doc = parse_weight_document(slurp(weight_file));
    CoreWeight cw{doc.lambda, doc.g, doc.n};
    // n defaults to 1 on unlisted core edges (the adapted convention)
    for (const auto& [id, e] : g.core().edges()) {
      (void)e;
      if (!cw.n.count(id)) cw.n[id] = 1;
    }
    return extend_to_trees(cw, g);
  }
  if (!lambda_text.empty()) return uniform_polygon_state(g, Scalar::parse(lambda_text));
  throw StructuralError("need --weight, or --lambda with a polygon template");
}

std::string render(const std::vector<std::vector<std::string>>& rows, const std::string& kind,
                   const CommonOpts& opts) {
  if (opts.format == "table") return format_table(rows);
  std::vector<std::vector<std::pair<std::string, std::string>>> records;
  const auto& header = rows.front();
  for (size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::pair<std::string, std::string>> record;
    for (size_t c = 0; c < header.size() && c < rows[r].size(); ++c)
      record.push_back({header[c], rows[r][c]});
    records.push_back(std::move(record));
  }
  return format_records(kind, records);
}

int run_template(const CommonOpts& opts, const std::string& out_file) {
  ZhyvotGraph g = make_template(opts.template_name, opts.size, opts.q, opts.depth);
  emit(serialize_graph(g), out_file);
  return 0;
}

int run_validate(const std::string& graph_file) {
  GraphDocument doc = parse_graph_document(slurp(graph_file));
  ZhyvotReport report = validate_zhyvot(doc.graph, doc.core_vertices, doc.core_edges);
  std::cout << report.summary();
  return report.passed() ? 0 : 1;
}

int run_solve(const CommonOpts& opts, const std::string& n_text, const std::string& lambda_text) {
  ZhyvotGraph g = resolve_graph(opts);
  std::map<EdgeId, int> n;
  if (n_text.empty()) {
    for (const auto& [id, e] : g.core().edges()) {
      (void)e;
      n[id] = 1;
    }
  } else {
    std::vector<long> values = parse_long_list(n_text);
    if (values.size() != g.core().edge_count())
      throw StructuralError("--n needs one entry per core edge (" +
                            std::to_string(g.core().edge_count()) + "), ascending by edge id");
    size_t i = 0;
    for (const auto& [id, e] : g.core().edges()) {
      (void)e;
      n[id] = static_cast<int>(values[i++]);
    }
  }
  std::optional<Scalar> lambda;
  if (!lambda_text.empty()) lambda = Scalar::parse(lambda_text);

  SolveResult res = solve_special_state(g, n, lambda);
  NumericMode mode = mode_of(opts);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"n", "lambda", "status"};
  for (VertexId v : g.core().vertices()) header.push_back("g(" + std::to_string(v) + ")");
  rows.push_back(header);
  std::string n_label;
  for (const auto& [id, ne] : n) {
    (void)id;
    n_label += (n_label.empty() ? "" : ",") + std::to_string(ne);
  }
  for (const SpecialStateSolution& sol : res.solutions) {
    std::vector<std::string> row{n_label, format_value(sol.lambda, mode),
                                 sol.approximate ? "approximate" : "exact"};
    for (VertexId v : g.core().vertices()) {
      auto it = sol.g.find(v);
      row.push_back(it == sol.g.end() ? "-" : format_value(it->second, mode));
    }
    rows.push_back(std::move(row));
  }
  std::cout << render(rows, "solve", opts);
  if (res.status == SolveResult::Status::FamilyNeedsLambda || res.solutions.empty()) {
    std::cerr << (res.diagnostic.empty() ? "no solution" : res.diagnostic) << "\n";
    return 2;
  }
  return 0;
}

int run_extend_field(const CommonOpts& opts, unsigned e_lk, unsigned f,
                     const std::string& weight_file, const std::string& out_file,
                     const std::string& weight_out) {
  ZhyvotGraph g = resolve_graph(opts);
  if (weight_file.empty()) {
    FieldExtensionResult res = field_extension(g, e_lk, f);
    emit(serialize_graph(res.graph), out_file);
    return 0;
  }
  SpecialWeight w = resolve_weight(g, weight_file, "");
  FieldExtendedWeight res = weight_after_field_extension(g, w, e_lk, f);
  emit(serialize_graph(res.graph), out_file);
  std::string wtext = serialize_weight(res.weight);
  if (weight_out.empty()) {
    std::cout << wtext;
  } else {
    std::ofstream out(weight_out);
    if (!out) throw StructuralError("cannot write '" + weight_out + "'");
    out << wtext;
  }
  return 0;
}

int run_pair(const CommonOpts& opts, const std::string& weight_file,
             const std::string& lambda_text, const std::string& loop_text) {
  ZhyvotGraph g = resolve_graph(opts);
  Expansion x(g);
  // polygon templates default to the uniform state at lambda = 1/2
  std::string lam = lambda_text;
  if (weight_file.empty() && lam.empty() && opts.template_name == "genus1") lam = "1/2";
  SpecialWeight w = resolve_weight(g, weight_file, lam);
  NumericMode mode = mode_of(opts);

  std::vector<Path> loops;
  if (!loop_text.empty()) {
    std::vector<EdgeId> edges = parse_edge_list(loop_text);
    if (edges.empty()) throw StructuralError("--loop needs at least one edge");
    Path p{x.graph().edge(edges.front()).src, edges};
    loops.push_back(std::move(p));
  } else {
    for (const Cycle& c : cycle_basis(g.core())) loops.push_back(cycle_as_path(x.graph(), c));
  }

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"loop", "k", "lambda", "g(r)", "pairing", "recovered"});
  for (const Path& loop : loops) {
    Scalar pairing = spectral_flow_pairing(x, w, loop);
    unsigned recovered = recover_schottky(x, w, pairing, path_range(x.graph(), loop));
    std::string edges;
    for (EdgeId e : loop.edges) edges += (edges.empty() ? "" : ",") + std::to_string(e);
    rows.push_back({edges, std::to_string(sigma_length(x, loop)),
                    format_value(w.lambda(), mode),
                    format_value(w.g_of(x, path_range(x.graph(), loop)), mode),
                    format_value(pairing, mode), std::to_string(recovered)});
  }
  std::cout << render(rows, "pair", opts);
  return 0;
}

int run_alpha(const CommonOpts& opts, const std::string& weight_file,
              const std::string& lambda_text, unsigned k_max) {
  ZhyvotGraph g = resolve_graph(opts);
  Expansion x(g);
  SpecialWeight w = resolve_weight(g, weight_file, lambda_text);
  NumericMode mode = mode_of(opts);

  std::vector<std::map<VertexId, Scalar>> tables;
  for (unsigned k = 0; k <= k_max; ++k) tables.push_back(alpha_k(x, w, k));

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"vertex"};
  for (unsigned k = 0; k <= k_max; ++k) header.push_back("alpha_" + std::to_string(k));
  rows.push_back(header);
  for (VertexId v : x.core_vertices()) {
    std::vector<std::string> row{std::to_string(v)};
    for (unsigned k = 0; k <= k_max; ++k) row.push_back(format_value(tables[k].at(v), mode));
    rows.push_back(std::move(row));
  }
  std::cout << render(rows, "alpha", opts);
  return 0;
}

int run_currents(const CommonOpts& opts, const std::string& current_file) {
  ZhyvotGraph g = resolve_graph(opts);
  Expansion x(g);
  CurrentSpace space = current_space_rank(x);
  auto cycles = cycle_basis(g.core());

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"cycle", "edges", "length"});
  for (size_t i = 0; i < cycles.size(); ++i) {
    std::string edges;
    for (const auto& [e, sign] : cycles[i].steps)
      edges += (edges.empty() ? "" : ",") + std::string(sign < 0 ? "~" : "") + std::to_string(e);
    rows.push_back({std::to_string(i), edges, std::to_string(cycles[i].steps.size())});
  }
  std::cout << "rank " << space.rank << "\n" << render(rows, "basis", opts);

  if (!current_file.empty()) {
    Current c = bind_current(x, parse_current_document(slurp(current_file)));
    StarReport report = verify_current(x, c);
    if (report.passed()) {
      std::cout << "current: conservation pass\n";
      return 0;
    }
    std::cout << "current: conservation FAIL at";
    for (VertexId v : report.failures) std::cout << " " << v;
    std::cout << "\n";
    return 2;
  }
  return 0;
}

int run_theta(const CommonOpts& opts, const std::string& virtual_file,
              const std::string& valuations_text, unsigned base,
              const std::string& compare_file) {
  ZhyvotGraph g = resolve_graph(opts);
  Expansion x(g);
  VirtualWeight vw = virtual_from_core_values(x, parse_virtual_document(slurp(virtual_file)));
  std::optional<std::vector<long>> valuations;
  if (!valuations_text.empty()) valuations = parse_long_list(valuations_text);
  ThetaDescriptor d = build_theta(x, vw, valuations, base);
  NumericMode mode = mode_of(opts);

  auto cycles = cycle_basis(g.core());
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"cycle", "period", "mu_on_cycle"});
  for (size_t i = 0; i < cycles.size(); ++i) {
    std::string mu;
    for (const auto& [e, sign] : cycles[i].steps) {
      (void)sign;
      mu += (mu.empty() ? "" : ",") + format_value(d.mu.at(e), mode);
    }
    rows.push_back({std::to_string(i), format_value(d.periods[i], mode), mu});
  }
  std::cout << render(rows, "theta", opts);

  if (!compare_file.empty()) {
    VirtualWeight other = virtual_from_core_values(x, parse_virtual_document(slurp(compare_file)));
    ThetaDescriptor od = build_theta(x, other, valuations, base);
    bool same = theta_equivalent(x, d, od);
    std::cout << "equivalent-mod-K*: " << (same ? "yes" : "no") << "\n";
  }
  return 0;
}

// Terms look like "0", "~2", "3:5", "~1:2" (edge[:coeff], ~ = reversed).
CylinderFunction parse_cylinder(const std::string& text) {
  CylinderFunction fn;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    CylTerm term;
    std::string body = item;
    if (!body.empty() && body[0] == '~') {
      term.reversed = true;
      body = body.substr(1);
    }
    auto colon = body.find(':');
    if (colon != std::string::npos) {
      term.coeff = Scalar::parse(body.substr(colon + 1));
      body = body.substr(0, colon);
    }
    term.edge = static_cast<EdgeId>(std::stoul(body));
    fn.push_back(term);
  }
  return fn;
}

int run_k0_pair(const CommonOpts& opts, const std::string& current_file, const std::string& fn_text) {
  ZhyvotGraph g = resolve_graph(opts);
  Expansion x(g);
  Current c = bind_current(x, parse_current_document(slurp(current_file)));
  CylinderFunction fn = canonical_cylinder(parse_cylinder(fn_text));
  std::cout << format_value(k0_pairing(x, c, fn), mode_of(opts)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph weights, modular pairings, and theta data on zhyvot graphs"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string out_file, weight_file, weight_out, n_text, lambda_text, loop_text;
  std::string current_file, virtual_file, valuations_text, compare_file, fn_text;
  unsigned e_lk = 1, f = 1, k_max = 1, base = 0;

  auto* t = app.add_subcommand("template", "emit a template graph file");
  t->add_option("--name", opts.template_name, "template name")->required();
  t->add_option("--size", opts.size, "polygon size for genus1");
  t->add_option("--q", opts.q, "branching parameter");
  t->add_option("--depth", opts.depth, "truncation depth");
  t->add_option("-o,--out", out_file, "output file (default stdout)");

  auto* v = app.add_subcommand("validate", "check the zhyvot axioms of a graph file");
  v->add_option("--graph", opts.graph_file, "graph file")->required();

  auto* s = app.add_subcommand("solve", "special graph states via the eigenvector criterion");
  add_graph_options(s, opts);
  add_output_options(s, opts);
  s->add_option("--n", n_text, "comma list of n(e) in {0,1}, core edges ascending (default all 1)");
  s->add_option("--lambda", lambda_text, "evaluate the family at this lambda");

  auto* ef = app.add_subcommand("extend-field", "field-extension surgery (and weight transport)");
  add_graph_options(ef, opts);
  ef->add_option("--e", e_lk, "ramification index e_LK")->required();
  ef->add_option("--f", f, "residue degree f")->required();
  ef->add_option("--weight", weight_file, "weight file to transport");
  ef->add_option("-o,--out", out_file, "extended graph output file");
  ef->add_option("--weight-out", weight_out, "extended weight output file");

  auto* p = app.add_subcommand("pair", "spectral-flow pairing and Schottky recovery");
  add_graph_options(p, opts);
  add_output_options(p, opts);
  p->add_option("--weight", weight_file, "weight file");
  p->add_option("--lambda", lambda_text, "uniform polygon state parameter (genus1 templates)");
  p->add_option("--loop", loop_text,
                "comma list of edge ids forming a closed loop (default: basis loops)");

  auto* a = app.add_subcommand("alpha", "alpha_k tables");
  add_graph_options(a, opts);
  add_output_options(a, opts);
  a->add_option("--weight", weight_file, "weight file");
  a->add_option("--lambda", lambda_text, "uniform polygon state parameter (genus1 templates)");
  a->add_option("--k", k_max, "highest level")->required();

  auto* c = app.add_subcommand("currents", "current space rank, basis, verification");
  add_graph_options(c, opts);
  add_output_options(c, opts);
  c->add_option("--current", current_file, "current file to verify");

  auto* th = app.add_subcommand("theta", "build/compare theta descriptors");
  add_graph_options(th, opts);
  add_output_options(th, opts);
  th->add_option("--virtual", virtual_file, "integer virtual weight file")->required();
  th->add_option("--c-valuations", valuations_text, "comma list, one per basis cycle");
  th->add_option("--base", base, "base vertex");
  th->add_option("--compare", compare_file, "second virtual weight file");

  auto* k0 = app.add_subcommand("k0-pair", "pair a current with a cylinder function");
  add_graph_options(k0, opts);
  add_output_options(k0, opts);
  k0->add_option("--current", current_file, "current file")->required();
  k0->add_option("--fn", fn_text, "cylinder terms edge[:coeff], ~edge for reversal")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) return run_template(opts, out_file);
    if (v->parsed()) return run_validate(opts.graph_file);
    if (s->parsed()) return run_solve(opts, n_text, lambda_text);
    if (ef->parsed()) return run_extend_field(opts, e_lk, f, weight_file, out_file, weight_out);
    if (p->parsed()) return run_pair(opts, weight_file, lambda_text, loop_text);
    if (a->parsed()) return run_alpha(opts, weight_file, lambda_text, k_max);
    if (c->parsed()) return run_currents(opts, current_file);
    if (th->parsed()) return run_theta(opts, virtual_file, valuations_text, base, compare_file);
    if (k0->parsed()) return run_k0_pair(opts, current_file, fn_text);
  } catch (const InfeasibleError& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
