#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "zhyvot/graph.hpp"

using namespace zhyvot;

namespace {

// Independent path-count oracle: entry sums of powers of the core
// adjacency-count matrix.
std::size_t adjacency_power_count(const OrientedGraph& core, VertexId from, unsigned k) {
  std::vector<VertexId> order(core.vertices().begin(), core.vertices().end());
  std::map<VertexId, size_t> idx;
  for (size_t i = 0; i < order.size(); ++i) idx[order[i]] = i;
  size_t n = order.size();
  std::vector<std::vector<unsigned long>> a(n, std::vector<unsigned long>(n, 0));
  for (const auto& [id, e] : core.edges()) {
    (void)id;
    a[idx[e.src]][idx[e.dst]] += 1;
  }
  std::vector<unsigned long> row(n, 0);
  row[idx[from]] = 1;
  for (unsigned step = 0; step < k; ++step) {
    std::vector<unsigned long> next(n, 0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) next[j] += row[i] * a[i][j];
    row = std::move(next);
  }
  unsigned long total = 0;
  for (unsigned long v : row) total += v;
  return total;
}

// Independent tree-size oracle for the expansion vertex count.
std::size_t expected_expansion_vertices(const ZhyvotGraph& g) {
  std::size_t per_stub = 0;
  std::size_t layer = 1;
  for (unsigned level = 1; level <= g.depth(); ++level) {
    per_stub += layer;
    layer *= g.q();
  }
  std::size_t total = g.core().vertex_count();
  for (VertexId v : g.core().vertices()) total += g.stub_count(v) * per_stub;
  return total;
}

}  // namespace

TEST_CASE("templates have the advertised shapes") {
  ZhyvotGraph g1 = genus1(4, 3, 0);
  CHECK(g1.core().vertex_count() == 4);
  CHECK(g1.core().edge_count() == 4);
  CHECK(cycle_basis(g1.core()).size() == 1);

  ZhyvotGraph c1 = genus2_case1(3, 0);
  CHECK(c1.core().vertex_count() == 1);
  CHECK(c1.core().edge_count() == 2);
  CHECK(cycle_basis(c1.core()).size() == 2);

  ZhyvotGraph c2 = genus2_case2(3, 0);
  CHECK(c2.core().vertex_count() == 2);
  CHECK(c2.core().edge_count() == 3);
  CHECK(cycle_basis(c2.core()).size() == 2);

  ZhyvotGraph c3 = genus2_case3(3, 0);
  CHECK(cycle_basis(c3.core()).size() == 2);

  CHECK_THROWS_AS(make_template("genus3", 1, 2, 0), StructuralError);
}

TEST_CASE("cycle basis on templates gives directed loops") {
  for (unsigned n : {1u, 3u, 5u}) {
    Expansion x(genus1(n, 2, 1));
    auto basis = cycle_basis(x.source().core());
    REQUIRE(basis.size() == 1);
    Path loop = cycle_as_path(x.graph(), basis[0]);
    CHECK(loop.edges.size() == n);
    CHECK(path_closed(x.graph(), loop));
  }
  Expansion theta(genus2_case2(3, 1));
  auto basis = cycle_basis(theta.source().core());
  REQUIRE(basis.size() == 2);
  for (const Cycle& c : basis) {
    Path loop = cycle_as_path(theta.graph(), c);
    CHECK(loop.edges.size() == 2);
    CHECK(sigma_length(theta, loop) == 2);
  }
  // single vertex with two loops: two length-1 cycles
  auto o2 = cycle_basis(genus2_case1(3, 0).core());
  REQUIRE(o2.size() == 2);
  CHECK(o2[0].steps.size() == 1);
  CHECK(o2[1].steps.size() == 1);
}

TEST_CASE("cycle basis rejects a disconnected core") {
  OrientedGraph g;
  g.add_vertex(0);
  g.add_vertex(1);
  g.add_edge(0, 0, 0);
  g.add_edge(1, 1, 1);
  CHECK_THROWS_WITH_AS(cycle_basis(g), doctest::Contains("disconnected"), StructuralError);
}

TEST_CASE("expansion: valence and vertex counts") {
  // core vertex with core valence 2, q = 3: two stubs, total valence 4 = q+1
  ZhyvotGraph g = genus1(3, 3, 2);
  CHECK(g.stub_count(0) == 2);

  Expansion x(g);
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    CHECK(x.graph().out_degree(v) + x.graph().in_degree(v) == g.q() + 1);
  }

  // depth 0: expansion equals the core
  Expansion flat(genus1(3, 3, 0));
  CHECK(flat.graph().vertex_count() == 3);
  CHECK(flat.graph().edge_count() == 3);

  // genus1 polygon n=2, q=2, depth 2: 2 + 2*(1+2) = 8 vertices
  ZhyvotGraph small = genus1(2, 2, 2);
  Expansion xs(small);
  CHECK(xs.graph().vertex_count() == 8);
  CHECK(xs.graph().vertex_count() == expected_expansion_vertices(small));

  // the counting oracle also pins a deeper case
  ZhyvotGraph deep = genus2_case2(3, 4);
  CHECK(Expansion(deep).graph().vertex_count() == expected_expansion_vertices(deep));
}

TEST_CASE("boundary tagging marks the truncation frontier") {
  Expansion x(genus1(3, 3, 2));
  for (VertexId v : x.graph().vertices()) {
    const VertexInfo& vi = x.info(v);
    if (vi.kind == VertexKind::Tree) CHECK((vi.level == 2) == x.boundary(v));
    if (vi.kind == VertexKind::Core) CHECK_FALSE(x.boundary(v));
  }
  // depth 0 with stubs: the core vertices themselves are the frontier
  Expansion flat(genus1(3, 3, 0));
  for (VertexId v : flat.graph().vertices()) CHECK(flat.boundary(v));
  // a bare core that fills the valence on its own has no frontier
  Expansion o2(genus2_case1(3, 0));
  CHECK_FALSE(o2.boundary(0));
}

TEST_CASE("sigma length grades core edges only") {
  Expansion x(genus1(3, 2, 3));
  Path triple{0, {0, 1, 2}};
  CHECK(sigma_length(x, triple) == 3);

  // two core edges then tree edges
  EdgeId root_edge = x.stub_root_edges(2).at(0);
  VertexId root = x.graph().edge(root_edge).dst;
  EdgeId deeper = x.graph().out_edges(root).at(0);
  Path mixed{0, {0, 1, root_edge, deeper}};
  CHECK(sigma_length(x, mixed) == 2);

  Path trivial{0, {}};
  CHECK(sigma_length(x, trivial) == 0);

  Path broken{0, {1}};
  CHECK_THROWS_AS(sigma_length(x, broken), StructuralError);
}

TEST_CASE("sigma length is additive under concatenation") {
  Expansion x(genus2_case2(3, 3));
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    // random walk split in two
    VertexId at = trial % 2 ? 0 : 1;
    Path whole{at, {}};
    for (int step = 0; step < 6; ++step) {
      const auto& outs = x.graph().out_edges(at);
      if (outs.empty()) break;
      EdgeId e = outs[rng() % outs.size()];
      whole.edges.push_back(e);
      at = x.graph().edge(e).dst;
    }
    size_t cut = whole.edges.empty() ? 0 : rng() % (whole.edges.size() + 1);
    Path head{whole.source, {whole.edges.begin(), whole.edges.begin() + cut}};
    Path tail{path_range(x.graph(), head), {whole.edges.begin() + cut, whole.edges.end()}};
    CHECK(sigma_length(x, whole) == sigma_length(x, head) + sigma_length(x, tail));
  }
}

TEST_CASE("path enumeration: exact sigma length ending in the core") {
  // genus1(3): exactly one sigma-3 path from each polygon vertex (once around)
  Expansion x(genus1(3, 2, 1));
  auto paths = enumerate_paths(x, 0, {PathConstraint::Kind::ExactSigmaEndingInCore, 3});
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].edges == std::vector<EdgeId>{0, 1, 2});

  // brute-force cross-check over all length-3 edge tuples
  std::size_t brute = 0;
  const auto& edges = x.source().core().edges();
  for (const auto& [a, ea] : edges)
    for (const auto& [b, eb] : edges)
      for (const auto& [c, ec] : edges)
        if (ea.src == 0 && ea.dst == eb.src && eb.dst == ec.src) ++brute;
  CHECK(brute == paths.size());

  // sigma 0 ending in M: the single length-0 path
  auto zero = enumerate_paths(x, 0, {PathConstraint::Kind::ExactSigmaEndingInCore, 0});
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].trivial());

  // theta graph from v: exactly {b a, b c}, lexicographic
  Expansion theta(genus2_case2(3, 1));
  auto two = enumerate_paths(theta, 0, {PathConstraint::Kind::ExactSigmaEndingInCore, 2});
  REQUIRE(two.size() == 2);
  CHECK(two[0].edges == std::vector<EdgeId>{0, 1});
  CHECK(two[1].edges == std::vector<EdgeId>{0, 2});

  // tree vertices admit no positive-sigma paths
  VertexId tree_v = theta.graph().edge(theta.stub_root_edges(0).at(0)).dst;
  CHECK(enumerate_paths(theta, tree_v, {PathConstraint::Kind::ExactSigmaEndingInCore, 1}).empty());
}

TEST_CASE("path counts match adjacency powers up to k = 6") {
  for (const char* name : {"genus1", "genus2_case1", "genus2_case2", "genus2_case3"}) {
    ZhyvotGraph g = make_template(name, 4, 3, 1);
    Expansion x(g);
    for (unsigned k = 1; k <= 6; ++k) {
      for (VertexId v : x.core_vertices()) {
        auto paths = enumerate_paths(x, v, {PathConstraint::Kind::ExactSigmaEndingInCore, k});
        CHECK(paths.size() == adjacency_power_count(g.core(), v, k));
      }
    }
  }
}

TEST_CASE("bounded-length enumeration stops at the truncation honestly") {
  Expansion x(genus1(2, 2, 2));
  // length 2 from a polygon vertex stays inside the expansion
  auto ok = enumerate_paths(x, 0, {PathConstraint::Kind::LengthUpTo, 2});
  for (const Path& p : ok) CHECK(p.edges.size() == 2);
  // length 3 would need to step off the frontier
  CHECK_THROWS_AS(enumerate_paths(x, 0, {PathConstraint::Kind::LengthUpTo, 3}), DepthError);
  CHECK_THROWS_AS(enumerate_paths(x, 0, {PathConstraint::Kind::LengthUpTo, 100}), StructuralError);
}

TEST_CASE("bounded-length enumeration keeps shorter paths ending at sinks") {
  // a genuine sink (not a truncation artifact) terminates paths early
  OrientedGraph core;
  core.add_vertex(0);
  core.add_vertex(1);
  core.add_edge(0, 0, 0);
  core.add_edge(1, 0, 1);
  ZhyvotGraph g(core, 3, 0, {{0, 0}, {1, 0}});
  Expansion x(g);
  CHECK(x.graph().out_degree(1) == 0);
  CHECK_FALSE(x.boundary(1));
  auto paths = enumerate_paths(x, 0, {PathConstraint::Kind::LengthUpTo, 3});
  // loop^3, loop^2 exit, loop exit, exit: only full-length or sink-ended
  REQUIRE(paths.size() == 4);
  for (const Path& p : paths)
    CHECK((p.edges.size() == 3 || path_range(x.graph(), p) == 1));
}

TEST_CASE("zhyvot validation on the templates and local failures") {
  Expansion theta(genus2_case2(3, 2));
  CHECK(validate_zhyvot(theta).passed());

  // a bare sink-free core is a graph with zhyvot equal to itself
  Expansion o2(genus2_case1(3, 0));
  CHECK(validate_zhyvot(o2).passed());

  // an edge from a tree vertex back into the core breaks the re-entry axiom
  OrientedGraph g;
  for (VertexId v : {0u, 1u, 2u}) g.add_vertex(v);
  g.add_edge(0, 0, 1);
  g.add_edge(1, 1, 0);
  g.add_edge(2, 0, 2);  // out to a tree vertex
  g.add_edge(3, 2, 0);  // and back in: violation
  auto report = validate_zhyvot(g, {0, 1}, {0, 1});
  CHECK_FALSE(report.passed());
  bool reentry_failed = false;
  for (const auto& check : report.checks)
    if (!check.passed && check.axiom.find("outside") != std::string::npos) reentry_failed = true;
  CHECK(reentry_failed);

  // a core source fails the no-sources axiom
  OrientedGraph h;
  h.add_vertex(0);
  h.add_vertex(1);
  h.add_edge(0, 0, 1);
  h.add_edge(1, 1, 1);
  auto r2 = validate_zhyvot(h, {0, 1}, {0, 1});
  CHECK_FALSE(r2.passed());

  CHECK_THROWS_AS(validate_zhyvot(h, {7}, {}), StructuralError);
}

TEST_CASE("field extension: subdivision and valence") {
  // identity extension
  ZhyvotGraph g = genus1(3, 2, 2);
  FieldExtensionResult id = field_extension(g, 1, 1);
  CHECK(id.graph.core().vertex_count() == 3);
  CHECK(id.graph.core().edge_count() == 3);
  CHECK(id.inserted.empty());

  // e_lk = 2 on the 3-gon gives the 6-gon
  FieldExtensionResult doubled = field_extension(g, 2, 1);
  CHECK(doubled.graph.core().vertex_count() == 6);
  CHECK(doubled.graph.core().edge_count() == 6);
  CHECK(cycle_basis(doubled.graph.core()).size() == 1);
  CHECK(cycle_basis(doubled.graph.core())[0].steps.size() == 6);

  // q = 2, f = 2: every non-boundary vertex of the expansion has valence 5
  FieldExtensionResult ext = field_extension(g, 2, 2);
  CHECK(ext.graph.q() == 4);
  Expansion x(ext.graph);
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    CHECK(x.graph().out_degree(v) + x.graph().in_degree(v) == 5);
  }

  // original ids survive
  for (VertexId v : g.core().vertices()) CHECK(ext.graph.core().has_vertex(v));
}

TEST_CASE("field extension composes on core topology") {
  for (const char* name : {"genus1", "genus2_case2", "genus2_case3"}) {
    ZhyvotGraph g = make_template(name, 3, 2, 1);
    FieldExtensionResult once = field_extension(field_extension(g, 2, 1).graph, 3, 2);
    FieldExtensionResult direct = field_extension(g, 6, 2);
    CHECK(once.graph.core().vertex_count() == direct.graph.core().vertex_count());
    CHECK(once.graph.core().edge_count() == direct.graph.core().edge_count());
    CHECK(once.graph.q() == direct.graph.q());
    auto b1 = cycle_basis(once.graph.core());
    auto b2 = cycle_basis(direct.graph.core());
    REQUIRE(b1.size() == b2.size());
    for (size_t i = 0; i < b1.size(); ++i) CHECK(b1[i].steps.size() == b2[i].steps.size());
  }
}

TEST_CASE("stub auto-completion rejects over-full vertices") {
  OrientedGraph g;
  g.add_vertex(0);
  for (EdgeId e = 0; e < 4; ++e) g.add_edge(e, 0, 0);
  CHECK_THROWS_AS(ZhyvotGraph(g, 2, 1), StructuralError);  // valence 8 > q+1 = 3
}
