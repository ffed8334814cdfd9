#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zhyvot/io.hpp"

using namespace zhyvot;

TEST_CASE("graph files round-trip the templates") {
  for (const char* name : {"genus1", "genus2_case1", "genus2_case2", "genus2_case3"}) {
    ZhyvotGraph g = make_template(name, 4, 3, 2);
    ZhyvotGraph back = parse_graph(serialize_graph(g));
    CHECK(back.q() == g.q());
    CHECK(back.depth() == g.depth());
    CHECK(back.core().vertices() == g.core().vertices());
    REQUIRE(back.core().edge_count() == g.core().edge_count());
    for (const auto& [id, e] : g.core().edges()) {
      CHECK(back.core().edge(id).src == e.src);
      CHECK(back.core().edge(id).dst == e.dst);
    }
    for (VertexId v : g.core().vertices()) CHECK(back.stub_count(v) == g.stub_count(v));
    // parse of serialize of parse is byte-identical (canonical ordering)
    CHECK(serialize_graph(back) == serialize_graph(g));
  }
}

TEST_CASE("graph parse failures carry locations") {
  // unknown section
  try {
    parse_graph("[meta] q=3 depth=1\n[nodes]\n0 core\n");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 2);
    CHECK(std::string(err.what()).find("unknown section") != std::string::npos);
  }

  // malformed vertex line
  CHECK_THROWS_AS(parse_graph("[meta] q=3 depth=1\n[vertices]\n0 middle\n"), ParseError);

  // dangling edge reference
  CHECK_THROWS_AS(
      parse_graph("[meta] q=3 depth=1\n[vertices]\n0 core\n[edges]\n0 0 7 core\n"), ParseError);

  // a core source vertex violates the zhyvot axioms at parse time
  std::string source_doc =
      "[meta] q=3 depth=1\n[vertices]\n0 core\n1 core\n[edges]\n0 0 1 core\n1 1 1 core\n";
  try {
    parse_graph(source_doc);
    FAIL("expected StructuralError");
  } catch (const StructuralError& err) {
    CHECK(std::string(err.what()).find("vertex 0") != std::string::npos);
  }
}

TEST_CASE("documents with explicit tree parts: validated, not computed on") {
  // a tree vertex feeding the core violates the re-entry axiom
  std::string doc_text =
      "[meta] q=3 depth=0\n"
      "[vertices]\n0 core\n1 core\n2 tree\n"
      "[edges]\n0 0 1 core\n1 1 0 core\n2 1 0 core\n3 0 2 tree\n4 2 0 tree\n";
  GraphDocument doc = parse_graph_document(doc_text);
  CHECK(doc.has_tree_parts);
  ZhyvotReport report = validate_zhyvot(doc.graph, doc.core_vertices, doc.core_edges);
  CHECK_FALSE(report.passed());
  CHECK_THROWS_AS(parse_graph(doc_text), StructuralError);
}

TEST_CASE("weight files round-trip exact values") {
  WeightDocument doc;
  doc.lambda = Scalar(Rat(0), Rat(1, 2), 2);
  doc.g[0] = Scalar::sqrt_of(Rat(2)) - Scalar(1);
  doc.g[1] = Scalar(2) - Scalar::sqrt_of(Rat(2));
  doc.n = {{0, 1}, {1, 1}, {2, 0}};
  WeightDocument back = parse_weight_document(serialize_weight(doc));
  CHECK(back.lambda == doc.lambda);
  CHECK(back.g == doc.g);
  CHECK(back.n == doc.n);

  // decimal lambda parses to the exact rational
  WeightDocument dec = parse_weight_document("[weight] lambda=0.5\n0 1/3\n1 2/3\n[n]\n0 1\n");
  CHECK(dec.lambda == Scalar::ratio(1, 2));

  CHECK_THROWS_AS(parse_weight_document("[weight]\n0 1/2\n"), ParseError);  // no lambda
  CHECK_THROWS_AS(parse_weight_document("[weight] lambda=1/2\n0 1/2\n[n]\n0 2\n"), ParseError);
}

TEST_CASE("current and virtual documents") {
  ZhyvotGraph g = genus1(3, 3, 1);
  Expansion x(g);
  auto values = parse_current_document("[current]\n0 1\n1 1\n2 1\n");
  Current c = bind_current(x, values);
  CHECK(c.at(0) == Scalar(1));
  // unlisted edges bind to zero
  EdgeId tree_edge = x.stub_root_edges(0).at(0);
  CHECK(c.at(tree_edge).is_zero());
  CHECK(verify_current(x, c).passed());
  // round trip drops zeros but preserves values
  auto again = parse_current_document(serialize_current(x, c));
  CHECK(again == values);

  CHECK_THROWS_AS(bind_current(x, parse_current_document("[current]\n999 1\n")), StructuralError);

  auto virt = parse_virtual_document("[virtual]\n0 2\n1 2\n2 2\n");
  CHECK(virt.at(0) == Scalar(2));
  CHECK_THROWS_AS(parse_virtual_document("[current]\n0 1\n"), ParseError);
}

TEST_CASE("value formatting in both numeric modes") {
  Scalar lam(Rat(0), Rat(1, 2), 2);
  CHECK(format_value(lam, NumericMode::Exact) == "(0+1*sqrt(2))/2");
  std::string approx = format_value(lam, NumericMode::Approximate);
  CHECK(approx.substr(0, 8) == "0.707106");
  CHECK(format_value(Scalar::ratio(1, 3), NumericMode::Exact) == "1/3");
}

TEST_CASE("algebra elements serialize as path-id lists") {
  ZhyvotGraph g = genus2_case2(3, 1);
  Expansion x(g);
  AlgebraElement a;
  a.add(make_monomial(x.graph(), Path{0, {0, 1}}, Path{0, {0, 2}}), Scalar::ratio(2, 3));
  a.add(vertex_projection(1), Scalar(-1));
  std::string text = serialize_algebra_element(a);
  CHECK(text.find("[algebra]") == 0);
  CHECK(text.find("0.1 0.2 2/3") != std::string::npos);
  CHECK(text.find("v1 v1 -1") != std::string::npos);
}

TEST_CASE("record output is stable across runs") {
  std::vector<std::vector<std::pair<std::string, std::string>>> records{
      {{"k", "3"}, {"lambda", "1/2"}},
      {{"k", "4"}, {"lambda", "2/3"}},
  };
  std::string a = format_records("pair", records);
  std::string b = format_records("pair", records);
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) == "zhyvot-lab/1");
  CHECK(a.find("pair\tk=3\tlambda=1/2\n") != std::string::npos);
}
