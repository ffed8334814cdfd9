#ifndef ZHYVOT_IO_HPP
#define ZHYVOT_IO_HPP

#include <string>
#include <vector>

#include "zhyvot/currents.hpp"
#include "zhyvot/graph.hpp"
#include "zhyvot/monomial.hpp"
#include "zhyvot/weights.hpp"

namespace zhyvot {

struct ParseError : std::runtime_error {
  ParseError(unsigned line, unsigned column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line(line),
        column(column) {}
  unsigned line;
  unsigned column;
};

/// Everything a graph document can carry, including explicit tree parts
/// (used by `validate`, which must accept broken graphs).
struct GraphDocument {
  OrientedGraph graph;
  std::set<VertexId> core_vertices;
  std::set<EdgeId> core_edges;
  unsigned q = 2;
  unsigned depth = 0;
  std::map<VertexId, unsigned> stubs;
  bool has_tree_parts = false;
};

GraphDocument parse_graph_document(const std::string& text);

/// The computing form: core + stubs + meta, zhyvot axioms verified.
/// Documents with explicit tree parts are rejected here (they are only
/// accepted by `validate`); axiom violations throw StructuralError naming
/// the vertex or edge.
ZhyvotGraph parse_graph(const std::string& text);

std::string serialize_graph(const ZhyvotGraph& g);
/// Full expansion dump (tree parts tagged), for inspection.
std::string serialize_expansion(const Expansion& x);

struct WeightDocument {
  Scalar lambda;
  std::map<VertexId, Scalar> g;
  std::map<EdgeId, int> n;
};

WeightDocument parse_weight_document(const std::string& text);
std::string serialize_weight(const WeightDocument& w);
std::string serialize_weight(const SpecialWeight& w);

/// Edge values; unlisted edges are zero when bound against an expansion.
std::map<EdgeId, Scalar> parse_current_document(const std::string& text);
std::string serialize_current(const Expansion& x, const Current& c);
Current bind_current(const Expansion& x, const std::map<EdgeId, Scalar>& values);

/// Virtual weights are filed as core values under a [virtual] section and
/// completed harmonically on load.
std::map<VertexId, Scalar> parse_virtual_document(const std::string& text);

/// Algebra elements as lines of (mu edge ids, nu edge ids, coefficient);
/// length-0 paths print their vertex as v<id>.
std::string serialize_algebra_element(const AlgebraElement& a);

enum class NumericMode { Exact, Approximate };

/// Exact form, or 15 significant digits in approximate mode.
std::string format_value(const Scalar& v, NumericMode mode);

/// Aligned text table; the first row is the header.
std::string format_table(const std::vector<std::vector<std::string>>& rows);

/// Line-delimited records under the versioned header.
inline constexpr const char* record_header = "zhyvot-lab/1";
std::string format_records(const std::string& kind,
                           const std::vector<std::vector<std::pair<std::string, std::string>>>& records);

}  // namespace zhyvot

#endif
