#ifndef ZHYVOT_GRAPH_HPP
#define ZHYVOT_GRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace zhyvot {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a computation needs tree layers beyond the truncation depth.
struct DepthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  EdgeId id;
  VertexId src;
  VertexId dst;
};

/// Finite directed multigraph; self-loops and parallel edges allowed.
/// All iteration orders are by ascending id.
class OrientedGraph {
 public:
  void add_vertex(VertexId v);
  void add_edge(EdgeId id, VertexId src, VertexId dst);

  bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
  bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }
  const Edge& edge(EdgeId e) const;

  const std::set<VertexId>& vertices() const { return vertices_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Outgoing / incoming edge ids, ascending.
  const std::vector<EdgeId>& out_edges(VertexId v) const;
  const std::vector<EdgeId>& in_edges(VertexId v) const;
  std::size_t out_degree(VertexId v) const { return out_edges(v).size(); }
  std::size_t in_degree(VertexId v) const { return in_edges(v).size(); }

  /// Connectivity of the underlying undirected graph; the failure report
  /// lists one vertex per component.
  bool connected(std::vector<VertexId>* component_reps = nullptr) const;

 private:
  std::set<VertexId> vertices_;
  std::map<EdgeId, Edge> edges_;
  std::map<VertexId, std::vector<EdgeId>> out_;
  std::map<VertexId, std::vector<EdgeId>> in_;
  static const std::vector<EdgeId> kNone;
};

/// Finite zhyvot core plus the recipe for the infinite part: homogeneous
/// trees of branching q (expanded valence q+1), truncated at `depth`.
/// Stub counts default to (q+1) - core valence and may be overridden.
class ZhyvotGraph {
 public:
  ZhyvotGraph(OrientedGraph core, unsigned q, unsigned depth,
              std::map<VertexId, unsigned> stub_overrides = {});

  const OrientedGraph& core() const { return core_; }
  unsigned q() const { return q_; }
  unsigned depth() const { return depth_; }
  const std::map<VertexId, unsigned>& stub_overrides() const { return stubs_; }

  /// Stub-tree count at a core vertex (override or auto-completion).
  unsigned stub_count(VertexId v) const;

 private:
  OrientedGraph core_;
  unsigned q_;
  unsigned depth_;
  std::map<VertexId, unsigned> stubs_;
};

enum class VertexKind { Core, Tree };

struct VertexInfo {
  VertexKind kind = VertexKind::Core;
  unsigned level = 0;        // distance from the core (0 for core vertices)
  VertexId anchor = 0;       // core vertex whose stub tree owns this vertex
  unsigned stub_index = 0;   // which stub tree at the anchor
  bool boundary = false;     // truncation frontier; exempt from local checks
};

/// Depth-truncated expansion of a ZhyvotGraph.  Core ids are preserved;
/// tree vertices and edges get fresh ids above the core maxima, assigned
/// deterministically (core vertices ascending, stub index, then level).
class Expansion {
 public:
  explicit Expansion(const ZhyvotGraph& source);

  const OrientedGraph& graph() const { return graph_; }
  const ZhyvotGraph& source() const { return source_; }
  unsigned q() const { return source_.q(); }
  unsigned depth() const { return source_.depth(); }

  bool in_core(VertexId v) const { return info(v).kind == VertexKind::Core; }
  bool core_edge(EdgeId e) const { return core_edges_.count(e) != 0; }
  bool boundary(VertexId v) const { return info(v).boundary; }
  const VertexInfo& info(VertexId v) const;

  /// Out-degree in the untruncated infinite graph ("q+1 world"):
  /// core: core out-edges + stub count; tree: q.
  unsigned infinite_out_degree(VertexId v) const;

  /// Root edges of the stub trees attached at core vertex v, ascending.
  const std::vector<EdgeId>& stub_root_edges(VertexId v) const;

  std::vector<VertexId> core_vertices() const;

 private:
  ZhyvotGraph source_;
  OrientedGraph graph_;
  std::map<VertexId, VertexInfo> info_;
  std::set<EdgeId> core_edges_;
  std::map<VertexId, std::vector<EdgeId>> stub_roots_;
  static const std::vector<EdgeId> kNone;
};

/// Edge path; length-0 paths are vertices.
struct Path {
  VertexId source = 0;
  std::vector<EdgeId> edges;

  std::size_t length() const { return edges.size(); }
  bool trivial() const { return edges.empty(); }
};

/// Validates composability and endpoint existence; returns the range vertex.
VertexId path_range(const OrientedGraph& g, const Path& p);
bool path_closed(const OrientedGraph& g, const Path& p);

/// Number of path edges inside the core.
unsigned sigma_length(const Expansion& x, const Path& p);

struct AxiomCheck {
  std::string axiom;
  bool passed;
  std::string detail;
};

struct ZhyvotReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
  std::string summary() const;
};

/// Checks the zhyvot axioms for (graph, core): core nonempty and without
/// sources, every vertex downstream-reachable from the core, no path from
/// outside the core re-enters it, and local finiteness.  Dangling id
/// references throw StructuralError.
ZhyvotReport validate_zhyvot(const OrientedGraph& graph,
                             const std::set<VertexId>& core_vertices,
                             const std::set<EdgeId>& core_edges);

ZhyvotReport validate_zhyvot(const Expansion& x);

struct PathConstraint {
  enum class Kind {
    ExactSigmaEndingInCore,  // |mu|_sigma == k and the final edge lies in M
    LengthUpTo,              // |mu| = k, or |mu| < k ending at a sink
  };
  Kind kind;
  unsigned k;
};

/// Exhaustive, duplicate-free, lexicographic (by edge id) path enumeration.
/// Walking past the truncation boundary raises DepthError; k beyond
/// `max_enumeration_length` raises StructuralError as a resource guard.
std::vector<Path> enumerate_paths(const Expansion& x, VertexId source,
                                  PathConstraint constraint);

inline constexpr unsigned max_enumeration_length = 64;

struct FieldExtensionResult {
  ZhyvotGraph graph;
  /// Original core edge -> its subdivision segments (first keeps the old id).
  std::map<EdgeId, std::vector<EdgeId>> segments;
  /// Original core edge -> inserted vertices, in path order.
  std::map<EdgeId, std::vector<VertexId>> inserted;
};

/// Field-extension surgery: each core edge splits into e_lk segments
/// (inserted vertices and all segments belong to the new core) and the
/// branching parameter becomes q^f; stub counts are recomputed for valence
/// q^f + 1.  (e_lk, f) = (1, 1) is the identity up to stub recount.
FieldExtensionResult field_extension(const ZhyvotGraph& g, unsigned e_lk, unsigned f);

/// Subdivides a single core edge once, attaching `new_tree_count` stubs at
/// the inserted vertex (used by the weight-extension rule).
FieldExtensionResult insert_vertex(const ZhyvotGraph& g, EdgeId edge,
                                   unsigned new_tree_count);

ZhyvotGraph genus1(unsigned n, unsigned q, unsigned depth);
ZhyvotGraph genus2_case1(unsigned q, unsigned depth);  // one vertex, two loops (O_2 pattern)
ZhyvotGraph genus2_case2(unsigned q, unsigned depth);  // theta graph b: v->w, a,c: w->v
ZhyvotGraph genus2_case3(unsigned q, unsigned depth);  // loop at v, f: v->w, loop at w
ZhyvotGraph make_template(const std::string& name, unsigned n, unsigned q, unsigned depth);

/// Cycle as a closed edge walk with traversal signs (+1 forward, -1 reverse).
struct Cycle {
  VertexId base = 0;
  std::vector<std::pair<EdgeId, int>> steps;
};

/// Independent cycles of the (connected) core from a BFS spanning tree,
/// one per non-tree edge, ascending by that edge's id.  Size is
/// |E| - |V| + 1.  Disconnected input throws StructuralError listing
/// component representatives.
std::vector<Cycle> cycle_basis(const OrientedGraph& core);

/// Converts a basis cycle whose steps are all forward into a directed Path;
/// throws StructuralError when the cycle is not a directed loop.
Path cycle_as_path(const OrientedGraph& g, const Cycle& c);

}  // namespace zhyvot

#endif
