#include "zhyvot/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace zhyvot {

const std::vector<EdgeId> OrientedGraph::kNone;
const std::vector<EdgeId> Expansion::kNone;

void OrientedGraph::add_vertex(VertexId v) { vertices_.insert(v); }

void OrientedGraph::add_edge(EdgeId id, VertexId src, VertexId dst) {
  if (edges_.count(id)) throw StructuralError("duplicate edge id " + std::to_string(id));
  if (!has_vertex(src) || !has_vertex(dst))
    throw StructuralError("edge " + std::to_string(id) + " references missing vertex");
  edges_[id] = Edge{id, src, dst};
  auto& o = out_[src];
  o.insert(std::lower_bound(o.begin(), o.end(), id), id);
  auto& i = in_[dst];
  i.insert(std::lower_bound(i.begin(), i.end(), id), id);
}

const Edge& OrientedGraph::edge(EdgeId e) const {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw StructuralError("unknown edge id " + std::to_string(e));
  return it->second;
}

const std::vector<EdgeId>& OrientedGraph::out_edges(VertexId v) const {
  if (!has_vertex(v)) throw StructuralError("unknown vertex id " + std::to_string(v));
  auto it = out_.find(v);
  return it == out_.end() ? kNone : it->second;
}

const std::vector<EdgeId>& OrientedGraph::in_edges(VertexId v) const {
  if (!has_vertex(v)) throw StructuralError("unknown vertex id " + std::to_string(v));
  auto it = in_.find(v);
  return it == in_.end() ? kNone : it->second;
}

bool OrientedGraph::connected(std::vector<VertexId>* component_reps) const {
  if (vertices_.empty()) return true;
  std::set<VertexId> seen;
  std::vector<VertexId> reps;
  for (VertexId start : vertices_) {
    if (seen.count(start)) continue;
    reps.push_back(start);
    std::deque<VertexId> work{start};
    seen.insert(start);
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      for (EdgeId e : out_edges(v)) {
        VertexId w = edge(e).dst;
        if (seen.insert(w).second) work.push_back(w);
      }
      for (EdgeId e : in_edges(v)) {
        VertexId w = edge(e).src;
        if (seen.insert(w).second) work.push_back(w);
      }
    }
  }
  if (component_reps) *component_reps = reps;
  return reps.size() == 1;
}

ZhyvotGraph::ZhyvotGraph(OrientedGraph core, unsigned q, unsigned depth,
                         std::map<VertexId, unsigned> stub_overrides)
    : core_(std::move(core)), q_(q), depth_(depth), stubs_(std::move(stub_overrides)) {
  if (q_ < 2) throw StructuralError("branching parameter q must be >= 2");
  for (const auto& [v, count] : stubs_) {
    (void)count;
    if (!core_.has_vertex(v)) throw StructuralError("stub override at unknown vertex " + std::to_string(v));
  }
  for (VertexId v : core_.vertices()) (void)stub_count(v);  // surfaces negative auto-completion early
}

unsigned ZhyvotGraph::stub_count(VertexId v) const {
  auto it = stubs_.find(v);
  if (it != stubs_.end()) return it->second;
  std::size_t valence = core_.out_degree(v) + core_.in_degree(v);
  if (valence > q_ + 1)
    throw StructuralError("core valence " + std::to_string(valence) + " at vertex " +
                          std::to_string(v) + " exceeds q+1 = " + std::to_string(q_ + 1));
  return static_cast<unsigned>(q_ + 1 - valence);
}

Expansion::Expansion(const ZhyvotGraph& source) : source_(source) {
  const OrientedGraph& core = source_.core();
  for (VertexId v : core.vertices()) {
    graph_.add_vertex(v);
    info_[v] = VertexInfo{VertexKind::Core, 0, v, 0, false};
  }
  for (const auto& [id, e] : core.edges()) {
    graph_.add_edge(id, e.src, e.dst);
    core_edges_.insert(id);
  }

  VertexId next_v = core.vertices().empty() ? 0 : *core.vertices().rbegin() + 1;
  EdgeId next_e = core.edges().empty() ? 0 : core.edges().rbegin()->first + 1;
  unsigned depth = source_.depth();
  unsigned q = source_.q();

  for (VertexId v : core.vertices()) {
    unsigned stubs = source_.stub_count(v);
    if (stubs > 0 && depth == 0) info_[v].boundary = true;
    for (unsigned s = 0; s < stubs && depth >= 1; ++s) {
      // Stub tree: root edge from v, then q children per tree vertex.
      std::vector<VertexId> layer;
      VertexId root = next_v++;
      graph_.add_vertex(root);
      info_[root] = VertexInfo{VertexKind::Tree, 1, v, s, depth == 1};
      EdgeId re = next_e++;
      graph_.add_edge(re, v, root);
      stub_roots_[v].push_back(re);
      layer.push_back(root);
      for (unsigned level = 2; level <= depth; ++level) {
        std::vector<VertexId> next_layer;
        for (VertexId u : layer) {
          for (unsigned c = 0; c < q; ++c) {
            VertexId child = next_v++;
            graph_.add_vertex(child);
            info_[child] = VertexInfo{VertexKind::Tree, level, v, s, level == depth};
            graph_.add_edge(next_e++, u, child);
            next_layer.push_back(child);
          }
        }
        layer = std::move(next_layer);
      }
    }
  }
}

const VertexInfo& Expansion::info(VertexId v) const {
  auto it = info_.find(v);
  if (it == info_.end()) throw StructuralError("unknown vertex id " + std::to_string(v));
  return it->second;
}

unsigned Expansion::infinite_out_degree(VertexId v) const {
  const VertexInfo& vi = info(v);
  if (vi.kind == VertexKind::Tree) return q();
  return static_cast<unsigned>(source_.core().out_degree(v)) + source_.stub_count(v);
}

const std::vector<EdgeId>& Expansion::stub_root_edges(VertexId v) const {
  auto it = stub_roots_.find(v);
  return it == stub_roots_.end() ? kNone : it->second;
}

std::vector<VertexId> Expansion::core_vertices() const {
  return {source_.core().vertices().begin(), source_.core().vertices().end()};
}

VertexId path_range(const OrientedGraph& g, const Path& p) {
  if (!g.has_vertex(p.source)) throw StructuralError("path source is not a vertex");
  VertexId at = p.source;
  for (EdgeId e : p.edges) {
    const Edge& ed = g.edge(e);
    if (ed.src != at)
      throw StructuralError("path is not composable at edge " + std::to_string(e));
    at = ed.dst;
  }
  return at;
}

bool path_closed(const OrientedGraph& g, const Path& p) {
  return path_range(g, p) == p.source;
}

unsigned sigma_length(const Expansion& x, const Path& p) {
  (void)path_range(x.graph(), p);  // composability check
  unsigned n = 0;
  for (EdgeId e : p.edges)
    if (x.core_edge(e)) ++n;
  return n;
}

bool ZhyvotReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string ZhyvotReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.passed ? "pass" : "FAIL") << "  " << c.axiom
       << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  return os.str();
}

ZhyvotReport validate_zhyvot(const OrientedGraph& graph,
                             const std::set<VertexId>& core_vertices,
                             const std::set<EdgeId>& core_edges) {
  for (VertexId v : core_vertices)
    if (!graph.has_vertex(v)) throw StructuralError("core vertex " + std::to_string(v) + " not in graph");
  for (EdgeId e : core_edges) {
    const Edge& ed = graph.edge(e);
    if (!core_vertices.count(ed.src) || !core_vertices.count(ed.dst))
      throw StructuralError("core edge " + std::to_string(e) + " has an endpoint outside the core");
  }

  ZhyvotReport report;

  {
    AxiomCheck c{"core is nonempty and has no sources", true, ""};
    if (core_vertices.empty()) {
      c.passed = false;
      c.detail = "empty core";
    }
    for (VertexId v : core_vertices) {
      bool fed = false;
      for (EdgeId e : graph.in_edges(v))
        if (core_edges.count(e)) fed = true;
      if (!fed) {
        c.passed = false;
        c.detail = "core vertex " + std::to_string(v) + " has no incoming core edge";
        break;
      }
    }
    report.checks.push_back(c);
  }

  {
    AxiomCheck c{"every vertex is downstream of the core", true, ""};
    std::set<VertexId> seen(core_vertices.begin(), core_vertices.end());
    std::deque<VertexId> work(core_vertices.begin(), core_vertices.end());
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      for (EdgeId e : graph.out_edges(v)) {
        VertexId w = graph.edge(e).dst;
        if (seen.insert(w).second) work.push_back(w);
      }
    }
    for (VertexId v : graph.vertices()) {
      if (!seen.count(v)) {
        c.passed = false;
        c.detail = "vertex " + std::to_string(v) + " is unreachable from the core";
        break;
      }
    }
    report.checks.push_back(c);
  }

  {
    AxiomCheck c{"no path from outside the core has range in the core", true, ""};
    // Single edges suffice: a violating path ends with a violating edge.
    for (const auto& [id, e] : graph.edges()) {
      if (!core_vertices.count(e.src) && core_vertices.count(e.dst)) {
        c.passed = false;
        c.detail = "edge " + std::to_string(id) + " enters the core from vertex " + std::to_string(e.src);
        break;
      }
    }
    report.checks.push_back(c);
  }

  {
    AxiomCheck c{"locally finite", true, ""};
    // Finite representations are locally finite by construction; report the
    // largest degree for the record.
    std::size_t deg = 0;
    for (VertexId v : graph.vertices())
      deg = std::max(deg, graph.out_degree(v) + graph.in_degree(v));
    c.detail = "max valence " + std::to_string(deg);
    report.checks.push_back(c);
  }

  return report;
}

ZhyvotReport validate_zhyvot(const Expansion& x) {
  std::set<VertexId> cv;
  std::set<EdgeId> ce;
  for (VertexId v : x.core_vertices()) cv.insert(v);
  for (const auto& [id, e] : x.graph().edges()) {
    (void)e;
    if (x.core_edge(id)) ce.insert(id);
  }
  return validate_zhyvot(x.graph(), cv, ce);
}

namespace {

void enumerate_rec(const Expansion& x, VertexId at, Path& current,
                   const PathConstraint& cons, unsigned sigma_so_far,
                   std::vector<Path>& out) {
  const OrientedGraph& g = x.graph();
  if (cons.kind == PathConstraint::Kind::ExactSigmaEndingInCore) {
    if (sigma_so_far == cons.k &&
        (cons.k == 0 ? current.trivial() : x.core_edge(current.edges.back()))) {
      // Paths ending in the core cannot re-enter it later, so stop here.
      if (cons.k > 0 || x.in_core(at)) out.push_back(current);
      return;
    }
    if (!x.in_core(at)) return;  // left the core: sigma length is frozen below k
    for (EdgeId e : g.out_edges(at)) {
      if (!x.core_edge(e)) continue;  // only core continuations can raise sigma
      current.edges.push_back(e);
      enumerate_rec(x, g.edge(e).dst, current, cons, sigma_so_far + 1, out);
      current.edges.pop_back();
    }
    return;
  }

  // LengthUpTo: |mu| == k, or shorter ending at a sink of the expansion.
  if (current.length() == cons.k) {
    out.push_back(current);
    return;
  }
  if (g.out_degree(at) == 0) {
    if (x.boundary(at))
      throw DepthError("path enumeration hit the truncation boundary at vertex " +
                       std::to_string(at) + "; increase depth");
    out.push_back(current);  // genuine sink
    return;
  }
  if (x.boundary(at))
    throw DepthError("path enumeration hit the truncation boundary at vertex " +
                     std::to_string(at) + "; increase depth");
  for (EdgeId e : g.out_edges(at)) {
    current.edges.push_back(e);
    enumerate_rec(x, g.edge(e).dst, current, cons, sigma_so_far, out);
    current.edges.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Expansion& x, VertexId source,
                                  PathConstraint constraint) {
  if (constraint.k > max_enumeration_length)
    throw StructuralError("path bound " + std::to_string(constraint.k) +
                          " exceeds the enumeration limit");
  if (!x.graph().has_vertex(source)) throw StructuralError("unknown source vertex");
  std::vector<Path> out;
  Path p{source, {}};
  if (constraint.kind == PathConstraint::Kind::ExactSigmaEndingInCore && !x.in_core(source)) {
    if (constraint.k == 0) { /* sigma 0 ending in M requires a core vertex */ }
    return out;
  }
  enumerate_rec(x, source, p, constraint, 0, out);
  return out;  // DFS over ascending edge ids is already lexicographic
}

namespace {

FieldExtensionResult subdivide(const ZhyvotGraph& g, unsigned e_lk, unsigned new_q,
                               std::optional<EdgeId> only_edge,
                               std::optional<unsigned> tree_count_at_inserted) {
  const OrientedGraph& core = g.core();
  OrientedGraph out;
  for (VertexId v : core.vertices()) out.add_vertex(v);

  VertexId next_v = core.vertices().empty() ? 0 : *core.vertices().rbegin() + 1;
  EdgeId next_e = core.edges().empty() ? 0 : core.edges().rbegin()->first + 1;

  FieldExtensionResult res{ZhyvotGraph(OrientedGraph{}, 2, 0), {}, {}};
  std::map<EdgeId, std::vector<EdgeId>> segments;
  std::map<EdgeId, std::vector<VertexId>> inserted;

  for (const auto& [id, e] : core.edges()) {
    unsigned parts = (only_edge && *only_edge != id) ? 1 : e_lk;
    if (parts == 1) {
      out.add_edge(id, e.src, e.dst);
      segments[id] = {id};
      continue;
    }
    std::vector<VertexId> mids;
    for (unsigned i = 0; i + 1 < parts; ++i) {
      VertexId t = next_v++;
      out.add_vertex(t);
      mids.push_back(t);
    }
    std::vector<EdgeId> segs;
    VertexId at = e.src;
    for (unsigned i = 0; i < parts; ++i) {
      VertexId to = i + 1 < parts ? mids[i] : e.dst;
      EdgeId eid = i == 0 ? id : next_e++;
      out.add_edge(eid, at, to);
      segs.push_back(eid);
      at = to;
    }
    segments[id] = segs;
    inserted[id] = mids;
  }

  // Stub counts: auto-completion against the new valence target, with an
  // explicit override at inserted vertices when requested.  Overrides on
  // original vertices survive only when q is unchanged (single insertion);
  // a field extension recomputes every count against q^f + 1.
  std::map<VertexId, unsigned> overrides;
  if (only_edge && new_q == g.q()) overrides = g.stub_overrides();
  if (tree_count_at_inserted) {
    for (const auto& [orig, mids] : inserted)
      for (VertexId t : mids) {
        (void)orig;
        overrides[t] = *tree_count_at_inserted;
      }
  }

  res.graph = ZhyvotGraph(std::move(out), new_q, g.depth(), overrides);
  res.segments = std::move(segments);
  res.inserted = std::move(inserted);
  return res;
}

}  // namespace

FieldExtensionResult field_extension(const ZhyvotGraph& g, unsigned e_lk, unsigned f) {
  if (e_lk < 1 || f < 1) throw StructuralError("field extension needs e_lk >= 1 and f >= 1");
  unsigned long long nq = 1;
  for (unsigned i = 0; i < f; ++i) {
    nq *= g.q();
    if (nq > 1u << 20) throw StructuralError("q^f too large");
  }
  return subdivide(g, e_lk, static_cast<unsigned>(nq), std::nullopt, std::nullopt);
}

FieldExtensionResult insert_vertex(const ZhyvotGraph& g, EdgeId edge, unsigned new_tree_count) {
  if (new_tree_count < 1) throw StructuralError("insert_vertex needs at least one new tree");
  (void)g.core().edge(edge);
  return subdivide(g, 2, g.q(), edge, new_tree_count);
}

ZhyvotGraph genus1(unsigned n, unsigned q, unsigned depth) {
  if (n < 1) throw StructuralError("genus1 polygon needs n >= 1");
  OrientedGraph core;
  for (unsigned i = 0; i < n; ++i) core.add_vertex(i);
  for (unsigned i = 0; i < n; ++i) core.add_edge(i, i, (i + 1) % n);
  return ZhyvotGraph(std::move(core), q, depth);
}

ZhyvotGraph genus2_case1(unsigned q, unsigned depth) {
  OrientedGraph core;
  core.add_vertex(0);
  core.add_edge(0, 0, 0);
  core.add_edge(1, 0, 0);
  return ZhyvotGraph(std::move(core), q, depth);
}

ZhyvotGraph genus2_case2(unsigned q, unsigned depth) {
  OrientedGraph core;
  core.add_vertex(0);  // v
  core.add_vertex(1);  // w
  core.add_edge(0, 0, 1);  // b: v -> w
  core.add_edge(1, 1, 0);  // a: w -> v
  core.add_edge(2, 1, 0);  // c: w -> v
  return ZhyvotGraph(std::move(core), q, depth);
}

ZhyvotGraph genus2_case3(unsigned q, unsigned depth) {
  OrientedGraph core;
  core.add_vertex(0);  // v
  core.add_vertex(1);  // w
  core.add_edge(0, 0, 0);  // loop at v
  core.add_edge(1, 0, 1);  // f: v -> w
  core.add_edge(2, 1, 1);  // loop at w
  return ZhyvotGraph(std::move(core), q, depth);
}

ZhyvotGraph make_template(const std::string& name, unsigned n, unsigned q, unsigned depth) {
  if (name == "genus1") return genus1(n, q, depth);
  if (name == "genus2_case1") return genus2_case1(q, depth);
  if (name == "genus2_case2") return genus2_case2(q, depth);
  if (name == "genus2_case3") return genus2_case3(q, depth);
  throw StructuralError("unknown template '" + name + "'");
}

std::vector<Cycle> cycle_basis(const OrientedGraph& core) {
  std::vector<VertexId> reps;
  if (!core.connected(&reps)) {
    std::string msg = "core is disconnected; components at vertices";
    for (VertexId v : reps) msg += " " + std::to_string(v);
    throw StructuralError(msg);
  }
  if (core.vertices().empty()) return {};

  // BFS spanning tree over the undirected star, smallest ids first.
  VertexId root = *core.vertices().begin();
  std::map<VertexId, std::pair<EdgeId, int>> parent_step;  // step taken to reach v
  std::set<VertexId> seen{root};
  std::set<EdgeId> tree_edges;
  std::deque<VertexId> work{root};
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    std::vector<std::pair<EdgeId, std::pair<VertexId, int>>> star;
    for (EdgeId e : core.out_edges(v)) star.push_back({e, {core.edge(e).dst, +1}});
    for (EdgeId e : core.in_edges(v)) star.push_back({e, {core.edge(e).src, -1}});
    std::sort(star.begin(), star.end());
    for (const auto& [e, to] : star) {
      if (seen.count(to.first)) continue;
      seen.insert(to.first);
      tree_edges.insert(e);
      parent_step[to.first] = {e, to.second};
      work.push_back(to.first);
    }
  }

  auto tree_path_from_root = [&](VertexId v) {
    std::vector<std::pair<EdgeId, int>> steps;
    while (v != root) {
      auto [e, sign] = parent_step.at(v);
      steps.push_back({e, sign});
      v = sign > 0 ? core.edge(e).src : core.edge(e).dst;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };

  std::vector<Cycle> basis;
  for (const auto& [id, e] : core.edges()) {
    if (tree_edges.count(id)) continue;
    // root -> src, the edge forward, then dst -> root; cancel the shared prefix.
    auto to_src = tree_path_from_root(e.src);
    auto to_dst = tree_path_from_root(e.dst);
    size_t common = 0;
    while (common < to_src.size() && common < to_dst.size() && to_src[common] == to_dst[common])
      ++common;
    Cycle c;
    c.base = e.src;
    // Walk dst -> (join) reversed, then join -> src, then the closing edge...
    // assembled as: src-path tail forward is wrong way; we want a closed walk
    // starting at src: edge (src->dst), then dst-path back to join reversed,
    // then join-path to src forward reversed appropriately.
    c.steps.push_back({id, +1});
    for (size_t i = to_dst.size(); i-- > common;)
      c.steps.push_back({to_dst[i].first, -to_dst[i].second});
    for (size_t i = common; i < to_src.size(); ++i) c.steps.push_back(to_src[i]);
    basis.push_back(std::move(c));
  }
  return basis;
}

Path cycle_as_path(const OrientedGraph& g, const Cycle& c) {
  Path p;
  p.source = c.base;
  VertexId at = c.base;
  for (const auto& [e, sign] : c.steps) {
    if (sign < 0)
      throw StructuralError("cycle traverses edge " + std::to_string(e) +
                            " against its orientation; not a directed loop");
    if (g.edge(e).src != at)
      throw StructuralError("cycle is not composable as a directed loop");
    p.edges.push_back(e);
    at = g.edge(e).dst;
  }
  if (at != c.base) throw StructuralError("cycle does not close");
  return p;
}

}  // namespace zhyvot
