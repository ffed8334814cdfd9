#include "zhyvot/currents.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace zhyvot {

Scalar Current::at(EdgeId e) const {
  auto it = mu.find(e);
  if (it == mu.end())
    throw StructuralError("current undefined on edge " + std::to_string(e));
  return it->second;
}

bool Current::integer_valued() const {
  for (const auto& [e, v] : mu) {
    (void)e;
    if (!v.is_integer()) return false;
  }
  return true;
}

StarReport verify_current(const Expansion& x, const Current& c) {
  StarReport report;
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    Scalar acc(0);
    for (EdgeId e : x.graph().out_edges(v)) acc += c.at(e);
    for (EdgeId e : x.graph().in_edges(v)) acc -= c.at(e);
    report.residuals[v] = acc;
    if (!acc.is_zero()) report.failures.push_back(v);
  }
  return report;
}

WeightCurrentReport current_from_weight(const Expansion& x, const GraphWeight& w) {
  WeightCurrentReport report;
  const OrientedGraph& g = x.graph();
  for (const auto& [id, e] : g.edges()) {
    Scalar ne(static_cast<long>(x.infinite_out_degree(e.src)));
    report.candidate.mu[id] = w.lambda.at(id) * w.g.at(e.dst) - w.g.at(e.src) / ne;
  }

  report.directed_conservation = true;
  for (VertexId v : g.vertices()) {
    if (x.boundary(v)) continue;
    Scalar acc(0);
    for (EdgeId e : g.out_edges(v)) acc += report.candidate.at(e);
    report.directed_residuals[v] = acc;
    if (!acc.is_zero()) report.directed_conservation = false;
  }

  // Lemma's second clause: mu is a genuine current when lambda(e) equals
  // 1/N_{e-bar}, the reversed edge's source count.
  report.reversal_clause_applicable = true;
  for (const auto& [id, e] : g.edges()) {
    Scalar n_rev(static_cast<long>(x.infinite_out_degree(e.dst)));
    if (w.lambda.at(id) != Scalar(1) / n_rev) {
      report.reversal_clause_applicable = false;
      break;
    }
  }
  report.full_current =
      report.reversal_clause_applicable && verify_current(x, report.candidate).passed();
  return report;
}

Current current_from_virtual(const Expansion& x, const VirtualWeight& v) {
  std::string why;
  if (!v.harmonic_valid(x, &why))
    throw InfeasibleError("current_from_virtual precondition: " + why);
  Current c;
  for (const auto& [id, e] : x.graph().edges())
    c.mu[id] = v.Ghat.at(e.dst) - v.Ghat.at(e.src);
  for (VertexId vert : x.graph().vertices()) {
    if (x.boundary(vert)) continue;
    Scalar acc(0);
    for (EdgeId e : x.graph().out_edges(vert)) acc += c.at(e);
    if (!acc.is_zero())
      throw InfeasibleError("directed conservation failed at vertex " + std::to_string(vert));
  }
  return c;
}

namespace {

Scalar positive_part(const Scalar& v) { return v.sign() > 0 ? v : Scalar(0); }
Scalar negative_part(const Scalar& v) { return v.sign() < 0 ? -v : Scalar(0); }

struct SpanningStep {
  EdgeId edge;
  int sign;  // +1: traversed forward, -1: backward
};

// Undirected BFS tree from base over ascending edge ids.
std::map<VertexId, SpanningStep> spanning_tree(const OrientedGraph& g, VertexId base) {
  std::map<VertexId, SpanningStep> parent;
  std::set<VertexId> seen{base};
  std::deque<VertexId> work{base};
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    std::vector<std::pair<EdgeId, std::pair<VertexId, int>>> star;
    for (EdgeId e : g.out_edges(v)) star.push_back({e, {g.edge(e).dst, +1}});
    for (EdgeId e : g.in_edges(v)) star.push_back({e, {g.edge(e).src, -1}});
    std::sort(star.begin(), star.end());
    for (const auto& [e, to] : star) {
      if (seen.count(to.first)) continue;
      seen.insert(to.first);
      parent[to.first] = SpanningStep{e, to.second};
      work.push_back(to.first);
    }
  }
  return parent;
}

}  // namespace

PathWeights weight_from_current(const Expansion& x, const Current& c, VertexId base) {
  const OrientedGraph& g = x.graph();
  if (!g.has_vertex(base)) throw StructuralError("unknown base vertex");
  auto parent = spanning_tree(g, base);

  PathWeights out;
  out.base = base;
  out.g_plus[base] = Scalar(0);
  out.g_minus[base] = Scalar(0);
  // Accumulate along base paths; parents are always resolved before children
  // when walking ids in BFS discovery order, so recurse instead.
  std::map<VertexId, bool> done;
  done[base] = true;
  std::function<void(VertexId)> resolve = [&](VertexId v) {
    if (done.count(v)) return;
    const SpanningStep& step = parent.at(v);
    VertexId p = step.sign > 0 ? g.edge(step.edge).src : g.edge(step.edge).dst;
    resolve(p);
    Scalar m = c.at(step.edge);
    // Backward traversal swaps chi+ and chi- (the reversal law).
    Scalar plus = step.sign > 0 ? positive_part(m) : negative_part(m);
    Scalar minus = step.sign > 0 ? negative_part(m) : positive_part(m);
    out.g_plus[v] = out.g_plus.at(p) + plus;
    out.g_minus[v] = out.g_minus.at(p) + minus;
    done[v] = true;
  };
  for (VertexId v : g.vertices()) {
    if (!parent.count(v) && v != base)
      throw StructuralError("vertex " + std::to_string(v) + " unreachable from the base");
    resolve(v);
  }

  for (const Cycle& cyc : cycle_basis(x.source().core())) {
    Scalar period(0);
    for (const auto& [e, sign] : cyc.steps) period += Scalar(sign) * c.at(e);
    out.periods.push_back(period);
  }
  return out;
}

CylinderFunction canonical_cylinder(CylinderFunction f) {
  std::map<std::pair<EdgeId, bool>, Scalar> merged;
  for (const auto& t : f) merged[{t.edge, t.reversed}] += t.coeff;
  CylinderFunction out;
  for (const auto& [key, coeff] : merged)
    if (!coeff.is_zero()) out.push_back(CylTerm{key.first, key.second, coeff});
  return out;
}

Scalar k0_pairing(const Expansion& x, const Current& c, const CylinderFunction& f) {
  Scalar acc(0);
  for (const auto& t : f) {
    if (!x.graph().has_edge(t.edge)) throw StructuralError("cylinder term on unknown edge");
    Scalar v = c.at(t.edge);
    acc += t.coeff * (t.reversed ? -v : v);
  }
  return acc;
}

CylinderFunction full_star(const Expansion& x, VertexId v) {
  CylinderFunction f;
  for (EdgeId e : x.graph().out_edges(v)) f.push_back(CylTerm{e, false, Scalar(1)});
  for (EdgeId e : x.graph().in_edges(v)) f.push_back(CylTerm{e, true, Scalar(1)});
  return f;
}

CylinderFunction refine_term(const Expansion& x, const CylTerm& term) {
  const Edge& e = x.graph().edge(term.edge);
  VertexId head = term.reversed ? e.src : e.dst;
  if (x.boundary(head))
    throw DepthError("refinement at truncation-boundary vertex " + std::to_string(head) +
                     "; increase depth");
  // Continuations are every direction leaving the head except the one back
  // along the term itself: (e, fwd) reverses to (e, rev) and vice versa.
  CylinderFunction out;
  bool back_skipped = false;
  for (EdgeId f : x.graph().out_edges(head)) {
    if (!back_skipped && f == term.edge && term.reversed) {
      back_skipped = true;
      continue;
    }
    out.push_back(CylTerm{f, false, term.coeff});
  }
  for (EdgeId f : x.graph().in_edges(head)) {
    if (!back_skipped && f == term.edge && !term.reversed) {
      back_skipped = true;
      continue;
    }
    out.push_back(CylTerm{f, true, term.coeff});
  }
  return out;
}

Current cycle_current(const Expansion& x, const Cycle& cycle) {
  Current c;
  for (const auto& [id, e] : x.graph().edges()) {
    (void)e;
    c.mu[id] = Scalar(0);
  }
  for (const auto& [e, sign] : cycle.steps) c.mu[e] += Scalar(sign);
  return c;
}

CurrentSpace current_space_rank(const Expansion& x) {
  const OrientedGraph& core = x.source().core();
  auto cycles = cycle_basis(core);  // throws with components when disconnected
  CurrentSpace space;
  space.rank = static_cast<unsigned>(cycles.size());
  unsigned expected = static_cast<unsigned>(core.edge_count() - core.vertex_count() + 1);
  if (space.rank != expected)
    throw StructuralError("cycle basis size disagrees with |E| - |V| + 1");
  for (const Cycle& cyc : cycles) {
    Current c = cycle_current(x, cyc);
    if (!verify_current(x, c).passed())
      throw StructuralError("basis cycle current fails momentum conservation");
    space.basis.push_back(std::move(c));
  }
  return space;
}

std::optional<std::vector<Scalar>> decompose_in_basis(const Expansion& x, const CurrentSpace& space,
                                                      const Current& c) {
  // Each basis current owns its closing edge (the first step of its cycle),
  // which lies on no other basis cycle; the coordinate is read off there.
  auto cycles = cycle_basis(x.source().core());
  std::vector<Scalar> coords;
  Current rest = c;
  for (size_t i = 0; i < space.basis.size(); ++i) {
    EdgeId closing = cycles[i].steps.front().first;
    Scalar coeff = rest.at(closing);
    coords.push_back(coeff);
    for (const auto& [e, v] : space.basis[i].mu) rest.mu[e] -= coeff * v;
  }
  for (const auto& [e, v] : rest.mu) {
    (void)e;
    if (!v.is_zero()) return std::nullopt;
  }
  return coords;
}

namespace {

// Adds `value` along a stub ray from core vertex v down to the boundary.
void drain_along_ray(const Expansion& x, Current& c, VertexId v, const Scalar& value) {
  const auto& roots = x.stub_root_edges(v);
  if (roots.empty())
    throw InfeasibleError("no stub tree at vertex " + std::to_string(v) +
                          " to carry the divisor flow; this prescription needs a stub (larger q) "
                          "and depth >= 1");
  EdgeId e = roots.front();
  for (;;) {
    c.mu[e] += value;
    VertexId head = x.graph().edge(e).dst;
    const auto& next = x.graph().out_edges(head);
    if (next.empty()) break;  // boundary leaf
    e = next.front();
  }
}

}  // namespace

ThetaDescriptor build_theta(const Expansion& x, const VirtualWeight& ghat,
                            const std::optional<std::vector<long>>& c_valuations, VertexId base) {
  for (const auto& [v, val] : ghat.Ghat) {
    (void)v;
    if (!val.is_integer()) throw InfeasibleError("build_theta needs an integer virtual weight");
  }
  ThetaDescriptor d;
  d.ghat = ghat;
  d.base = base;
  d.mu = current_from_virtual(x, ghat);

  auto cycles = cycle_basis(x.source().core());
  if (c_valuations) {
    if (c_valuations->size() != cycles.size())
      throw InfeasibleError("need one c-valuation per basis cycle (" + std::to_string(cycles.size()) + ")");
    for (size_t i = 0; i < cycles.size(); ++i) {
      long val = (*c_valuations)[i];
      if (val == 0) continue;
      EdgeId closing = cycles[i].steps.front().first;
      const Edge& e = x.graph().edge(closing);
      d.mu.mu[closing] += Scalar(val);
      if (e.src != e.dst) {
        // Rebalance the star sums at both endpoints through boundary rays.
        drain_along_ray(x, d.mu, e.src, Scalar(-val));
        drain_along_ray(x, d.mu, e.dst, Scalar(val));
      }
    }
  }

  for (const Cycle& cyc : cycles) {
    Scalar period(0);
    for (const auto& [e, sign] : cyc.steps) period += Scalar(sign) * d.mu.at(e);
    d.periods.push_back(period);
  }
  if (c_valuations) {
    for (size_t i = 0; i < cycles.size(); ++i)
      if (d.periods[i] != Scalar((*c_valuations)[i]))
        throw InfeasibleError("period/current mismatch on basis cycle " + std::to_string(i));
  }

  // The period map is additive under cycle concatenation (the combinatorial
  // 1-cocycle law); check it literally on consecutive basis pairs.
  for (size_t i = 0; i + 1 < cycles.size(); ++i) {
    Cycle joined;
    joined.base = cycles[i].base;
    joined.steps = cycles[i].steps;
    joined.steps.insert(joined.steps.end(), cycles[i + 1].steps.begin(), cycles[i + 1].steps.end());
    Scalar period(0);
    for (const auto& [e, sign] : joined.steps) period += Scalar(sign) * d.mu.at(e);
    if (period != d.periods[i] + d.periods[i + 1])
      throw InfeasibleError("period map fails cocycle additivity");
  }
  return d;
}

Scalar PeriodCocycle::of_word(const std::vector<long>& word) const {
  if (word.size() != generator_periods.size())
    throw StructuralError("word length must match the number of generators");
  Scalar acc(0);
  for (size_t i = 0; i < word.size(); ++i) acc += Scalar(word[i]) * generator_periods[i];
  return acc;
}

PeriodCocycle period_cocycle(const ThetaDescriptor& d) {
  return PeriodCocycle{d.periods};
}

bool theta_equivalent(const Expansion& x, const ThetaDescriptor& a, const ThetaDescriptor& b) {
  for (const auto& [e, ed] : x.graph().edges()) {
    (void)ed;
    if (a.mu.at(e) != b.mu.at(e)) return false;
  }
  // Equal currents induce the same K_0 functional; witness on the
  // single-direction generating family.
  for (const auto& [e, ed] : x.graph().edges()) {
    (void)ed;
    CylinderFunction probe{CylTerm{e, false, Scalar(1)}};
    if (k0_pairing(x, a.mu, probe) != k0_pairing(x, b.mu, probe)) return false;
  }
  return true;
}

}  // namespace zhyvot
