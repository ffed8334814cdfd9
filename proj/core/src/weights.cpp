#include "zhyvot/weights.hpp"

#include <algorithm>
#include <sstream>

namespace zhyvot {

SpecialWeight::SpecialWeight(Scalar lambda, std::map<VertexId, Scalar> core_g,
                             std::map<EdgeId, int> n,
                             std::map<VertexId, std::vector<Scalar>> stub_root_values,
                             std::set<VertexId> lambda_weighted_stub_vertices)
    : lambda_(std::move(lambda)),
      core_g_(std::move(core_g)),
      n_(std::move(n)),
      stub_roots_(std::move(stub_root_values)),
      lambda_weighted_(std::move(lambda_weighted_stub_vertices)) {
  for (const auto& [e, ne] : n_)
    if (ne != 0 && ne != 1)
      throw InfeasibleError("n(" + std::to_string(e) + ") must be 0 or 1");
}

int SpecialWeight::n_of(EdgeId e) const {
  auto it = n_.find(e);
  return it == n_.end() ? 0 : it->second;
}

Scalar SpecialWeight::g_of(const Expansion& x, VertexId v) const {
  const VertexInfo& vi = x.info(v);
  if (vi.kind == VertexKind::Core) {
    auto it = core_g_.find(v);
    if (it == core_g_.end()) throw InfeasibleError("weight undefined at core vertex " + std::to_string(v));
    return it->second;
  }
  auto it = stub_roots_.find(vi.anchor);
  if (it == stub_roots_.end() || vi.stub_index >= it->second.size())
    throw InfeasibleError("weight undefined on stub tree at vertex " + std::to_string(vi.anchor));
  Scalar root = it->second[vi.stub_index];
  if (vi.level <= 1) return root;
  return root / Scalar(static_cast<long>(x.q())).pow(vi.level - 1);
}

Scalar SpecialWeight::lambda_of_edge(const Expansion& x, EdgeId e) const {
  if (x.core_edge(e)) return n_of(e) ? lambda_ : Scalar(1);
  const Edge& ed = x.graph().edge(e);
  // Stub-root edges out of marked core vertices carry lambda (vertex
  // insertion rule); all other tree edges carry 1.
  if (x.in_core(ed.src) && lambda_weighted_.count(ed.src)) return lambda_;
  return Scalar(1);
}

Scalar SpecialWeight::lambda_of_path(const Expansion& x, const Path& p) const {
  Scalar r(1);
  for (EdgeId e : p.edges) r *= lambda_of_edge(x, e);
  return r;
}

Scalar SpecialWeight::residual(const Expansion& x, VertexId v) const {
  Scalar acc = g_of(x, v);
  for (EdgeId e : x.graph().out_edges(v))
    acc -= lambda_of_edge(x, e) * g_of(x, x.graph().edge(e).dst);
  return acc;
}

bool SpecialWeight::valid(const Expansion& x, std::string* why) const {
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    Scalar r = residual(x, v);
    if (!r.is_zero()) {
      if (why) *why = "nonzero weight-equation residual " + r.to_string() + " at vertex " + std::to_string(v);
      return false;
    }
  }
  return true;
}

bool SpecialWeight::adapted(const Expansion& x) const {
  if (!(lambda_ > Scalar(0) && lambda_ < Scalar(1))) return false;
  if (!lambda_weighted_.empty()) return false;
  for (const auto& [id, e] : x.source().core().edges()) {
    (void)e;
    if (n_of(id) != 1) return false;
  }
  return true;
}

bool SpecialWeight::faithful(const Expansion& x) const {
  for (VertexId v : x.graph().vertices())
    if (g_of(x, v).sign() <= 0) return false;
  return true;
}

Scalar GraphWeight::residual(const Expansion& x, VertexId v) const {
  Scalar acc = g.at(v);
  for (EdgeId e : x.graph().out_edges(v)) acc -= lambda.at(e) * g.at(x.graph().edge(e).dst);
  return acc;
}

bool GraphWeight::valid(const Expansion& x, std::string* why) const {
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    Scalar r = residual(x, v);
    if (!r.is_zero()) {
      if (why) *why = "nonzero residual " + r.to_string() + " at vertex " + std::to_string(v);
      return false;
    }
  }
  return true;
}

GraphWeight GraphWeight::from_special(const Expansion& x, const SpecialWeight& w) {
  GraphWeight out;
  for (VertexId v : x.graph().vertices()) out.g[v] = w.g_of(x, v);
  for (const auto& [id, e] : x.graph().edges()) {
    (void)e;
    out.lambda[id] = w.lambda_of_edge(x, id);
  }
  return out;
}

GraphWeight GraphWeight::harmonic(const Expansion& x, std::map<VertexId, Scalar> g) {
  GraphWeight out;
  out.g = std::move(g);
  for (const auto& [id, e] : x.graph().edges())
    out.lambda[id] = Scalar(1) / Scalar(static_cast<long>(x.infinite_out_degree(e.src)));
  return out;
}

Scalar InhomWeight::residual(const Expansion& x, VertexId v) const {
  Scalar acc = G.at(v);
  for (EdgeId e : x.graph().out_edges(v)) {
    acc += chi.at(e);
    acc -= lambda.at(e) * G.at(x.graph().edge(e).dst);
  }
  return acc;
}

bool InhomWeight::valid(const Expansion& x, std::string* why) const {
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    Scalar r = residual(x, v);
    if (!r.is_zero()) {
      if (why) *why = "nonzero inhomogeneous residual " + r.to_string() + " at vertex " + std::to_string(v);
      return false;
    }
  }
  return true;
}

Scalar VirtualWeight::harmonic_residual(const Expansion& x, VertexId v) const {
  Scalar acc = Ghat.at(v);
  for (EdgeId e : x.graph().out_edges(v)) {
    Scalar lam = Scalar(1) / Scalar(static_cast<long>(x.infinite_out_degree(x.graph().edge(e).src)));
    acc -= lam * Ghat.at(x.graph().edge(e).dst);
  }
  return acc;
}

bool VirtualWeight::harmonic_valid(const Expansion& x, std::string* why) const {
  for (VertexId v : x.graph().vertices()) {
    if (x.boundary(v)) continue;
    Scalar r = harmonic_residual(x, v);
    if (!r.is_zero()) {
      if (why) *why = "virtual weight fails the homogeneous equation at vertex " + std::to_string(v);
      return false;
    }
  }
  return true;
}

// -- solver -------------------------------------------------------------------

namespace {

// Determinant over Q[x] by fraction-free (Bareiss) elimination.
Poly det_poly(std::vector<std::vector<Poly>> m) {
  const size_t n = m.size();
  if (n == 0) return Poly::constant(Rat(1));
  Poly prev = Poly::constant(Rat(1));
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return Poly();  // singular for every x
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).divide_exact(prev);
    prev = m[k][k];
  }
  Poly det = m[n - 1][n - 1];
  if (sign < 0) det = -det;
  return det;
}

// Null space of an n x n Scalar matrix by Gauss-Jordan elimination.
std::vector<std::vector<Scalar>> nullspace(std::vector<std::vector<Scalar>> m) {
  const size_t n = m.empty() ? 0 : m[0].size();
  size_t pivot_row = 0;
  std::vector<long> pivot_col_of_row;
  std::vector<bool> is_pivot_col(n, false);
  for (size_t col = 0; col < n && pivot_row < m.size(); ++col) {
    size_t sel = pivot_row;
    while (sel < m.size() && m[sel][col].is_zero()) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[pivot_row], m[sel]);
    Scalar inv = m[pivot_row][col].inverse();
    for (size_t j = col; j < n; ++j) m[pivot_row][j] *= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == pivot_row || m[i][col].is_zero()) continue;
      Scalar f = m[i][col];
      for (size_t j = col; j < n; ++j) m[i][j] -= f * m[pivot_row][j];
    }
    is_pivot_col[col] = true;
    pivot_col_of_row.push_back(static_cast<long>(col));
    ++pivot_row;
  }
  std::vector<std::vector<Scalar>> basis;
  for (size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot_col[free_col]) continue;
    std::vector<Scalar> vec(n, Scalar(0));
    vec[free_col] = Scalar(1);
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
      vec[static_cast<size_t>(pivot_col_of_row[r])] = -m[r][free_col];
    basis.push_back(std::move(vec));
  }
  return basis;
}

struct PencilData {
  std::vector<VertexId> order;                      // ascending core vertex ids
  std::vector<std::vector<std::pair<long, long>>> counts;  // (n0_count, n1_count) per (j,k)
  std::vector<bool> sink;
};

PencilData build_pencil(const OrientedGraph& core, const std::map<EdgeId, int>& n) {
  PencilData d;
  d.order.assign(core.vertices().begin(), core.vertices().end());
  const size_t m = d.order.size();
  std::map<VertexId, size_t> index;
  for (size_t i = 0; i < m; ++i) index[d.order[i]] = i;
  d.counts.assign(m, std::vector<std::pair<long, long>>(m, {0, 0}));
  d.sink.assign(m, false);
  for (size_t j = 0; j < m; ++j) d.sink[j] = core.out_degree(d.order[j]) == 0;
  for (const auto& [id, e] : core.edges()) {
    auto it = n.find(id);
    if (it == n.end()) throw InfeasibleError("n undefined on core edge " + std::to_string(id));
    if (it->second != 0 && it->second != 1)
      throw InfeasibleError("n(" + std::to_string(id) + ") must be 0 or 1");
    auto& cell = d.counts[index[e.src]][index[e.dst]];
    (it->second == 0 ? cell.first : cell.second) += 1;
  }
  return d;
}

std::vector<std::vector<Scalar>> pencil_at(const PencilData& d, const Scalar& lambda) {
  const size_t m = d.order.size();
  std::vector<std::vector<Scalar>> out(m, std::vector<Scalar>(m, Scalar(0)));
  for (size_t j = 0; j < m; ++j) {
    if (d.sink[j]) continue;  // identity row: (A - I) row is zero
    for (size_t k = 0; k < m; ++k) {
      out[j][k] = Scalar(d.counts[j][k].first) + Scalar(d.counts[j][k].second) * lambda;
      if (j == k) out[j][k] -= Scalar(1);
    }
  }
  return out;
}

std::optional<SpecialStateSolution> positive_state_at(const PencilData& d, const Scalar& lambda,
                                                      bool approximate) {
  auto basis = nullspace(pencil_at(d, lambda));
  if (basis.empty()) return std::nullopt;
  auto try_vector = [&](const std::vector<Scalar>& x) -> std::optional<SpecialStateSolution> {
    int want = 0;
    for (const auto& v : x) {
      int s = v.sign();
      if (s == 0) return std::nullopt;  // faithfulness requires g > 0 everywhere
      if (want == 0) want = s;
      if (s != want) return std::nullopt;
    }
    Scalar total(0);
    for (const auto& v : x) total += v;
    SpecialStateSolution sol;
    sol.lambda = lambda;
    sol.approximate = approximate;
    for (size_t i = 0; i < x.size(); ++i) sol.g[d.order[i]] = x[i] / total;
    return sol;
  };
  for (const auto& x : basis) {
    if (auto s = try_vector(x)) return s;
  }
  if (basis.size() > 1) {
    std::vector<Scalar> sum(basis[0].size(), Scalar(0));
    for (const auto& x : basis)
      for (size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
    if (auto s = try_vector(sum)) return s;
  }
  return std::nullopt;
}

}  // namespace

SolveResult solve_special_state(const ZhyvotGraph& core, const std::map<EdgeId, int>& n,
                                std::optional<Scalar> lambda) {
  SolveResult res;
  const OrientedGraph& g = core.core();
  if (g.vertices().empty()) {
    res.status = SolveResult::Status::Empty;
    res.diagnostic = "empty core";
    return res;
  }
  PencilData pencil = build_pencil(g, n);

  // det(A(x) - I) as an exact polynomial.
  const size_t m = pencil.order.size();
  std::vector<std::vector<Poly>> sym(m, std::vector<Poly>(m));
  for (size_t j = 0; j < m; ++j)
    for (size_t k = 0; k < m; ++k) {
      if (pencil.sink[j]) {
        sym[j][k] = Poly();
        continue;
      }
      Rat c0(pencil.counts[j][k].first);
      Rat c1(pencil.counts[j][k].second);
      if (j == k) c0 -= 1;
      sym[j][k] = Poly({c0, c1});
    }
  Poly det = det_poly(std::move(sym));

  if (lambda) {
    if (!(*lambda > Scalar(0) && *lambda < Scalar(1))) {
      res.status = SolveResult::Status::Empty;
      res.diagnostic = "lambda must lie in (0,1)";
      return res;
    }
    if (!det.is_zero() && !det.eval(*lambda).is_zero()) {
      res.status = SolveResult::Status::Empty;
      res.diagnostic = "no eigenvalue-1 eigenvector at lambda = " + lambda->to_string();
      return res;
    }
    if (auto sol = positive_state_at(pencil, *lambda, false)) {
      res.status = SolveResult::Status::Ok;
      res.solutions.push_back(*sol);
    } else {
      res.status = SolveResult::Status::Empty;
      res.diagnostic = "no strictly positive eigenvector at lambda = " + lambda->to_string();
    }
    return res;
  }

  if (det.is_zero()) {
    res.status = SolveResult::Status::FamilyNeedsLambda;
    res.diagnostic = "the pencil is singular for every lambda (one-parameter family); supply lambda";
    return res;
  }

  auto roots = roots_in_unit_interval(det);
  for (const Scalar& r : roots.exact) {
    if (auto sol = positive_state_at(pencil, r, false)) res.solutions.push_back(*sol);
  }
  for (double r : roots.approximate) {
    // Exact form unrecognized: record the bisection value as a flagged
    // rational approximation; the eigenvector is not produced.
    SpecialStateSolution sol;
    sol.lambda = Scalar(Rat(static_cast<long>(r * 1e12), 1000000000000L));
    sol.approximate = true;
    res.solutions.push_back(sol);
  }
  if (res.solutions.empty()) {
    res.status = SolveResult::Status::Empty;
    std::ostringstream os;
    os << "no lambda in (0,1) admits a positive eigenvalue-1 eigenvector; det(A(x)-I) = "
       << det.to_string();
    res.diagnostic = os.str();
  } else {
    res.status = SolveResult::Status::Ok;
  }
  return res;
}

Scalar core_residual(const ZhyvotGraph& g, const CoreWeight& w, VertexId v) {
  Scalar acc = w.g.at(v);
  for (EdgeId e : g.core().out_edges(v)) {
    auto it = w.n.find(e);
    int ne = it == w.n.end() ? 0 : it->second;
    acc -= (ne ? w.lambda : Scalar(1)) * w.g.at(g.core().edge(e).dst);
  }
  return acc;
}

SpecialWeight extend_to_trees(const CoreWeight& w, const ZhyvotGraph& g) {
  std::map<VertexId, std::vector<Scalar>> roots;
  for (VertexId v : g.core().vertices()) {
    Scalar budget = core_residual(g, w, v);
    int s = budget.sign();
    if (s < 0)
      throw InfeasibleError("negative stub budget " + budget.to_string() + " at vertex " +
                            std::to_string(v));
    unsigned m = g.stub_count(v);
    if (m == 0) {
      if (s != 0)
        throw InfeasibleError("positive stub budget at vertex " + std::to_string(v) +
                              " but no stub tree to carry it");
      continue;
    }
    roots[v].assign(m, budget / Scalar(static_cast<long>(m)));
  }
  return SpecialWeight(w.lambda, w.g, w.n, std::move(roots));
}

SpecialWeight uniform_polygon_state(const ZhyvotGraph& polygon, const Scalar& lambda) {
  const OrientedGraph& core = polygon.core();
  if (!(lambda > Scalar(0) && lambda < Scalar(1)))
    throw InfeasibleError("lambda must lie in (0,1)");
  for (VertexId v : core.vertices())
    if (core.out_degree(v) != 1 || core.in_degree(v) != 1)
      throw InfeasibleError("uniform_polygon_state expects a directed cycle core");
  CoreWeight w;
  w.lambda = lambda;
  Scalar share = Scalar(1) / Scalar(static_cast<long>(core.vertex_count()));
  for (VertexId v : core.vertices()) w.g[v] = share;
  for (const auto& [id, e] : core.edges()) {
    (void)e;
    w.n[id] = 1;
  }
  return extend_to_trees(w, polygon);
}

InsertExtendResult insert_vertex_extend(const ZhyvotGraph& g, const SpecialWeight& w,
                                        EdgeId edge, unsigned new_tree_count) {
  const Scalar& lam = w.lambda();
  if (lam.is_zero() || lam == Scalar(1))
    throw InfeasibleError("vertex insertion divides by lambda(1-lambda); lambda must avoid 0 and 1");
  if (w.n_of(edge) != 1)
    throw InfeasibleError("vertex insertion applies to edges with n = 1");
  const Edge& e = g.core().edge(edge);

  FieldExtensionResult ext = insert_vertex(g, edge, new_tree_count);
  VertexId t = ext.inserted.at(edge).front();
  Scalar gw = w.core_g().at(e.dst);

  std::map<VertexId, Scalar> core_g = w.core_g();
  core_g[t] = gw;
  std::map<EdgeId, int> n = w.n();
  for (EdgeId seg : ext.segments.at(edge)) n[seg] = 1;
  std::map<VertexId, std::vector<Scalar>> roots = w.stub_root_values();
  Scalar per_root = (Scalar(1) - lam) / lam * gw / Scalar(static_cast<long>(new_tree_count));
  roots[t].assign(new_tree_count, per_root);
  std::set<VertexId> lw = w.lambda_weighted_stub_vertices();
  lw.insert(t);

  return InsertExtendResult{ext.graph,
                            SpecialWeight(lam, std::move(core_g), std::move(n), std::move(roots), std::move(lw)),
                            t};
}

FieldExtendedWeight weight_after_field_extension(const ZhyvotGraph& g, const SpecialWeight& w,
                                                 unsigned e_lk, unsigned f) {
  const Scalar& lam = w.lambda();
  if (lam.is_zero() || lam == Scalar(1))
    throw InfeasibleError("extension divides by lambda(1-lambda); lambda must avoid 0 and 1");
  for (const auto& [id, e] : g.core().edges()) {
    (void)e;
    if (w.n_of(id) != 1)
      throw InfeasibleError("field-extension weight transport needs n = 1 on every core edge");
  }
  if (!w.lambda_weighted_stub_vertices().empty())
    throw InfeasibleError("weight is already a vertex-insertion extension; transport once from the base weight");

  FieldExtensionResult ext = field_extension(g, e_lk, f);
  const ZhyvotGraph& ng = ext.graph;

  std::map<VertexId, Scalar> core_g = w.core_g();
  std::map<EdgeId, int> n;
  std::set<VertexId> lw;
  for (const auto& [orig, segs] : ext.segments)
    for (EdgeId s : segs) n[s] = 1;
  for (const auto& [orig, mids] : ext.inserted) {
    Scalar target = w.core_g().at(g.core().edge(orig).dst);
    for (VertexId t : mids) {
      core_g[t] = target;
      lw.insert(t);
    }
  }

  // Old vertices: the core residual is unchanged (inserted neighbours carry
  // the old range values), so the old budget is re-split over the new stub
  // count.  Inserted vertices get the (1/m)((1-lambda)/lambda) g(w) rule.
  CoreWeight probe{lam, core_g, n};
  std::map<VertexId, std::vector<Scalar>> roots;
  for (VertexId v : g.core().vertices()) {
    Scalar budget = core_residual(ng, probe, v);
    if (budget.sign() < 0)
      throw InfeasibleError("negative stub budget at vertex " + std::to_string(v));
    unsigned m = ng.stub_count(v);
    if (m == 0) {
      if (!budget.is_zero())
        throw InfeasibleError("positive stub budget at vertex " + std::to_string(v) +
                              " but no stub tree after extension");
      continue;
    }
    roots[v].assign(m, budget / Scalar(static_cast<long>(m)));
  }
  for (const auto& [orig, mids] : ext.inserted) {
    Scalar target = w.core_g().at(g.core().edge(orig).dst);
    for (VertexId t : mids) {
      unsigned m = ng.stub_count(t);
      if (m == 0) throw InfeasibleError("inserted vertex has no stub tree; q^f must exceed 1");
      Scalar per_root = (Scalar(1) - lam) / lam * target / Scalar(static_cast<long>(m));
      roots[t].assign(m, per_root);
    }
  }

  return FieldExtendedWeight{ng, SpecialWeight(lam, std::move(core_g), std::move(n),
                                               std::move(roots), std::move(lw))};
}

// -- inhomogeneous constructions ----------------------------------------------

InhomFromAlphaResult inhom_from_alpha(const Expansion& x, const GraphWeight& w,
                                      AlphaChoice choice, const Scalar& scale) {
  const OrientedGraph& g = x.graph();
  InhomFromAlphaResult out;

  for (VertexId v : g.vertices()) {
    Scalar a;
    switch (choice) {
      case AlphaChoice::Full:
        a = w.g.at(v);
        break;
      case AlphaChoice::Scaled:
        if (!(scale > Scalar(0) && scale < Scalar(1)))
          throw InfeasibleError("scaled alpha needs 0 < c < 1");
        a = scale * w.g.at(v);
        break;
      case AlphaChoice::Flow: {
        a = Scalar(0);
        for (EdgeId e : g.out_edges(v))
          if (x.core_edge(e)) a += w.lambda.at(e) * w.g.at(g.edge(e).dst);
        break;
      }
      case AlphaChoice::Indicator:
        a = x.in_core(v) ? w.g.at(v) : Scalar(0);
        break;
    }
    if (a.sign() < 0 || a > w.g.at(v))
      throw InfeasibleError("alpha violates 0 <= alpha <= g at vertex " + std::to_string(v));
    out.alpha[v] = a;
  }

  out.weight.lambda = w.lambda;
  for (VertexId v : g.vertices()) out.weight.G[v] = w.g.at(v) - out.alpha.at(v);
  for (const auto& [id, e] : g.edges()) {
    Scalar ne(static_cast<long>(x.infinite_out_degree(e.src)));
    Scalar chi = out.alpha.at(e.src) / ne - w.lambda.at(id) * out.alpha.at(e.dst);
    out.weight.chi[id] = chi;
    if (chi.sign() < 0) {
      out.feasible = false;
      out.infeasible_edges.push_back(id);
    }
  }
  return out;
}

std::map<VertexId, Scalar> alpha_k(const Expansion& x, const SpecialWeight& w, unsigned k) {
  if (!w.adapted(x))
    throw InfeasibleError("alpha_k needs a weight adapted to the zhyvot action (n = 1 exactly on the core)");
  if (k > x.depth())
    throw DepthError("alpha_" + std::to_string(k) + " needs expansion depth >= " + std::to_string(k));
  std::map<VertexId, Scalar> out;
  for (VertexId v : x.graph().vertices()) {
    if (k == 0) {
      out[v] = w.g_of(x, v);
      continue;
    }
    if (!x.in_core(v)) {
      out[v] = Scalar(0);
      continue;
    }
    Scalar sum(0);
    for (const Path& p :
         enumerate_paths(x, v, PathConstraint{PathConstraint::Kind::ExactSigmaEndingInCore, k}))
      sum += w.g_of(x, path_range(x.graph(), p));
    out[v] = w.lambda().pow(k) * sum;
  }
  return out;
}

InhomWeight inhom_chain(const Expansion& x, const SpecialWeight& w, unsigned k) {
  if (k < 1) throw InfeasibleError("inhom_chain needs k >= 1");
  auto ak = alpha_k(x, w, k);
  std::map<VertexId, Scalar> akm1;
  if (k == 1) {
    // Core-restricted alpha_0: the level-0 member of the Phi_m family with
    // both endpoints in the core; the chain closes exactly with this one.
    for (VertexId v : x.graph().vertices())
      akm1[v] = x.in_core(v) ? w.g_of(x, v) : Scalar(0);
  } else {
    akm1 = alpha_k(x, w, k - 1);
  }

  InhomWeight out;
  for (VertexId v : x.graph().vertices()) out.G[v] = w.g_of(x, v) - ak.at(v);
  for (const auto& [id, e] : x.graph().edges()) {
    Scalar lam = w.lambda_of_edge(x, id);
    out.lambda[id] = lam;
    out.chi[id] = lam * (akm1.at(e.dst) - ak.at(e.dst));
  }
  std::string why;
  if (!out.valid(x, &why)) throw InfeasibleError("inhomogeneous chain failed verification: " + why);
  return out;
}

namespace {

void require_harmonic_lambda(const Expansion& x, const GraphWeight& w) {
  for (const auto& [id, e] : x.graph().edges()) {
    Scalar expect = Scalar(1) / Scalar(static_cast<long>(x.infinite_out_degree(e.src)));
    if (w.lambda.at(id) != expect)
      throw InfeasibleError("two-weight construction needs lambda(e) = 1/N_e (edge " +
                            std::to_string(id) + ")");
  }
}

}  // namespace

VirtualWeight virtual_from_two(const Expansion& x, const TwoWeightInput& in1,
                               const TwoWeightInput& in2) {
  require_harmonic_lambda(x, in1.weight);
  require_harmonic_lambda(x, in2.weight);
  for (VertexId v : x.graph().vertices()) {
    for (const TwoWeightInput* in : {&in1, &in2}) {
      const Scalar& a = in->alpha.at(v);
      if (a.sign() < 0 || a > in->weight.g.at(v))
        throw InfeasibleError("alpha violates 0 <= alpha <= g at vertex " + std::to_string(v));
    }
  }

  std::map<VertexId, Scalar> alpha;
  for (VertexId v : x.graph().vertices())
    alpha[v] = std::min(in1.alpha.at(v), in2.alpha.at(v),
                        [](const Scalar& a, const Scalar& b) { return a < b; });

  VirtualWeight out;
  VirtualWeight::Witness wit;
  for (VertexId v : x.graph().vertices()) {
    wit.g_plus[v] = in1.weight.g.at(v) - alpha.at(v);
    wit.g_minus[v] = in2.weight.g.at(v) - alpha.at(v);
    out.Ghat[v] = wit.g_plus.at(v) - wit.g_minus.at(v);
  }
  for (const auto& [id, e] : x.graph().edges()) {
    Scalar ne(static_cast<long>(x.infinite_out_degree(e.src)));
    wit.chi[id] = (alpha.at(e.src) - alpha.at(e.dst)) / ne;
  }

  // Both hatted weights must solve the inhomogeneous equation with the
  // shared chi; the difference then solves the homogeneous one.
  for (const auto* side : {&wit.g_plus, &wit.g_minus}) {
    InhomWeight check;
    check.G = *side;
    check.chi = wit.chi;
    for (const auto& [id, e] : x.graph().edges())
      check.lambda[id] = Scalar(1) / Scalar(static_cast<long>(x.infinite_out_degree(e.src)));
    std::string why;
    if (!check.valid(x, &why))
      throw InfeasibleError("two-weight construction failed verification: " + why);
  }
  out.witness = std::move(wit);
  std::string why;
  if (!out.harmonic_valid(x, &why)) throw InfeasibleError(why);
  return out;
}

namespace {

// Core values -> full-expansion values: stub roots split the harmonic
// residual at their anchor equally, trees are constant below the roots.
std::map<VertexId, Scalar> complete_harmonically(const Expansion& x,
                                                 const std::map<VertexId, Scalar>& core_values) {
  std::map<VertexId, Scalar> full;
  std::map<VertexId, Scalar> root_value;
  for (VertexId v : x.core_vertices()) {
    Scalar need = Scalar(static_cast<long>(x.infinite_out_degree(v))) * core_values.at(v);
    for (EdgeId e : x.graph().out_edges(v))
      if (x.core_edge(e)) need -= core_values.at(x.graph().edge(e).dst);
    unsigned m = x.source().stub_count(v);
    if (m == 0) {
      if (!need.is_zero())
        throw InfeasibleError("harmonic residual at vertex " + std::to_string(v) +
                              " needs a stub tree to absorb it");
      continue;
    }
    root_value[v] = need / Scalar(static_cast<long>(m));
  }
  for (VertexId v : x.graph().vertices()) {
    const VertexInfo& vi = x.info(v);
    full[v] = vi.kind == VertexKind::Core ? core_values.at(v) : root_value.at(vi.anchor);
  }
  return full;
}

}  // namespace

VirtualWeight virtual_from_core_values(const Expansion& x,
                                       const std::map<VertexId, Scalar>& core_values) {
  VirtualWeight out;
  out.Ghat = complete_harmonically(x, core_values);
  std::string why;
  if (!out.harmonic_valid(x, &why)) throw InfeasibleError(why);
  return out;
}

GraphWeight harmonic_from_core_values(const Expansion& x,
                                      const std::map<VertexId, Scalar>& core_values) {
  auto full = complete_harmonically(x, core_values);
  for (const auto& [v, val] : full)
    if (val.sign() < 0)
      throw InfeasibleError("harmonic completion goes negative at vertex " + std::to_string(v));
  GraphWeight out = GraphWeight::harmonic(x, std::move(full));
  std::string why;
  if (!out.valid(x, &why)) throw InfeasibleError(why);
  return out;
}

VirtualWeight integerize(const Expansion& x, const VirtualWeight& v) {
  // Constant below the stub roots keeps the denominator set finite.
  for (const auto& [id, e] : x.graph().edges()) {
    if (x.core_edge(id)) continue;
    if (x.in_core(e.src)) continue;  // stub-root edges carry the core residual
    if (v.Ghat.at(e.src) != v.Ghat.at(e.dst))
      throw InfeasibleError("virtual weight is not constant along tree edge " + std::to_string(id));
  }
  mpz_class l = 1;
  for (const auto& [vid, val] : v.Ghat) {
    (void)vid;
    l = lcm(l, val.as_rational().get_den());
  }
  Scalar factor{Rat(l)};
  VirtualWeight out;
  for (const auto& [vid, val] : v.Ghat) out.Ghat[vid] = val * factor;
  if (v.witness) {
    VirtualWeight::Witness wit;
    for (const auto& [vid, val] : v.witness->g_plus) wit.g_plus[vid] = val * factor;
    for (const auto& [vid, val] : v.witness->g_minus) wit.g_minus[vid] = val * factor;
    for (const auto& [eid, val] : v.witness->chi) wit.chi[eid] = val * factor;
    out.witness = std::move(wit);
  }
  return out;
}

}  // namespace zhyvot
