#ifndef ZHYVOT_WEIGHTS_HPP
#define ZHYVOT_WEIGHTS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zhyvot/graph.hpp"
#include "zhyvot/polynomial.hpp"
#include "zhyvot/scalar.hpp"

namespace zhyvot {

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Core-level special weight: lambda in (0,1), g on core vertices, and the
/// exponent n(e) in {0,1} per core edge (lambda(e) = lambda^{n_e}).
struct CoreWeight {
  Scalar lambda;
  std::map<VertexId, Scalar> g;
  std::map<EdgeId, int> n;
};

/// Special weight over an expansion.  Tree values are derived, not stored:
/// each stub tree carries its root value split equally among the q children
/// of every vertex, so the representation is stable under re-expansion.
/// `lambda_weighted_stub_vertices` marks core vertices (from vertex
/// insertion) whose stub-root edges carry weight lambda instead of 1.
class SpecialWeight {
 public:
  SpecialWeight() = default;
  SpecialWeight(Scalar lambda, std::map<VertexId, Scalar> core_g,
                std::map<EdgeId, int> n,
                std::map<VertexId, std::vector<Scalar>> stub_root_values,
                std::set<VertexId> lambda_weighted_stub_vertices = {});

  const Scalar& lambda() const { return lambda_; }
  const std::map<VertexId, Scalar>& core_g() const { return core_g_; }
  const std::map<EdgeId, int>& n() const { return n_; }
  const std::map<VertexId, std::vector<Scalar>>& stub_root_values() const { return stub_roots_; }
  const std::set<VertexId>& lambda_weighted_stub_vertices() const { return lambda_weighted_; }

  int n_of(EdgeId e) const;
  Scalar g_of(const Expansion& x, VertexId v) const;
  Scalar lambda_of_edge(const Expansion& x, EdgeId e) const;
  Scalar lambda_of_path(const Expansion& x, const Path& p) const;

  /// Weight-equation residual g(v) - sum over outgoing edges; exact.
  Scalar residual(const Expansion& x, VertexId v) const;

  /// Zero residual at every non-boundary vertex.
  bool valid(const Expansion& x, std::string* why = nullptr) const;

  /// n == 1 exactly on core edges, no lambda-weighted stub roots, and
  /// lambda in (0,1): the weights the modular machinery applies to.
  bool adapted(const Expansion& x) const;

  bool faithful(const Expansion& x) const;

 private:
  Scalar lambda_;
  std::map<VertexId, Scalar> core_g_;
  std::map<EdgeId, int> n_;
  std::map<VertexId, std::vector<Scalar>> stub_roots_;
  std::set<VertexId> lambda_weighted_;
};

/// Fully materialized graph weight (g, lambda) over one expansion; the
/// general form consumed by the current/theta layer.
struct GraphWeight {
  std::map<VertexId, Scalar> g;
  std::map<EdgeId, Scalar> lambda;

  Scalar residual(const Expansion& x, VertexId v) const;
  bool valid(const Expansion& x, std::string* why = nullptr) const;

  static GraphWeight from_special(const Expansion& x, const SpecialWeight& w);
  /// lambda(e) = 1/N_e with the supplied vertex values.
  static GraphWeight harmonic(const Expansion& x, std::map<VertexId, Scalar> g);
};

struct InhomWeight {
  std::map<VertexId, Scalar> G;
  std::map<EdgeId, Scalar> lambda;
  std::map<EdgeId, Scalar> chi;

  /// Residual of G(v) + d chi(v) - sum lambda(e) G(r(e)).
  Scalar residual(const Expansion& x, VertexId v) const;
  bool valid(const Expansion& x, std::string* why = nullptr) const;
};

struct VirtualWeight {
  std::map<VertexId, Scalar> Ghat;
  struct Witness {
    std::map<VertexId, Scalar> g_plus;
    std::map<VertexId, Scalar> g_minus;
    std::map<EdgeId, Scalar> chi;
  };
  std::optional<Witness> witness;

  /// Residual of the homogeneous equation with lambda(e) = 1/N_e.
  Scalar harmonic_residual(const Expansion& x, VertexId v) const;
  bool harmonic_valid(const Expansion& x, std::string* why = nullptr) const;
};

// -- existence and solving ---------------------------------------------------

struct SpecialStateSolution {
  Scalar lambda;
  std::map<VertexId, Scalar> g;  // normalized to a state over the core
  bool approximate = false;
};

struct SolveResult {
  enum class Status { Ok, Empty, FamilyNeedsLambda };
  Status status = Status::Empty;
  std::vector<SpecialStateSolution> solutions;
  std::string diagnostic;
};

/// Eigenvector criterion on the bare core: finds lambda in (0,1) for which
/// the matrix with entries sum_e lambda^{n_e} (identity rows for sinks) has
/// eigenvalue 1 with a strictly positive eigenvector, normalized to a state
/// over the core (solutions are determined up to scale, so any other
/// normalization set is a rescaling).  When every lambda works (singular
/// pencil), the caller must supply `lambda`.
SolveResult solve_special_state(const ZhyvotGraph& core, const std::map<EdgeId, int>& n,
                                std::optional<Scalar> lambda = std::nullopt);

/// Stub slack at a core vertex: g(v) - sum over core edges; the budget the
/// stub trees must absorb.
Scalar core_residual(const ZhyvotGraph& g, const CoreWeight& w, VertexId v);

/// Extends a core weight across the stub trees as a graph trace, splitting
/// each vertex's budget equally among its stubs.  Negative budgets, or a
/// positive budget with no stub to carry it, raise InfeasibleError.
SpecialWeight extend_to_trees(const CoreWeight& w, const ZhyvotGraph& g);

/// The n-polygon family: g = 1/n on the polygon, any lambda in (0,1),
/// extended over the trees (budget (1-lambda)/n per vertex).
SpecialWeight uniform_polygon_state(const ZhyvotGraph& polygon, const Scalar& lambda);

struct InsertExtendResult {
  ZhyvotGraph graph;
  SpecialWeight weight;
  VertexId inserted_vertex;
};

/// Subdivides core edge v->w once and extends the weight without changing
/// lambda or any pre-existing value: the inserted vertex t gets g(w), each
/// of the new stub roots at t gets (1/m)((1-lambda)/lambda) g(w), and those
/// root edges carry weight lambda.
InsertExtendResult insert_vertex_extend(const ZhyvotGraph& g, const SpecialWeight& w,
                                        EdgeId edge, unsigned new_tree_count);

struct FieldExtendedWeight {
  ZhyvotGraph graph;
  SpecialWeight weight;
};

/// Vertex-insertion extension along every core edge of a field extension
/// (e_lk, f): preserves lambda and all old core values exactly.
FieldExtendedWeight weight_after_field_extension(const ZhyvotGraph& g, const SpecialWeight& w,
                                                 unsigned e_lk, unsigned f);

// -- inhomogeneous and virtual weights ---------------------------------------

enum class AlphaChoice { Full, Scaled, Flow, Indicator };

struct InhomFromAlphaResult {
  InhomWeight weight;
  std::map<VertexId, Scalar> alpha;
  bool feasible = true;                // chi >= 0 everywhere it is defined
  std::vector<EdgeId> infeasible_edges;
};

/// The alpha-ansatz: G = g - alpha, chi(e) = alpha(s(e))/N_e - lambda(e) alpha(r(e)).
/// `scale` is used by AlphaChoice::Scaled (0 < c < 1).
InhomFromAlphaResult inhom_from_alpha(const Expansion& x, const GraphWeight& w,
                                      AlphaChoice choice, const Scalar& scale = Scalar(Rat(1, 2)));

/// alpha_k(v) = lambda^k * sum of g(r(mu)) over paths from v with sigma
/// length k ending in the core; alpha_0 = g.  Requires an adapted weight
/// and expansion depth >= k.
std::map<VertexId, Scalar> alpha_k(const Expansion& x, const SpecialWeight& w, unsigned k);

/// The level-k inhomogeneous weight (g - alpha_k, lambda, chi_k) with
/// chi_k(e) = lambda(e)(alpha_{k-1} - alpha_k)(r(e)); the k = 1 step uses
/// the core-restricted alpha_0 so the equation closes exactly.
InhomWeight inhom_chain(const Expansion& x, const SpecialWeight& w, unsigned k);

struct TwoWeightInput {
  GraphWeight weight;                 // lambda must be 1/N_e
  std::map<VertexId, Scalar> alpha;   // 0 <= alpha <= g
};

/// Combines two harmonic weights through alpha = min(alpha_1, alpha_2);
/// verifies both hatted weights solve the inhomogeneous equation with the
/// shared chi and returns their difference with the witness attached.
VirtualWeight virtual_from_two(const Expansion& x, const TwoWeightInput& in1,
                               const TwoWeightInput& in2);

/// Scales a rational virtual weight by the LCM of denominators over the
/// core and stub roots; requires the tree extension constant below the
/// stub roots.
VirtualWeight integerize(const Expansion& x, const VirtualWeight& v);

/// Canonical completion of core values to the whole expansion: each stub
/// root takes an equal share of the harmonic residual at its anchor, and
/// trees are constant below the roots.
VirtualWeight virtual_from_core_values(const Expansion& x,
                                       const std::map<VertexId, Scalar>& core_values);

/// Same completion for a non-negative harmonic weight (lambda = 1/N_e).
GraphWeight harmonic_from_core_values(const Expansion& x,
                                      const std::map<VertexId, Scalar>& core_values);

}  // namespace zhyvot

#endif
