#ifndef ZHYVOT_CURRENTS_HPP
#define ZHYVOT_CURRENTS_HPP

#include <optional>
#include <vector>

#include "zhyvot/graph.hpp"
#include "zhyvot/scalar.hpp"
#include "zhyvot/weights.hpp"

namespace zhyvot {

/// Signed edge function; values on formal reversed edges are -mu(e) and are
/// never stored.  A current proper also satisfies the star law checked by
/// verify_current.
struct Current {
  std::map<EdgeId, Scalar> mu;

  Scalar at(EdgeId e) const;
  bool integer_valued() const;
};

struct StarReport {
  std::map<VertexId, Scalar> residuals;  // signed full-star sums, non-boundary vertices
  std::vector<VertexId> failures;
  bool passed() const { return failures.empty(); }
};

/// Momentum conservation on the full undirected star: outgoing edges count
/// mu(e), incoming count -mu(e).  Missing edge values throw.
StarReport verify_current(const Expansion& x, const Current& c);

struct WeightCurrentReport {
  Current candidate;  // mu(e) = lambda(e) g(r(e)) - g(s(e))/N_e
  /// Directed sums (Eq. over s(e) = v), zero for every graph weight.
  std::map<VertexId, Scalar> directed_residuals;
  bool directed_conservation = false;
  /// The orientation-reversal clause applies only when lambda(e) = 1/N_{e-bar}.
  bool reversal_clause_applicable = false;
  bool full_current = false;  // applicable and the star law passes
};

WeightCurrentReport current_from_weight(const Expansion& x, const GraphWeight& w);

/// mu(e) = Ghat(r(e)) - Ghat(s(e)); requires the homogeneous equation with
/// lambda(e) = 1/N_e and verifies the directed conservation sums exactly.
Current current_from_virtual(const Expansion& x, const VirtualWeight& v);

struct PathWeights {
  std::map<VertexId, Scalar> g_plus;
  std::map<VertexId, Scalar> g_minus;
  std::vector<Scalar> periods;  // per core basis cycle
  VertexId base = 0;
};

/// Resolves mu = chi+ - chi- edgewise (chi+ = max(mu,0)) and integrates
/// both parts along spanning-tree base paths; the basis-cycle periods are
/// the obstruction to descending further.
PathWeights weight_from_current(const Expansion& x, const Current& c, VertexId base);

/// One direction on the boundary: edge e, or its reversal.
struct CylTerm {
  EdgeId edge;
  bool reversed = false;
  Scalar coeff = Scalar(1);
};

/// Finite combination sum a_i chi_{V(e_i)}; canonical form merges duplicates.
using CylinderFunction = std::vector<CylTerm>;

CylinderFunction canonical_cylinder(CylinderFunction f);

/// Pairing <mu, f> = sum a_i mu(e_i), with mu(e-bar) = -mu(e).
Scalar k0_pairing(const Expansion& x, const Current& c, const CylinderFunction& f);

/// chi of the whole boundary as seen from v: every direction leaving v.
CylinderFunction full_star(const Expansion& x, VertexId v);

/// Replaces chi_{V(d)} by the sum over the continuations through the head
/// vertex of d (its full star minus the direction back).
CylinderFunction refine_term(const Expansion& x, const CylTerm& term);

struct CurrentSpace {
  unsigned rank = 0;
  std::vector<Current> basis;  // unit cycle currents, star-verified
};

/// Integer currents modulo nothing: rank |E_core| - |V_core| + 1 with the
/// unit basis cycles as generators.
CurrentSpace current_space_rank(const Expansion& x);

Current cycle_current(const Expansion& x, const Cycle& cycle);

/// Exact coordinates of c in the basis, or nullopt when c is outside the span.
std::optional<std::vector<Scalar>> decompose_in_basis(const Expansion& x, const CurrentSpace& space,
                                                      const Current& c);

struct ThetaDescriptor {
  VirtualWeight ghat;
  Current mu;
  std::vector<Scalar> periods;  // valuations log_q|c(gamma)| per basis cycle
  VertexId base = 0;
};

/// Packages (Ghat, mu, periods).  Prescribed c-valuations are realized by
/// loading each basis cycle's closing edge and draining the imbalance along
/// stub rays to the boundary (the divisor flow of the theta function);
/// without them the periods are read off current_from_virtual(Ghat).
ThetaDescriptor build_theta(const Expansion& x, const VirtualWeight& ghat,
                            const std::optional<std::vector<long>>& c_valuations, VertexId base);

/// Descriptors with equal currents induce the same K_0 functional: equality
/// is decided edgewise and witnessed through k0_pairing on the single-edge
/// generating family.
bool theta_equivalent(const Expansion& x, const ThetaDescriptor& a, const ThetaDescriptor& b);

/// The period map of a descriptor as a homomorphism on the cycle group:
/// a word in the basis generators pairs to the matching integer combination
/// of periods (the combinatorial 1-cocycle law holds by construction and is
/// asserted against literal cycle concatenation in build_theta).
struct PeriodCocycle {
  std::vector<Scalar> generator_periods;

  Scalar of_word(const std::vector<long>& word) const;
};

PeriodCocycle period_cocycle(const ThetaDescriptor& d);

}  // namespace zhyvot

#endif
