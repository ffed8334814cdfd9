#ifndef ZHYVOT_MODULAR_HPP
#define ZHYVOT_MODULAR_HPP

#include <optional>
#include <variant>

#include "zhyvot/monomial.hpp"
#include "zhyvot/weights.hpp"

namespace zhyvot {

/// Raised for trace levels outside |k| <= |gamma|_sigma, the regime the
/// closed forms cover; larger k is refused rather than approximated.
struct OutOfClosedFormError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RecoveryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed loop in the core with k = |gamma|_sigma and beta = -log(lambda).
struct LoopSpec {
  Path gamma;
  unsigned k = 0;
  double beta = 0.0;
};

LoopSpec make_loop(const Expansion& x, const SpecialWeight& w, Path gamma);

/// Trace query: compress by a vertex projection p_v or a path projection
/// S_gamma S_gamma^*, at grading level k.
struct ProjTraceQuery {
  std::variant<VertexId, Path> compressor;
  int k = 0;
};

/// phi_D of the compressed spectral projection, in the closed-form regime
/// |k| <= |gamma|_sigma (vertex: k <= 0): returns lambda^{|gamma|_sigma}
/// g(r(gamma)) resp. g(v), and re-derives the same value from the
/// path-sum representation of the spectral projections, insisting on exact
/// agreement.  Requires an adapted weight.
Scalar proj_trace(const Expansion& x, const SpecialWeight& w, const ProjTraceQuery& q);

/// phi_D(p_v Phi_k) for any k (finite path sums; equals alpha_k for k >= 0).
Scalar phi_d_vertex_level(const Expansion& x, const SpecialWeight& w, VertexId v, int k);

/// Number of core paths of length m ending at v (|v|_m).
std::size_t incoming_path_count(const Expansion& x, VertexId v, unsigned m);

/// The modular pairing of a closed loop: -sum_{j=0}^{k-1} phi_D(S_gamma
/// S_gamma^* Phi_j), asserted equal to the closed form -k lambda^k
/// g(r(gamma)).
Scalar spectral_flow_pairing(const Expansion& x, const SpecialWeight& w, const Path& loop);

/// Inverts -k lambda^k g(r(gamma)) over integers k >= 1; returns the
/// smallest exact match (k lambda^k can collide at lambda = j/(j+1)).
unsigned recover_schottky(const Expansion& x, const SpecialWeight& w, const Scalar& pairing_value,
                          VertexId loop_range_vertex);

}  // namespace zhyvot

#endif
