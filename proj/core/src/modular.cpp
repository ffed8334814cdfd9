#include "zhyvot/modular.hpp"

#include <cmath>

namespace zhyvot {

namespace {

void require_adapted(const Expansion& x, const SpecialWeight& w) {
  if (!w.adapted(x))
    throw InfeasibleError(
        "modular traces need a weight adapted to the zhyvot action (n = 1 exactly on core edges)");
}

// All core paths of sigma-length m, grouped by nothing; both endpoints are
// automatically in the core.
std::vector<Path> core_paths_of_length(const Expansion& x, unsigned m) {
  std::vector<Path> out;
  for (VertexId v : x.core_vertices()) {
    auto from_v = enumerate_paths(x, v, PathConstraint{PathConstraint::Kind::ExactSigmaEndingInCore, m});
    out.insert(out.end(), from_v.begin(), from_v.end());
  }
  return out;
}

Scalar phi_of_product(const Expansion& x, const SpecialWeight& w,
                      std::initializer_list<const Monomial*> factors) {
  AlgebraElement acc;
  bool first = true;
  for (const Monomial* f : factors) {
    if (first) {
      acc = AlgebraElement(*f);
      first = false;
    } else {
      acc = multiply(x, acc, AlgebraElement(*f));
    }
  }
  return phi(x, w, acc);
}

// Brute-force phi_D(P Phi_k) from the path-sum form of the spectral
// projections, with P = S_gamma S_gamma^* (gamma may be a vertex).
Scalar trace_by_path_sums(const Expansion& x, const SpecialWeight& w, const Path& gamma, int k) {
  Monomial proj{gamma, gamma};
  const Scalar& lam = w.lambda();
  if (k == 0) {
    Scalar acc(0);
    for (VertexId v : x.graph().vertices()) {
      Monomial pv = vertex_projection(v);
      acc += phi_of_product(x, w, {&pv, &proj, &pv});
    }
    return acc;
  }
  if (k > 0) {
    Scalar acc(0);
    for (const Path& mu : core_paths_of_length(x, static_cast<unsigned>(k))) {
      Monomial smu = path_isometry(x.graph(), mu);
      Monomial smu_star = adjoint(smu);
      acc += lam.pow(static_cast<unsigned>(k)) * phi_of_product(x, w, {&smu_star, &proj, &smu});
    }
    return acc;
  }
  unsigned m = static_cast<unsigned>(-k);
  VertexId s = gamma.source;
  Scalar acc(0);
  std::size_t count = 0;
  for (const Path& mu : core_paths_of_length(x, m)) {
    if (path_range(x.graph(), mu) != s) continue;
    ++count;
    Monomial smu = path_isometry(x.graph(), mu);
    Monomial smu_star = adjoint(smu);
    acc += lam.pow(m).inverse() * phi_of_product(x, w, {&smu, &proj, &smu_star});
  }
  if (count == 0)
    throw InfeasibleError("no incoming sigma-length " + std::to_string(m) + " paths at vertex " +
                          std::to_string(s) + "; the core must have no sources");
  return acc / Scalar(static_cast<long>(count));
}

}  // namespace

LoopSpec make_loop(const Expansion& x, const SpecialWeight& w, Path gamma) {
  if (!path_closed(x.graph(), gamma)) throw StructuralError("loop path must be closed");
  LoopSpec spec;
  spec.k = sigma_length(x, gamma);
  spec.beta = -std::log(w.lambda().to_double());
  spec.gamma = std::move(gamma);
  return spec;
}

std::size_t incoming_path_count(const Expansion& x, VertexId v, unsigned m) {
  std::size_t count = 0;
  for (const Path& mu : core_paths_of_length(x, m))
    if (path_range(x.graph(), mu) == v) ++count;
  return count;
}

Scalar proj_trace(const Expansion& x, const SpecialWeight& w, const ProjTraceQuery& q) {
  require_adapted(x, w);

  Path gamma;
  bool vertex_case = std::holds_alternative<VertexId>(q.compressor);
  if (vertex_case) {
    VertexId v = std::get<VertexId>(q.compressor);
    if (!x.in_core(v)) throw InfeasibleError("trace compressor vertex must lie in the core");
    gamma = Path{v, {}};
  } else {
    gamma = std::get<Path>(q.compressor);
    if (!x.in_core(gamma.source) || !x.in_core(path_range(x.graph(), gamma)))
      throw InfeasibleError("trace compressor path must run inside the core");
  }

  int sigma = static_cast<int>(sigma_length(x, gamma));
  // Vertex projections stay in closed form for every k <= 0 (the averaged
  // representation); positive k is the alpha_k regime.
  bool in_range = vertex_case ? q.k <= 0 : (q.k <= sigma && -q.k <= sigma);
  if (!in_range)
    throw OutOfClosedFormError("level k = " + std::to_string(q.k) + " lies outside |k| <= " +
                               std::to_string(sigma) + "; traces there are graph-by-graph");

  Scalar closed = w.lambda().pow(static_cast<unsigned>(sigma)) *
                  w.g_of(x, path_range(x.graph(), gamma));
  Scalar brute = trace_by_path_sums(x, w, gamma, q.k);
  if (closed != brute)
    throw InfeasibleError("trace cross-check failed: closed form " + closed.to_string() +
                          " vs path sums " + brute.to_string());
  return closed;
}

Scalar phi_d_vertex_level(const Expansion& x, const SpecialWeight& w, VertexId v, int k) {
  require_adapted(x, w);
  if (k > 0 && !x.in_core(v)) return Scalar(0);
  return trace_by_path_sums(x, w, Path{v, {}}, k);
}

Scalar spectral_flow_pairing(const Expansion& x, const SpecialWeight& w, const Path& loop) {
  require_adapted(x, w);
  if (!path_closed(x.graph(), loop)) throw StructuralError("pairing needs a closed loop");
  unsigned k = sigma_length(x, loop);
  if (k < 1) throw InfeasibleError("pairing needs sigma-length >= 1 (nontrivial loop)");

  Scalar sum(0);
  for (unsigned j = 0; j < k; ++j)
    sum += proj_trace(x, w, ProjTraceQuery{loop, static_cast<int>(j)});
  Scalar flow = -sum;

  Scalar closed = -Scalar(static_cast<long>(k)) * w.lambda().pow(k) *
                  w.g_of(x, path_range(x.graph(), loop));
  if (flow != closed)
    throw InfeasibleError("spectral flow cross-check failed: " + flow.to_string() + " vs " +
                          closed.to_string());
  return closed;
}

unsigned recover_schottky(const Expansion& x, const SpecialWeight& w, const Scalar& pairing_value,
                          VertexId loop_range_vertex) {
  require_adapted(x, w);
  Scalar g = w.g_of(x, loop_range_vertex);
  if (g.sign() <= 0) throw RecoveryError("recovery needs g(r(gamma)) > 0");
  if (pairing_value.sign() >= 0)
    throw RecoveryError("pairing value must be negative: " + pairing_value.to_string());
  for (unsigned k = 1; k <= max_enumeration_length; ++k) {
    Scalar predicted = -Scalar(static_cast<long>(k)) * w.lambda().pow(k) * g;
    if (predicted == pairing_value) return k;
  }
  throw RecoveryError("no integer k with -k lambda^k g matching " + pairing_value.to_string());
}

}  // namespace zhyvot
