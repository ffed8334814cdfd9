#include <benchmark/benchmark.h>

#include "zhyvot/currents.hpp"
#include "zhyvot/modular.hpp"
#include "zhyvot/monomial.hpp"

using namespace zhyvot;

namespace {

void BM_SolveTable1Row(benchmark::State& state) {
  ZhyvotGraph theta = genus2_case2(3, 0);
  std::map<EdgeId, int> n{{0, 1}, {1, 1}, {2, 1}};
  for (auto _ : state) {
    SolveResult r = solve_special_state(theta, n);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SolveTable1Row);

void BM_Expand(benchmark::State& state) {
  ZhyvotGraph g = genus2_case2(3, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    Expansion x(g);
    benchmark::DoNotOptimize(x.graph().vertex_count());
  }
}
BENCHMARK(BM_Expand)->Arg(3)->Arg(5)->Arg(7);

void BM_PathEnumeration(benchmark::State& state) {
  Expansion x(genus2_case2(3, 1));
  unsigned k = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto paths = enumerate_paths(x, 0, {PathConstraint::Kind::ExactSigmaEndingInCore, k});
    benchmark::DoNotOptimize(paths.size());
  }
}
BENCHMARK(BM_PathEnumeration)->Arg(4)->Arg(6);

void BM_SpectralFlowPairing(benchmark::State& state) {
  ZhyvotGraph g = genus1(static_cast<unsigned>(state.range(0)), 3, 2);
  Expansion x(g);
  SpecialWeight w = uniform_polygon_state(g, Scalar::ratio(1, 2));
  Path loop{0, {}};
  for (long i = 0; i < state.range(0); ++i) loop.edges.push_back(static_cast<EdgeId>(i));
  for (auto _ : state) {
    Scalar v = spectral_flow_pairing(x, w, loop);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_SpectralFlowPairing)->Arg(3)->Arg(6);

void BM_RefinementPairing(benchmark::State& state) {
  Expansion x(genus2_case2(3, 4));
  CurrentSpace space = current_space_rank(x);
  Current c = space.basis[0];
  for (auto _ : state) {
    CylinderFunction fn{CylTerm{0, false, Scalar(1)}};
    for (int d = 0; d < 3; ++d) {
      CylinderFunction next;
      for (const CylTerm& t : fn) {
        CylinderFunction r = refine_term(x, t);
        next.insert(next.end(), r.begin(), r.end());
      }
      fn = canonical_cylinder(next);
    }
    benchmark::DoNotOptimize(k0_pairing(x, c, fn));
  }
}
BENCHMARK(BM_RefinementPairing);

}  // namespace

BENCHMARK_MAIN();
