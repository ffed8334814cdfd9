#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "zhyvot/monomial.hpp"

using namespace zhyvot;

namespace {

// theta-graph fixture with a faithful adapted weight (lambda = 1/3,
// g(v) = g(w) = 1/2, slack carried by one stub tree per vertex).
struct ThetaFixture {
  ZhyvotGraph g = genus2_case2(3, 3);
  Expansion x{g};
  SpecialWeight w = make_weight();

  SpecialWeight make_weight() const {
    CoreWeight cw;
    cw.lambda = Scalar::ratio(1, 3);
    cw.g[0] = Scalar::ratio(1, 2);
    cw.g[1] = Scalar::ratio(1, 2);
    cw.n = {{0, 1}, {1, 1}, {2, 1}};
    return extend_to_trees(cw, g);
  }
};

Path random_path_from(const Expansion& x, VertexId start, unsigned max_len, std::mt19937& rng) {
  Path p{start, {}};
  VertexId at = start;
  unsigned len = rng() % (max_len + 1);
  for (unsigned i = 0; i < len; ++i) {
    const auto& outs = x.graph().out_edges(at);
    if (outs.empty()) break;
    EdgeId e = outs[rng() % outs.size()];
    p.edges.push_back(e);
    at = x.graph().edge(e).dst;
  }
  return p;
}

Path random_path_into(const Expansion& x, VertexId target, unsigned max_len, std::mt19937& rng) {
  std::vector<EdgeId> rev;
  VertexId at = target;
  unsigned len = rng() % (max_len + 1);
  for (unsigned i = 0; i < len; ++i) {
    const auto& ins = x.graph().in_edges(at);
    if (ins.empty()) break;
    EdgeId e = ins[rng() % ins.size()];
    rev.push_back(e);
    at = x.graph().edge(e).src;
  }
  Path p{at, {}};
  p.edges.assign(rev.rbegin(), rev.rend());
  return p;
}

Monomial random_monomial(const Expansion& x, std::mt19937& rng, unsigned max_len = 3) {
  // Bias the range toward the core so random products actually meet.
  VertexId range;
  if (rng() % 4 != 0) {
    auto core = x.core_vertices();
    range = core[rng() % core.size()];
  } else {
    const auto& verts = x.graph().vertices();
    auto it = verts.begin();
    std::advance(it, rng() % verts.size());
    range = *it;
  }
  Path mu = random_path_into(x, range, max_len, rng);
  Path nu = random_path_into(x, range, max_len, rng);
  return Monomial{mu, nu};
}

// A pair whose product is likely nonzero: b's left path extends or
// truncates a's right path.
std::pair<Monomial, Monomial> random_related_pair(const Expansion& x, std::mt19937& rng) {
  Monomial a = random_monomial(x, rng);
  Path bmu;
  if (rng() % 2 == 0 && !a.nu.edges.empty()) {
    size_t cut = rng() % (a.nu.edges.size() + 1);
    bmu = Path{a.nu.source, {a.nu.edges.begin(), a.nu.edges.begin() + cut}};
  } else {
    bmu = a.nu;
    Path ext = random_path_from(x, path_range(x.graph(), a.nu), 2, rng);
    bmu.edges.insert(bmu.edges.end(), ext.edges.begin(), ext.edges.end());
  }
  Path bnu = random_path_into(x, path_range(x.graph(), bmu), 3, rng);
  return {a, Monomial{bmu, bnu}};
}

}  // namespace

TEST_CASE("product rule basics") {
  ThetaFixture f;
  // p_v S_e = S_e when s(e) = v
  Monomial pv = vertex_projection(0);
  Monomial se = path_isometry(f.x.graph(), Path{0, {0}});
  auto prod = multiply(f.x, pv, se);
  REQUIRE(prod.has_value());
  CHECK(*prod == se);

  // S_e^* S_f = 0 unless e = f
  Monomial se_star = adjoint(se);
  Monomial sf = path_isometry(f.x.graph(), Path{1, {1}});
  CHECK_FALSE(multiply(f.x, se_star, sf).has_value());
  auto diag = multiply(f.x, se_star, se);
  REQUIRE(diag.has_value());
  CHECK(*diag == vertex_projection(1));  // S_e^* S_e = p_{r(e)}

  // (S_b S_b^*)(S_{ba} S_v^*) = S_{ba} S_v^*
  Monomial sbsb{Path{0, {0}}, Path{0, {0}}};
  Monomial sba = make_monomial(f.x.graph(), Path{0, {0, 1}}, Path{0, {}});
  auto absorbed = multiply(f.x, sbsb, sba);
  REQUIRE(absorbed.has_value());
  CHECK(*absorbed == sba);
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
  ThetaFixture f;
  std::mt19937 rng(23);
  int nonzero_products = 0;
  for (int i = 0; i < 100; ++i) {
    Monomial m = random_monomial(f.x, rng);
    CHECK(adjoint(adjoint(m)) == m);
  }
  for (int i = 0; i < 400 && nonzero_products < 60; ++i) {
    auto [a, b] = random_related_pair(f.x, rng);
    auto ab = multiply(f.x, a, b);
    auto ba_star = multiply(f.x, adjoint(b), adjoint(a));
    CHECK(ab.has_value() == ba_star.has_value());
    if (ab) {
      ++nonzero_products;
      CHECK(adjoint(*ab) == *ba_star);
    }
  }
  CHECK(nonzero_products >= 40);
}

TEST_CASE("graded degree") {
  ThetaFixture f;
  CHECK(graded_degree(f.x, vertex_projection(0)) == 0);

  // the genus-1 n=3 loop has degree 3
  Expansion poly(genus1(3, 2, 1));
  Monomial loop = path_isometry(poly.graph(), Path{0, {0, 1, 2}});
  CHECK(graded_degree(poly, loop) == 3);

  // degrees add on nonzero products
  std::mt19937 rng(5);
  int nonzero = 0;
  for (int i = 0; i < 600 && nonzero < 200; ++i) {
    auto [a, b] = random_related_pair(f.x, rng);
    if (auto ab = multiply(f.x, a, b)) {
      ++nonzero;
      CHECK(graded_degree(f.x, *ab) == graded_degree(f.x, a) + graded_degree(f.x, b));
    }
  }
  CHECK(nonzero >= 100);
}

TEST_CASE("product associativity on all triples from a random pool") {
  ThetaFixture f;
  std::mt19937 rng(31);
  std::vector<AlgebraElement> pool;
  for (int i = 0; i < 50; ++i) pool.push_back(AlgebraElement(random_monomial(f.x, rng, 2)));
  size_t mismatches = 0;
  for (const auto& a : pool)
    for (const auto& b : pool)
      for (const auto& c : pool)
        if (!(multiply(f.x, multiply(f.x, a, b), c) == multiply(f.x, a, multiply(f.x, b, c))))
          ++mismatches;
  CHECK(mismatches == 0);
}

TEST_CASE("fixed-point classification") {
  ThetaFixture f;

  // |mu|_sigma = |nu|_sigma = k lands in F_k
  CHECK_THROWS(make_monomial(f.x.graph(), Path{0, {0}}, Path{0, {}}));  // range mismatch guard
  Monomial fk = make_monomial(f.x.graph(), Path{0, {0, 1}}, Path{0, {0, 2}});
  CHECK(classify_fixed(f.x, fk, 2).kind == FixedClass::Fk);
  CHECK(classify_fixed(f.x, fk, 1).kind == FixedClass::Fk);

  // a tree-vertex range with sigma length 0 < k lands in G_k
  EdgeId root_edge = f.x.stub_root_edges(0).at(0);
  Path tree_path{0, {root_edge}};
  Monomial gk = make_monomial(f.x.graph(), tree_path, tree_path);
  CHECK(classify_fixed(f.x, gk, 1).kind == FixedClass::Gk);

  // nonzero degree is outside the fixed-point algebra
  Monomial off = path_isometry(f.x.graph(), Path{0, {0}});
  CHECK(classify_fixed(f.x, off, 1).kind == FixedClass::NotInF);

  // p_v at k = 1 splits; every F-term annihilates every G-term
  Classification split = classify_fixed(f.x, vertex_projection(0), 1);
  REQUIRE(split.kind == FixedClass::Split);
  CHECK(split.split.size() > 2);
  int pairs = 0;
  for (const auto& [mf, cf] : split.split) {
    if (cf != FixedClass::Fk) continue;
    for (const auto& [mg, cg] : split.split) {
      if (cg != FixedClass::Gk) continue;
      ++pairs;
      CHECK_FALSE(multiply(f.x, mf, mg).has_value());
      CHECK_FALSE(multiply(f.x, mg, mf).has_value());
    }
  }
  CHECK(pairs > 0);

  // the split reproduces the original element under summation against phi
  Scalar direct = phi(f.x, f.w, vertex_projection(0));
  Scalar summed(0);
  for (const auto& [m, cls] : split.split) {
    (void)cls;
    summed += phi(f.x, f.w, m);
  }
  CHECK(direct == summed);
}

TEST_CASE("F_k G_k = 0 for randomized classified generators") {
  ThetaFixture f;
  std::mt19937 rng(47);
  std::vector<Monomial> fk, gk;
  for (int i = 0; i < 500 && (fk.size() < 25 || gk.size() < 25); ++i) {
    Monomial m = random_monomial(f.x, rng);
    Classification c = classify_fixed(f.x, m, 1);
    if (c.kind == FixedClass::Fk && fk.size() < 25) fk.push_back(m);
    if (c.kind == FixedClass::Gk && gk.size() < 25) gk.push_back(m);
  }
  REQUIRE(fk.size() >= 10);
  REQUIRE(gk.size() >= 10);
  for (const auto& a : fk)
    for (const auto& b : gk) {
      CHECK_FALSE(multiply(f.x, a, b).has_value());
      CHECK_FALSE(multiply(f.x, b, a).has_value());
    }
}

TEST_CASE("phi evaluates the KMS functional") {
  ThetaFixture f;
  // phi(p_v) = g(v)
  CHECK(phi(f.x, f.w, vertex_projection(0)) == Scalar::ratio(1, 2));
  // off-diagonal terms vanish
  Monomial off = make_monomial(f.x.graph(), Path{0, {0, 1}}, Path{0, {0, 2}});
  CHECK(phi(f.x, f.w, off).is_zero());
  // diagonal: lambda(nu) g(r(nu))
  Monomial diag{Path{0, {0, 1}}, Path{0, {0, 1}}};
  CHECK(phi(f.x, f.w, diag) == Scalar::ratio(1, 9) * Scalar::ratio(1, 2));
}

TEST_CASE("phi satisfies the KMS identity for the modified action") {
  ThetaFixture f;
  std::mt19937 rng(61);
  auto sigma = [&](const Monomial& m) {
    // sigma(S_mu S_nu^*) = (lambda(nu)/lambda(mu)) S_mu S_nu^*
    Scalar factor = f.w.lambda_of_path(f.x, m.nu) / f.w.lambda_of_path(f.x, m.mu);
    AlgebraElement out;
    out.add(m, factor);
    return out;
  };
  int checked = 0;
  for (int i = 0; i < 800 && checked < 200; ++i) {
    auto [a, b] = random_related_pair(f.x, rng);
    AlgebraElement ab = multiply(f.x, AlgebraElement(a), AlgebraElement(b));
    AlgebraElement sba = multiply(f.x, sigma(b), AlgebraElement(a));
    Scalar lhs = phi(f.x, f.w, ab);
    Scalar rhs = phi(f.x, f.w, sba);
    if (!ab.is_zero() || !sba.is_zero()) ++checked;
    CHECK(lhs == rhs);
    (void)0;
  }
  CHECK(checked >= 100);
}

TEST_CASE("phi is positive on a* a") {
  ThetaFixture f;
  std::mt19937 rng(73);
  std::uniform_int_distribution<long> coeff(-4, 4);
  for (int i = 0; i < 60; ++i) {
    AlgebraElement a;
    for (int t = 0; t < 3; ++t) a.add(random_monomial(f.x, rng, 2), Scalar(coeff(rng)));
    AlgebraElement astar_a = multiply(f.x, adjoint(a), a);
    CHECK(phi(f.x, f.w, astar_a).sign() >= 0);
  }
}

TEST_CASE("gauge invariance: phi kills nonzero degrees") {
  ThetaFixture f;
  std::mt19937 rng(83);
  for (int i = 0; i < 200; ++i) {
    Monomial m = random_monomial(f.x, rng);
    if (graded_degree(f.x, m) != 0) CHECK(phi(f.x, f.w, m).is_zero());
  }
}
