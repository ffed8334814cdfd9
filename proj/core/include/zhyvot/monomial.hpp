#ifndef ZHYVOT_MONOMIAL_HPP
#define ZHYVOT_MONOMIAL_HPP

#include <map>
#include <optional>
#include <vector>

#include "zhyvot/graph.hpp"
#include "zhyvot/scalar.hpp"
#include "zhyvot/weights.hpp"

namespace zhyvot {

/// Formal S_mu S_nu^* with r(mu) = r(nu); vertex projections are the
/// (v, v) length-0 case.
struct Monomial {
  Path mu;
  Path nu;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.mu.source == b.mu.source && a.mu.edges == b.mu.edges &&
           a.nu.source == b.nu.source && a.nu.edges == b.nu.edges;
  }
  friend bool operator<(const Monomial& a, const Monomial& b);
};

Monomial vertex_projection(VertexId v);
Monomial path_isometry(const OrientedGraph& g, Path mu);  // S_mu = S_mu p_{r(mu)}
Monomial make_monomial(const OrientedGraph& g, Path mu, Path nu);

/// Finite linear combination of monomials with exact coefficients;
/// zero coefficients are never stored.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(const Monomial& m, const Scalar& c = Scalar(1));

  void add(const Monomial& m, const Scalar& c);
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(const Scalar& c);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::map<Monomial, Scalar> terms_;
};

/// The monomial product rule: the result is zero or a single monomial.
std::optional<Monomial> multiply(const Expansion& x, const Monomial& a, const Monomial& b);

AlgebraElement multiply(const Expansion& x, const AlgebraElement& a, const AlgebraElement& b);

Monomial adjoint(const Monomial& m);
AlgebraElement adjoint(const AlgebraElement& a);

/// |mu|_sigma - |nu|_sigma.
int graded_degree(const Expansion& x, const Monomial& m);

enum class FixedClass { Fk, Gk, NotInF, Split };

struct Classification {
  FixedClass kind;
  /// Populated for Split: the expansion S_mu S_nu^* = sum S_{mu rho} S_{nu rho}^*
  /// over |rho| prec k - n + 1, with each term's class.
  std::vector<std::pair<Monomial, FixedClass>> split;
};

/// Classifies a degree-0 monomial against the F_k + G_k decomposition of
/// the fixed-point algebra; nonzero degree reports NotInF.
Classification classify_fixed(const Expansion& x, const Monomial& m, unsigned k);

/// phi_{g,lambda}(S_mu S_nu^*) = delta_{mu,nu} lambda(nu) g(r(nu)), extended
/// linearly.
Scalar phi(const Expansion& x, const SpecialWeight& w, const Monomial& m);
Scalar phi(const Expansion& x, const SpecialWeight& w, const AlgebraElement& a);

}  // namespace zhyvot

#endif
