#include "zhyvot/monomial.hpp"

#include <algorithm>

namespace zhyvot {

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.mu.source != b.mu.source) return a.mu.source < b.mu.source;
  if (a.mu.edges != b.mu.edges) return a.mu.edges < b.mu.edges;
  if (a.nu.source != b.nu.source) return a.nu.source < b.nu.source;
  return a.nu.edges < b.nu.edges;
}

Monomial vertex_projection(VertexId v) { return Monomial{Path{v, {}}, Path{v, {}}}; }

Monomial path_isometry(const OrientedGraph& g, Path mu) {
  VertexId r = path_range(g, mu);
  return Monomial{std::move(mu), Path{r, {}}};
}

Monomial make_monomial(const OrientedGraph& g, Path mu, Path nu) {
  if (path_range(g, mu) != path_range(g, nu))
    throw StructuralError("monomial needs r(mu) = r(nu)");
  return Monomial{std::move(mu), std::move(nu)};
}

AlgebraElement::AlgebraElement(const Monomial& m, const Scalar& c) { add(m, c); }

void AlgebraElement::add(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

namespace {

bool is_prefix(const Path& shorter, const Path& longer) {
  if (shorter.source != longer.source) return false;
  if (shorter.edges.size() > longer.edges.size()) return false;
  return std::equal(shorter.edges.begin(), shorter.edges.end(), longer.edges.begin());
}

Path tail_after(const OrientedGraph& g, const Path& longer, std::size_t prefix_len) {
  Path t;
  if (prefix_len == 0) {
    t.source = longer.source;
  } else {
    Path prefix{longer.source, {longer.edges.begin(), longer.edges.begin() + prefix_len}};
    t.source = path_range(g, prefix);
  }
  t.edges.assign(longer.edges.begin() + prefix_len, longer.edges.end());
  return t;
}

Path concat(const OrientedGraph& g, const Path& a, const Path& b) {
  if (path_range(g, a) != b.source) throw StructuralError("paths do not compose");
  Path r = a;
  r.edges.insert(r.edges.end(), b.edges.begin(), b.edges.end());
  return r;
}

void validate_monomial(const Expansion& x, const Monomial& m) {
  if (path_range(x.graph(), m.mu) != path_range(x.graph(), m.nu))
    throw StructuralError("monomial ranges differ; operands may come from different graphs");
}

}  // namespace

std::optional<Monomial> multiply(const Expansion& x, const Monomial& a, const Monomial& b) {
  validate_monomial(x, a);
  validate_monomial(x, b);
  const OrientedGraph& g = x.graph();
  const Path& nu = a.nu;
  const Path& rho = b.mu;
  if (nu.length() <= rho.length()) {
    // S_mu S_nu^* S_rho S_kappa^* = S_{mu rhobar} S_kappa^* iff nu = rho's head.
    if (!is_prefix(nu, rho)) return std::nullopt;
    Path rho_tail = tail_after(g, rho, nu.length());
    return Monomial{concat(g, a.mu, rho_tail), b.nu};
  }
  // |nu| > |rho|: result S_mu S_{kappa nubar}^* iff rho = nu's head.
  if (!is_prefix(rho, nu)) return std::nullopt;
  Path nu_tail = tail_after(g, nu, rho.length());
  return Monomial{a.mu, concat(g, b.nu, nu_tail)};
}

AlgebraElement multiply(const Expansion& x, const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms())
      if (auto m = multiply(x, ma, mb)) out.add(*m, ca * cb);
  return out;
}

Monomial adjoint(const Monomial& m) { return Monomial{m.nu, m.mu}; }

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement out;
  // Coefficients are real here, so the involution only swaps paths.
  for (const auto& [m, c] : a.terms()) out.add(adjoint(m), c);
  return out;
}

int graded_degree(const Expansion& x, const Monomial& m) {
  return static_cast<int>(sigma_length(x, m.mu)) - static_cast<int>(sigma_length(x, m.nu));
}

namespace {

bool is_core_sink(const Expansion& x, VertexId v) {
  if (!x.in_core(v)) return false;
  for (EdgeId e : x.graph().out_edges(v))
    if (x.core_edge(e)) return false;
  return true;
}

}  // namespace

Classification classify_fixed(const Expansion& x, const Monomial& m, unsigned k) {
  if (k < 1) throw StructuralError("classify_fixed needs k >= 1");
  validate_monomial(x, m);
  if (graded_degree(x, m) != 0) return Classification{FixedClass::NotInF, {}};
  unsigned n = sigma_length(x, m.mu);
  if (n >= k) return Classification{FixedClass::Fk, {}};
  VertexId r = path_range(x.graph(), m.mu);
  if (!x.in_core(r) || is_core_sink(x, r)) return Classification{FixedClass::Gk, {}};

  // Interior case: expand over rho with |rho| prec k - n + 1 and classify
  // each S_{mu rho} S_{nu rho}^* term.
  Classification out{FixedClass::Split, {}};
  for (const Path& rho :
       enumerate_paths(x, r, PathConstraint{PathConstraint::Kind::LengthUpTo, k - n + 1})) {
    Path mu_ext = m.mu;
    mu_ext.edges.insert(mu_ext.edges.end(), rho.edges.begin(), rho.edges.end());
    Path nu_ext = m.nu;
    nu_ext.edges.insert(nu_ext.edges.end(), rho.edges.begin(), rho.edges.end());
    unsigned total = n + sigma_length(x, rho);
    out.split.push_back({Monomial{std::move(mu_ext), std::move(nu_ext)},
                         total >= k ? FixedClass::Fk : FixedClass::Gk});
  }
  return out;
}

Scalar phi(const Expansion& x, const SpecialWeight& w, const Monomial& m) {
  if (!(m.mu.source == m.nu.source && m.mu.edges == m.nu.edges)) return Scalar(0);
  return w.lambda_of_path(x, m.nu) * w.g_of(x, path_range(x.graph(), m.nu));
}

Scalar phi(const Expansion& x, const SpecialWeight& w, const AlgebraElement& a) {
  Scalar acc(0);
  for (const auto& [m, c] : a.terms()) acc += c * phi(x, w, m);
  return acc;
}

}  // namespace zhyvot
