#include "zhyvot/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zhyvot {

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rat Poly::eval(const Rat& x) const {
  Rat r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

double Poly::eval(double x) const {
  double r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
  return r;
}

Scalar Poly::eval(const Scalar& x) const {
  Scalar r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + Scalar(*it);
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(std::move(r));
}

Poly Poly::operator-() const {
  std::vector<Rat> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly();
  std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(r));
}

Poly Poly::divide_exact(const Poly& divisor) const {
  if (divisor.is_zero()) throw ScalarError("polynomial division by zero");
  std::vector<Rat> rem = c_;
  std::vector<Rat> quot(rem.size() >= divisor.c_.size() ? rem.size() - divisor.c_.size() + 1 : 0, Rat(0));
  while (rem.size() >= divisor.c_.size() && !rem.empty()) {
    Rat factor = rem.back() / divisor.c_.back();
    size_t shift = rem.size() - divisor.c_.size();
    quot[shift] = factor;
    for (size_t i = 0; i < divisor.c_.size(); ++i) rem[shift + i] -= factor * divisor.c_[i];
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
  }
  if (!rem.empty()) throw ScalarError("inexact polynomial division");
  return Poly(std::move(quot));
}

bool Poly::divisible_by(const Poly& divisor) const {
  try {
    (void)divide_exact(divisor);
    return true;
  } catch (const ScalarError&) {
    return false;
  }
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (os.tellp() > 0 && c_[i] > 0) os << "+";
    os << c_[i];
    if (i > 0) os << "*x^" << i;
  }
  return os.str();
}

namespace {

// Integer-coefficient copy with denominators cleared and content removed.
std::vector<mpz_class> primitive_integer_coeffs(const Poly& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) l = lcm(l, c.get_den());
  std::vector<mpz_class> z;
  z.reserve(p.coeffs().size());
  mpz_class g = 0;
  for (const auto& c : p.coeffs()) {
    mpz_class v = c.get_num() * (l / c.get_den());
    z.push_back(v);
    g = gcd(g, v);
  }
  if (g > 1)
    for (auto& v : z) v /= g;
  return z;
}

std::vector<mpz_class> divisors_of(const mpz_class& n) {
  std::vector<mpz_class> out;
  mpz_class a = ::abs(n);
  for (mpz_class i = 1; i * i <= a; ++i) {
    if (a % i == 0) {
      out.push_back(i);
      out.push_back(a / i);
    }
    if (i > 100000) break;  // degenerate inputs; candidates beyond this are hopeless anyway
  }
  return out;
}

double bisect(const Poly& p, double lo, double hi) {
  double flo = p.eval(lo);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = p.eval(mid);
    if (fm == 0.0 || hi - lo < 1e-14) return mid;
    if ((flo < 0) != (fm < 0)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

PolyRootsInUnitInterval dedupe(PolyRootsInUnitInterval r) {
  std::sort(r.exact.begin(), r.exact.end(), ScalarKeyLess{});
  r.exact.erase(std::unique(r.exact.begin(), r.exact.end()), r.exact.end());
  // Numeric ascending order; roots of one polynomial are distinct reals, so
  // double precision separates them without cross-field exact comparisons.
  std::sort(r.exact.begin(), r.exact.end(),
            [](const Scalar& a, const Scalar& b) { return a.to_double() < b.to_double(); });
  std::sort(r.approximate.begin(), r.approximate.end());
  return r;
}

}  // namespace

PolyRootsInUnitInterval roots_in_unit_interval(const Poly& p) {
  PolyRootsInUnitInterval out;
  if (p.is_zero()) {
    out.identically_zero = true;
    return out;
  }

  Poly work = p;

  // Rational roots via the rational root theorem, verified exactly.
  auto z = primitive_integer_coeffs(work);
  size_t low = 0;
  while (low < z.size() && z[low] == 0) ++low;  // roots at 0 are outside (0,1)
  if (low > 0) {
    std::vector<Rat> shifted(work.coeffs().begin() + low, work.coeffs().end());
    work = Poly(std::move(shifted));
    z = primitive_integer_coeffs(work);
  }
  if (work.degree() >= 1) {
    for (const auto& pd : divisors_of(z.front())) {
      for (const auto& qd : divisors_of(z.back())) {
        for (int s : {1, -1}) {
          Rat cand(s * pd, qd);
          cand.canonicalize();
          if (!(cand > 0 && cand < 1)) continue;
          while (work.degree() >= 1 && work.eval(cand) == 0) {
            out.exact.push_back(Scalar(cand));
            work = work.divide_exact(Poly({-cand, Rat(1)}));
          }
        }
      }
    }
  }

  // Quadratic remainder: exact formula.
  if (work.degree() == 2) {
    Rat a = work.coeff(2), b = work.coeff(1), c = work.coeff(0);
    Rat disc = b * b - 4 * a * c;
    if (disc >= 0) {
      Scalar sq = Scalar::sqrt_of(disc);
      for (int s : {1, -1}) {
        Scalar root = (Scalar(-b) + (s > 0 ? sq : -sq)) / Scalar(2 * a);
        if (root > Scalar(0) && root < Scalar(1) && !root.is_rational()) out.exact.push_back(root);
      }
    }
    return dedupe(out);
  }

  if (work.degree() <= 0) return dedupe(out);

  // Higher degree: isolate numerically, then try to recognize quadratic
  // factors with small integer coefficients and verify by exact division.
  const int samples = 4096;
  double prev_x = 1e-9, prev_f = work.eval(prev_x);
  for (int i = 1; i <= samples; ++i) {
    double x = static_cast<double>(i) / samples;
    if (i == samples) x = 1.0 - 1e-9;
    double f = work.eval(x);
    if (prev_f == 0.0) prev_f = 1e-300;
    if ((prev_f < 0) != (f < 0)) {
      double r = bisect(work, prev_x, x);
      bool recognized = false;
      for (int qa = 1; qa <= 32 && !recognized; ++qa) {
        for (int qb = -64; qb <= 64 && !recognized; ++qb) {
          double qc_d = -(qa * r * r + qb * r);
          long qc = std::lround(qc_d);
          if (std::fabs(qc_d - qc) > 1e-6) continue;
          Poly quad({Rat(qc), Rat(qb), Rat(qa)});
          if (quad.degree() != 2 || !work.divisible_by(quad)) continue;
          Rat disc = Rat(qb) * Rat(qb) - 4 * Rat(qa) * Rat(qc);
          if (disc < 0) continue;
          Scalar sq = Scalar::sqrt_of(disc);
          for (int s : {1, -1}) {
            Scalar root = (Scalar(Rat(-qb)) + (s > 0 ? sq : -sq)) / Scalar(Rat(2 * qa));
            if (root > Scalar(0) && root < Scalar(1) &&
                std::fabs(root.to_double() - r) < 1e-9) {
              out.exact.push_back(root);
              recognized = true;
            }
          }
        }
      }
      if (!recognized) out.approximate.push_back(r);
    }
    prev_x = x;
    prev_f = f;
  }
  return dedupe(out);
}

}  // namespace zhyvot
