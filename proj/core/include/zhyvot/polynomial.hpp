#ifndef ZHYVOT_POLYNOMIAL_HPP
#define ZHYVOT_POLYNOMIAL_HPP

#include <vector>

#include "zhyvot/scalar.hpp"

namespace zhyvot {

/// Dense univariate polynomial over Q, coefficients ascending by degree.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const Rat& v) { return Poly({v}); }
  static Poly linear(const Rat& c0, const Rat& c1) { return Poly({c0, c1}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

  Rat eval(const Rat& x) const;
  double eval(double x) const;
  Scalar eval(const Scalar& x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;

  /// Exact division; throws ScalarError when the remainder is nonzero.
  Poly divide_exact(const Poly& divisor) const;

  /// True when divisor divides this exactly.
  bool divisible_by(const Poly& divisor) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rat> c_;
};

struct PolyRootsInUnitInterval {
  /// Exact roots found in (0,1), as Scalars (rational or quadratic).
  std::vector<Scalar> exact;
  /// Approximate roots in (0,1) whose exact form was not recognized.
  std::vector<double> approximate;
  bool identically_zero = false;
};

/// Roots of p in the open interval (0,1).  Rational roots and roots of
/// quadratic factors are recognized and verified exactly; anything left is
/// isolated by bisection to 1e-14 and reported approximately.
PolyRootsInUnitInterval roots_in_unit_interval(const Poly& p);

}  // namespace zhyvot

#endif
