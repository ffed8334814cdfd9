#ifndef ZHYVOT_SCALAR_HPP
#define ZHYVOT_SCALAR_HPP

#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace zhyvot {

using Rat = mpq_class;

/// Thrown when two irrational scalars live in different quadratic fields.
struct FieldMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScalarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact element of Q or a real quadratic field Q(sqrt(d)).
///
/// Stored as a + b*sqrt(d) with rational a, b and squarefree d >= 0.
/// Canonical form: b == 0 implies d == 0, so rationals compare equal
/// regardless of which field they were computed in.  Mixing two values
/// with distinct nonzero d is a FieldMismatchError.
class Scalar {
 public:
  Scalar() : a_(0), b_(0), d_(0) {}
  Scalar(long v) : a_(v), b_(0), d_(0) {}
  Scalar(const Rat& v) : a_(v), b_(0), d_(0) { a_.canonicalize(); }
  Scalar(const Rat& a, const Rat& b, long d);

  static Scalar ratio(long num, long den) { return Scalar(Rat(num, den)); }

  /// Exact square root of a non-negative rational, as an element of Q(sqrt(d)).
  static Scalar sqrt_of(const Rat& value);

  const Rat& rational_part() const { return a_; }
  const Rat& radical_part() const { return b_; }
  long radicand() const { return d_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_integer() const;

  /// Exact sign: -1, 0, +1.
  int sign() const;

  Rat as_rational() const;

  Scalar operator-() const { return Scalar(-a_, -b_, d_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar l, const Scalar& r) { return l += r; }
  friend Scalar operator-(Scalar l, const Scalar& r) { return l -= r; }
  friend Scalar operator*(Scalar l, const Scalar& r) { return l *= r; }
  friend Scalar operator/(Scalar l, const Scalar& r) { return l /= r; }

  friend bool operator==(const Scalar& l, const Scalar& r) {
    return l.a_ == r.a_ && l.b_ == r.b_ && (l.b_ == 0 || l.d_ == r.d_);
  }
  friend bool operator!=(const Scalar& l, const Scalar& r) { return !(l == r); }
  friend bool operator<(const Scalar& l, const Scalar& r) { return (l - r).sign() < 0; }
  friend bool operator<=(const Scalar& l, const Scalar& r) { return (l - r).sign() <= 0; }
  friend bool operator>(const Scalar& l, const Scalar& r) { return (l - r).sign() > 0; }
  friend bool operator>=(const Scalar& l, const Scalar& r) { return (l - r).sign() >= 0; }

  Scalar inverse() const;
  Scalar pow(unsigned k) const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const;

  /// Exact text form: "p/q" (or "p") when rational, "(a+b*sqrt(d))/c" otherwise.
  std::string to_string() const;

  /// Parses both exact forms accepted by weight files, plus plain decimals
  /// like "0.25" (converted to the exact rational 1/4).
  static Scalar parse(const std::string& text);

 private:
  void canonicalize();

  Rat a_, b_;
  long d_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Total order usable as a map key (field-mismatch-free: compares (d, a, b)).
struct ScalarKeyLess {
  bool operator()(const Scalar& l, const Scalar& r) const;
};

}  // namespace zhyvot

#endif
