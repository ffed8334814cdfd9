#include "zhyvot/scalar.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

namespace zhyvot {

namespace {

// Splits n >= 1 into m^2 * d with d squarefree (trial division up to 10^6,
// then a perfect-square check on the residual; larger residuals are kept as
// the radicand, which is exact as long as they carry no square factor).
void square_part(const mpz_class& n, mpz_class& m, mpz_class& d) {
  m = 1;
  d = 1;
  mpz_class rest = n;
  for (mpz_class p = 2; p * p <= rest && p < 1000000; ++p) {
    if (rest % p != 0) continue;
    unsigned exp = 0;
    while (rest % p == 0) {
      rest /= p;
      ++exp;
    }
    for (unsigned i = 0; i < exp / 2; ++i) m *= p;
    if (exp % 2) d *= p;
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
      m *= r;
    } else {
      d *= rest;
    }
  }
}

int sgn_rat(const Rat& q) { return sgn(q); }

}  // namespace

Scalar::Scalar(const Rat& a, const Rat& b, long d) : a_(a), b_(b), d_(d) {
  if (d < 0) throw ScalarError("negative radicand");
  a_.canonicalize();
  b_.canonicalize();
  canonicalize();
}

void Scalar::canonicalize() {
  if (d_ == 1) {
    a_ += b_;  // sqrt(1) == 1
    b_ = 0;
    d_ = 0;
    return;
  }
  if (d_ == 0) {
    b_ = 0;  // b*sqrt(0) == 0
    return;
  }
  if (b_ == 0) d_ = 0;
}

Scalar Scalar::sqrt_of(const Rat& value) {
  if (value < 0) throw ScalarError("sqrt of negative rational");
  if (value == 0) return Scalar();
  // p/q = p*q / q^2, so sqrt = sqrt(p*q)/q.
  mpz_class s = value.get_num() * value.get_den();
  mpz_class m, d;
  square_part(s, m, d);
  Rat coeff(m, value.get_den());
  coeff.canonicalize();
  if (d == 1) return Scalar(coeff);
  if (!d.fits_slong_p()) throw ScalarError("radicand too large to represent");
  return Scalar(Rat(0), coeff, d.get_si());
}

bool Scalar::is_integer() const {
  return b_ == 0 && a_.get_den() == 1;
}

int Scalar::sign() const {
  if (b_ == 0) return sgn_rat(a_);
  if (a_ == 0) return sgn_rat(b_);
  int sa = sgn_rat(a_), sb = sgn_rat(b_);
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 against b^2 d exactly.
  Rat lhs = a_ * a_;
  Rat rhs = b_ * b_ * d_;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

Rat Scalar::as_rational() const {
  if (!is_rational()) throw ScalarError("irrational value where a rational was required: " + to_string());
  return a_;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (b_ != 0 && o.b_ != 0 && d_ != o.d_)
    throw FieldMismatchError("cannot combine sqrt(" + std::to_string(d_) + ") with sqrt(" + std::to_string(o.d_) + ")");
  if (b_ == 0) d_ = o.d_;
  a_ += o.a_;
  b_ += o.b_;
  canonicalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (b_ != 0 && o.b_ != 0 && d_ != o.d_)
    throw FieldMismatchError("cannot combine sqrt(" + std::to_string(d_) + ") with sqrt(" + std::to_string(o.d_) + ")");
  long d = b_ != 0 ? d_ : o.d_;
  Rat na = a_ * o.a_ + b_ * o.b_ * d;
  Rat nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  d_ = d;
  canonicalize();
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ScalarError("division by zero");
  if (b_ == 0) return Scalar(Rat(1) / a_);
  Rat norm = a_ * a_ - b_ * b_ * d_;  // nonzero: sqrt(d) is irrational
  return Scalar(a_ / norm, -b_ / norm, d_);
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::pow(unsigned k) const {
  Scalar r(1);
  Scalar base = *this;
  while (k) {
    if (k & 1u) r *= base;
    base *= base;
    k >>= 1u;
  }
  return r;
}

double Scalar::to_double() const {
  double v = a_.get_d();
  if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
  return v;
}

std::string Scalar::to_string() const {
  std::ostringstream os;
  if (b_ == 0) {
    os << a_;
    return os.str();
  }
  // Common denominator form (a + b*sqrt(d))/c with integer a, b, c > 0.
  mpz_class c = lcm(a_.get_den(), b_.get_den());
  mpz_class ia = a_.get_num() * (c / a_.get_den());
  mpz_class ib = b_.get_num() * (c / b_.get_den());
  mpz_class g = gcd(gcd(::abs(ia), ::abs(ib)), c);
  if (g > 1) {
    ia /= g;
    ib /= g;
    c /= g;
  }
  os << "(" << ia << (ib >= 0 ? "+" : "") << ib << "*sqrt(" << d_ << "))/" << c;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ScalarError("malformed scalar literal '" + s + "'");
  }
};

mpz_class parse_integer(Cursor& c) {
  c.skip_ws();
  bool negative = false;
  if (c.i < c.s.size() && (c.s[c.i] == '+' || c.s[c.i] == '-')) {
    negative = c.s[c.i] == '-';
    ++c.i;
  }
  size_t start = c.i;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  if (c.i == start) throw ScalarError("malformed scalar literal '" + c.s + "'");
  mpz_class v(c.s.substr(start, c.i - start));
  return negative ? mpz_class(-v) : v;
}

// Decimal like 0.25 -> 1/4, otherwise integer or integer/integer.
Rat parse_rational(Cursor& c) {
  mpz_class num = parse_integer(c);
  if (c.i < c.s.size() && c.s[c.i] == '.') {
    ++c.i;
    mpz_class den = 1;
    mpz_class frac = 0;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
      frac = frac * 10 + (c.s[c.i] - '0');
      den *= 10;
      ++c.i;
    }
    Rat r(num * den + (num >= 0 ? frac : -frac), den);
    r.canonicalize();
    return r;
  }
  if (c.eat('/')) {
    mpz_class den = parse_integer(c);
    if (den == 0) throw ScalarError("zero denominator in '" + c.s + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  return Rat(num);
}

}  // namespace

Scalar Scalar::parse(const std::string& text) {
  Cursor c{text};
  c.skip_ws();
  if (c.i < text.size() && text[c.i] == '(') {
    // (a+b*sqrt(d))/c
    c.expect('(');
    mpz_class ia = parse_integer(c);
    mpz_class ib = parse_integer(c);  // sign is part of the literal
    c.expect('*');
    c.skip_ws();
    if (text.compare(c.i, 4, "sqrt") != 0) throw ScalarError("malformed scalar literal '" + text + "'");
    c.i += 4;
    c.expect('(');
    mpz_class d = parse_integer(c);
    c.expect(')');
    c.expect(')');
    c.expect('/');
    mpz_class den = parse_integer(c);
    if (den == 0) throw ScalarError("zero denominator in '" + text + "'");
    if (d < 0 || !d.fits_slong_p()) throw ScalarError("bad radicand in '" + text + "'");
    c.skip_ws();
    if (c.i != text.size()) throw ScalarError("trailing characters in '" + text + "'");
    Rat a(ia, den), b(ib, den);
    a.canonicalize();
    b.canonicalize();
    // Re-reduce the radicand so parsed values are canonical.
    mpz_class m, d0;
    square_part(mpz_class(d.get_si()), m, d0);
    Rat bb = b * Rat(m);
    bb.canonicalize();
    if (!d0.fits_slong_p()) throw ScalarError("bad radicand in '" + text + "'");
    return Scalar(a, bb, d0.get_si());
  }
  Rat r = parse_rational(c);
  c.skip_ws();
  if (c.i != text.size()) throw ScalarError("trailing characters in '" + text + "'");
  return Scalar(r);
}

bool ScalarKeyLess::operator()(const Scalar& l, const Scalar& r) const {
  if (l.radicand() != r.radicand()) return l.radicand() < r.radicand();
  if (l.rational_part() != r.rational_part()) return l.rational_part() < r.rational_part();
  return l.radical_part() < r.radical_part();
}

}  // namespace zhyvot
