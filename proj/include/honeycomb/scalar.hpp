#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <variant>

namespace honeycomb {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Evaluation backend: the classical limit [n] = n, or a root of unity of level r.
class QParam {
 public:
  static QParam classical() { return QParam(0); }
  static QParam root_of_unity(int r);

  bool is_quantum() const { return r_ != 0; }
  int level() const { return r_; }
  // Largest color allowed by the backend.
  int max_color() const;
  std::string str() const;
  static QParam parse(const std::string& s);

  friend bool operator==(const QParam&, const QParam&) = default;

 private:
  explicit QParam(int r) : r_(r) {}
  int r_;
};

struct ClassicalField {
  using value_type = Rational;
  value_type qint(int n) const { return Rational(n); }
  value_type one() const { return Rational(1); }
  value_type zero() const { return Rational(0); }
  bool is_zero(const value_type& x) const { return sgn(x) == 0; }
  QParam param() const { return QParam::classical(); }
  int max_color() const;
};

struct RootOfUnityField {
  using value_type = Complex;
  int r;
  value_type qint(int n) const;
  value_type one() const { return Complex(1.0, 0.0); }
  value_type zero() const { return Complex(); }
  bool is_zero(const value_type& x) const { return x == Complex(); }
  QParam param() const { return QParam::root_of_unity(r); }
  int max_color() const { return r - 2; }
};

// Backend-erased value: exact rational or complex double.
class QScalar {
 public:
  QScalar() : v_(Rational(0)) {}
  QScalar(Rational q) : v_(std::move(q)) {}
  QScalar(Complex z) : v_(z) {}

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const;
  Complex complex() const;
  double real() const { return complex().real(); }
  bool is_zero() const;
  // |x|^2 as a double.
  double norm() const;

  // Exact comparison for rationals; absolute tolerance for complex values.
  bool equals(const QScalar& o, double tol = default_tolerance) const;
  friend bool operator==(const QScalar& a, const QScalar& b) { return a.equals(b); }

  QScalar operator*(const QScalar& o) const;
  QScalar operator+(const QScalar& o) const;
  QScalar operator-(const QScalar& o) const;
  QScalar conj() const;

  // "num/den" (or integer) for rationals, "[re, im]" for complex values.
  std::string str() const;

  static constexpr double default_tolerance = 1e-9;

 private:
  std::variant<Rational, Complex> v_;
};

std::string rational_str(const Rational& q);
Rational parse_rational(const std::string& s);

}  // namespace honeycomb
