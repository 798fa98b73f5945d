#include "honeycomb/scalar.hpp"

#include <climits>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace honeycomb {

QParam QParam::root_of_unity(int r) {
  if (r < 3) throw std::invalid_argument("root of unity level must be >= 3");
  return QParam(r);
}

int QParam::max_color() const { return r_ == 0 ? INT_MAX : r_ - 2; }

std::string QParam::str() const {
  return r_ == 0 ? std::string("classical") : "q:" + std::to_string(r_);
}

QParam QParam::parse(const std::string& s) {
  if (s == "classical") return classical();
  if (s.rfind("q:", 0) == 0) return root_of_unity(std::stoi(s.substr(2)));
  throw std::invalid_argument("unknown backend '" + s + "'");
}

int ClassicalField::max_color() const { return INT_MAX; }

Complex RootOfUnityField::qint(int n) const {
  const double t = std::numbers::pi / r;
  return Complex(std::sin(n * t) / std::sin(t), 0.0);
}

const Rational& QScalar::rational() const {
  if (!is_exact()) throw std::logic_error("QScalar holds a complex value");
  return std::get<Rational>(v_);
}

Complex QScalar::complex() const {
  if (is_exact()) return Complex(std::get<Rational>(v_).get_d(), 0.0);
  return std::get<Complex>(v_);
}

bool QScalar::is_zero() const {
  if (is_exact()) return sgn(std::get<Rational>(v_)) == 0;
  return std::get<Complex>(v_) == Complex();
}

double QScalar::norm() const { return std::norm(complex()); }

bool QScalar::equals(const QScalar& o, double tol) const {
  if (is_exact() && o.is_exact()) return rational() == o.rational();
  return std::abs(complex() - o.complex()) <= tol;
}

QScalar QScalar::operator*(const QScalar& o) const {
  if (is_exact() && o.is_exact()) return QScalar(Rational(rational() * o.rational()));
  return QScalar(complex() * o.complex());
}

QScalar QScalar::operator+(const QScalar& o) const {
  if (is_exact() && o.is_exact()) return QScalar(Rational(rational() + o.rational()));
  return QScalar(complex() + o.complex());
}

QScalar QScalar::operator-(const QScalar& o) const {
  if (is_exact() && o.is_exact()) return QScalar(Rational(rational() - o.rational()));
  return QScalar(complex() - o.complex());
}

QScalar QScalar::conj() const {
  if (is_exact()) return *this;
  return QScalar(std::conj(std::get<Complex>(v_)));
}

std::string rational_str(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

std::string QScalar::str() const {
  if (is_exact()) return rational_str(rational());
  std::ostringstream os;
  os.precision(17);
  Complex z = std::get<Complex>(v_);
  os << '[' << z.real() << ", " << z.imag() << ']';
  return os.str();
}

}  // namespace honeycomb
