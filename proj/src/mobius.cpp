#include "qfslice/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qfslice {

bool Mat2C::is_finite() const {
  for (const Complex& e : {a, b, c, d}) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
  }
  return true;
}

double Mat2C::max_abs() const {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

Mat2C compose(const Mat2C& lhs, const Mat2C& rhs) {
  return {lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
          lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d};
}

std::string_view to_string(IsomClass c) {
  switch (c) {
    case IsomClass::Identity: return "identity";
    case IsomClass::Parabolic: return "parabolic";
    case IsomClass::Elliptic: return "elliptic";
    case IsomClass::Hyperbolic: return "hyperbolic";
    case IsomClass::Loxodromic: return "loxodromic";
  }
  return "unknown";
}

IsomClass classify(Complex trace, double eps) {
  if (std::abs(trace.imag()) > eps) return IsomClass::Loxodromic;
  const double re = std::abs(trace.real());
  if (std::abs(re - 2.0) <= eps) return IsomClass::Parabolic;
  if (re < 2.0 - eps) return IsomClass::Elliptic;
  return IsomClass::Hyperbolic;
}

IsomClass classify(Complex trace) {
  return classify(trace, 1e-9 * std::max(1.0, std::abs(trace)));
}

ComplexLength complex_length_from_trace(Complex trace) {
  constexpr double pi = std::numbers::pi;
  // Principal acosh has Re >= 0, so lambda = 2 acosh(t/2) already has Re >= 0;
  // only the imaginary part needs reducing mod 2 pi.
  Complex lambda = 2.0 * std::acosh(trace / 2.0);
  double im = std::remainder(lambda.imag(), 2.0 * pi);
  if (im <= -pi) im += 2.0 * pi;
  if (lambda.real() == 0.0 && im < 0.0) im = -im;
  return {Complex{lambda.real(), im}};
}

SpherePoint apply(const Mat2C& m, SpherePoint p) {
  if (p.at_infinity) {
    if (m.c == Complex{0.0}) return SpherePoint::infinity();
    return {m.a / m.c, false};
  }
  const Complex den = m.c * p.z + m.d;
  if (den == Complex{0.0}) return SpherePoint::infinity();
  return {(m.a * p.z + m.b) / den, false};
}

}  // namespace qfslice
