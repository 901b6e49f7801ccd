#pragma once

#include <complex>
#include <string_view>

namespace qfslice {

using Complex = std::complex<double>;

// SL(2,C) element, also read as the Mobius map z -> (az+b)/(cz+d).
struct Mat2C {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static constexpr Mat2C identity() { return {}; }

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }
  // Inverse assuming det = 1.
  Mat2C inverse() const { return {d, -b, -c, a}; }
  bool is_finite() const;
  double max_abs() const;
};

Mat2C compose(const Mat2C& lhs, const Mat2C& rhs);
inline Mat2C operator*(const Mat2C& lhs, const Mat2C& rhs) { return compose(lhs, rhs); }

enum class IsomClass { Identity, Parabolic, Elliptic, Hyperbolic, Loxodromic };

std::string_view to_string(IsomClass c);

// Trace-only classification. Identity is never returned: +-I has the same
// trace as a parabolic and must be told apart by the caller.
IsomClass classify(Complex trace, double eps);
// Uses eps = 1e-9 * max(1, |trace|).
IsomClass classify(Complex trace);

// lambda with 2cosh(lambda/2) = +-trace, normalized to Re >= 0 and
// Im in (-pi, pi]; purely imaginary ties go to Im >= 0.
struct ComplexLength {
  Complex value;
};

ComplexLength complex_length_from_trace(Complex trace);

// Point of the Riemann sphere.
struct SpherePoint {
  Complex z{0.0};
  bool at_infinity = false;

  static SpherePoint infinity() { return {Complex{0.0}, true}; }
};

SpherePoint apply(const Mat2C& m, SpherePoint p);

}  // namespace qfslice
