#pragma once

#include <string>
#include <string_view>

#include "qfslice/farey.hpp"
#include "qfslice/mobius.hpp"

namespace qfslice {

// Complex Fenchel-Nielsen coordinates (lambda, tau). The twist strip is
// Im tau in [-pi, pi) throughout.
struct FNPoint {
  Complex lambda;
  Complex tau;

  // Re lambda > 0 and -pi < Im lambda < pi.
  bool lambda_in_domain() const;
  // lambda_in_domain() and -pi <= Im tau < pi.
  bool in_domain() const;
};

// SL(2,C) character (tr a, tr b, tr ab).
struct CharPoint {
  Complex x, y, z;
};

// Images of the generators a and b.
struct RepPair {
  Mat2C a;
  Mat2C b;
};

// (2cosh(l/2), 2cosh(t/2)/tanh(l/2), 2cosh((t+l)/2)/tanh(l/2)), valid on
// (C \ {0}) x C. Non-finite where tanh(lambda/2) = 0.
CharPoint psi_fn(const FNPoint& pt);

// Explicit generator matrices with e1 = e^{lambda/2}, t1 = e^{tau} and the
// principal square root of t1. Throws DegenerateLength for e1 in {+-1, +-i}.
RepPair matrices(const FNPoint& pt);

// x^2 + y^2 + z^2 - xyz
Complex markov_residual(const CharPoint& c);

// Elements of H^1(S; Z/2): sign flips of a and of b.
struct SignClass {
  bool flip_a = false;
  bool flip_b = false;
};

// flip_a: (x,y,z) -> (-x, y, -z); flip_b: (x,y,z) -> (x, -y, -z).
CharPoint h1_action(SignClass sign, const CharPoint& c);

Mat2C evaluate_word(const Word& w, const RepPair& rep);

// Accepts "x+yi", "x-yi", "x", "yi", "i", with optional spaces.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

}  // namespace qfslice
