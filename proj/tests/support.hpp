#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "qfslice/mobius.hpp"
#include "qfslice/repr.hpp"

namespace testing {

inline constexpr double kPi = 3.14159265358979323846;

inline double rel_err(qfslice::Complex got, qfslice::Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline bool near(qfslice::Complex got, qfslice::Complex want, double tol) {
  return rel_err(got, want) <= tol;
}

inline double max_entry_diff(const qfslice::Mat2C& x, const qfslice::Mat2C& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

// Random point of the domain: Re lambda in (lo, hi), |Im lambda| < 3, tau in a box.
inline qfslice::FNPoint random_point(std::mt19937_64& rng, double lo = 0.2, double hi = 6.0) {
  std::uniform_real_distribution<double> re(lo, hi), im(-3.0, 3.0), tr(-4.0, 4.0), ti(-kPi, kPi);
  return {{re(rng), im(rng)}, {tr(rng), ti(rng)}};
}

}  // namespace testing
