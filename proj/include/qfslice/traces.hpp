#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "qfslice/farey.hpp"
#include "qfslice/mobius.hpp"
#include "qfslice/repr.hpp"

namespace qfslice {

// tr_{p/q}(lambda, tau) = sum_{k=-q}^{q} c_k exp(k tau / 2) at a fixed lambda.
struct TracePoly {
  static constexpr double kSaturation = 1e150;

  Slope slope;
  Complex lambda;
  // coeffs[k + q] = c_k
  std::vector<Complex> coeffs;
  bool saturated = false;

  std::int64_t degree() const { return static_cast<std::int64_t>(coeffs.size() / 2); }
  Complex coeff(std::int64_t k) const;
};

// Optional memo keyed by (slope, lambda). Safe to share between threads;
// results do not depend on whether a cache is used.
class TracePolyCache {
 public:
  bool lookup(const Slope& s, Complex lambda, TracePoly& out) const;
  void store(const TracePoly& tp);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::int64_t, std::int64_t, double, double>;
  mutable std::shared_mutex mutex_;
  std::map<Key, TracePoly> entries_;
};

// Built along the Stern-Brocot path with a rolling triple of polynomials.
// Throws DegenerateLength when tanh(lambda/2) = 0 and q >= 1.
TracePoly trace_poly(const Slope& s, Complex lambda, TracePolyCache* cache = nullptr);

// Evaluates in u = e^{tau/2} and 1/u separately. A saturated polynomial
// evaluates to +inf.
Complex eval(const TracePoly& tp, Complex tau);

// Word-product oracle: trace of the special word of -p/q in the explicit
// matrix model, which is the p/q trace function up to sign.
Complex trace_direct(const Slope& s, const FNPoint& pt);

struct RealLocusResult {
  double b = 0.0;
  int iterations = 0;
  Complex trace;
};

// Bisects Im tr_{p/q}(l, t + b i) over b in ((2j-1)pi/q, (2j+1)pi/q).
// Throws NoSignChange when the endpoints do not bracket a zero.
RealLocusResult real_locus_b(const Slope& s, double l, double t, int j, int max_iterations = 200);

}  // namespace qfslice
