#include "qfslice/traces.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qfslice/errors.hpp"

namespace qfslice {

Complex TracePoly::coeff(std::int64_t k) const {
  const std::int64_t q = degree();
  if (k < -q || k > q) return Complex{0.0};
  return coeffs[static_cast<std::size_t>(k + q)];
}

bool TracePolyCache::lookup(const Slope& s, Complex lambda, TracePoly& out) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find({s.p(), s.q(), lambda.real(), lambda.imag()});
  if (it == entries_.end()) return false;
  out = it->second;
  return true;
}

void TracePolyCache::store(const TracePoly& tp) {
  std::unique_lock lock(mutex_);
  entries_.try_emplace({tp.slope.p(), tp.slope.q(), tp.lambda.real(), tp.lambda.imag()}, tp);
}

std::size_t TracePolyCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

namespace {

Complex inverse_half_tanh(Complex lambda) {
  const Complex th = std::tanh(lambda / 2.0);
  if (std::abs(th) <= 1e-12 || !std::isfinite(std::abs(th))) {
    throw DegenerateLength("tanh(lambda/2) vanishes at lambda = " + format_complex(lambda));
  }
  return 1.0 / th;
}

TracePoly length_poly(Complex lambda) {
  return {Slope::infinity(), lambda, {2.0 * std::cosh(lambda / 2.0)}, false};
}

TracePoly integer_poly(std::int64_t n, Complex lambda, Complex inv_tanh) {
  const Complex shift = static_cast<double>(n) * lambda / 2.0;
  return {Slope{n, 1}, lambda, {std::exp(-shift) * inv_tanh, Complex{0.0}, std::exp(shift) * inv_tanh},
          false};
}

void mark_saturation(TracePoly& tp) {
  for (const Complex& c : tp.coeffs) {
    const double m = std::abs(c);
    if (!(m <= TracePoly::kSaturation)) {
      tp.saturated = true;
      return;
    }
  }
}

// lhs * rhs - diff, where diff has degree deg(lhs) - deg(rhs) in absolute value.
TracePoly mediant_poly(const Slope& s, const TracePoly& lhs, const TracePoly& rhs,
                       const TracePoly& diff) {
  const std::size_t n = lhs.coeffs.size() + rhs.coeffs.size() - 1;
  TracePoly out{s, lhs.lambda, std::vector<Complex>(n), lhs.saturated || rhs.saturated};
  if (out.saturated) return out;
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) {
    if (lhs.coeffs[i] == Complex{0.0}) continue;
    for (std::size_t j = 0; j < rhs.coeffs.size(); ++j) {
      out.coeffs[i + j] += lhs.coeffs[i] * rhs.coeffs[j];
    }
  }
  const std::int64_t q = out.degree();
  const std::int64_t dq = diff.degree();
  for (std::int64_t k = -dq; k <= dq; ++k) {
    out.coeffs[static_cast<std::size_t>(k + q)] -= diff.coeff(k);
  }
  mark_saturation(out);
  return out;
}

}  // namespace

TracePoly trace_poly(const Slope& s, Complex lambda, TracePolyCache* cache) {
  if (cache != nullptr) {
    TracePoly hit;
    if (cache->lookup(s, lambda, hit)) return hit;
  }
  if (s.is_infinity()) return length_poly(lambda);
  const Complex inv_tanh = inverse_half_tanh(lambda);
  if (s.q() == 1) return integer_poly(s.p(), lambda, inv_tanh);

  const auto path = stern_brocot_path(s);
  // path[0] = {n, inf, n+1}; refinement starts on the edge (n, n+1) whose
  // opposite vertex is 1/0.
  TracePoly left = integer_poly(path[1].left.p(), lambda, inv_tanh);
  TracePoly right = integer_poly(path[1].right.p(), lambda, inv_tanh);
  TracePoly opposite = length_poly(lambda);
  TracePoly mediant;
  for (std::size_t i = 1; i < path.size(); ++i) {
    mediant = mediant_poly(path[i].mediant, left, right, opposite);
    if (cache != nullptr) cache->store(mediant);
    if (i + 1 == path.size()) break;
    if (path[i + 1].left == path[i].left) {
      opposite = std::move(right);
      right = mediant;
    } else {
      opposite = std::move(left);
      left = mediant;
    }
  }
  return mediant;
}

Complex eval(const TracePoly& tp, Complex tau) {
  if (tp.saturated) return {std::numeric_limits<double>::infinity(), 0.0};
  const std::int64_t q = tp.degree();
  const Complex u = std::exp(tau / 2.0);
  const Complex u_inv = std::exp(-tau / 2.0);
  Complex pos{0.0};
  for (std::int64_t k = q; k >= 0; --k) pos = pos * u + tp.coeff(k);
  Complex neg{0.0};
  for (std::int64_t k = -q; k <= -1; ++k) neg = (neg + tp.coeff(k)) * u_inv;
  return pos + neg;
}

Complex trace_direct(const Slope& s, const FNPoint& pt) {
  // In the explicit matrix model the special word of p/q carries the trace
  // function of -p/q (tr rho(ab) is the 1/1 coordinate while ab spells g_{-1/1}).
  const Slope mirrored = s.is_infinity() ? s : Slope{-s.p(), s.q()};
  return evaluate_word(special_word(mirrored), matrices(pt)).trace();
}

RealLocusResult real_locus_b(const Slope& s, double l, double t, int j, int max_iterations) {
  if (s.q() < 1) throw std::invalid_argument("real_locus_b needs q >= 1");
  const double q = static_cast<double>(s.q());
  if (2.0 * std::abs(j) >= q) {
    throw std::invalid_argument("real_locus_b needs |j| < q/2");
  }
  constexpr double pi = std::numbers::pi;
  const TracePoly tp = trace_poly(s, Complex{l, 0.0});
  const auto at = [&](double b) { return eval(tp, Complex{t, b}); };

  double lo = (2.0 * j - 1.0) * pi / q;
  double hi = (2.0 * j + 1.0) * pi / q;
  const double f_lo = at(lo).imag();
  const double f_hi = at(hi).imag();
  if (!(std::signbit(f_lo) != std::signbit(f_hi)) || f_lo == 0.0 || f_hi == 0.0) {
    // A zero exactly at an endpoint is outside the open interval.
    throw NoSignChange("no sign change of Im tr_" + s.str() + " on the bracket at t = " +
                       std::to_string(t));
  }
  RealLocusResult res;
  const bool lo_negative = f_lo < 0.0;
  for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
    res.b = 0.5 * (lo + hi);
    res.trace = at(res.b);
    const double im = res.trace.imag();
    if (std::abs(im) < 1e-10 * (1.0 + std::abs(res.trace))) return res;
    if ((im < 0.0) == lo_negative) {
      lo = res.b;
    } else {
      hi = res.b;
    }
  }
  res.iterations = max_iterations;
  return res;
}

}  // namespace qfslice
