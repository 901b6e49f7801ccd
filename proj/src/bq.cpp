#include "qfslice/bq.hpp"

#include <cmath>
#include <deque>
#include <optional>

#include "qfslice/errors.hpp"

namespace qfslice {

bool BqParams::is_valid() const {
  return jorgensen_bound >= 0.0 && explore_cutoff > 0.0 && node_cap > 0 && real_band_eps > 0.0 && saturation > 0.0;
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::QF: return "QF";
    case VerdictKind::NotQF: return "NotQF";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(ViolationReason r) {
  switch (r) {
    case ViolationReason::None: return "none";
    case ViolationReason::RealInterval: return "RealInterval";
    case ViolationReason::EllipticTrace: return "EllipticTrace";
    case ViolationReason::SmallTrace: return "SmallTrace";
  }
  return "?";
}

MarkovState initial_state(const FNPoint& pt) {
  const CharPoint c = psi_fn(pt);
  return {{{Slope::infinity(), Slope{0, 1}, Slope{1, 1}}}, {c.x, c.y, c.z}};
}

MarkovState flip_state(const MarkovState& s, std::size_t index) {
  MarkovState out = s;
  out.triple = flip(s.triple, index);
  out.traces[index] = s.traces[(index + 1) % 3] * s.traces[(index + 2) % 3] - s.traces[index];
  return out;
}

MarkovState descend_to_sink(const MarkovState& s, std::size_t max_steps) {
  MarkovState cur = s;
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::optional<std::size_t> best;
    double best_gain = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const Complex w = cur.traces[(k + 1) % 3] * cur.traces[(k + 2) % 3] - cur.traces[k];
      const double gain = std::abs(cur.traces[k]) - std::abs(w);
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      }
    }
    if (!best) break;
    cur = flip_state(cur, *best);
  }
  return cur;
}

namespace {

struct BandCheck {
  bool hit = false;
  ViolationReason reason = ViolationReason::None;
};

BandCheck real_band(Complex t, double eps, double jorgensen) {
  const double tol = eps * (1.0 + std::abs(t));
  const bool small = std::abs(t) < jorgensen;
  if (std::abs(t.imag()) > tol) return small ? BandCheck{true, ViolationReason::SmallTrace} : BandCheck{};
  const double re = std::abs(t.real());
  if (re > 2.0 + tol) return {};
  return {true, re < 2.0 - tol ? ViolationReason::EllipticTrace : ViolationReason::RealInterval};
}

// Neighbours of a region X around its fan satisfy y_{m+1} = x y_m - y_{m-1},
// so y_m = A r^m + B r^{-m} with r + 1/r = x. Given y_{-1} = prev and
// y_0 = cur, returns true when |y_m| > cutoff for every m >= 1.
bool fan_escapes(Complex x, Complex cur, Complex prev, double cutoff) {
  const Complex disc = std::sqrt(x * x - 4.0);
  Complex r = (x + disc) / 2.0;
  if (std::abs(r) < 1.0) r = 1.0 / r;
  const double mod_r = std::abs(r);
  if (!(mod_r > 1.0)) return false;
  const Complex gap = r - 1.0 / r;
  if (std::abs(gap) == 0.0) return false;
  const Complex b = (prev - cur / r) / gap;
  const Complex a = cur - b;
  // |A| |r|^m - |B| |r|^{-m} increases with m.
  return std::abs(a) * mod_r - std::abs(b) / mod_r > cutoff;
}

struct Node {
  MarkovState state;
  int entered_by;  // vertex flipped to reach this node; -1 at the root
};

BqVerdict violation(const MarkovState& s, std::size_t k, ViolationReason reason, std::size_t nodes) {
  BqVerdict v;
  v.kind = VerdictKind::NotQF;
  v.witness = s.triple[k];
  v.reason = reason;
  v.witness_trace = s.traces[k];
  v.nodes = nodes;
  return v;
}

std::optional<BqVerdict> check_state(const MarkovState& s, double eps, double jorgensen, std::size_t nodes) {
  for (std::size_t k = 0; k < 3; ++k) {
    const BandCheck c = real_band(s.traces[k], eps, jorgensen);
    if (c.hit) return violation(s, k, c.reason, nodes);
  }
  return std::nullopt;
}

BqVerdict search(const FNPoint& pt, const BqParams& params);

}  // namespace

BqVerdict bq_test(const FNPoint& pt, const BqParams& params) {
  try {
    return search(pt, params);
  } catch (const SlopeOverflow&) {
    // Slopes beyond 2^60 only appear deep inside non-terminating searches.
    BqVerdict v;
    v.kind = VerdictKind::Unknown;
    v.nodes = params.node_cap;
    return v;
  }
}

namespace {

BqVerdict search(const FNPoint& pt, const BqParams& params) {
  const double eps = params.real_band_eps;
  const double cutoff = params.explore_cutoff;
  MarkovState cur = initial_state(pt);
  std::size_t nodes = 0;
  if (auto v = check_state(cur, eps, params.jorgensen_bound, nodes)) return *v;

  // Descent, checking every trace met on the way.
  for (std::size_t step = 0; step < params.node_cap; ++step) {
    const MarkovState next = descend_to_sink(cur, 1);
    if (next.triple == cur.triple) break;
    cur = next;
    ++nodes;
    if (auto v = check_state(cur, eps, params.jorgensen_bound, nodes)) return *v;
  }

  std::deque<Node> frontier;
  frontier.push_back({cur, -1});
  std::size_t expanded = 0;
  while (!frontier.empty()) {
    if (expanded >= params.node_cap) {
      BqVerdict v;
      v.kind = VerdictKind::Unknown;
      v.nodes = nodes + expanded;
      return v;
    }
    const Node node = std::move(frontier.front());
    frontier.pop_front();
    ++expanded;
    const MarkovState& s = node.state;
    for (std::size_t k = 0; k < 3; ++k) {
      if (static_cast<int>(k) == node.entered_by) continue;
      const Complex x = s.traces[(k + 1) % 3];
      const Complex y = s.traces[(k + 2) % 3];
      const bool x_small = std::abs(x) <= cutoff;
      const bool y_small = std::abs(y) <= cutoff;
      if (!x_small && !y_small) continue;
      // Walking along the fan of a single small region: stop once the
      // remaining neighbours provably stay above the cutoff.
      if (x_small && !y_small && fan_escapes(x, y, s.traces[k], cutoff)) continue;
      if (y_small && !x_small && fan_escapes(y, x, s.traces[k], cutoff)) continue;
      MarkovState child = flip_state(s, k);
      const Complex w = child.traces[k];
      if (!(std::abs(w) <= params.saturation)) continue;
      const BandCheck c = real_band(w, eps, params.jorgensen_bound);
      if (c.hit) return violation(child, k, c.reason, nodes + expanded);
      frontier.push_back({std::move(child), static_cast<int>(k)});
    }
  }
  BqVerdict v;
  v.kind = VerdictKind::QF;
  v.nodes = nodes + expanded;
  return v;
}

}  // namespace

}  // namespace qfslice
