#include "qfslice/slicescan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "qfslice/errors.hpp"
#include "qfslice/traces.hpp"

namespace qfslice {

namespace {

constexpr double kPi = std::numbers::pi;

// Strided row assignment; each worker writes only its own rows.
template <typename RowFn>
void for_rows(int ny, int workers, RowFn&& fn) {
  workers = std::clamp(workers, 1, std::max(1, ny));
  if (workers == 1) {
    for (int iy = 0; iy < ny; ++iy) fn(iy);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int iy = w; iy < ny; iy += workers) fn(iy);
    });
  }
  for (auto& t : pool) t.join();
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
  }

 private:
  std::vector<std::size_t> parent_;
};

void label_components(SliceScan& s) {
  const int nx = s.window.nx;
  const int ny = s.window.ny;
  DisjointSets sets(s.cells.size());
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (s.at(ix, iy) != VerdictKind::QF) continue;
      if (ix + 1 < nx && s.at(ix + 1, iy) == VerdictKind::QF) sets.unite(s.index(ix, iy), s.index(ix + 1, iy));
      if (iy + 1 < ny && s.at(ix, iy + 1) == VerdictKind::QF) sets.unite(s.index(ix, iy), s.index(ix, iy + 1));
    }
  }
  // Ids in order of first appearance in row-major order.
  s.labels.assign(s.cells.size(), SliceScan::kNoLabel);
  std::map<std::size_t, std::int32_t> ids;
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    if (s.cells[i] != VerdictKind::QF) continue;
    auto [it, inserted] = ids.try_emplace(sets.find(i), static_cast<std::int32_t>(ids.size()));
    s.labels[i] = it->second;
  }
  s.component_count = static_cast<std::int32_t>(ids.size());

  // Standard component: owner of the cells touching the Fuchsian axis. When
  // several labels touch it, the one with most axis cells wins (lowest id on ties).
  std::map<std::int32_t, int> axis_cells;
  const double h = s.window.cell_height();
  for (int iy = 0; iy < ny; ++iy) {
    if (std::abs(s.window.im_at(iy)) >= h) continue;
    for (int ix = 0; ix < nx; ++ix) {
      const std::int32_t lab = s.labels[s.index(ix, iy)];
      if (lab != SliceScan::kNoLabel) ++axis_cells[lab];
    }
  }
  s.standard_id.reset();
  int best = 0;
  for (const auto& [lab, count] : axis_cells) {
    if (count > best) {
      best = count;
      s.standard_id = lab;
    }
  }
}

// Portable uniform doubles in [0, 1) from a fixed-seed engine.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 engine_;
};

std::vector<BqVerdict> classify_points(double l, const std::vector<Complex>& taus, const BqParams& params,
                                       int workers) {
  std::vector<BqVerdict> out(taus.size());
  const int n = static_cast<int>(taus.size());
  for_rows(n, workers, [&](int i) { out[i] = bq_test({Complex{l, 0.0}, taus[i]}, params); });
  return out;
}

double agreement(const std::vector<BqVerdict>& lhs, const std::vector<BqVerdict>& rhs, int& pairs) {
  int agree = 0;
  pairs = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i].kind == VerdictKind::Unknown || rhs[i].kind == VerdictKind::Unknown) continue;
    ++pairs;
    if (lhs[i].kind == rhs[i].kind) ++agree;
  }
  return pairs == 0 ? 1.0 : static_cast<double>(agree) / pairs;
}

}  // namespace

bool Window::is_valid() const {
  return re_min < re_max && im_min < im_max && im_min >= -kPi && im_max <= kPi && nx > 0 && ny > 0 &&
         std::isfinite(re_min) && std::isfinite(re_max);
}

Window Window::shifted(double dre) const {
  Window w = *this;
  w.re_min += dre;
  w.re_max += dre;
  return w;
}

double pp_bound(double l) { return 2.0 * std::acos(std::tanh(l / 2.0)); }

EllipticBands elliptic_bands(double l) {
  const double th = std::tanh(l / 2.0);
  return {2.0 * std::acos(th), std::acos(th * th - 1.0 / std::cosh(l / 2.0))};
}

SliceScan make_scan(double l, const Window& w, std::vector<VerdictKind> cells) {
  if (cells.size() != static_cast<std::size_t>(w.nx) * static_cast<std::size_t>(w.ny)) {
    throw std::invalid_argument("verdict grid does not match window dimensions");
  }
  SliceScan s;
  s.l = l;
  s.window = w;
  s.cells = std::move(cells);
  label_components(s);
  return s;
}

SliceScan scan(double l, const Window& w, const BqParams& params, int workers) {
  if (!w.is_valid()) throw std::invalid_argument("invalid scan window");
  std::vector<VerdictKind> cells(static_cast<std::size_t>(w.nx) * w.ny);
  for_rows(w.ny, workers, [&](int iy) {
    for (int ix = 0; ix < w.nx; ++ix) {
      cells[static_cast<std::size_t>(iy) * w.nx + ix] = bq_test({Complex{l, 0.0}, w.center(ix, iy)}, params).kind;
    }
  });
  return make_scan(l, w, std::move(cells));
}

ComponentReport count_components(const SliceScan& s) {
  const Window& w = s.window;
  if (w.re_min > -s.l / 4.0 || w.re_max < 5.0 * s.l / 4.0) {
    throw WindowTooNarrow("window must span [-l/4, 5l/4] in Re tau");
  }
  ComponentReport rep;
  rep.standard = s.standard_id.has_value();
  std::vector<ComponentBox> boxes(static_cast<std::size_t>(s.component_count));
  std::vector<int> min_ix(boxes.size(), w.nx);
  std::vector<int> max_ix(boxes.size(), -1);
  for (std::size_t i = 0; i < boxes.size(); ++i) boxes[i].id = static_cast<std::int32_t>(i);
  for (int iy = 0; iy < w.ny; ++iy) {
    for (int ix = 0; ix < w.nx; ++ix) {
      const std::int32_t lab = s.labels[s.index(ix, iy)];
      if (lab == SliceScan::kNoLabel) continue;
      ComponentBox& b = boxes[static_cast<std::size_t>(lab)];
      const double re = w.re_at(ix);
      const double im = w.im_at(iy);
      if (b.cells == 0) {
        b.re_min = b.re_max = re;
        b.im_min = b.im_max = im;
      }
      b.re_min = std::min(b.re_min, re);
      b.re_max = std::max(b.re_max, re);
      b.im_min = std::min(b.im_min, im);
      b.im_max = std::max(b.im_max, im);
      ++b.cells;
      min_ix[static_cast<std::size_t>(lab)] = std::min(min_ix[static_cast<std::size_t>(lab)], ix);
      max_ix[static_cast<std::size_t>(lab)] = std::max(max_ix[static_cast<std::size_t>(lab)], ix);
    }
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    ComponentBox& b = boxes[i];
    b.standard = s.standard_id && *s.standard_id == b.id;
    b.truncated = min_ix[i] == 0 || max_ix[i] == w.nx - 1;
    if (b.standard) continue;
    if (b.truncated) {
      ++rep.truncated;
      continue;
    }
    b.counted = b.re_min >= 0.0 && b.re_min < s.l;
    if (b.counted) ++rep.nonstandard_count;
  }
  rep.components = std::move(boxes);
  return rep;
}

bool VerifyReport::passed() const {
  const bool cusps = std::all_of(cusp_trace_errors.begin(), cusp_trace_errors.end(),
                                 [](double e) { return e <= 1e-9; });
  return pp_region_qf_fraction == 1.0 && band_notqf_fraction == 1.0 && cusps && twist_agreement == 1.0 &&
         conjugation_agreement == 1.0;
}

VerifyReport verify(double l, int n_samples, const BqParams& params, int workers) {
  if (!(l > 0.0)) throw std::invalid_argument("verify needs l > 0");
  if (n_samples < 1) throw std::invalid_argument("verify needs at least one sample");
  VerifyReport rep;
  rep.l = l;
  rep.n_samples = n_samples;
  const double pp = pp_bound(l);
  Sampler rng(0x5eed'0f'1a'7e5ULL);

  std::vector<Complex> pp_taus;
  for (int i = 0; i < n_samples; ++i) pp_taus.emplace_back(rng.uniform(-l, 2 * l), rng.uniform(-0.95 * pp, 0.95 * pp));
  const auto pp_v = classify_points(l, pp_taus, params, workers);
  int qf = 0;
  for (const auto& v : pp_v) {
    qf += v.kind == VerdictKind::QF;
    rep.pp_region_unknown += v.kind == VerdictKind::Unknown;
  }
  rep.pp_region_qf_fraction = static_cast<double>(qf) / n_samples;

  std::vector<Complex> band_taus;
  std::vector<int> band_n;
  for (int i = 0; i < n_samples; ++i) {
    const int n = static_cast<int>(rng.unit() * 2.0);
    band_n.push_back(n);
    band_taus.emplace_back(n * l, rng.uniform(1.05 * pp, 0.95 * kPi));
  }
  const auto band_v = classify_points(l, band_taus, params, workers);
  int notqf = 0;
  int witnessed = 0;
  for (std::size_t i = 0; i < band_v.size(); ++i) {
    if (band_v[i].kind != VerdictKind::NotQF) continue;
    ++notqf;
    witnessed += band_v[i].witness == Slope{-band_n[i], 1};
  }
  rep.band_notqf_fraction = static_cast<double>(notqf) / n_samples;
  rep.band_witness_fraction = static_cast<double>(witnessed) / n_samples;

  for (int n = 0; n <= 2; ++n) {
    const TracePoly tp = trace_poly(Slope{-n, 1}, Complex{l, 0.0});
    rep.cusp_trace_errors.push_back(std::abs(eval(tp, Complex{n * l, pp}) - 2.0));
  }

  std::vector<Complex> base, twisted, mirrored;
  for (int i = 0; i < n_samples; ++i) {
    const Complex tau{rng.uniform(-l, 2 * l), rng.uniform(-kPi, kPi)};
    base.push_back(tau);
    twisted.push_back(tau + l);
    mirrored.push_back(std::conj(tau));
  }
  const auto base_v = classify_points(l, base, params, workers);
  rep.twist_agreement = agreement(base_v, classify_points(l, twisted, params, workers), rep.twist_pairs);
  rep.conjugation_agreement =
      agreement(base_v, classify_points(l, mirrored, params, workers), rep.conjugation_pairs);
  return rep;
}

namespace {

struct Crossing {
  Complex tau;
  Complex trace;
  bool keep = false;
};

// Im tr / Im tau: removes the trivial zero along the Fuchsian axis.
double contour_value(const TracePoly& tp, Complex tau) {
  if (tau.imag() == 0.0) {
    constexpr double d = 1e-6;
    return (eval(tp, tau + Complex{0.0, d}).imag() - eval(tp, tau - Complex{0.0, d}).imag()) / (2 * d);
  }
  return eval(tp, tau).imag() / tau.imag();
}

}  // namespace

std::vector<RaySegment> pleating_ray(const SliceScan& sc, const Slope& s) {
  if (s.q() < 1) throw std::invalid_argument("pleating rays need a slope with q >= 1");
  const Window& w = sc.window;
  const int nx = w.nx;
  const int ny = w.ny;
  const TracePoly tp = trace_poly(s, Complex{sc.l, 0.0});
  std::vector<double> h(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) h[static_cast<std::size_t>(iy) * nx + ix] = contour_value(tp, w.center(ix, iy));
  }
  const auto value = [&](int ix, int iy) { return h[static_cast<std::size_t>(iy) * nx + ix]; };
  const auto changes = [](double u, double v) {
    return std::isfinite(u) && std::isfinite(v) && (u < 0.0) != (v < 0.0);
  };

  std::vector<Crossing> crossings;
  // Edge ids: horizontal edges first, then vertical edges.
  const std::size_t n_h = static_cast<std::size_t>(std::max(nx - 1, 0)) * ny;
  std::vector<int> edge_crossing(n_h + static_cast<std::size_t>(nx) * std::max(ny - 1, 0), -1);
  const auto make_crossing = [&](Complex p0, Complex p1, double v0) {
    // Bisection refines the linear-interpolation estimate to the exact zero.
    Complex lo = p0;
    Complex hi = p1;
    for (int it = 0; it < 60; ++it) {
      const Complex mid = 0.5 * (lo + hi);
      const double vm = contour_value(tp, mid);
      if ((vm < 0.0) == (v0 < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Crossing c;
    c.tau = 0.5 * (lo + hi);
    c.trace = eval(tp, c.tau);
    const int cx = std::clamp(static_cast<int>(std::floor((c.tau.real() - w.re_min) / w.cell_width())), 0, nx - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((w.im_max - c.tau.imag()) / w.cell_height())), 0, ny - 1);
    c.keep = std::isfinite(std::abs(c.trace)) &&
             std::abs(c.trace.imag()) <= 1e-6 * (1.0 + std::abs(c.trace)) &&
             classify(c.trace) == IsomClass::Hyperbolic && sc.at(cx, cy) == VerdictKind::QF &&
             c.tau.imag() != 0.0;
    crossings.push_back(c);
    return static_cast<int>(crossings.size() - 1);
  };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      if (changes(value(ix, iy), value(ix + 1, iy))) {
        edge_crossing[static_cast<std::size_t>(iy) * (nx - 1) + ix] =
            make_crossing(w.center(ix, iy), w.center(ix + 1, iy), value(ix, iy));
      }
    }
  }
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (changes(value(ix, iy), value(ix, iy + 1))) {
        edge_crossing[n_h + static_cast<std::size_t>(iy) * nx + ix] =
            make_crossing(w.center(ix, iy), w.center(ix, iy + 1), value(ix, iy));
      }
    }
  }

  // Marching squares over the lattice of cell centers.
  std::vector<std::vector<int>> adj(crossings.size());
  const auto link = [&](int u, int v) {
    if (u < 0 || v < 0) return;
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  };
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const int top = edge_crossing[static_cast<std::size_t>(iy) * (nx - 1) + ix];
      const int bottom = edge_crossing[static_cast<std::size_t>(iy + 1) * (nx - 1) + ix];
      const int left = edge_crossing[n_h + static_cast<std::size_t>(iy) * nx + ix];
      const int right = edge_crossing[n_h + static_cast<std::size_t>(iy) * nx + ix + 1];
      std::vector<int> present;
      for (int e : {top, right, bottom, left}) {
        if (e >= 0) present.push_back(e);
      }
      if (present.size() == 2) {
        link(present[0], present[1]);
      } else if (present.size() == 4) {
        // Saddle: the sign of the mean picks the pairing.
        const double mean = 0.25 * (value(ix, iy) + value(ix + 1, iy) + value(ix, iy + 1) + value(ix + 1, iy + 1));
        if ((mean < 0.0) == (value(ix, iy) < 0.0)) {
          link(top, right);
          link(bottom, left);
        } else {
          link(top, left);
          link(bottom, right);
        }
      }
    }
  }

  // Walk chains, endpoints first, then closed loops.
  std::vector<bool> seen(crossings.size(), false);
  std::vector<std::vector<int>> chains;
  const auto walk = [&](int start) {
    std::vector<int> chain{start};
    seen[static_cast<std::size_t>(start)] = true;
    int cur = start;
    for (;;) {
      int next = -1;
      for (int v : adj[static_cast<std::size_t>(cur)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          next = v;
          break;
        }
      }
      if (next < 0) break;
      seen[static_cast<std::size_t>(next)] = true;
      chain.push_back(next);
      cur = next;
    }
    chains.push_back(std::move(chain));
  };
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    if (!seen[i] && adj[i].size() <= 1) walk(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    if (!seen[i]) walk(static_cast<int>(i));
  }

  std::vector<RaySegment> out;
  for (const auto& chain : chains) {
    RaySegment seg{s, 0, {}};
    const auto flush = [&] {
      if (!seg.polyline.empty()) out.push_back(seg);
      seg.polyline.clear();
    };
    for (int idx : chain) {
      const Crossing& c = crossings[static_cast<std::size_t>(idx)];
      const int side = c.tau.imag() > 0.0 ? 1 : -1;
      if (!c.keep) {
        flush();
        continue;
      }
      if (!seg.polyline.empty() && side != seg.side) flush();
      seg.side = side;
      seg.polyline.push_back(c.tau);
    }
    flush();
  }
  return out;
}

std::vector<RaySegment> pleating_ray(double l, const Slope& s, const Window& w, const BqParams& params,
                                     int workers) {
  if (s.q() < 1) throw std::invalid_argument("pleating rays need a slope with q >= 1");
  return pleating_ray(scan(l, w, params, workers), s);
}

}  // namespace qfslice
