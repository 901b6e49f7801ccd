#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfslice/bq.hpp"
#include "qfslice/farey.hpp"
#include "qfslice/mobius.hpp"

namespace qfslice {

// Grid over the tau-strip sampled at cell centers; row 0 is the top (im_max).
struct Window {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -3.14159265358979323846;
  double im_max = 3.14159265358979323846;
  int nx = 64;
  int ny = 64;

  bool is_valid() const;
  double cell_width() const { return (re_max - re_min) / nx; }
  double cell_height() const { return (im_max - im_min) / ny; }
  double re_at(int ix) const { return re_min + (ix + 0.5) * cell_width(); }
  double im_at(int iy) const { return im_max - (iy + 0.5) * cell_height(); }
  Complex center(int ix, int iy) const { return {re_at(ix), im_at(iy)}; }
  Window shifted(double dre) const;
};

struct SliceScan {
  static constexpr std::int32_t kNoLabel = -1;

  double l = 1.0;
  Window window;
  std::vector<VerdictKind> cells;   // row-major, ny rows of nx
  std::vector<std::int32_t> labels; // component id for QF cells, else kNoLabel
  std::int32_t component_count = 0;
  std::optional<std::int32_t> standard_id;

  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * window.nx + ix; }
  VerdictKind at(int ix, int iy) const { return cells[index(ix, iy)]; }
};

// Parker-Parkkonen bound 2 arccos(tanh(l/2)).
double pp_bound(double l);

struct EllipticBands {
  double integral;       // lower edge of the band at Re tau = n l
  double half_integral;  // lower edge of the band at Re tau = (n + 1/2) l
};

EllipticBands elliptic_bands(double l);

// Classifies every cell center, then labels 4-connected QF components.
// Rows are spread across `workers` threads; the result does not depend on it.
SliceScan scan(double l, const Window& w, const BqParams& params, int workers = 1);

// Builds a scan from precomputed verdicts (used by tests and the labeler).
SliceScan make_scan(double l, const Window& w, std::vector<VerdictKind> cells);

struct ComponentBox {
  std::int32_t id = 0;
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
  std::int64_t cells = 0;
  bool standard = false;
  bool truncated = false;  // touches the left or right window edge
  bool counted = false;    // non-standard, not truncated, leftmost center in [0, l)
};

struct ComponentReport {
  bool standard = false;
  int nonstandard_count = 0;
  int truncated = 0;
  std::vector<ComponentBox> components;
};

// Throws WindowTooNarrow unless the window spans [-l/4, 5l/4].
ComponentReport count_components(const SliceScan& s);

struct VerifyReport {
  double l = 0;
  int n_samples = 0;
  double pp_region_qf_fraction = 0;    // (a)
  int pp_region_unknown = 0;
  double band_notqf_fraction = 0;      // (b)
  double band_witness_fraction = 0;    // NotQF with witness -n/1
  std::vector<double> cusp_trace_errors;  // (c), n = 0, 1, 2
  double twist_agreement = 0;          // (d), Unknown pairs excluded
  int twist_pairs = 0;
  double conjugation_agreement = 0;    // (e), Unknown pairs excluded
  int conjugation_pairs = 0;

  bool passed() const;
};

// Deterministic sampling (fixed seed) over Re tau in [-l, 2l].
VerifyReport verify(double l, int n_samples, const BqParams& params, int workers = 1);

struct RaySegment {
  Slope slope;
  int side = 0;  // +1 for Im tau > 0, -1 below
  std::vector<Complex> polyline;
};

// Zero contours of Im tr_{p/q}(l, .) on the window grid, kept where the trace
// is hyperbolic and the containing cell is QF. Requires q >= 1.
std::vector<RaySegment> pleating_ray(double l, const Slope& s, const Window& w,
                                     const BqParams& params, int workers = 1);

// Same contour extraction against an existing scan of the same window.
std::vector<RaySegment> pleating_ray(const SliceScan& scan, const Slope& s);

}  // namespace qfslice
