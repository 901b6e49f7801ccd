#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qfslice/mobius.hpp"
#include "qfslice/repr.hpp"
#include "qfslice/slicescan.hpp"

namespace qfslice {

// Row-major, top row first. channels is 1 (gray) or 3 (RGB).
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int w, int h, int ch, std::uint8_t fill = 255);
  void set_gray(int x, int y, std::uint8_t v);
  void set_rgb(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

struct Rgb {
  std::uint8_t r, g, b;
};

// Gray levels per verdict: shade 0 = NotQF, 1 = QF, 2 = Unknown.
struct Palette {
  std::uint8_t not_qf = 255;
  std::uint8_t qf = 110;
  std::uint8_t unknown = 200;
  Rgb pp_band{40, 110, 230};
  Rgb ray_plus{220, 40, 40};
  Rgb ray_minus{30, 160, 60};
};

struct Overlays {
  bool pp_band = false;
  std::vector<RaySegment> rays;

  bool any() const { return pp_band || !rays.empty(); }
};

// One pixel per cell. Grayscale unless overlays are requested.
RasterImage rasterize(const SliceScan& s, const Palette& palette = {}, const Overlays& overlays = {});

struct LimitPoint {
  SpherePoint z;
  int word_length = 0;
};

using PointCloud = std::vector<LimitPoint>;

// Attracting fixed point of a loxodromic or hyperbolic element.
SpherePoint attracting_fixed_point(const Mat2C& m);

// Images of the attracting fixed points of rho(a) and rho(b) under all reduced
// words of length <= max_word_len, deduplicated on a 1e-6 grid and sorted by
// (Re, Im) with infinity last. Requires max_word_len <= 20.
PointCloud limit_set(const FNPoint& pt, int max_word_len);

// RMS distance of the stereographic images to their best-fit plane; zero
// exactly when all points lie on one circle or line of the Riemann sphere.
double circle_fit_residual(const PointCloud& cloud);

struct ViewBox {
  double re_min, re_max, im_min, im_max;
};

// Bounding box of the finite points, padded by 5%.
ViewBox default_view(const PointCloud& cloud);

RasterImage rasterize_points(const PointCloud& cloud, const ViewBox& view, int width, int height);

// Binary PGM (P5) for one channel, PPM (P6) for three.
std::vector<std::uint8_t> encode_pnm(const RasterImage& img);
void write_pnm(const RasterImage& img, const std::filesystem::path& path);

}  // namespace qfslice
