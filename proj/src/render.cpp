#include "qfslice/render.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "qfslice/farey.hpp"

namespace qfslice {

RasterImage::RasterImage(int w, int h, int ch, std::uint8_t fill)
    : width(w), height(h), channels(ch),
      pixels(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0) * std::max(ch, 0), fill) {}

void RasterImage::set_gray(int x, int y, std::uint8_t v) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * channels;
  for (int c = 0; c < channels; ++c) pixels[i + c] = v;
}

void RasterImage::set_rgb(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height || channels != 3) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[i] = r;
  pixels[i + 1] = g;
  pixels[i + 2] = b;
}

namespace {

std::uint8_t shade(VerdictKind k, const Palette& p) {
  switch (k) {
    case VerdictKind::QF: return p.qf;
    case VerdictKind::NotQF: return p.not_qf;
    case VerdictKind::Unknown: return p.unknown;
  }
  return p.unknown;
}

// Pixel coordinates of tau inside the scan window (one pixel per cell).
std::pair<double, double> to_pixel(const Window& w, Complex tau) {
  return {(tau.real() - w.re_min) / w.cell_width() - 0.5, (w.im_max - tau.imag()) / w.cell_height() - 0.5};
}

void draw_line(RasterImage& img, std::pair<double, double> p0, std::pair<double, double> p1, Rgb c) {
  const double dx = p1.first - p0.first;
  const double dy = p1.second - p0.second;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    img.set_rgb(static_cast<int>(std::lround(p0.first + t * dx)), static_cast<int>(std::lround(p0.second + t * dy)),
                c.r, c.g, c.b);
  }
}

}  // namespace

RasterImage rasterize(const SliceScan& s, const Palette& palette, const Overlays& overlays) {
  const Window& w = s.window;
  RasterImage img(w.nx, w.ny, overlays.any() ? 3 : 1);
  for (int iy = 0; iy < w.ny; ++iy) {
    for (int ix = 0; ix < w.nx; ++ix) img.set_gray(ix, iy, shade(s.at(ix, iy), palette));
  }
  if (overlays.pp_band) {
    const double pp = pp_bound(s.l);
    for (double im : {pp, -pp}) {
      if (im < w.im_min || im > w.im_max) continue;
      const auto [x0, y] = to_pixel(w, Complex{w.re_min, im});
      draw_line(img, {x0, y}, {x0 + w.nx, y}, palette.pp_band);
    }
  }
  for (const RaySegment& seg : overlays.rays) {
    const Rgb c = seg.side > 0 ? palette.ray_plus : palette.ray_minus;
    for (std::size_t i = 0; i < seg.polyline.size(); ++i) {
      const auto p0 = to_pixel(w, seg.polyline[i]);
      const auto p1 = i + 1 < seg.polyline.size() ? to_pixel(w, seg.polyline[i + 1]) : p0;
      draw_line(img, p0, p1, c);
    }
  }
  return img;
}

SpherePoint attracting_fixed_point(const Mat2C& m) {
  // z -> (az+b)/(cz+d); derivative at a finite fixed point z is 1/(cz+d)^2.
  if (std::abs(m.c) == 0.0) {
    if (std::abs(m.a) > std::abs(m.d)) return SpherePoint::infinity();
    return {m.b / (m.d - m.a), false};
  }
  const Complex tr = m.trace();
  const Complex disc = std::sqrt(tr * tr - 4.0);
  const Complex z1 = (m.a - m.d + disc) / (2.0 * m.c);
  const Complex z2 = (m.a - m.d - disc) / (2.0 * m.c);
  return std::abs(m.c * z1 + m.d) > std::abs(m.c * z2 + m.d) ? SpherePoint{z1, false} : SpherePoint{z2, false};
}

PointCloud limit_set(const FNPoint& pt, int max_word_len) {
  if (max_word_len < 0 || max_word_len > 20) throw std::invalid_argument("max_word_len must be in [0, 20]");
  const RepPair rep = matrices(pt);
  const std::array<Mat2C, 4> gens{rep.a, rep.a.inverse(), rep.b, rep.b.inverse()};
  const std::array<SpherePoint, 2> seeds{attracting_fixed_point(rep.a), attracting_fixed_point(rep.b)};

  constexpr double grid = 1e-6;
  std::map<std::pair<long long, long long>, LimitPoint> finite;
  std::optional<LimitPoint> at_infinity;
  const auto record = [&](const SpherePoint& p, int len) {
    if (p.at_infinity || !std::isfinite(std::abs(p.z))) {
      if (!at_infinity || at_infinity->word_length > len) at_infinity = LimitPoint{SpherePoint::infinity(), len};
      return;
    }
    const std::pair<long long, long long> key{std::llround(p.z.real() / grid), std::llround(p.z.imag() / grid)};
    auto [it, inserted] = finite.try_emplace(key, LimitPoint{p, len});
    if (!inserted && len < it->second.word_length) it->second = LimitPoint{p, len};
  };

  // Depth-first over reduced words; gens[g ^ 1] is the inverse of gens[g].
  struct Frame {
    Mat2C m;
    int last;
    int len;
  };
  std::vector<Frame> stack{{Mat2C::identity(), -1, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    for (const SpherePoint& s : seeds) record(apply(f.m, s), f.len);
    if (f.len == max_word_len) continue;
    for (int g = 3; g >= 0; --g) {
      if (f.last >= 0 && g == (f.last ^ 1)) continue;
      stack.push_back({f.m * gens[static_cast<std::size_t>(g)], g, f.len + 1});
    }
  }

  PointCloud out;
  out.reserve(finite.size() + 1);
  for (const auto& [key, p] : finite) out.push_back(p);
  std::sort(out.begin(), out.end(), [](const LimitPoint& x, const LimitPoint& y) {
    if (x.z.z.real() != y.z.z.real()) return x.z.z.real() < y.z.z.real();
    return x.z.z.imag() < y.z.z.imag();
  });
  if (at_infinity) out.push_back(*at_infinity);
  return out;
}

double circle_fit_residual(const PointCloud& cloud) {
  if (cloud.size() < 3) return 0.0;
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(cloud.size());
  for (const LimitPoint& p : cloud) {
    if (p.z.at_infinity) {
      pts.emplace_back(0.0, 0.0, 1.0);
      continue;
    }
    const double x = p.z.z.real();
    const double y = p.z.z.imag();
    const double r2 = x * x + y * y;
    pts.emplace_back(2 * x / (1 + r2), 2 * y / (1 + r2), (r2 - 1) / (1 + r2));
  }
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(pts.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  return std::sqrt(std::max(0.0, solver.eigenvalues()(0)));
}

ViewBox default_view(const PointCloud& cloud) {
  ViewBox v{0, 0, 0, 0};
  bool first = true;
  for (const LimitPoint& p : cloud) {
    if (p.z.at_infinity) continue;
    const double x = p.z.z.real();
    const double y = p.z.z.imag();
    if (first) {
      v = {x, x, y, y};
      first = false;
    }
    v.re_min = std::min(v.re_min, x);
    v.re_max = std::max(v.re_max, x);
    v.im_min = std::min(v.im_min, y);
    v.im_max = std::max(v.im_max, y);
  }
  const double span = std::max({v.re_max - v.re_min, v.im_max - v.im_min, 1e-9});
  const double cx = 0.5 * (v.re_min + v.re_max);
  const double cy = 0.5 * (v.im_min + v.im_max);
  const double half = 0.55 * span;
  return {cx - half, cx + half, cy - half, cy + half};
}

RasterImage rasterize_points(const PointCloud& cloud, const ViewBox& view, int width, int height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("raster dimensions must be positive");
  RasterImage img(width, height, 1, 255);
  for (const LimitPoint& p : cloud) {
    if (p.z.at_infinity) continue;
    const double fx = (p.z.z.real() - view.re_min) / (view.re_max - view.re_min) * width;
    const double fy = (view.im_max - p.z.z.imag()) / (view.im_max - view.im_min) * height;
    if (!(fx >= 0 && fx < width && fy >= 0 && fy < height)) continue;
    img.set_gray(static_cast<int>(fx), static_cast<int>(fy), 0);
  }
  return img;
}

std::vector<std::uint8_t> encode_pnm(const RasterImage& img) {
  if (img.width <= 0 || img.height <= 0) throw std::invalid_argument("cannot encode an empty image");
  if (img.channels != 1 && img.channels != 3) throw std::invalid_argument("PNM needs 1 or 3 channels");
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
    throw std::invalid_argument("pixel buffer does not match image dimensions");
  }
  const std::string header = std::string(img.channels == 1 ? "P5" : "P6") + "\n" + std::to_string(img.width) +
                             " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

void write_pnm(const RasterImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_pnm(img);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace qfslice
