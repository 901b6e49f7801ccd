#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "golden.hpp"
#include "qfslice/errors.hpp"
#include "qfslice/export.hpp"
#include "qfslice/render.hpp"
#include "support.hpp"

using namespace qfslice;
using testing::kPi;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

double max_realness_error(const PointCloud& cloud) {
  double worst = 0.0;
  for (const auto& p : cloud) {
    if (!p.z.at_infinity) worst = std::max(worst, std::abs(p.z.z.imag()) / (1.0 + std::abs(p.z.z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("pnm encoding") {
  RasterImage white(1, 1, 1);
  std::vector<std::uint8_t> bytes = encode_pnm(white);
  const std::string want("P5\n1 1\n255\n\xff");
  CHECK(bytes.size() == 12);
  CHECK(std::string(bytes.begin(), bytes.end()) == want);

  RasterImage color(2, 1, 3, 7);
  bytes = encode_pnm(color);
  CHECK(std::string(bytes.begin(), bytes.begin() + 11) == "P6\n2 1\n255\n");
  CHECK(bytes.size() == 11 + 6);

  CHECK_THROWS_AS(encode_pnm(RasterImage(0, 4, 1)), std::invalid_argument);
  CHECK_THROWS_AS(encode_pnm(RasterImage(4, 0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(encode_pnm(RasterImage(2, 2, 2)), std::invalid_argument);

  const auto dir = std::filesystem::temp_directory_path() / "qfslice_render_test";
  std::filesystem::create_directories(dir);
  write_pnm(white, dir / "white.pgm");
  CHECK(testing::read_bytes(dir / "white.pgm") == encode_pnm(white));
  CHECK_THROWS_AS(write_pnm(white, dir / "missing" / "x.pgm"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rasterize shades") {
  Window w;
  w.nx = 5;
  w.ny = 3;
  SliceScan all = make_scan(1.0, w, std::vector<VerdictKind>(15, VerdictKind::QF));
  Palette pal;
  RasterImage img = rasterize(all, pal);
  CHECK(img.width == 5);
  CHECK(img.height == 3);
  CHECK(img.channels == 1);
  CHECK(std::set<std::uint8_t>(img.pixels.begin(), img.pixels.end()) == std::set<std::uint8_t>{pal.qf});

  std::vector<VerdictKind> mixed(15, VerdictKind::NotQF);
  mixed[0] = VerdictKind::QF;
  mixed[14] = VerdictKind::Unknown;
  img = rasterize(make_scan(1.0, w, mixed), pal);
  CHECK(img.pixels[0] == pal.qf);
  CHECK(img.pixels[1] == pal.not_qf);
  CHECK(img.pixels[14] == pal.unknown);
  CHECK(pal.qf != pal.not_qf);
  CHECK(pal.unknown != pal.not_qf);
  CHECK(pal.unknown != pal.qf);

  Overlays ov;
  ov.pp_band = true;
  RasterImage rgb = rasterize(all, pal, ov);
  CHECK(rgb.channels == 3);
  CHECK(rgb.pixels.size() == 45u);
  bool blue = false;
  for (std::size_t i = 0; i < rgb.pixels.size(); i += 3) blue |= rgb.pixels[i + 2] == pal.pp_band.b && rgb.pixels[i] == pal.pp_band.r;
  CHECK(blue);
}

TEST_CASE("golden slice image") {
  const auto golden = testing::read_bytes(testing::golden_path());
  REQUIRE(golden.size() == 11 + 64);
  for (int workers : {1, 2, 8}) {
    SliceScan s = scan(testing::kGoldenL, testing::golden_window(), {}, workers);
    CHECK(encode_pnm(rasterize(s)) == golden);
  }
}

TEST_CASE("limit set seeds and growth") {
  FNPoint pt{6.0, 0.5};
  PointCloud seeds = limit_set(pt, 0);
  REQUIRE(seeds.size() == 2);
  for (const auto& p : seeds) CHECK(p.word_length == 0);

  std::size_t prev = seeds.size();
  for (int n = 1; n <= 7; ++n) {
    PointCloud c = limit_set(pt, n);
    CHECK(c.size() >= prev);
    prev = c.size();
    for (std::size_t i = 1; i < c.size(); ++i) {
      const auto& a = c[i - 1].z;
      const auto& b = c[i].z;
      if (b.at_infinity) continue;
      REQUIRE_FALSE(a.at_infinity);
      CHECK((a.z.real() < b.z.real() || (a.z.real() == b.z.real() && a.z.imag() <= b.z.imag())));
    }
  }
  CHECK(prev > 100);
  CHECK_THROWS_AS(limit_set(pt, 21), std::invalid_argument);
  CHECK_THROWS_AS(limit_set({Complex(0.0, kPi), 0.0}, 3), DegenerateLength);
}

TEST_CASE("fuchsian limit sets are real") {
  for (double t : {0.0, 0.5, -1.7}) {
    PointCloud c = limit_set({6.0, t}, 9);
    CHECK(max_realness_error(c) <= 1e-6);
    CHECK(circle_fit_residual(c) <= 1e-5);
  }
  PointCloud c = limit_set({2.0, 0.0}, 8);
  CHECK(max_realness_error(c) <= 1e-6);
}

TEST_CASE("limit sets on the strip boundary lie on a circle") {
  for (double re : {0.0, 0.8}) {
    PointCloud c = limit_set({3.0, Complex(re, -kPi)}, 8);
    CHECK(c.size() > 50);
    CHECK(circle_fit_residual(c) <= 1e-5);
  }
  // a quasi-Fuchsian point off the real locus is not round
  CHECK(circle_fit_residual(limit_set({6.0, Complex(0.4, 0.4)}, 8)) > 1e-4);
}

TEST_CASE("attracting fixed points") {
  Mat2C dilate{2.0, 0.0, 0.0, 0.5};
  CHECK(attracting_fixed_point(dilate).at_infinity);
  SpherePoint z = attracting_fixed_point(dilate.inverse());
  CHECK_FALSE(z.at_infinity);
  CHECK(std::abs(z.z) < 1e-15);

  Mat2C m{2.0, 1.0, 1.0, 1.0};
  SpherePoint f = attracting_fixed_point(m);
  SpherePoint img = apply(m, f);
  CHECK(std::abs(img.z - f.z) < 1e-12);
  // the derivative at an attracting fixed point is below 1 in modulus
  CHECK(std::abs(1.0 / ((m.c * f.z + m.d) * (m.c * f.z + m.d))) < 1.0);
}

TEST_CASE("point rasters") {
  PointCloud cloud{{SpherePoint{Complex(0.0, 0.0)}, 0}, {SpherePoint{Complex(1.0, 1.0)}, 1}, {SpherePoint::infinity(), 1}};
  ViewBox v = default_view(cloud);
  CHECK(v.re_min < 0.0);
  CHECK(v.re_max > 1.0);
  CHECK(v.im_min < 0.0);
  CHECK(v.im_max > 1.0);
  RasterImage img = rasterize_points(cloud, v, 20, 10);
  CHECK(img.width == 20);
  CHECK(img.height == 10);
  CHECK(std::count(img.pixels.begin(), img.pixels.end(), 0) == 2);
  CHECK_THROWS_AS(rasterize_points(cloud, v, 0, 10), std::invalid_argument);
}

TEST_CASE("csv exports") {
  Window w;
  w.nx = 3;
  w.ny = 2;
  std::vector<VerdictKind> cells{VerdictKind::QF, VerdictKind::NotQF, VerdictKind::Unknown,
                                 VerdictKind::QF, VerdictKind::QF,    VerdictKind::NotQF};
  SliceScan s = make_scan(1.0, w, cells);
  std::ostringstream scan_csv;
  write_scan_csv(scan_csv, s);
  auto rows = lines_of(scan_csv.str());
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "re,im,verdict,label");
  CHECK(rows[1].substr(rows[1].rfind(',', rows[1].rfind(',') - 1)) == ",QF,0");
  CHECK(rows[2].substr(rows[2].rfind(',', rows[2].rfind(',') - 1)) == ",NotQF,-1");
  CHECK(rows[3].substr(rows[3].rfind(',', rows[3].rfind(',') - 1)) == ",Unknown,-1");

  std::ostringstream ray_csv;
  write_rays_csv(ray_csv, {RaySegment{Slope(1, 2), -1, {Complex(0.5, -0.25), Complex(0.5, -0.5)}}});
  rows = lines_of(ray_csv.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "segment,slope,side,re,im");
  CHECK(rows[1] == "0,1/2,-,0.5,-0.25");

  std::ostringstream cloud_csv;
  write_point_cloud_csv(cloud_csv, {{SpherePoint{Complex(1.5, 0.0)}, 2}, {SpherePoint::infinity(), 3}});
  rows = lines_of(cloud_csv.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "re,im,wordlen");
  CHECK(rows[1] == "1.5,0,2");
  CHECK(rows[2] == "inf,inf,3");

  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", [](std::ostream&) {}), std::runtime_error);
}
