#include "qfslice/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace qfslice {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_scan_csv(std::ostream& os, const SliceScan& s) {
  os << "re,im,verdict,label\n";
  for (int iy = 0; iy < s.window.ny; ++iy) {
    for (int ix = 0; ix < s.window.nx; ++ix) {
      os << num(s.window.re_at(ix)) << ',' << num(s.window.im_at(iy)) << ',' << to_string(s.at(ix, iy)) << ','
         << s.labels[s.index(ix, iy)] << '\n';
    }
  }
}

void write_rays_csv(std::ostream& os, const std::vector<RaySegment>& rays) {
  os << "segment,slope,side,re,im\n";
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (const Complex& p : rays[i].polyline) {
      os << i << ',' << rays[i].slope.str() << ',' << (rays[i].side > 0 ? '+' : '-') << ',' << num(p.real()) << ','
         << num(p.imag()) << '\n';
    }
  }
}

void write_point_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  os << "re,im,wordlen\n";
  for (const LimitPoint& p : cloud) {
    if (p.z.at_infinity) {
      os << "inf,inf," << p.word_length << '\n';
    } else {
      os << num(p.z.z.real()) << ',' << num(p.z.z.imag()) << ',' << p.word_length << '\n';
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  fn(f);
  f.flush();
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace qfslice
