#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <vector>

#include "qfslice/render.hpp"
#include "qfslice/slicescan.hpp"

namespace qfslice {

// Header "re,im,verdict,label", one row per cell in row-major order; label is
// -1 for cells outside every QF component.
void write_scan_csv(std::ostream& os, const SliceScan& s);

// Header "segment,slope,side,re,im", one row per polyline vertex.
void write_rays_csv(std::ostream& os, const std::vector<RaySegment>& rays);

// Header "re,im,wordlen"; the point at infinity is written as "inf,inf,n".
void write_point_cloud_csv(std::ostream& os, const PointCloud& cloud);

// Opens `path` and runs `fn` on the stream; I/O failures name the path.
void write_text_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn);

}  // namespace qfslice
